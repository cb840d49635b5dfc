#include "discrimination.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "error.hpp"

namespace obcast {

namespace {

constexpr std::size_t kCheckEvery = 25;

ComplexMatrix hermitian_part(const ComplexMatrix& m) { return cplx(0.5) * (m + m.adjoint()); }

// Pi_r rescaled by S^{-1/2} so that sum_r Pi_r = I exactly up to rounding.
void renormalize(std::vector<ComplexMatrix>& pis, double tol) {
  const std::size_t d = pis.front().rows();
  ComplexMatrix sum(d, d);
  for (const auto& p : pis) sum += p;
  const auto e = hermitian_eig(HermitianOp(hermitian_part(sum)));
  ComplexMatrix inv_sqrt(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    if (e.values[i] <= tol) fail(ErrorCode::Internal, "POVM iterate lost completeness");
    inv_sqrt(i, i) = 1.0 / std::sqrt(e.values[i]);
  }
  const ComplexMatrix t = e.vectors * inv_sqrt * e.vectors.adjoint();
  for (auto& p : pis) p = hermitian_part(t * p * t);
}

Povm to_povm(const std::vector<ComplexMatrix>& pis) {
  Povm p;
  for (const auto& m : pis) p.effects.emplace_back(hermitian_part(m));
  return p;
}

HermitianOp dual_candidate(const std::vector<HermitianOp>& targets, const std::vector<ComplexMatrix>& pis) {
  const std::size_t d = targets.front().dim();
  ComplexMatrix y(d, d);
  for (std::size_t r = 0; r < targets.size(); ++r) y += targets[r].matrix() * pis[r];
  return HermitianOp(hermitian_part(y));
}

}  // namespace

double helstrom_binary(const HermitianOp& rho, const HermitianOp& sigma, double p) {
  if (!(p >= 0.0 && p <= 1.0)) fail(ErrorCode::InvalidInput, "prior must lie in [0, 1]");
  if (rho.dim() != sigma.dim()) fail(ErrorCode::InvalidInput, "dimension mismatch");
  return 0.5 * (1.0 + trace_norm(rho.scaled(p) - sigma.scaled(1.0 - p)));
}

DualCertificate certify(const std::vector<HermitianOp>& targets, const Povm& povm, const HermitianOp& y) {
  DualCertificate c;
  double lambda = 0.0;
  for (const auto& m : targets) lambda = std::max(lambda, max_eigenvalue(m - y));
  c.max_violation = lambda;
  c.y = y + HermitianOp::identity(y.dim()).scaled(lambda);
  for (std::size_t r = 0; r < targets.size(); ++r) {
    c.primal_value += (targets[r].matrix() * povm.effects[r].matrix()).trace().real();
  }
  c.gap = c.y.trace() - c.primal_value;
  if (c.gap < 0.0 && c.gap > -1e-14) c.gap = 0.0;
  return c;
}

DiscriminationResult min_error_discrimination(const std::vector<HermitianOp>& targets, const Settings& settings) {
  if (targets.empty()) fail(ErrorCode::InvalidInput, "no discrimination targets");
  const std::size_t d = targets.front().dim();
  const std::size_t n = targets.size();
  for (const auto& m : targets) {
    if (m.dim() != d) fail(ErrorCode::InvalidInput, "targets differ in dimension");
    if (min_eigenvalue(m) < -settings.tol_eig) fail(ErrorCode::InvalidInput, "target is not PSD");
  }
  const double scale = std::max(1e-300, [&] {
    double s = 0.0;
    for (const auto& m : targets) s = std::max(s, max_eigenvalue(m));
    return s;
  }());

  std::vector<ComplexMatrix> pis(n, cplx(1.0 / static_cast<double>(n)) * ComplexMatrix::identity(d));
  DiscriminationResult best;
  best.certificate.gap = std::numeric_limits<double>::infinity();
  std::vector<bool> active(n, true);
  auto consider = [&](std::size_t iter) {
    renormalize(pis, settings.tol_eig);
    const Povm povm = to_povm(pis);
    const DualCertificate c = certify(targets, povm, dual_candidate(targets, pis));
    // Effects with vanishing weight against a strictly slack dual constraint decay only like 1/k; drop them.
    // The same holds for single eigen-directions of an effect.
    bool pruned = false;
    for (std::size_t r = 0; r < n; ++r) {
      if (!active[r]) continue;
      if (pis[r].trace().real() < 1e-4 && min_eigenvalue(c.y - targets[r]) > 1e-3 * scale) {
        active[r] = false;
        pis[r] = ComplexMatrix(d, d);
        pruned = true;
        continue;
      }
      const auto e = hermitian_eig(HermitianOp(pis[r]));
      const ComplexMatrix slack = (c.y - targets[r]).matrix();
      for (std::size_t i = 0; i < d; ++i) {
        if (e.values[i] <= 0.0 || e.values[i] >= 1e-4) continue;
        const auto v = e.vectors.col(i);
        if (inner(v, slack.apply(v)).real() > 1e-3 * scale) {
          pis[r] -= cplx(e.values[i]) * ComplexMatrix::outer(v, v);
          pruned = true;
        }
      }
    }
    if (pruned) renormalize(pis, settings.tol_eig);
    if (c.gap < best.certificate.gap) {
      best.value = c.primal_value;
      best.povm = povm;
      best.certificate = c;
      best.iterations = iter;
    }
    return c.gap;
  };

  std::vector<ComplexMatrix> next(n);
  for (std::size_t iter = 0; iter < settings.max_iter; ++iter) {
    if (iter % kCheckEvery == 0 && consider(iter) <= settings.tol_gap * 0.1) return best;
    // Fixed-point map Pi_r -> R^{-1} M_r Pi_r M_r R^{-1}, R = (sum_r M_r Pi_r M_r)^{1/2}.
    ComplexMatrix s(d, d);
    for (std::size_t r = 0; r < n; ++r) {
      if (!active[r]) continue;
      next[r] = targets[r].matrix() * pis[r] * targets[r].matrix();
      s += next[r];
    }
    const auto e = hermitian_eig(HermitianOp(hermitian_part(s)));
    const double cut = 1e-13 * scale * scale * std::max(1.0, e.values.back() / (scale * scale));
    ComplexMatrix rinv(d, d), ker(d, d);
    for (std::size_t i = 0; i < d; ++i) {
      if (e.values[i] > cut) {
        rinv(i, i) = 1.0 / std::sqrt(e.values[i]);
      } else {
        ker(i, i) = 1.0 / static_cast<double>(std::count(active.begin(), active.end(), true));
      }
    }
    const ComplexMatrix rv = e.vectors * rinv * e.vectors.adjoint();
    const ComplexMatrix kv = e.vectors * ker * e.vectors.adjoint();
    for (std::size_t r = 0; r < n; ++r) {
      if (!active[r]) continue;
      const ComplexMatrix updated = rv * next[r] * rv + kv;
      pis[r] = hermitian_part(cplx(settings.damping) * pis[r] + cplx(1.0 - settings.damping) * updated);
    }
  }
  consider(settings.max_iter);
  if (best.certificate.gap <= settings.tol_gap) return best;
  std::ostringstream msg;
  msg << "discrimination solver did not converge: primal " << best.value << ", dual "
      << best.certificate.y.trace() << ", gap " << best.certificate.gap;
  fail(ErrorCode::SolverFailure, msg.str());
}

std::vector<HermitianOp> postinfo_targets(const PostInfoEnsemble& s, std::vector<std::vector<std::size_t>>* rows) {
  s.validate();
  std::size_t count = 1;
  for (const auto& set : s.states) {
    if (count > kMaxRows / set.size() + 1) fail(ErrorCode::UnsupportedSize, "index-set product exceeds 4096");
    count *= set.size();
  }
  if (count > kMaxRows) fail(ErrorCode::UnsupportedSize, "index-set product exceeds 4096");
  std::vector<std::vector<HermitianOp>> projectors(s.settings());
  for (std::size_t t = 0; t < s.settings(); ++t) {
    for (const auto& v : s.states[t]) projectors[t].push_back(v.projector());
  }
  std::vector<HermitianOp> targets;
  std::vector<std::size_t> digit(s.settings(), 0);
  for (std::size_t r = 0; r < count; ++r) {
    ComplexMatrix m(s.dim, s.dim);
    for (std::size_t t = 0; t < s.settings(); ++t) {
      m += cplx(s.prior[t][digit[t]]) * projectors[t][digit[t]].matrix();
    }
    targets.emplace_back(m);
    if (rows) rows->push_back(digit);
    // Mixed-radix increment, last setting fastest.
    for (std::size_t t = s.settings(); t-- > 0;) {
      if (++digit[t] < s.states[t].size()) break;
      digit[t] = 0;
    }
  }
  return targets;
}

PostInfoResult p_postinfo(const PostInfoEnsemble& s, const Settings& settings) {
  PostInfoResult out;
  const auto targets = postinfo_targets(s, &out.rows);
  auto res = min_error_discrimination(targets, settings);
  out.value = res.value;
  out.witness = std::move(res.povm);
  out.certificate = std::move(res.certificate);
  return out;
}

double p_cbc(const PostInfoEnsemble& s, const Settings& settings) { return p_postinfo(s, settings).value; }

double p_bc_two_settings(const PostInfoEnsemble& s, const Settings& settings) {
  if (s.settings() > 2) fail(ErrorCode::Precondition, "exact broadcasting value needs at most two settings");
  return p_postinfo(s, settings).value;
}

double losscc_value_cq(const GopEnsemble& s, const Settings& settings) {
  if (!is_classical_side(s, Party::B)) fail(ErrorCode::Precondition, "B side is not from one orthonormal basis");
  return p_postinfo(induce_postinfo(s, Party::B), settings).value;
}

}  // namespace obcast
