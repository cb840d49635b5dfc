#include "broadcast.hpp"

#include <algorithm>
#include <cmath>

#include "error.hpp"

namespace obcast {

namespace {

std::vector<std::size_t> complement(const Cut& cut, std::size_t factors) {
  std::vector<std::size_t> rest;
  for (std::size_t f = 0; f < factors; ++f) {
    if (std::find(cut.a_factors.begin(), cut.a_factors.end(), f) == cut.a_factors.end()) rest.push_back(f);
  }
  return rest;
}

void check_cut(const Isometry& v, const Cut& cut) {
  for (auto f : cut.a_factors) {
    if (f >= v.output_dims.size()) fail(ErrorCode::InvalidInput, "cut names a factor the isometry does not have");
  }
}

// Marginals of an output state; an empty side is the trivial one-dimensional factor.
Marginals split(const StateVector& out, const std::vector<std::size_t>& dims, const Cut& cut) {
  const HermitianOp rho = out.projector();
  const auto rest = complement(cut, dims.size());
  auto reduce = [&](const std::vector<std::size_t>& keep) {
    if (keep.empty()) return HermitianOp(ComplexMatrix{{rho.trace()}});
    return partial_trace(rho, dims, keep);
  };
  return {reduce(cut.a_factors), reduce(rest)};
}

double overlap(const HermitianOp& x, const HermitianOp& y) { return (x.matrix() * y.matrix()).trace().real(); }

double pair_overlap(const std::vector<Marginals>& m) {
  double worst = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = i + 1; j < m.size(); ++j) {
      worst = std::max({worst, overlap(m[i].a, m[j].a), overlap(m[i].b, m[j].b)});
    }
  }
  return worst;
}

}  // namespace

std::vector<std::vector<Marginals>> broadcast_outputs(const Isometry& v, const PostInfoEnsemble& s, const Cut& cut) {
  if (v.in_dim() != s.dim) fail(ErrorCode::InvalidInput, "isometry input dimension does not match the ensemble");
  check_cut(v, cut);
  std::vector<std::vector<Marginals>> out(s.settings());
  for (std::size_t t = 0; t < s.settings(); ++t) {
    for (const auto& st : s.states[t]) out[t].push_back(split(v.apply(st), v.output_dims, cut));
  }
  return out;
}

OrthogonalityBroadcastCheck verify_orthogonality_broadcast(const Isometry& v, const PostInfoEnsemble& s,
                                                           const Cut& cut) {
  OrthogonalityBroadcastCheck r;
  for (const auto& setting : broadcast_outputs(v, s, cut)) r.max_overlap = std::max(r.max_overlap, pair_overlap(setting));
  r.ok = r.max_overlap <= 1e-10;
  return r;
}

ClassicalBroadcastCheck verify_classical_broadcast_povm(const Povm& p, const PostInfoEnsemble& s) {
  p.validate();
  if (p.dim() != s.dim) fail(ErrorCode::InvalidInput, "POVM dimension does not match the ensemble");
  ClassicalBroadcastCheck r;
  r.outcomes.resize(s.settings());
  for (std::size_t t = 0; t < s.settings(); ++t) {
    r.outcomes[t].resize(s.states[t].size());
    for (std::size_t x = 0; x < p.size(); ++x) {
      std::vector<double> probs;
      for (std::size_t i = 0; i < s.states[t].size(); ++i) {
        const auto& a = s.states[t][i].amplitudes;
        const double q = inner(a, p.effects[x].matrix().apply(a)).real();
        probs.push_back(q);
        if (q > 1e-10) r.outcomes[t][i].push_back(x);
      }
      std::sort(probs.begin(), probs.end(), std::greater<>());
      if (probs.size() > 1) r.max_violation = std::max(r.max_violation, probs[1]);
    }
  }
  r.ok = r.max_violation <= 1e-10;
  return r;
}

std::size_t numerical_rank(const std::vector<StateVector>& vectors, double tol) {
  if (vectors.empty()) return 0;
  const std::size_t d = vectors.front().dim();
  const std::size_t m = vectors.size();
  // Hermitian dilation [[0, V], [V^dag, 0]] has eigenvalues +-sigma_i, computed to absolute accuracy.
  ComplexMatrix h(d + m, d + m);
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t i = 0; i < d; ++i) {
      h(i, d + k) = vectors[k].amplitudes[i];
      h(d + k, i) = std::conj(vectors[k].amplitudes[i]);
    }
  }
  const auto e = hermitian_eig(HermitianOp(h));
  return static_cast<std::size_t>(std::count_if(e.values.begin(), e.values.end(), [&](double x) { return x > tol; }));
}

KillPatternCertificate kill_pattern_certificate(const PostInfoEnsemble& s) {
  s.validate();
  KillPatternCertificate c;
  std::vector<std::size_t> digit(s.settings(), 0);
  bool all_zero = true;
  while (true) {
    std::vector<StateVector> killed;
    for (std::size_t t = 0; t < s.settings(); ++t) {
      for (std::size_t j = 0; j < s.states[t].size(); ++j) {
        if (j != digit[t]) killed.push_back(s.states[t][j]);
      }
    }
    const std::size_t dim = s.dim - numerical_rank(killed);
    c.patterns.push_back(digit);
    c.kernel_dims.push_back(dim);
    all_zero = all_zero && dim == 0;
    std::size_t t = s.settings();
    while (t-- > 0) {
      if (++digit[t] < s.states[t].size()) break;
      digit[t] = 0;
    }
    if (t == static_cast<std::size_t>(-1)) break;
    if (c.patterns.size() > kMaxRows) fail(ErrorCode::UnsupportedSize, "pattern count exceeds 4096");
  }
  c.certified_infeasible = all_zero;
  return c;
}

BroadcastDecision perfect_classical_broadcast_decision(const PostInfoEnsemble& s, const Settings& settings) {
  if (!s.orthogonal) fail(ErrorCode::Precondition, "ensemble is not flagged as orthogonal within settings");
  const PostInfoEnsemble uniform = s.with_uniform_prior();
  const auto pi = p_postinfo(uniform, settings);
  const auto kill = kill_pattern_certificate(uniform);
  BroadcastDecision d;
  d.value = pi.value;
  d.gap = pi.certificate.gap;
  d.witness = pi.witness;
  d.kill_pattern_certified = kill.certified_infeasible;
  d.witness_violation = verify_classical_broadcast_povm(pi.witness, uniform).max_violation;
  d.feasible = pi.value >= 1.0 - settings.tol_gap && d.witness_violation <= 1e-6;
  if (d.feasible && kill.certified_infeasible) {
    fail(ErrorCode::Internal, "kill-pattern certificate contradicts the post-information value");
  }
  return d;
}

double entangling_protocol_overlap(const GopEnsemble& s, const Isometry& v, const Cut& cut) {
  const PostInfoEnsemble bob = induce_postinfo(s, Party::A);
  return verify_orthogonality_broadcast(v, bob, cut).max_overlap;
}

}  // namespace obcast
