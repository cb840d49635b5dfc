#include "properties.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include "error.hpp"
#include "moe.hpp"
#include "random.hpp"
#include "uncertainty.hpp"

namespace obcast {

namespace {

const double kPi = std::numbers::pi;

struct Suite {
  const char* id;
  const char* statement;
  std::size_t default_trials;
  double tolerance;
  // Returns the violation of one trial.
  std::function<double(Rng&)> trial;
};

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

SuperpositionSpec random_spec(Rng& rng) {
  return {rng.uniform(-kPi, kPi), rng.uniform(-kPi, kPi), rng.uniform(-kPi, kPi), rng.uniform(-kPi, kPi)};
}

BipartiteDims random_dims(Rng& rng) { return {2 + rng.index(3), 2 + rng.index(3)}; }

std::pair<StateVector, StateVector> orthonormal_pair(Rng& rng, std::size_t d) {
  const StateVector x = rng.pure_state(d);
  StateVector y = rng.gaussian_vector(d);
  const cplx ov = inner(x, y);
  for (std::size_t i = 0; i < d; ++i) y.amplitudes[i] -= ov * x.amplitudes[i];
  return {x, y.normalized_copy()};
}

double reduced_helstrom(const StateVector& x, const StateVector& y, const BipartiteDims& dims, std::size_t keep) {
  return helstrom_binary(partial_trace(x.projector(), {dims.a, dims.b}, {keep}),
                         partial_trace(y.projector(), {dims.a, dims.b}, {keep}), 0.5);
}

StateVector superpose(const StateVector& a0, const StateVector& a1, double angle, double phase) {
  const cplx i(0.0, 1.0);
  std::vector<cplx> v(a0.dim());
  for (std::size_t k = 0; k < v.size(); ++k) {
    v[k] = std::cos(angle / 2) * a0.amplitudes[k] + std::exp(i * phase) * std::sin(angle / 2) * a1.amplitudes[k];
  }
  return StateVector(std::move(v));
}

double ur_pair_trial(Rng& rng) {
  const BipartiteDims dims = random_dims(rng);
  const auto spec = random_spec(rng);
  const auto a0 = rng.gaussian_vector(dims.a * dims.b);
  const auto a1 = rng.gaussian_vector(dims.a * dims.b);
  const auto r = ur_pair_bound(a0, a1, spec, dims);
  return r.lhs - r.rhs;
}

double ur_guess_trial(Rng& rng) {
  const BipartiteDims dims = random_dims(rng);
  const auto spec = random_spec(rng);
  const auto [a0, a1] = orthonormal_pair(rng, dims.a * dims.b);
  const double lhs = reduced_helstrom(superpose(a0, a1, spec.theta, spec.phi),
                                      superpose(a0, a1, spec.omega, spec.phi_prime), dims, 1);
  return lhs - ur_guess_bound(reduced_helstrom(a0, a1, dims, 0), reduced_helstrom(a0, a1, dims, 1), spec);
}

double ur_general_trial(Rng& rng) {
  GeneralURInstance inst;
  inst.dims = {2 + rng.index(2), 2 + rng.index(2)};
  const std::size_t n = 2 + rng.index(3);
  for (std::size_t k = 0; k < n; ++k) {
    inst.gammas.push_back(rng.gaussian_vector(inst.dims.a * inst.dims.b));
    inst.alpha.push_back(rng.complex_normal());
    inst.beta.push_back(rng.complex_normal());
  }
  const auto g = ur_general(inst);
  return g.lhs - g.rhs_tight;
}

double fvdg_trial(Rng& rng) {
  const std::size_t d = 2 + rng.index(3);
  const HermitianOp rho = rng.density(d), sigma = rng.density(d);
  const double f = fidelity(rho, sigma), t = trace_distance(rho, sigma);
  return std::max(1.0 - f - t, t - std::sqrt(std::max(0.0, 1.0 - f * f)));
}

double helstrom_identity_trial(Rng& rng) {
  const std::size_t d = 2 + rng.index(3);
  const HermitianOp rho = rng.density(d), sigma = rng.density(d);
  return std::abs(trace_distance(rho, sigma) - (2.0 * helstrom_binary(rho, sigma, 0.5) - 1.0));
}

// 0 <= W <= I with Tr W <= 1; without the trace cap the inequality fails for d >= 3.
HermitianOp subnormalized(Rng& rng, std::size_t d) {
  const HermitianOp c = rng.contraction(d);
  return c.scaled(1.0 / std::max(1.0, c.trace()));
}

double product_norm_trial(Rng& rng) {
  const std::size_t da = 1 + rng.index(3), db = 1 + rng.index(3);
  const HermitianOp w = subnormalized(rng, da), y = subnormalized(rng, da);
  const HermitianOp x = subnormalized(rng, db), z = subnormalized(rng, db);
  return trace_norm(kron(w, x) - kron(y, z)) - (trace_norm(w - y) + trace_norm(x - z));
}

double lemma_a1_trial(Rng& rng) {
  const std::size_t n = 3 + rng.index(2), d = 1 + rng.index(6);
  std::vector<HermitianOp> r;
  ComplexMatrix sum(d, d);
  for (std::size_t i = 0; i < n; ++i) {
    r.push_back(rng.psd(d));
    sum = sum + r.back().matrix();
  }
  return max_eigenvalue(HermitianOp(sum)) - lemma_a1_bound(r);
}

double transpose_trick_trial(Rng& rng) {
  const std::size_t d = 2 + rng.index(3);
  return transpose_trick_residual({rng.unitary(d), rng.unitary(d)});
}

double row_merging_trial(Rng& rng) {
  PostInfoEnsemble s;
  s.dim = 2;
  for (int t = 0; t < 2; ++t) {
    const std::size_t n = 2 + rng.index(2);
    s.states.emplace_back();
    for (std::size_t i = 0; i < n; ++i) s.states.back().push_back(rng.pure_state(2));
  }
  s = s.with_uniform_prior();
  if (rng.index(2) == 1) {
    double total = 0.0;
    for (auto& row : s.prior) {
      for (auto& p : row) total += (p = rng.uniform(0.05, 1.0));
    }
    for (auto& row : s.prior) {
      for (auto& p : row) p /= total;
    }
  }
  return std::abs(p_postinfo(s).value - brute_force_postinfo(s));
}

const std::vector<Suite>& suites() {
  static const std::vector<Suite> all = {
      {"prop.fuchs_van_de_graaf", "1 - F <= D_tr <= sqrt(1 - F^2) on random density pairs, d in {2,3,4}", 1000, 1e-9,
       fvdg_trial},
      {"prop.helstrom_identity", "D_tr = 2 p_g - 1 for the equiprobable binary value", 1000, 1e-9,
       helstrom_identity_trial},
      {"prop.lemma_a1", "||sum R_i|| <= cyclic overlap-norm bound, 3-4 random PSD operators, d <= 6", 500, 1e-9,
       lemma_a1_trial},
      {"prop.product_norm", "||W(x)X - Y(x)Z||_1 <= ||W - Y||_1 + ||X - Z||_1 for 0 <= W <= I, Tr W <= 1", 1000, 1e-9,
       product_norm_trial},
      {"prop.row_merging", "row-merged p_postinfo equals subset enumeration on qubit two-setting ensembles", 50, 1e-6,
       row_merging_trial},
      {"prop.transpose_trick", "Tr_A'[(F (x) 1)|Psi+><Psi+|] = U|x><x|U^dag / d for random unitary pairs", 100, 1e-12,
       transpose_trick_trial},
      {"prop.ur_general", "general uncertainty relation, 2-4 random unnormalized components", 500, 1e-9,
       ur_general_trial},
      {"prop.ur_guess", "guessing-probability form with exact Helstrom values, dims 2x2 to 4x4", 1000, 1e-9,
       ur_guess_trial},
      {"prop.ur_pair", "pair uncertainty relation on random unnormalized pairs, dims 2x2 to 4x4", 1000, 1e-9,
       ur_pair_trial},
  };
  return all;
}

}  // namespace

const std::vector<std::string>& property_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& s : suites()) v.emplace_back(s.id);
    return v;
  }();
  return names;
}

PropertyResult run_property(const std::string& name, std::uint64_t seed, std::size_t trials) {
  const auto& all = suites();
  const auto it = std::find_if(all.begin(), all.end(), [&](const Suite& s) { return name == s.id; });
  if (it == all.end()) fail(ErrorCode::UnknownName, "unknown property suite: " + name);
  PropertyResult r;
  r.id = it->id;
  r.statement = it->statement;
  r.seed = seed;
  r.trials = trials == 0 ? it->default_trials : trials;
  r.tolerance = it->tolerance;
  Rng rng(splitmix(seed ^ splitmix(static_cast<std::uint64_t>(it - all.begin()))));
  r.worst = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < r.trials; ++k) {
    const double v = it->trial(rng);
    r.worst = std::max(r.worst, v);
    if (!(v <= r.tolerance)) ++r.failures;
  }
  return r;
}

BoundReport property_report(const PropertyResult& r) {
  return make_report(r.id, r.statement, r.worst, 0.0, r.tolerance, Relation::Le, CertificateKind::Exact,
                     std::to_string(r.trials) + " trials, seed " + std::to_string(r.seed) + ", " +
                         std::to_string(r.failures) + " failures");
}

BoundReport product_norm_counterexample() {
  const HermitianOp id = HermitianOp::identity(3), zero = id.scaled(0.0);
  const double lhs = trace_norm(kron(id, id) - kron(zero, zero));
  const double rhs = trace_norm(id - zero) + trace_norm(id - zero);
  return make_report("linalg.product_norm_hypothesis", "product-norm lemma under 0 <= W,X,Y,Z <= I only", lhs - rhs,
                     0.0, 0.0, Relation::Gt, CertificateKind::Exact,
                     "counterexample W = X = I_3, Y = Z = 0; the lemma holds once Tr <= 1, which covers its use on states");
}

double brute_force_postinfo(const PostInfoEnsemble& s, const Settings& settings) {
  const auto targets = postinfo_targets(s, nullptr);
  const std::size_t n = targets.size();
  if (n > 20) fail(ErrorCode::UnsupportedSize, "subset enumeration is limited to 20 rows");
  const std::size_t max_outcomes = s.dim * s.dim;
  double best = 0.0;
  for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) > max_outcomes) continue;
    std::vector<HermitianOp> sub;
    for (std::size_t r = 0; r < n; ++r) {
      if (mask >> r & 1) sub.push_back(targets[r]);
    }
    best = std::max(best, min_error_discrimination(sub, settings).value);
  }
  return best;
}

}  // namespace obcast
