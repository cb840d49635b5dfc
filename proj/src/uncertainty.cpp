#include "uncertainty.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "error.hpp"

namespace obcast {

namespace {

const cplx kI(0.0, 1.0);

void check_dims(const StateVector& v, const BipartiteDims& dims) {
  if (dims.a == 0 || dims.b == 0 || v.dim() != dims.a * dims.b) {
    fail(ErrorCode::InvalidInput, "vector does not live on the stated bipartite space");
  }
}

// Unnormalized reduced operator of |v><v| on one side.
HermitianOp reduce(const StateVector& v, const BipartiteDims& dims, std::size_t keep) {
  return partial_trace(v.projector(), {dims.a, dims.b}, {keep});
}

StateVector combine(const std::vector<StateVector>& vs, const std::vector<cplx>& c) {
  std::vector<cplx> out(vs.front().dim(), 0.0);
  for (std::size_t k = 0; k < vs.size(); ++k) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += c[k] * vs[k].amplitudes[i];
  }
  return StateVector(std::move(out));
}

void check_probability(double p) {
  if (!(p >= 0.5 - 1e-12 && p <= 1.0 + 1e-12)) {
    fail(ErrorCode::InvalidInput, "guessing probability of an equiprobable pair must lie in [1/2, 1]");
  }
}

}  // namespace

cplx SuperpositionSpec::z1() const {
  return 0.5 * (std::sin(theta) * std::exp(-kI * phi) - std::sin(omega) * std::exp(-kI * phi_prime));
}

double SuperpositionSpec::z2() const { return 0.5 * (std::cos(theta) - std::cos(omega)); }

PairBound ur_pair_bound(const StateVector& alpha0, const StateVector& alpha1, const SuperpositionSpec& spec,
                        const BipartiteDims& dims) {
  check_dims(alpha0, dims);
  check_dims(alpha1, dims);
  const std::vector<StateVector> basis = {alpha0, alpha1};
  const StateVector at = combine(basis, {std::cos(spec.theta / 2), std::exp(kI * spec.phi) * std::sin(spec.theta / 2)});
  const StateVector aw =
      combine(basis, {std::cos(spec.omega / 2), std::exp(kI * spec.phi_prime) * std::sin(spec.omega / 2)});
  PairBound r;
  r.lhs = trace_distance(reduce(at, dims, 1), reduce(aw, dims, 1));
  r.rhs = std::abs(spec.z1()) * fidelity(reduce(alpha0, dims, 0), reduce(alpha1, dims, 0)) +
          std::abs(spec.z2()) * trace_distance(reduce(alpha0, dims, 1), reduce(alpha1, dims, 1));
  return r;
}

double ur_guess_bound(double pg_cross_a, double pg_01_b, const SuperpositionSpec& spec) {
  check_probability(pg_cross_a);
  check_probability(pg_01_b);
  const double u = std::clamp(2.0 * pg_cross_a - 1.0, 0.0, 1.0);
  const double v = std::clamp(2.0 * pg_01_b - 1.0, 0.0, 1.0);
  return 0.5 * (std::abs(spec.z1()) * std::sqrt(1.0 - u * u) + std::abs(spec.z2()) * v + 1.0);
}

double no_go_bound(double theta) { return std::abs(std::cos(theta)); }

cplx ur_coefficient(const GeneralURInstance& inst, std::size_t i, std::size_t j) {
  return inst.alpha[i] * std::conj(inst.alpha[j]) - inst.beta[i] * std::conj(inst.beta[j]);
}

GeneralURResult ur_general(const GeneralURInstance& inst) {
  const std::size_t n = inst.gammas.size();
  if (n == 0 || inst.alpha.size() != n || inst.beta.size() != n) {
    fail(ErrorCode::InvalidInput, "coefficient lists must match the vector count");
  }
  if (n > kMaxPermutationSize) fail(ErrorCode::UnsupportedSize, "permutation minimum supports at most 8 vectors");
  for (const auto& g : inst.gammas) check_dims(g, inst.dims);

  std::vector<HermitianOp> ga, gb;
  for (const auto& g : inst.gammas) {
    ga.push_back(reduce(g, inst.dims, 0));
    gb.push_back(reduce(g, inst.dims, 1));
  }
  std::vector<double> p(n), q(n);
  for (std::size_t i = 0; i < n; ++i) {
    p[i] = std::norm(inst.alpha[i]);
    q[i] = std::norm(inst.beta[i]);
  }

  GeneralURResult r;
  r.lhs = trace_distance(reduce(combine(inst.gammas, inst.alpha), inst.dims, 1),
                         reduce(combine(inst.gammas, inst.beta), inst.dims, 1));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      r.cross_unordered += std::abs(ur_coefficient(inst, i, j)) * fidelity(ga[i], ga[j]);
    }
  }
  r.cross_ordered = 2.0 * r.cross_unordered;

  std::vector<std::vector<double>> cost(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) cost[i][j] = trace_distance(gb[i].scaled(p[i]), gb[j].scaled(q[j]));
  }
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += cost[i][perm[i]];
    if (s < best) {
      best = s;
      r.permutation = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  double tv = 0.0;
  for (std::size_t i = 0; i < n; ++i) tv += 0.5 * std::abs(p[i] - q[i]);
  r.rhs_tight = best + r.cross_unordered;
  r.rhs_relaxed = tv + r.cross_unordered;
  return r;
}

}  // namespace obcast
