#pragma once

#include <cstddef>
#include <vector>

#include "linalg.hpp"

namespace obcast {

// alpha_theta = cos(theta/2) alpha_0 + e^{i phi} sin(theta/2) alpha_1, alpha_omega likewise with (omega, phi').
struct SuperpositionSpec {
  double theta = 0.0;
  double phi = 0.0;
  double omega = 0.0;
  double phi_prime = 0.0;

  cplx z1() const;
  double z2() const;
};

// Bipartite space A (x) B with A the first factor.
struct BipartiteDims {
  std::size_t a = 0;
  std::size_t b = 0;
};

struct PairBound {
  double lhs = 0.0;
  double rhs = 0.0;
};

PairBound ur_pair_bound(const StateVector& alpha0, const StateVector& alpha1, const SuperpositionSpec& spec,
                        const BipartiteDims& dims);
double ur_guess_bound(double pg_cross_a, double pg_01_b, const SuperpositionSpec& spec);
// |cos theta|: bound on D_tr(alpha_theta^B', alpha_{theta - pi}^B') when F(alpha_0^A, alpha_1^A) = 0.
double no_go_bound(double theta);

struct GeneralURInstance {
  std::vector<StateVector> gammas;  // possibly unnormalized, all on dims.a * dims.b
  std::vector<cplx> alpha;
  std::vector<cplx> beta;
  BipartiteDims dims;
};

constexpr std::size_t kMaxPermutationSize = 8;

struct GeneralURResult {
  double lhs = 0.0;
  double rhs_tight = 0.0;    // permutation minimum plus unordered cross terms
  double rhs_relaxed = 0.0;  // D_tr(p, q) plus unordered cross terms
  double cross_unordered = 0.0;  // sum_{i<j} |z_ij| F(gamma_i^A, gamma_j^A)
  double cross_ordered = 0.0;    // sum_i sum_{j != i}, twice the unordered sum
  std::vector<std::size_t> permutation;
};

GeneralURResult ur_general(const GeneralURInstance& inst);
// z_ij = alpha_i alpha_j^* - beta_i beta_j^*
cplx ur_coefficient(const GeneralURInstance& inst, std::size_t i, std::size_t j);

}  // namespace obcast
