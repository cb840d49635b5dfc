#pragma once

#include <cstddef>
#include <vector>

#include "discrimination.hpp"
#include "ensembles.hpp"

namespace obcast {

// Output factors of an isometry kept by A'; the remaining factors form B'.
struct Cut {
  std::vector<std::size_t> a_factors;
};

struct Marginals {
  HermitianOp a;
  HermitianOp b;
};

// [theta][i] -> (Tr_B' V rho V^dag, Tr_A' V rho V^dag).
std::vector<std::vector<Marginals>> broadcast_outputs(const Isometry& v, const PostInfoEnsemble& s, const Cut& cut);

struct OrthogonalityBroadcastCheck {
  bool ok = false;
  double max_overlap = 0.0;  // max over theta, i != j, sides of Tr[sigma_i sigma_j]
};

OrthogonalityBroadcastCheck verify_orthogonality_broadcast(const Isometry& v, const PostInfoEnsemble& s,
                                                           const Cut& cut);

struct ClassicalBroadcastCheck {
  bool ok = false;
  double max_violation = 0.0;  // max over x, theta of the second largest Tr[Pi_x rho_{i|theta}]
  std::vector<std::vector<std::vector<std::size_t>>> outcomes;  // [theta][i] -> outcomes with nonzero probability
};

ClassicalBroadcastCheck verify_classical_broadcast_povm(const Povm& p, const PostInfoEnsemble& s);

constexpr double kRankTol = 1e-10;

struct KillPatternCertificate {
  bool certified_infeasible = false;
  std::vector<std::vector<std::size_t>> patterns;  // survivor index per setting
  std::vector<std::size_t> kernel_dims;            // dim K_s per pattern
};

KillPatternCertificate kill_pattern_certificate(const PostInfoEnsemble& s);
// Number of singular values above tol of the matrix whose columns are the given vectors.
std::size_t numerical_rank(const std::vector<StateVector>& vectors, double tol = kRankTol);

struct BroadcastDecision {
  bool feasible = false;
  double value = 0.0;
  Povm witness;
  double witness_violation = 0.0;
  bool kill_pattern_certified = false;
  double gap = 0.0;
};

BroadcastDecision perfect_classical_broadcast_decision(const PostInfoEnsemble& s, const Settings& settings = {});

// Alice measures A in the computational basis; Bob's conditional states go through V.
// Returns the largest marginal overlap over all conditional pairs (0 for a perfect protocol).
double entangling_protocol_overlap(const GopEnsemble& s, const Isometry& v, const Cut& cut);

}  // namespace obcast
