#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ensembles.hpp"
#include "linalg.hpp"
#include "report.hpp"

namespace obcast {

// Alice's measurement {F^theta_x}_x on C^dim for each setting theta.
struct MoeGame {
  std::size_t dim = 0;
  std::vector<Povm> measurements;

  std::size_t settings() const { return measurements.size(); }
  void validate() const;
};

// Shared state on A (x) B (x) C with A = C^dim of the game; Bob and Charlie measure per setting.
struct MoeStrategy {
  HermitianOp rho;
  std::size_t dim_b = 1;
  std::size_t dim_c = 1;
  std::vector<Povm> bob;
  std::vector<Povm> charlie;

  void validate(const MoeGame& game) const;
};

// pi^k on n elements, pairwise clash-free: pi^k1(i) != pi^k2(i) whenever k1 != k2.
struct PermutationFamily {
  std::vector<std::vector<std::size_t>> perms;

  static PermutationFamily cyclic(std::size_t n);
  void validate(std::size_t n) const;
};

// Pi^theta = sum_x F^theta_x (x) P^theta_x (x) Q^theta_x
HermitianOp moe_pi(const MoeGame& game, const MoeStrategy& strategy, std::size_t theta);
// sum_theta prior(theta) Tr[Pi^theta rho]; an empty prior means 1/|Theta| each.
double moe_win_prob(const MoeGame& game, const MoeStrategy& strategy, const std::vector<double>& prior = {});
// max over theta != theta', x, x' of || sqrt(F^theta_x) sqrt(F^theta'_x') ||
double overlap_constant(const MoeGame& game);
// sum_k max_i || sqrt(R_i) sqrt(R_{pi^k(i)}) ||, an upper bound on || sum_i R_i ||.
double lemma_a1_bound(const std::vector<HermitianOp>& r, const PermutationFamily& family);
double lemma_a1_bound(const std::vector<HermitianOp>& r);

// F^theta_x = conj(U_theta)|x><x|U_theta^T, so Tr_A'[(F (x) 1)|Psi+><Psi+|] = U|x><x|U^dag / d.
MoeGame transpose_trick_game(const std::vector<ComplexMatrix>& unitaries);
// Largest entry deviation of the marginal identity over all settings and outcomes.
double transpose_trick_residual(const std::vector<ComplexMatrix>& unitaries);

MoeGame go_game();
MoeGame bb84_game();
// Bob and Charlie repeat Alice's measurement on |GHZ> = sum_i |iii> / sqrt(d).
MoeStrategy copy_strategy(const MoeGame& game);
// Bob and Charlie hold one-dimensional systems and always answer 0.
MoeStrategy trivial_strategy(const MoeGame& game, const HermitianOp& rho_a);

struct GoTrivialExample {
  double overlap = 0.0;      // c(G_O)
  double copy_bound = 0.0;   // (1/3) sum_k max_theta ||Pi^theta Pi^{pi^k(theta)}||
  double copy_win = 0.0;     // win probability of the copy strategy
  double contrast = 0.0;     // disk-program value printed for the same ensemble
  BoundReport report;
};

GoTrivialExample example_go_trivial();

std::string moe_game_to_json(const MoeGame& game);
MoeGame moe_game_from_json(const std::string& text);

}  // namespace obcast
