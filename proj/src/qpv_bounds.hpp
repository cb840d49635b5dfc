#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "discrimination.hpp"
#include "ensembles.hpp"
#include "report.hpp"
#include "uncertainty.hpp"

namespace obcast {

// Four states |a0>|b0>, |a1>|b1>, |a2>|b_theta>, |a3>|b_omega> with b0 orthogonal to b1.
struct Theorem4Instance {
  double overlap_a01 = 1.0;  // |<a0|a1>|, > 0
  double overlap_b01 = 0.0;  // |<b0|b1>|
  double overlap_a23 = 1.0;  // |<a2|a3>|
  SuperpositionSpec spec;

  void validate() const;
};

double thm4_rhs(double eps, const Theorem4Instance& inst);
// Smallest eps in [0, 1/2] with thm4_rhs(eps) >= 1, bisected to 1e-10; 0 when eps = 0 already satisfies it.
double thm4_min_epsilon(const Theorem4Instance& inst);
Theorem4Instance gen_bb84_instance(double theta);

struct Thm4Match {
  std::array<std::size_t, 4> roles{};  // entry indices playing psi_0 .. psi_3
  Theorem4Instance instance;
  double epsilon = 0.0;
};

// Reads the instance off four entries of a product ensemble; DoesNotFitForm when the roles do not fit.
Theorem4Instance thm4_instance_from_roles(const GopEnsemble& s, const std::array<std::size_t, 4>& roles);
// Every ordered role assignment that fits, each with its minimal epsilon.
std::vector<Thm4Match> thm4_matches(const GopEnsemble& s);
std::optional<Thm4Match> thm4_best_match(const GopEnsemble& s);

struct Cor5Value {
  double root = 0.0;             // thm4_min_epsilon on the gen-bb84 instance
  double printed_formula = 0.0;  // (1 - cos t + (1 + sqrt2) sin^2 t) / (2 (1 + sin^2 t))
};

Cor5Value cor5_epsilon_star(double theta);

// Alice measures povm `alice`, Bob measures `bob`, guess[x][y] names an entry or is -1.
struct ProductStrategyValue {
  double value = 0.0;
  std::vector<double> per_state;  // Pr[correct | entry k]
};

ProductStrategyValue product_strategy_value(const GopEnsemble& s, const Povm& alice, const Povm& bob,
                                            const std::vector<std::vector<int>>& guess);

// Success of the intermediate-basis strategy on gen-bb84(theta); equals cos^2(theta/4).
double breidbart_lower(double theta);

struct Prop4Result {
  double raw = 0.0;    // optimum of max min{f_r, f_s} - 1/2
  double bound = 0.0;  // min(1, raw)
  double r0 = 0.5, r1 = 0.5, s0 = 0.5, s1 = 0.5;
  bool unity_condition = false;
  std::optional<double> analytic_upper;  // present for p = 1/2, z2 = 0
  CertificateKind certificate = CertificateKind::Heuristic;
};

Prop4Result prop4_solve(double p, double pg_a01, double pg_a23, const SuperpositionSpec& spec);

// Variables a_i, b_j in [1/2, 1]; each coupling (i, j) constrains the pair to the disk
// (2 a_i - 1)^2 + (2 b_j - 1)^2 <= 1. Objective min(sum a, sum b); bound = base + scale (opt + shift).
struct DiskProgram {
  std::vector<std::pair<std::size_t, std::size_t>> couplings;
  std::size_t vars_per_party = 0;
  double shift = 0.0;
  double base = 0.0;
  double scale = 1.0;
};

struct DiskResult {
  double opt = 0.0;
  double bound = 0.0;
  std::vector<double> a, b;        // feasible point attaining opt
  double certificate_value = 0.0;  // analytic upper bound on opt
  double min_slack = 0.0;          // smallest constraint slack at the feasible point
  CertificateKind certificate = CertificateKind::Analytic;
};

DiskResult disk_program_solve(const DiskProgram& program);

// Printed: base 1/4 as in the source. Corrected: base 1/2, the constant the pairwise
// decomposition actually yields (four pairs at weight 1/8 contribute 4 * 1/8).
enum class DiskAssembly { Printed, Corrected };

DiskProgram obb_disk_program(DiskAssembly assembly = DiskAssembly::Printed);
DiskProgram qq_tilde_disk_program(DiskAssembly assembly = DiskAssembly::Printed);

// LOSCC strategy: Alice measures the computational basis and announces x, Bob measures the
// post-information optimum for the ensemble conditioned on x. The value is attained by the witness.
PostInfoResult computational_relay_value(const GopEnsemble& s, const Settings& settings = {});

// (pr_honest - pr_losqc_bound) / |S|
double error_per_state(const GopEnsemble& s, double pr_honest, double pr_losqc_bound);

struct CqStrategyValue {
  double value = 0.0;
  std::vector<double> per_state;
  double povm_residual = 0.0;
  double identity_residual = 0.0;     // |1/2 (cos + sin)^2 - cos^2| at pi/8
  double printed_table_value = 0.0;   // value of the table as printed, rows for x = 2 swapped
};

// Alice measures the computational basis, Bob the four-outcome POVM; priors default to the gallery's.
CqStrategyValue cq_strategy_value(const std::vector<double>* prior = nullptr);
// Guess table for the cq strategy, guess[x][y] with 0-based entries and outcomes.
std::vector<std::vector<int>> cq_guess_table();

struct Thm6Separation {
  BoundReport upper;      // qq via the equivalence unitary and the qq-tilde disk program
  BoundReport lower;      // cq via the explicit strategy
  BoundReport soundness;  // upper bound against the computational-relay strategy on qq
  double gap = 0.0;
  double equivalence_deviation = 0.0;
  double qq_strategy = 0.0;
};

Thm6Separation thm6_separation();

}  // namespace obcast
