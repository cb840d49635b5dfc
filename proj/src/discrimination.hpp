#pragma once

#include <cstddef>
#include <vector>

#include "ensembles.hpp"
#include "linalg.hpp"

namespace obcast {

struct Settings {
  double tol_primal = 1e-9;  // |reported value - value of the returned POVM|
  double tol_gap = 1e-7;     // Tr[Y] - primal
  double tol_eig = 1e-10;    // PSD clamp and rank threshold
  std::size_t max_iter = 100000;
  double damping = 0.5;  // weight of the previous iterate
};

// Tr[Y] >= sum_r Tr[Pi_r M_r] for every POVM whenever Y >= M_r for all r.
struct DualCertificate {
  HermitianOp y;
  double primal_value = 0.0;
  double gap = 0.0;
  double max_violation = 0.0;  // max_r max(0, lambda_max(M_r - Y))
};

struct DiscriminationResult {
  double value = 0.0;
  Povm povm;
  DualCertificate certificate;
  std::size_t iterations = 0;
};

double helstrom_binary(const HermitianOp& rho, const HermitianOp& sigma, double p);

// max over POVMs of sum_r Tr[Pi_r M_r] for PSD targets M_r (priors absorbed).
DiscriminationResult min_error_discrimination(const std::vector<HermitianOp>& targets,
                                              const Settings& settings = {});

// Certificate of Y against targets; independent of how Y was produced.
DualCertificate certify(const std::vector<HermitianOp>& targets, const Povm& povm, const HermitianOp& y);

constexpr std::size_t kMaxRows = 4096;

struct PostInfoResult {
  double value = 0.0;
  Povm witness;                                // outcome r of the witness is row rows[r]
  std::vector<std::vector<std::size_t>> rows;  // rows[r][theta] = guessed index after learning theta
  DualCertificate certificate;
};

// Row-merged targets M_r = sum_theta p(theta, r_theta) rho_{r_theta|theta}, r in prod_theta I_theta.
std::vector<HermitianOp> postinfo_targets(const PostInfoEnsemble& s, std::vector<std::vector<std::size_t>>* rows);
PostInfoResult p_postinfo(const PostInfoEnsemble& s, const Settings& settings = {});
double p_cbc(const PostInfoEnsemble& s, const Settings& settings = {});
double p_bc_two_settings(const PostInfoEnsemble& s, const Settings& settings = {});
// Post-information value of the ensemble induced on A when the B side is classical.
double losscc_value_cq(const GopEnsemble& s, const Settings& settings = {});

}  // namespace obcast
