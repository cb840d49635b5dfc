#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <numbers>

#include "discrimination.hpp"
#include "error.hpp"
#include "random.hpp"

using namespace obcast;

namespace {

const double kS = 1.0 / std::numbers::sqrt2;
const double kBb84 = (2.0 + std::numbers::sqrt2) / 4.0;

Eigen::MatrixXcd to_eigen(const ComplexMatrix& m) {
  Eigen::MatrixXcd e(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
  }
  return e;
}

double eigen_min_eig(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
  return es.eigenvalues()(0);
}

// Re-checks a solver result with Eigen: POVM validity, dual feasibility, gap, reported value.
void check_certified(const std::vector<HermitianOp>& targets, const DiscriminationResult& r) {
  const std::size_t d = targets.front().dim();
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(d, d);
  double primal = 0.0;
  for (std::size_t k = 0; k < targets.size(); ++k) {
    const Eigen::MatrixXcd p = to_eigen(r.povm.effects[k].matrix());
    CHECK(eigen_min_eig(p) >= -1e-10);
    sum += p;
    primal += (to_eigen(targets[k].matrix()) * p).trace().real();
  }
  CHECK((sum - Eigen::MatrixXcd::Identity(d, d)).cwiseAbs().maxCoeff() <= 1e-10);
  const Eigen::MatrixXcd y = to_eigen(r.certificate.y.matrix());
  for (const auto& m : targets) CHECK(eigen_min_eig(y - to_eigen(m.matrix())) >= -1e-8);
  const double dual = y.trace().real();
  CHECK(dual - primal <= 1e-7);
  CHECK(dual - primal >= -1e-12);
  CHECK(std::abs(primal - r.value) <= 1e-9);
}

// Deterministic post-processing with at most d^2 outcomes, each outcome mapped to a row; the value of an
// assignment only depends on the set of rows used, so enumerate those sets.
double brute_force_postinfo(const PostInfoEnsemble& s) {
  const auto targets = postinfo_targets(s, nullptr);
  const std::size_t n = targets.size();
  const std::size_t max_outcomes = s.dim * s.dim;
  double best = 0.0;
  for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcountll(mask)) > max_outcomes) continue;
    std::vector<HermitianOp> sub;
    for (std::size_t r = 0; r < n; ++r) {
      if (mask >> r & 1) sub.push_back(targets[r]);
    }
    const auto res = min_error_discrimination(sub);
    check_certified(sub, res);
    best = std::max(best, res.value);
  }
  return best;
}

PostInfoEnsemble random_ensemble(Rng& rng, std::size_t dim, std::vector<std::size_t> sizes, bool random_prior) {
  PostInfoEnsemble s;
  s.dim = dim;
  for (auto n : sizes) {
    s.states.emplace_back();
    for (std::size_t i = 0; i < n; ++i) s.states.back().push_back(rng.pure_state(dim));
  }
  s = s.with_uniform_prior();
  if (random_prior) {
    double total = 0.0;
    for (auto& row : s.prior) {
      for (auto& p : row) total += (p = rng.uniform(0.05, 1.0));
    }
    for (auto& row : s.prior) {
      for (auto& p : row) p /= total;
    }
  }
  return s;
}

}  // namespace

TEST_CASE("helstrom examples") {
  const auto p0 = basis_state(2, 0).projector();
  const auto p1 = basis_state(2, 1).projector();
  const auto pp = StateVector{kS, kS}.projector();
  CHECK(helstrom_binary(p0, p1, 0.5) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(helstrom_binary(p0, pp, 0.5) - 0.5 * (1.0 + std::sqrt(1.0 - 0.5))) <= 1e-12);
  CHECK(helstrom_binary(pp, pp, 0.5) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK_THROWS_AS(helstrom_binary(p0, p1, 1.5), Error);
}

TEST_CASE("two-target discrimination matches the Helstrom closed form") {
  Rng rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t d = 2 + rng.index(3);
    const auto rho = rng.density(d);
    const auto sigma = rng.density(d);
    const double p = rng.uniform(0.1, 0.9);
    const std::vector<HermitianOp> targets = {rho.scaled(p), sigma.scaled(1.0 - p)};
    const auto r = min_error_discrimination(targets);
    check_certified(targets, r);
    CHECK(std::abs(r.value - helstrom_binary(rho, sigma, p)) <= 1e-7);
  }
}

TEST_CASE("orthogonal targets are perfectly distinguishable") {
  std::vector<HermitianOp> targets;
  for (std::size_t k = 0; k < 3; ++k) targets.push_back(basis_state(3, k).projector().scaled(1.0 / 3));
  const auto r = min_error_discrimination(targets);
  check_certified(targets, r);
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("BB84 row-merged targets") {
  const auto bb = gallery_postinfo("bb84");
  std::vector<std::vector<std::size_t>> rows;
  const auto targets = postinfo_targets(bb, &rows);
  REQUIRE(targets.size() == 4);
  CHECK(rows[1] == std::vector<std::size_t>{0, 1});
  const auto r = min_error_discrimination(targets);
  check_certified(targets, r);
  CHECK(std::abs(r.value - kBb84) <= 1e-9);
  CHECK(r.certificate.gap <= 1e-7);
}

TEST_CASE("post-information values of gallery ensembles") {
  CHECK(std::abs(p_postinfo(gallery_postinfo("bb84")).value - kBb84) <= 1e-9);
  CHECK(std::abs(p_cbc(gallery_postinfo("bb84")) - kBb84) <= 1e-9);
  CHECK(std::abs(p_bc_two_settings(gallery_postinfo("bb84")) - kBb84) <= 1e-9);
  CHECK(p_postinfo(gallery_postinfo("minimal-qutrit")).value >= 1.0 - 1e-7);
  // Frozen from an independent conic solve of the row-merged program (agrees with (2 + sqrt 3)/4 to 4e-11).
  const auto t1 = p_postinfo(gallery_postinfo("thm1-pairs"));
  CHECK(std::abs(t1.value - (2.0 + std::sqrt(3.0)) / 4.0) <= 1e-7);
  CHECK(t1.value < 1.0 - 1e-3);
  CHECK_THROWS_AS(p_bc_two_settings(gallery_postinfo("thm1-pairs")), Error);
}

TEST_CASE("single setting reduces to plain minimum-error discrimination") {
  Rng rng(4);
  auto s = random_ensemble(rng, 3, {3}, true);
  std::vector<HermitianOp> targets;
  for (std::size_t i = 0; i < 3; ++i) targets.push_back(s.states[0][i].projector().scaled(s.prior[0][i]));
  CHECK(std::abs(p_postinfo(s).value - min_error_discrimination(targets).value) <= 1e-7);
  PostInfoEnsemble basis;
  basis.dim = 3;
  basis.states = {{basis_state(3, 0), basis_state(3, 1), basis_state(3, 2)}};
  basis.orthogonal = true;
  CHECK(p_postinfo(basis.with_uniform_prior()).value >= 1.0 - 1e-9);
}

TEST_CASE("row merging agrees with brute-force enumeration on random qubit ensembles") {
  Rng rng(42);
  for (int trial = 0; trial < 50; ++trial) {
    CAPTURE(trial);
    const std::size_t n0 = 2 + rng.index(2), n1 = 2 + rng.index(2);
    const auto s = random_ensemble(rng, 2, {n0, n1}, trial % 2 == 1);
    const auto r = p_postinfo(s);
    CHECK(std::abs(r.value - brute_force_postinfo(s)) <= 1e-6);
  }
}

TEST_CASE("coarse-graining settings cannot increase the value") {
  Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const auto s = random_ensemble(rng, 2, {2, 2}, false);
    // Merging both settings into one forgets which basis was used.
    PostInfoEnsemble merged;
    merged.dim = 2;
    merged.states = {{s.states[0][0], s.states[0][1], s.states[1][0], s.states[1][1]}};
    merged.prior = {{s.prior[0][0], s.prior[0][1], s.prior[1][0], s.prior[1][1]}};
    CHECK(p_postinfo(merged).value <= p_postinfo(s).value + 1e-7);
  }
}

TEST_CASE("relabeling indices within a setting leaves the value unchanged") {
  Rng rng(10);
  for (int trial = 0; trial < 20; ++trial) {
    auto s = random_ensemble(rng, 3, {3, 2}, true);
    const double v = p_postinfo(s).value;
    std::swap(s.states[0][0], s.states[0][2]);
    std::swap(s.prior[0][0], s.prior[0][2]);
    CHECK(std::abs(p_postinfo(s).value - v) <= 1e-7);
  }
}

TEST_CASE("classical-quantum LOSCC value") {
  const auto g = swap_parties(gen_bb84(std::numbers::pi / 2));
  CHECK(std::abs(losscc_value_cq(g) - kBb84) <= 1e-9);
  CHECK_THROWS_AS(losscc_value_cq(gallery_gop("qq")), Error);
  GopEnsemble prod;
  prod.dim_a = 2;
  prod.dim_b = 2;
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) prod.entries.push_back({basis_state(2, i), basis_state(2, j), 0.25});
  }
  CHECK(losscc_value_cq(prod) >= 1.0 - 1e-9);
}

TEST_CASE("oversized index products are rejected") {
  PostInfoEnsemble s;
  s.dim = 2;
  for (int t = 0; t < 13; ++t) s.states.push_back({basis_state(2, 0), basis_state(2, 1)});
  s = s.with_uniform_prior();
  try {
    p_postinfo(s);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnsupportedSize);
  }
}
