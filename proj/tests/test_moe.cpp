#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "error.hpp"
#include "moe.hpp"
#include "random.hpp"

using namespace obcast;

namespace {

const double kSqrt2 = std::numbers::sqrt2;

Eigen::MatrixXcd to_eigen(const ComplexMatrix& m) {
  Eigen::MatrixXcd e(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
  }
  return e;
}

double eigen_norm_of_sum(const std::vector<HermitianOp>& r) {
  Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(r.front().dim(), r.front().dim());
  for (const auto& x : r) s += to_eigen(x.matrix());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(s);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

Povm random_projective(Rng& rng, std::size_t d) {
  const ComplexMatrix u = rng.unitary(d);
  Povm p;
  for (std::size_t x = 0; x < d; ++x) p.effects.push_back(HermitianOp::projector(u.col(x)));
  return p;
}

}  // namespace

TEST_CASE("overlap constant of the completed OBB game is one") {
  const MoeGame g = go_game();
  CHECK(g.settings() == 3);
  CHECK(overlap_constant(g) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("copy strategy on the completed OBB game") {
  const GoTrivialExample ex = example_go_trivial();
  CHECK(std::abs(ex.overlap - 1.0) < 1e-12);
  CHECK(std::abs(ex.copy_bound - 1.0) < 1e-9);
  // Real basis v: Pr[all answer x] = (sum_i v_x[i]^3)^2 / 3, giving 1, 1/2, 1/2 per setting.
  CHECK(std::abs(ex.copy_win - 2.0 / 3.0) < 1e-12);
  CHECK(ex.copy_win <= ex.copy_bound + 1e-12);
  CHECK(ex.report.pass);
  CHECK(ex.report.id == "moe.go_copy_bound");
  CHECK(ex.contrast < ex.copy_bound);
}

TEST_CASE("BB84 game overlap and bound") {
  const MoeGame g = bb84_game();
  CHECK(std::abs(overlap_constant(g) - 1.0 / kSqrt2) < 1e-12);
  const std::vector<HermitianOp> r{g.measurements[0].effects[0], g.measurements[1].effects[0]};
  CHECK(std::abs(lemma_a1_bound(r) / 2.0 - 0.5 * (1.0 + 1.0 / kSqrt2)) < 1e-9);
  CHECK(std::abs(eigen_norm_of_sum(r) / 2.0 - 0.5 * (1.0 + 1.0 / kSqrt2)) < 1e-9);
}

TEST_CASE("transpose trick marginal identity") {
  Rng rng(0x7a11);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t d = 2 + rng.index(3);
    std::vector<ComplexMatrix> us{rng.unitary(d), rng.unitary(d)};
    worst = std::max(worst, transpose_trick_residual(us));
  }
  CHECK(worst < 1e-12);
  CHECK(transpose_trick_residual({ComplexMatrix::identity(2)}) < 1e-15);
  CHECK_THROWS_AS(transpose_trick_game({ComplexMatrix{{1.0, 1.0}, {0.0, 1.0}}}), Error);
}

TEST_CASE("overlap-norm bound dominates the operator norm of the sum") {
  Rng rng(0xa1a1);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 3 + rng.index(2), d = 1 + rng.index(6);
    std::vector<HermitianOp> r;
    for (std::size_t i = 0; i < n; ++i) r.push_back(rng.psd(d));
    const double bound = lemma_a1_bound(r);
    const double norm = eigen_norm_of_sum(r);
    REQUIRE(norm <= bound * (1.0 + 1e-10) + 1e-12);
  }
}

TEST_CASE("permutation families") {
  CHECK_NOTHROW(PermutationFamily::cyclic(5).validate(5));
  PermutationFamily clash{{{0, 1, 2}, {0, 2, 1}}};
  CHECK_THROWS_AS(clash.validate(3), Error);
  PermutationFamily bad{{{0, 0, 1}}};
  CHECK_THROWS_AS(bad.validate(3), Error);
  const std::vector<HermitianOp> r{HermitianOp::identity(2), HermitianOp::identity(2), HermitianOp::identity(2)};
  CHECK_THROWS_AS(lemma_a1_bound(r, clash), Error);
}

TEST_CASE("win probability never exceeds the game bound") {
  Rng rng(0x5eed);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t d = 2;
    MoeGame g;
    g.dim = d;
    for (int t = 0; t < 3; ++t) g.measurements.push_back(random_projective(rng, d));
    MoeStrategy s;
    s.dim_b = 2;
    s.dim_c = 2;
    s.rho = rng.density(d * 4);
    for (int t = 0; t < 3; ++t) {
      s.bob.push_back(random_projective(rng, 2));
      s.charlie.push_back(random_projective(rng, 2));
    }
    std::vector<HermitianOp> pis;
    for (std::size_t t = 0; t < 3; ++t) pis.push_back(moe_pi(g, s, t));
    const double win = moe_win_prob(g, s);
    REQUIRE(win <= eigen_norm_of_sum(pis) / 3.0 + 1e-12);
    REQUIRE(win <= lemma_a1_bound(pis) / 3.0 + 1e-12);
  }
}

TEST_CASE("product shared state factorizes the win probability") {
  Rng rng(0xb0b);
  for (int trial = 0; trial < 50; ++trial) {
    const MoeGame g = go_game();
    const HermitianOp ra = rng.density(3), rb = rng.density(2), rc = rng.density(2);
    MoeStrategy s;
    s.dim_b = 2;
    s.dim_c = 2;
    s.rho = kron(kron(ra, rb), rc);
    for (int t = 0; t < 3; ++t) {
      Povm b, c;
      const HermitianOp w1 = rng.contraction(2), w2 = rng.contraction(2);
      b.effects = {w1.scaled(0.5), w1.scaled(0.5), HermitianOp::identity(2) - w1};
      c.effects = {w2, HermitianOp::identity(2) - w2, HermitianOp(ComplexMatrix::zeros(2, 2))};
      s.bob.push_back(b);
      s.charlie.push_back(c);
    }
    const std::vector<double> prior{0.2, 0.3, 0.5};
    double oracle = 0.0;
    for (std::size_t t = 0; t < 3; ++t) {
      for (std::size_t x = 0; x < 3; ++x) {
        auto tr = [](const HermitianOp& f, const HermitianOp& r) { return (f.matrix() * r.matrix()).trace().real(); };
        oracle += prior[t] * tr(g.measurements[t].effects[x], ra) * tr(s.bob[t].effects[x], rb) *
                  tr(s.charlie[t].effects[x], rc);
      }
    }
    REQUIRE(std::abs(moe_win_prob(g, s, prior) - oracle) < 1e-12);
  }
}

TEST_CASE("trivial strategy wins when Alice's outcome 0 is certain") {
  const MoeGame g = go_game();
  const MoeStrategy s = trivial_strategy(g, basis_state(3, 0).projector());
  CHECK(std::abs(moe_win_prob(g, s) - 5.0 / 6.0) < 1e-12);
}

TEST_CASE("game JSON round trip") {
  const MoeGame g = go_game();
  const MoeGame back = moe_game_from_json(moe_game_to_json(g));
  REQUIRE(back.settings() == g.settings());
  for (std::size_t t = 0; t < g.settings(); ++t) {
    for (std::size_t x = 0; x < g.measurements[t].size(); ++x) {
      CHECK((back.measurements[t].effects[x].matrix() - g.measurements[t].effects[x].matrix()).max_abs() == 0.0);
    }
  }
  CHECK_THROWS_AS(moe_game_from_json("{\"kind\":\"gop\"}"), Error);
  CHECK_THROWS_AS(moe_game_from_json("not json"), Error);
  CHECK_THROWS_AS(moe_game_from_json(R"({"kind":"moe-game","dims":[2],"sizes":[2],"states":[]})"), Error);
}
