#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "broadcast.hpp"
#include "error.hpp"
#include "random.hpp"

using namespace obcast;

namespace {

const double kS = 1.0 / std::numbers::sqrt2;
const Cut kFirst{{0}};

double dev(const HermitianOp& x, const HermitianOp& y) { return (x.matrix() - y.matrix()).max_abs(); }

Isometry identity_into_trivial_b(std::size_t d) {
  Isometry v;
  v.matrix = ComplexMatrix::identity(d);
  v.output_dims = {d, 1};
  return v;
}

}  // namespace

TEST_CASE("broadcast outputs of the gallery isometries") {
  const auto v1 = gallery_isometry("thm1-isometry");
  const auto out = broadcast_outputs(v1, gallery_postinfo("thm1-pairs"), kFirst);
  const auto plus01 = StateVector{kS, kS}.projector();
  CHECK(dev(out[1][0].a, plus01) <= 1e-12);
  CHECK(dev(out[1][0].b, plus01) <= 1e-12);
  // U|+01> = |0>|0>: the A' marginal is |0><0|.
  CHECK(dev(out[0][0].a, basis_state(2, 0).projector()) <= 1e-12);

  const auto v2 = gallery_isometry("thm2-isometry");
  PostInfoEnsemble single;
  single.dim = 4;
  single.states = {{StateVector{0.0, kS, kS, 0.0}}};
  single = single.with_uniform_prior();
  // U|+_{12}> = |11> with 0-based labels.
  const auto out2 = broadcast_outputs(v2, single, kFirst);
  CHECK(dev(out2[0][0].a, basis_state(3, 1).projector()) <= 1e-12);
  CHECK(dev(out2[0][0].b, basis_state(3, 1).projector()) <= 1e-12);

  CHECK_THROWS_AS(broadcast_outputs(v1, gallery_postinfo("bb84"), kFirst), Error);
}

TEST_CASE("isometries preserve norms and marginal traces") {
  Rng rng(12);
  for (const char* name : {"thm1-isometry", "thm2-isometry", "qq-equivalence-unitary"}) {
    const auto v = gallery_isometry(name);
    for (int trial = 0; trial < 50; ++trial) {
      const auto psi = rng.gaussian_vector(v.in_dim());
      CHECK(std::abs(v.apply(psi).norm() - psi.norm()) <= 1e-12);
      if (v.output_dims.size() == 2) {
        PostInfoEnsemble s;
        s.dim = v.in_dim();
        s.states = {{psi.normalized_copy()}};
        s = s.with_uniform_prior();
        const auto m = broadcast_outputs(v, s, kFirst)[0][0];
        CHECK(std::abs(m.a.trace() - 1.0) <= 1e-12);
        CHECK(std::abs(m.b.trace() - 1.0) <= 1e-12);
      }
    }
  }
}

TEST_CASE("orthogonality broadcasting verification") {
  const auto t1 = verify_orthogonality_broadcast(gallery_isometry("thm1-isometry"), gallery_postinfo("thm1-pairs"), kFirst);
  CHECK(t1.ok);
  CHECK(t1.max_overlap <= 1e-12);
  const auto bob = induce_postinfo(gallery_gop("thm2-eight"), Party::A);
  CHECK(verify_orthogonality_broadcast(gallery_isometry("thm2-isometry"), bob, kFirst).ok);
  const auto triv = verify_orthogonality_broadcast(identity_into_trivial_b(2), gallery_postinfo("bb84"), kFirst);
  CHECK_FALSE(triv.ok);
  CHECK(triv.max_overlap == doctest::Approx(1.0));
}

TEST_CASE("entangling protocol for the eight-state ensemble") {
  CHECK(entangling_protocol_overlap(gallery_gop("thm2-eight"), gallery_isometry("thm2-isometry"), kFirst) <= 1e-12);
}

TEST_CASE("classical broadcast POVM check") {
  const auto r = verify_classical_broadcast_povm(gallery_povm("prop1-povm"), gallery_postinfo("minimal-qutrit"));
  CHECK(r.ok);
  using V = std::vector<std::size_t>;
  CHECK(r.outcomes[0][0] == V{0, 1});
  CHECK(r.outcomes[0][1] == V{2, 3});
  CHECK(r.outcomes[1][0] == V{0, 2});
  CHECK(r.outcomes[1][1] == V{1, 3});

  Povm comp;
  comp.effects = {basis_state(2, 0).projector(), basis_state(2, 1).projector()};
  const auto b = verify_classical_broadcast_povm(comp, gallery_postinfo("bb84"));
  CHECK_FALSE(b.ok);
  CHECK(std::abs(b.max_violation - 0.5) <= 1e-12);

  Povm trivial;
  trivial.effects = {HermitianOp::identity(3)};
  CHECK_FALSE(verify_classical_broadcast_povm(trivial, gallery_postinfo("minimal-qutrit")).ok);
}

TEST_CASE("numerical rank") {
  CHECK(numerical_rank({basis_state(3, 0), basis_state(3, 1)}) == 2);
  CHECK(numerical_rank({StateVector{kS, kS, 0.0}, StateVector{kS, -kS, 0.0}, basis_state(3, 0)}) == 2);
  CHECK(numerical_rank({StateVector{1e-12, 0.0}}) == 0);
}

TEST_CASE("kill-pattern certificates") {
  const auto t1 = kill_pattern_certificate(gallery_postinfo("thm1-pairs"));
  CHECK(t1.certified_infeasible);
  CHECK(t1.kernel_dims.size() == 8);
  for (auto d : t1.kernel_dims) CHECK(d == 0);
  const auto bb = kill_pattern_certificate(gallery_postinfo("bb84"));
  CHECK(bb.certified_infeasible);
  CHECK(bb.kernel_dims.size() == 4);
  const auto mq = kill_pattern_certificate(gallery_postinfo("minimal-qutrit"));
  CHECK_FALSE(mq.certified_infeasible);
  for (auto d : mq.kernel_dims) CHECK(d == 1);
}

TEST_CASE("perfect classical broadcast decision") {
  const auto mq = perfect_classical_broadcast_decision(gallery_postinfo("minimal-qutrit"));
  CHECK(mq.feasible);
  CHECK(mq.witness_violation <= 1e-6);
  CHECK(mq.witness.invariant_residual() <= 1e-10);

  const auto t1 = perfect_classical_broadcast_decision(gallery_postinfo("thm1-pairs"));
  CHECK_FALSE(t1.feasible);
  CHECK(t1.kill_pattern_certified);

  PostInfoEnsemble basis;
  basis.dim = 2;
  basis.states = {{basis_state(2, 0), basis_state(2, 1)}};
  basis.orthogonal = true;
  CHECK(perfect_classical_broadcast_decision(basis.with_uniform_prior()).feasible);

  PostInfoEnsemble unflagged = gallery_postinfo("bb84");
  unflagged.orthogonal = false;
  CHECK_THROWS_AS(perfect_classical_broadcast_decision(unflagged), Error);
}

TEST_CASE("kill-pattern infeasibility implies an infeasible decision on random ensembles") {
  Rng rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    // Two settings of random orthonormal pairs; qubit cases are certified, qutrit cases are not.
    PostInfoEnsemble s;
    s.dim = 2 + trial % 2;
    for (int t = 0; t < 2; ++t) {
      const auto u = rng.unitary(s.dim);
      s.states.push_back({StateVector(u.col(0)), StateVector(u.col(1))});
    }
    s.orthogonal = true;
    s = s.with_uniform_prior();
    const auto k = kill_pattern_certificate(s);
    const auto d = perfect_classical_broadcast_decision(s);
    if (k.certified_infeasible) CHECK_FALSE(d.feasible);
  }
}
