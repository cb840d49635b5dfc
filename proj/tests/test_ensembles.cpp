#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "ensembles.hpp"
#include "error.hpp"

using namespace obcast;

namespace {

const double kS = 1.0 / std::numbers::sqrt2;

GopEnsemble two_entry(StateVector a0, StateVector b0, StateVector a1, StateVector b1) {
  GopEnsemble g;
  g.dim_a = a0.dim();
  g.dim_b = b0.dim();
  g.entries = {{std::move(a0), std::move(b0), 0.5}, {std::move(a1), std::move(b1), 0.5}};
  return g;
}

}  // namespace

TEST_CASE("every gallery object passes its invariants and round-trips through JSON") {
  for (const auto& name : gallery_names()) {
    CAPTURE(name);
    const NamedObject obj = gallery(name);
    const std::string text = to_json(obj);
    const NamedObject back = from_json(text);
    CHECK(back.name == name);
    CHECK(back.kind() == obj.kind());
    CHECK(to_json(back) == text);
  }
  CHECK_THROWS_AS(gallery("no-such-ensemble"), Error);
}

TEST_CASE("gen-bb84 accepts an explicit angle") {
  const auto g = gallery_gop("gen-bb84(1.0)");
  CHECK(std::abs(g.entries[2].b.amplitudes[0].real() - std::cos(0.5)) <= 1e-15);
  CHECK_THROWS_AS(gallery("gen-bb84(abc)"), Error);
  CHECK(global_orthogonality_check(gallery_gop("gen-bb84")).orthogonal);
}

TEST_CASE("gallery priors and sizes") {
  const auto obb = gallery_gop("obb");
  CHECK(obb.size() == 7);
  CHECK(obb.entries[0].p == 0.25);
  for (std::size_t k = 1; k < 7; ++k) CHECK(obb.entries[k].p == 0.125);
  const auto bb84 = gallery_postinfo("bb84");
  CHECK(bb84.settings() == 2);
  CHECK(bb84.orthogonal);
  const auto shifts = gallery_gop("shifts");
  CHECK(shifts.dim_a == 4);
  CHECK(shifts.dim_b == 2);
}

TEST_CASE("prop1 povm effects sum to identity") {
  const auto p = gallery_povm("prop1-povm");
  CHECK(p.size() == 4);
  CHECK(p.invariant_residual() <= 1e-12);
  CHECK(gallery_povm("thm6-breidbart-povm").invariant_residual() <= 1e-12);
}

TEST_CASE("global orthogonality check") {
  for (const char* name : {"obb", "cq", "qq", "qq-tilde", "shifts", "thm2-eight", "cor4-six"}) {
    CAPTURE(name);
    CHECK(global_orthogonality_check(gallery_gop(name)).orthogonal);
  }
  const StateVector z{1.0, 0.0}, plus{kS, kS};
  const auto r = global_orthogonality_check(two_entry(z, z, z, plus));
  CHECK_FALSE(r.orthogonal);
  CHECK(std::abs(r.max_violation - kS) <= 1e-15);
}

TEST_CASE("qubit-qudit form detection") {
  const auto bb = qubit_qudit_form_check(gen_bb84(std::numbers::pi / 2));
  REQUIRE(bb.fits);
  CHECK(bb.removable.empty());
  const auto ref = gallery_postinfo("bb84");
  REQUIRE(bb.induced.settings() == 2);
  for (std::size_t t = 0; t < 2; ++t) {
    for (std::size_t i = 0; i < 2; ++i) {
      CHECK(std::abs(std::abs(inner(bb.induced.states[t][i], ref.states[t][i])) - 1.0) <= 1e-12);
      CHECK(bb.induced.prior[t][i] == doctest::Approx(0.25));
    }
  }

  // |0>|0>, |1>|1>, |+>|2>: the Gram matrix of the A side separates {0, 1} from the removable third state.
  GopEnsemble g;
  g.dim_a = 2;
  g.dim_b = 3;
  g.entries = {{StateVector{1.0, 0.0}, basis_state(3, 0), 1.0 / 3},
               {StateVector{0.0, 1.0}, basis_state(3, 1), 1.0 / 3},
               {StateVector{kS, kS}, basis_state(3, 2), 1.0 / 3}};
  const auto f = qubit_qudit_form_check(g);
  REQUIRE(f.fits);
  CHECK(f.removable == std::vector<std::size_t>{2});
  CHECK(f.induced.settings() == 2);
  CHECK(f.induced.states[0].size() == 1);
  CHECK(f.induced.states[1].size() == 1);

  const auto c = qubit_qudit_form_check(gallery_gop("cor4-six"));
  CHECK_FALSE(c.fits);
  CHECK_FALSE(c.reason.empty());

  // Two conjugate A bases, each paired with a shared B state: no single pair of A directions covers all.
  GopEnsemble h;
  h.dim_a = 2;
  h.dim_b = 2;
  const StateVector z{1.0, 0.0}, o{0.0, 1.0}, plus{kS, kS}, minus{kS, -kS};
  h.entries = {{plus, z, 0.25}, {minus, z, 0.25}, {z, o, 0.25}, {o, o, 0.25}};
  CHECK(global_orthogonality_check(h).orthogonal);
  CHECK_FALSE(qubit_qudit_form_check(h).fits);
}

TEST_CASE("equivalence unitary maps qq onto qq-tilde up to phases") {
  const auto u = gallery_isometry("qq-equivalence-unitary");
  const auto mapped = apply_local(gallery_gop("qq"), u.matrix, Party::A);
  CHECK(set_deviation_up_to_phase(mapped, gallery_gop("qq-tilde")) <= 1e-12);
  CHECK(set_deviation_up_to_phase(gallery_gop("qq"), gallery_gop("qq-tilde")) > 0.1);
}

TEST_CASE("thm1 isometry maps the six states to product outputs") {
  const auto v = gallery_isometry("thm1-isometry");
  const auto pairs = gallery_postinfo("thm1-pairs");
  const StateVector z{1.0, 0.0}, o{0.0, 1.0}, p{kS, kS}, m{kS, -kS};
  const cplx i(0.0, 1.0);
  const StateVector tp{kS, i * kS}, tm{kS, -i * kS};
  // Expected images up to global phase.
  const std::vector<std::vector<StateVector>> expected = {
      {kron(z, z), kron(o, o)}, {kron(p, p), kron(m, m)}, {kron(tp, tp), kron(tm, tm)}};
  for (std::size_t t = 0; t < 3; ++t) {
    for (std::size_t k = 0; k < 2; ++k) {
      const auto out = v.apply(pairs.states[t][k]);
      CHECK(std::abs(std::abs(inner(expected[t][k], out)) - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("induced post-information ensembles") {
  const auto e = induce_postinfo(gallery_gop("cor4-six"), Party::A);
  const auto ref = gallery_postinfo("thm1-pairs");
  REQUIRE(e.settings() == 3);
  for (std::size_t t = 0; t < 3; ++t) {
    for (std::size_t k = 0; k < 2; ++k) {
      CHECK(std::abs(std::abs(inner(e.states[t][k], ref.states[t][k])) - 1.0) <= 1e-12);
    }
  }
  CHECK(e.orthogonal);
  CHECK(is_classical_side(gallery_gop("cq"), Party::A));
  CHECK_FALSE(is_classical_side(gallery_gop("qq"), Party::A));
  CHECK_THROWS_AS(induce_postinfo(gallery_gop("qq"), Party::A), Error);
}

TEST_CASE("malformed JSON is rejected with an input error") {
  for (const char* text : {"{", "[]", R"({"kind":"gop"})", R"({"kind":"x","dims":[2],"states":[]})",
                           R"({"kind":"povm","dims":[2],"states":[[[1,0],[0,0],[0,0],[0,0]]]})",
                           R"({"kind":"postinfo","dims":[2],"prior":[1],"states":[[[2,0],[0,0]]]})"}) {
    CAPTURE(text);
    try {
      from_json(text);
      CHECK(false);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InvalidInput);
    }
  }
}
