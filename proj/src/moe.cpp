#include "moe.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "error.hpp"
#include "json.hpp"
#include "qpv_bounds.hpp"

namespace obcast {

namespace {

using ojson = nlohmann::ordered_json;

const double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

Povm projective(const std::vector<StateVector>& basis) {
  Povm p;
  for (const auto& v : basis) p.effects.push_back(v.projector());
  return p;
}

StateVector ket(std::size_t d, std::size_t i) { return basis_state(d, i); }

StateVector pair_state(std::size_t d, std::size_t i, std::size_t j, double sign) {
  std::vector<cplx> v(d, 0.0);
  v[i] = kInvSqrt2;
  v[j] = sign * kInvSqrt2;
  return StateVector(std::move(v));
}

void check_unitary(const ComplexMatrix& u) {
  if (!u.square() || u.rows() == 0) fail(ErrorCode::InvalidInput, "unitary must be square and nonempty");
  if ((u.adjoint() * u - ComplexMatrix::identity(u.rows())).max_abs() > 1e-10) {
    fail(ErrorCode::InvalidInput, "matrix is not unitary");
  }
}

}  // namespace

void MoeGame::validate() const {
  if (dim == 0 || measurements.empty()) fail(ErrorCode::InvalidInput, "game needs a dimension and a setting");
  for (const auto& m : measurements) {
    if (m.dim() != dim) fail(ErrorCode::InvalidInput, "measurement dimension does not match the game");
    m.validate();
  }
}

void MoeStrategy::validate(const MoeGame& game) const {
  game.validate();
  if (bob.size() != game.settings() || charlie.size() != game.settings()) {
    fail(ErrorCode::InvalidInput, "strategy needs one Bob and one Charlie measurement per setting");
  }
  if (rho.dim() != game.dim * dim_b * dim_c) fail(ErrorCode::InvalidInput, "shared state has wrong dimension");
  if (std::abs(rho.trace() - 1.0) > 1e-10 || min_eigenvalue(rho) < -1e-10) {
    fail(ErrorCode::InvalidInput, "shared state is not a density operator");
  }
  for (std::size_t t = 0; t < game.settings(); ++t) {
    const std::size_t nx = game.measurements[t].size();
    if (bob[t].size() != nx || charlie[t].size() != nx) {
      fail(ErrorCode::InvalidInput, "Bob and Charlie must have Alice's outcome set");
    }
    if (bob[t].dim() != dim_b || charlie[t].dim() != dim_c) fail(ErrorCode::InvalidInput, "POVM dimension mismatch");
    bob[t].validate();
    charlie[t].validate();
  }
}

PermutationFamily PermutationFamily::cyclic(std::size_t n) {
  PermutationFamily f;
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<std::size_t> p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = (i + k) % n;
    f.perms.push_back(std::move(p));
  }
  return f;
}

void PermutationFamily::validate(std::size_t n) const {
  for (const auto& p : perms) {
    if (p.size() != n) fail(ErrorCode::InvalidInput, "permutation has the wrong length");
    std::vector<int> seen(n, 0);
    for (auto x : p) {
      if (x >= n || seen[x]++) fail(ErrorCode::InvalidInput, "family member is not a permutation");
    }
  }
  for (std::size_t a = 0; a < perms.size(); ++a) {
    for (std::size_t b = a + 1; b < perms.size(); ++b) {
      for (std::size_t i = 0; i < n; ++i) {
        if (perms[a][i] == perms[b][i]) fail(ErrorCode::Precondition, "permutation family clashes");
      }
    }
  }
}

HermitianOp moe_pi(const MoeGame& game, const MoeStrategy& strategy, std::size_t theta) {
  if (theta >= game.settings()) fail(ErrorCode::InvalidInput, "setting out of range");
  const std::size_t n = game.dim * strategy.dim_b * strategy.dim_c;
  ComplexMatrix acc(n, n);
  for (std::size_t x = 0; x < game.measurements[theta].size(); ++x) {
    acc = acc + kron(kron(game.measurements[theta].effects[x].matrix(), strategy.bob[theta].effects[x].matrix()),
                     strategy.charlie[theta].effects[x].matrix());
  }
  return HermitianOp(acc);
}

double moe_win_prob(const MoeGame& game, const MoeStrategy& strategy, const std::vector<double>& prior) {
  strategy.validate(game);
  std::vector<double> w = prior;
  if (w.empty()) w.assign(game.settings(), 1.0 / static_cast<double>(game.settings()));
  if (w.size() != game.settings()) fail(ErrorCode::InvalidInput, "prior length does not match the settings");
  double total = 0.0;
  for (std::size_t t = 0; t < game.settings(); ++t) {
    total += w[t] * (moe_pi(game, strategy, t).matrix() * strategy.rho.matrix()).trace().real();
  }
  return total;
}

double overlap_constant(const MoeGame& game) {
  game.validate();
  if (game.settings() < 2) fail(ErrorCode::Precondition, "overlap constant needs at least two settings");
  std::vector<std::vector<HermitianOp>> roots(game.settings());
  for (std::size_t t = 0; t < game.settings(); ++t) {
    for (const auto& f : game.measurements[t].effects) roots[t].push_back(psd_sqrt(f));
  }
  double c = 0.0;
  for (std::size_t t = 0; t < game.settings(); ++t) {
    for (std::size_t u = 0; u < game.settings(); ++u) {
      if (t == u) continue;
      for (const auto& a : roots[t]) {
        for (const auto& b : roots[u]) c = std::max(c, operator_norm(a.matrix() * b.matrix()));
      }
    }
  }
  return c;
}

double lemma_a1_bound(const std::vector<HermitianOp>& r, const PermutationFamily& family) {
  const std::size_t n = r.size();
  if (n == 0) fail(ErrorCode::InvalidInput, "operator list is empty");
  family.validate(n);
  std::vector<HermitianOp> roots;
  for (const auto& x : r) {
    if (x.dim() != r.front().dim()) fail(ErrorCode::InvalidInput, "operators differ in dimension");
    if (min_eigenvalue(x) < -1e-10) fail(ErrorCode::InvalidInput, "operator is not positive semidefinite");
    roots.push_back(psd_sqrt(x));
  }
  double bound = 0.0;
  for (const auto& p : family.perms) {
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, operator_norm(roots[i].matrix() * roots[p[i]].matrix()));
    bound += worst;
  }
  return bound;
}

double lemma_a1_bound(const std::vector<HermitianOp>& r) { return lemma_a1_bound(r, PermutationFamily::cyclic(r.size())); }

MoeGame transpose_trick_game(const std::vector<ComplexMatrix>& unitaries) {
  if (unitaries.empty()) fail(ErrorCode::InvalidInput, "need at least one unitary");
  MoeGame g;
  g.dim = unitaries.front().rows();
  for (const auto& u : unitaries) {
    check_unitary(u);
    if (u.rows() != g.dim) fail(ErrorCode::InvalidInput, "unitaries differ in dimension");
    Povm m;
    for (std::size_t x = 0; x < g.dim; ++x) m.effects.push_back(HermitianOp::projector(u.conj().col(x)));
    g.measurements.push_back(std::move(m));
  }
  g.validate();
  return g;
}

double transpose_trick_residual(const std::vector<ComplexMatrix>& unitaries) {
  const MoeGame g = transpose_trick_game(unitaries);
  const std::size_t d = g.dim;
  std::vector<cplx> psi(d * d, 0.0);
  for (std::size_t i = 0; i < d; ++i) psi[i * d + i] = 1.0 / std::sqrt(static_cast<double>(d));
  const ComplexMatrix phi = HermitianOp::projector(psi).matrix();
  double worst = 0.0;
  for (std::size_t t = 0; t < g.settings(); ++t) {
    for (std::size_t x = 0; x < d; ++x) {
      const ComplexMatrix lhs = kron(g.measurements[t].effects[x].matrix(), ComplexMatrix::identity(d)) * phi;
      // (F (x) 1)|Psi+><Psi+| is not Hermitian; trace out A' entrywise.
      ComplexMatrix marginal(d, d);
      for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
          for (std::size_t a = 0; a < d; ++a) marginal(i, j) += lhs(a * d + i, a * d + j);
        }
      }
      const ComplexMatrix target =
          cplx(1.0 / static_cast<double>(d)) * HermitianOp::projector(unitaries[t].col(x)).matrix();
      worst = std::max(worst, (marginal - target).max_abs());
    }
  }
  return worst;
}

MoeGame go_game() {
  const std::size_t d = 3;
  MoeGame g;
  g.dim = d;
  g.measurements = {projective({ket(d, 0), ket(d, 1), ket(d, 2)}),
                    projective({ket(d, 0), pair_state(d, 1, 2, 1.0), pair_state(d, 1, 2, -1.0)}),
                    projective({pair_state(d, 0, 1, 1.0), pair_state(d, 0, 1, -1.0), ket(d, 2)})};
  g.validate();
  return g;
}

MoeGame bb84_game() {
  const ComplexMatrix x{{0.0, 1.0}, {1.0, 0.0}};
  const ComplexMatrix h{{kInvSqrt2, kInvSqrt2}, {kInvSqrt2, -kInvSqrt2}};
  return transpose_trick_game({x, h});
}

MoeStrategy copy_strategy(const MoeGame& game) {
  game.validate();
  const std::size_t d = game.dim;
  MoeStrategy s;
  s.dim_b = d;
  s.dim_c = d;
  std::vector<cplx> ghz(d * d * d, 0.0);
  for (std::size_t i = 0; i < d; ++i) ghz[(i * d + i) * d + i] = 1.0 / std::sqrt(static_cast<double>(d));
  s.rho = HermitianOp::projector(ghz);
  s.bob = game.measurements;
  s.charlie = game.measurements;
  return s;
}

MoeStrategy trivial_strategy(const MoeGame& game, const HermitianOp& rho_a) {
  game.validate();
  MoeStrategy s;
  s.rho = rho_a;
  for (const auto& m : game.measurements) {
    Povm answer_zero;
    for (std::size_t x = 0; x < m.size(); ++x) answer_zero.effects.push_back(HermitianOp::identity(1).scaled(x == 0));
    s.bob.push_back(answer_zero);
    s.charlie.push_back(answer_zero);
  }
  return s;
}

GoTrivialExample example_go_trivial() {
  const MoeGame g = go_game();
  const MoeStrategy s = copy_strategy(g);
  GoTrivialExample r;
  r.overlap = overlap_constant(g);
  std::vector<HermitianOp> pis;
  for (std::size_t t = 0; t < g.settings(); ++t) pis.push_back(moe_pi(g, s, t));
  r.copy_bound = lemma_a1_bound(pis) / static_cast<double>(g.settings());
  r.copy_win = moe_win_prob(g, s);
  r.contrast = disk_program_solve(obb_disk_program()).bound;
  r.report = make_report("moe.go_copy_bound", "overlap-norm bound for the completed OBB game under the copy strategy",
                         r.copy_bound, 1.0, 1e-9, Relation::Eq, CertificateKind::Exact,
                         "trivial: the game route gives no constraint, c(G_O) = 1");
  return r;
}

std::string moe_game_to_json(const MoeGame& game) {
  ojson j;
  j["kind"] = "moe-game";
  j["dims"] = ojson::array({game.dim});
  ojson sizes = ojson::array(), states = ojson::array();
  for (const auto& m : game.measurements) {
    sizes.push_back(m.size());
    for (const auto& f : m.effects) {
      ojson flat = ojson::array();
      for (const auto& z : f.matrix().entries()) flat.push_back(ojson::array({z.real(), z.imag()}));
      states.push_back(flat);
    }
  }
  j["sizes"] = sizes;
  j["states"] = states;
  return j.dump();
}

MoeGame moe_game_from_json(const std::string& text) {
  ojson j;
  try {
    j = ojson::parse(text);
  } catch (const std::exception& e) {
    fail(ErrorCode::InvalidInput, std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object() || j.value("kind", "") != "moe-game") fail(ErrorCode::InvalidInput, "expected kind \"moe-game\"");
  if (!j.contains("dims") || !j["dims"].is_array() || j["dims"].size() != 1 || !j["dims"][0].is_number_unsigned()) {
    fail(ErrorCode::InvalidInput, "moe-game dims must be [d]");
  }
  if (!j.contains("sizes") || !j["sizes"].is_array() || !j.contains("states") || !j["states"].is_array()) {
    fail(ErrorCode::InvalidInput, "moe-game needs sizes and states");
  }
  MoeGame g;
  g.dim = j["dims"][0].get<std::size_t>();
  std::size_t k = 0;
  const auto& states = j["states"];
  for (const auto& sz : j["sizes"]) {
    if (!sz.is_number_unsigned()) fail(ErrorCode::InvalidInput, "sizes must be counts");
    Povm m;
    for (std::size_t x = 0; x < sz.get<std::size_t>(); ++x, ++k) {
      if (k >= states.size()) fail(ErrorCode::InvalidInput, "sizes exceed the listed effects");
      std::vector<cplx> flat;
      for (const auto& z : states[k]) {
        if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number()) {
          fail(ErrorCode::InvalidInput, "complex scalar must be a two-element [re, im] array");
        }
        flat.emplace_back(z[0].get<double>(), z[1].get<double>());
      }
      if (flat.size() != g.dim * g.dim) fail(ErrorCode::InvalidInput, "effect has wrong size");
      m.effects.emplace_back(ComplexMatrix(g.dim, g.dim, flat));
    }
    g.measurements.push_back(std::move(m));
  }
  if (k != states.size()) fail(ErrorCode::InvalidInput, "sizes do not cover the listed effects");
  g.validate();
  return g;
}

}  // namespace obcast
