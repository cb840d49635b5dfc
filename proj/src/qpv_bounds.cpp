#include "qpv_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "error.hpp"

namespace obcast {

namespace {

const double kPi = std::numbers::pi;
const double kSqrt2 = std::numbers::sqrt2;

// Maximizer of a unimodal function on [lo, hi].
double golden_max(const std::function<double(double)>& f, double lo, double hi, int iters = 90) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int k = 0; k < iters; ++k) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = f(x1);
    }
  }
  return f1 >= f2 ? x1 : x2;
}

double disk_partner(double x) {
  const double u = 2.0 * x - 1.0;
  return 0.5 * std::sqrt(std::max(0.0, 1.0 - u * u)) + 0.5;
}

void check_unit_interval(double x, const char* what) {
  if (!(x >= 0.0 && x <= 1.0)) fail(ErrorCode::InvalidInput, std::string(what) + " must lie in [0, 1]");
}

Povm computational_povm(std::size_t d) {
  Povm p;
  for (std::size_t i = 0; i < d; ++i) p.effects.push_back(basis_state(d, i).projector());
  return p;
}

}  // namespace

void Theorem4Instance::validate() const {
  check_unit_interval(overlap_a01, "overlap_a01");
  check_unit_interval(overlap_b01, "overlap_b01");
  check_unit_interval(overlap_a23, "overlap_a23");
  if (!(overlap_a01 > 0.0)) fail(ErrorCode::Precondition, "overlap_a01 must be positive");
}

double thm4_rhs(double eps, const Theorem4Instance& inst) {
  inst.validate();
  if (!(eps >= 0.0 && eps <= 0.5)) fail(ErrorCode::InvalidInput, "epsilon must lie in [0, 1/2]");
  const double a2 = inst.overlap_a01 * inst.overlap_a01;
  return 2.0 * std::abs(inst.spec.z1()) * std::sqrt(eps * (1.0 - eps)) / a2 +
         std::abs(inst.spec.z2()) * std::sqrt(1.0 - inst.overlap_b01 * inst.overlap_b01) +
         std::sqrt(1.0 - inst.overlap_a23 * inst.overlap_a23) + 2.0 * eps;
}

double thm4_min_epsilon(const Theorem4Instance& inst) {
  inst.validate();
  constexpr int kGrid = 1000;
  double prev = thm4_rhs(0.0, inst);
  for (int k = 1; k <= kGrid; ++k) {
    const double v = thm4_rhs(0.5 * k / kGrid, inst);
    if (!(v > prev)) fail(ErrorCode::Internal, "inequality right-hand side is not increasing");
    prev = v;
  }
  if (thm4_rhs(0.0, inst) >= 1.0) return 0.0;
  double lo = 0.0, hi = 0.5;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    (thm4_rhs(mid, inst) >= 1.0 ? hi : lo) = mid;
  }
  return hi;
}

Theorem4Instance gen_bb84_instance(double theta) {
  // |n> = cos(t/2)|0> + sin(t/2)|1>, |-n> = cos((t - pi)/2)|0> + sin((t - pi)/2)|1>.
  Theorem4Instance inst;
  inst.overlap_a01 = 1.0;
  inst.overlap_b01 = 0.0;
  inst.overlap_a23 = 1.0;
  inst.spec = {theta, 0.0, theta - kPi, 0.0};
  return inst;
}

Theorem4Instance thm4_instance_from_roles(const GopEnsemble& s, const std::array<std::size_t, 4>& roles) {
  for (std::size_t i = 0; i < 4; ++i) {
    if (roles[i] >= s.size()) fail(ErrorCode::InvalidInput, "role index out of range");
    for (std::size_t j = i + 1; j < 4; ++j) {
      if (roles[i] == roles[j]) fail(ErrorCode::InvalidInput, "roles must name distinct entries");
    }
  }
  const auto& e0 = s.entries[roles[0]];
  const auto& e1 = s.entries[roles[1]];
  if (std::abs(inner(e0.b, e1.b)) > 1e-10) fail(ErrorCode::DoesNotFitForm, "b0 and b1 are not orthogonal");
  Theorem4Instance inst;
  inst.overlap_a01 = std::min(1.0, std::abs(inner(e0.a, e1.a)));
  inst.overlap_b01 = 0.0;
  inst.overlap_a23 = std::min(1.0, std::abs(inner(s.entries[roles[2]].a, s.entries[roles[3]].a)));
  if (inst.overlap_a01 <= 1e-12) fail(ErrorCode::DoesNotFitForm, "a0 and a1 are orthogonal");
  double angle[2], phase[2];
  for (int k = 0; k < 2; ++k) {
    const auto& b = s.entries[roles[2 + k]].b;
    const cplx c0 = inner(e0.b, b), c1 = inner(e1.b, b);
    if (std::abs(std::norm(c0) + std::norm(c1) - 1.0) > 1e-10) {
      fail(ErrorCode::DoesNotFitForm, "b2 or b3 leaves the span of b0 and b1");
    }
    angle[k] = 2.0 * std::atan2(std::abs(c1), std::abs(c0));
    phase[k] = (std::abs(c0) > 1e-12 && std::abs(c1) > 1e-12) ? std::arg(c1) - std::arg(c0) : 0.0;
  }
  inst.spec = {angle[0], phase[0], angle[1], phase[1]};
  return inst;
}

std::vector<Thm4Match> thm4_matches(const GopEnsemble& s) {
  s.validate();
  std::vector<Thm4Match> out;
  const std::size_t n = s.size();
  for (std::size_t i0 = 0; i0 < n; ++i0) {
    for (std::size_t i1 = 0; i1 < n; ++i1) {
      if (i1 == i0) continue;
      const auto& e0 = s.entries[i0];
      const auto& e1 = s.entries[i1];
      if (std::abs(inner(e0.b, e1.b)) > 1e-10 || std::abs(inner(e0.a, e1.a)) <= 1e-12) continue;
      for (std::size_t i2 = 0; i2 < n; ++i2) {
        for (std::size_t i3 = 0; i3 < n; ++i3) {
          if (i2 == i0 || i2 == i1 || i3 == i0 || i3 == i1 || i3 == i2) continue;
          const std::array<std::size_t, 4> roles{i0, i1, i2, i3};
          try {
            Thm4Match m{roles, thm4_instance_from_roles(s, roles), 0.0};
            m.epsilon = thm4_min_epsilon(m.instance);
            out.push_back(m);
          } catch (const Error& e) {
            if (e.code() != ErrorCode::DoesNotFitForm) throw;
          }
        }
      }
    }
  }
  return out;
}

std::optional<Thm4Match> thm4_best_match(const GopEnsemble& s) {
  std::optional<Thm4Match> best;
  for (const auto& m : thm4_matches(s)) {
    if (!best || m.epsilon > best->epsilon) best = m;
  }
  return best;
}

Cor5Value cor5_epsilon_star(double theta) {
  if (!(theta >= 0.0 && theta <= kPi / 2 + 1e-15)) fail(ErrorCode::InvalidInput, "theta must lie in [0, pi/2]");
  const double s2 = std::sin(theta) * std::sin(theta);
  return {thm4_min_epsilon(gen_bb84_instance(theta)),
          (1.0 - std::cos(theta) + (1.0 + kSqrt2) * s2) / (2.0 * (1.0 + s2))};
}

ProductStrategyValue product_strategy_value(const GopEnsemble& s, const Povm& alice, const Povm& bob,
                                            const std::vector<std::vector<int>>& guess) {
  s.validate();
  alice.validate();
  bob.validate();
  if (alice.dim() != s.dim_a || bob.dim() != s.dim_b) fail(ErrorCode::InvalidInput, "POVM dimensions do not match");
  if (guess.size() != alice.size()) fail(ErrorCode::InvalidInput, "guess table has wrong row count");
  ProductStrategyValue r;
  r.per_state.assign(s.size(), 0.0);
  for (std::size_t x = 0; x < alice.size(); ++x) {
    if (guess[x].size() != bob.size()) fail(ErrorCode::InvalidInput, "guess table has wrong column count");
    for (std::size_t y = 0; y < bob.size(); ++y) {
      const int k = guess[x][y];
      if (k < 0) continue;
      if (static_cast<std::size_t>(k) >= s.size()) fail(ErrorCode::InvalidInput, "guess names a missing entry");
      const auto& e = s.entries[static_cast<std::size_t>(k)];
      const double pa = inner(e.a.amplitudes, alice.effects[x].matrix().apply(e.a.amplitudes)).real();
      const double pb = inner(e.b.amplitudes, bob.effects[y].matrix().apply(e.b.amplitudes)).real();
      r.per_state[static_cast<std::size_t>(k)] += pa * pb;
    }
  }
  for (std::size_t k = 0; k < s.size(); ++k) r.value += s.entries[k].p * r.per_state[k];
  return r;
}

double breidbart_lower(double theta) {
  if (!(theta >= 0.0 && theta <= kPi + 1e-15)) fail(ErrorCode::InvalidInput, "theta must lie in [0, pi]");
  const double c = std::cos(theta / 4.0), s = std::sin(theta / 4.0);
  Povm bob;
  bob.effects = {StateVector{c, s}.projector(), StateVector{-s, c}.projector()};
  return product_strategy_value(gen_bb84(theta), computational_povm(2), bob, {{0, 1}, {2, 3}}).value;
}

Prop4Result prop4_solve(double p, double pg_a01, double pg_a23, const SuperpositionSpec& spec) {
  check_unit_interval(p, "p");
  for (double pg : {pg_a01, pg_a23}) {
    if (!(pg >= 0.5 - 1e-12 && pg <= 1.0 + 1e-12)) fail(ErrorCode::InvalidInput, "guessing probability outside [1/2, 1]");
  }
  const double z1 = std::abs(spec.z1()), z2 = std::abs(spec.z2());
  auto cap = [&](double own0, double other0) {
    const double u = 2.0 * other0 - 1.0;
    return std::min(1.0, 0.5 * (z1 * std::sqrt(std::max(0.0, 1.0 - u * u)) + z2 * (2.0 * own0 - 1.0) + 1.0));
  };
  auto f = [&](double x0, double x1) { return p * (pg_a01 + x0) + (1.0 - p) * (pg_a23 + x1); };
  // The objective increases in r1 and s1, so both sit at their caps.
  auto h = [&](double r0, double s0) { return std::min(f(r0, cap(r0, s0)), f(s0, cap(s0, r0))) - 0.5; };

  double best = -1.0, br0 = 0.5, bs0 = 0.5;
  constexpr int kSeed = 100;
  for (int i = 0; i <= kSeed; ++i) {
    for (int j = 0; j <= kSeed; ++j) {
      const double r0 = 0.5 + 0.5 * i / kSeed, s0 = 0.5 + 0.5 * j / kSeed;
      const double v = h(r0, s0);
      if (v > best) best = v, br0 = r0, bs0 = s0;
    }
  }
  // h is jointly concave, so nested golden sections converge to the global maximum.
  auto inner_best = [&](double r0) { return golden_max([&](double s0) { return h(r0, s0); }, 0.5, 1.0); };
  const double gr0 = golden_max([&](double r0) { return h(r0, inner_best(r0)); }, 0.5, 1.0);
  const double gs0 = inner_best(gr0);
  if (h(gr0, gs0) > best) best = h(gr0, gs0), br0 = gr0, bs0 = gs0;

  Prop4Result r;
  r.raw = best;
  r.bound = std::min(1.0, best);
  r.r0 = br0;
  r.s0 = bs0;
  r.r1 = cap(br0, bs0);
  r.s1 = cap(bs0, br0);
  const double cw = 1.0 + std::cos(spec.omega);
  r.unity_condition = pg_a01 >= 1.0 - 1e-12 && pg_a23 >= 1.0 - 1e-12 && cw >= -1.0 && cw <= 1.0 &&
                      std::abs(std::abs(spec.theta) - std::acos(std::clamp(cw, -1.0, 1.0))) <= 1e-9;
  if (std::abs(p - 0.5) <= 1e-15 && z2 <= 1e-15) {
    // Symmetric optimum: (1/2)(t + r1) with u = 2t - 1 maximizes u + |z1| sqrt(1 - u^2) at sqrt(1 + |z1|^2).
    r.analytic_upper = 0.5 * (pg_a01 + pg_a23) - 0.5 + 0.25 * (2.0 + std::sqrt(1.0 + z1 * z1));
    if (std::abs(*r.analytic_upper - r.raw) <= 1e-9) r.certificate = CertificateKind::Analytic;
  }
  return r;
}

DiskResult disk_program_solve(const DiskProgram& program) {
  const std::size_t n = program.vars_per_party;
  std::vector<int> used_a(n, 0), used_b(n, 0);
  for (const auto& [i, j] : program.couplings) {
    if (i >= n || j >= n) fail(ErrorCode::InvalidInput, "coupling names a missing variable");
    if (used_a[i]++ || used_b[j]++) fail(ErrorCode::InvalidInput, "couplings do not form a matching");
  }
  if (program.couplings.size() != n) fail(ErrorCode::InvalidInput, "couplings do not form a perfect matching");
  DiskResult r;
  // Symmetric point on each disk: 2t - 1 = 1/sqrt2.
  const double t = (2.0 + kSqrt2) / 4.0;
  r.a.assign(n, t);
  r.b.assign(n, t);
  double sa = 0.0, sb = 0.0;
  for (std::size_t i = 0; i < n; ++i) sa += r.a[i], sb += r.b[i];
  r.opt = std::min(sa, sb);
  r.min_slack = n == 0 ? 0.0 : 1.0;
  for (const auto& [i, j] : program.couplings) {
    r.min_slack = std::min({r.min_slack, disk_partner(r.b[j]) - r.a[i], disk_partner(r.a[i]) - r.b[j]});
  }
  // (2a - 1) + (2b - 1) <= sqrt2 on each disk, and the min is at most the average.
  r.certificate_value = 0.5 * static_cast<double>(n) * (1.0 + 1.0 / kSqrt2);
  if (std::abs(r.opt - r.certificate_value) > 1e-9 || r.min_slack < -1e-12) {
    fail(ErrorCode::Internal, "disk program feasible point does not meet its certificate");
  }
  r.bound = program.base + program.scale * (r.opt + program.shift);
  return r;
}

DiskProgram obb_disk_program(DiskAssembly assembly) {
  const double base = assembly == DiskAssembly::Printed ? 0.25 : 0.5;
  return {{{0, 1}, {1, 0}, {2, 3}, {3, 2}}, 4, -2.0, base, 0.25};
}

DiskProgram qq_tilde_disk_program(DiskAssembly assembly) {
  DiskProgram d = obb_disk_program(assembly);
  d.shift = 1.0 / kSqrt2 - 2.0;
  return d;
}

PostInfoResult computational_relay_value(const GopEnsemble& s, const Settings& settings) {
  s.validate();
  PostInfoEnsemble e;
  e.dim = s.dim_b;
  for (std::size_t x = 0; x < s.dim_a; ++x) {
    std::vector<StateVector> states;
    std::vector<double> prior;
    for (const auto& entry : s.entries) {
      const double w = std::norm(entry.a.amplitudes[x]) * entry.p;
      if (w <= 1e-15) continue;
      states.push_back(entry.b);
      prior.push_back(w);
    }
    if (states.empty()) continue;
    e.states.push_back(std::move(states));
    e.prior.push_back(std::move(prior));
  }
  return p_postinfo(e, settings);
}

double error_per_state(const GopEnsemble& s, double pr_honest, double pr_losqc_bound) {
  check_unit_interval(pr_honest, "honest probability");
  check_unit_interval(pr_losqc_bound, "LOSQC bound");
  if (s.size() == 0) fail(ErrorCode::InvalidInput, "ensemble is empty");
  const double delta = pr_honest - pr_losqc_bound;
  if (delta < 0.0) fail(ErrorCode::Precondition, "honest probability is below the LOSQC bound");
  return delta / static_cast<double>(s.size());
}

std::vector<std::vector<int>> cq_guess_table() {
  // Entries: 0 |1>|1>, 1 |1>|0+2>, 2 |1>|0-2>, 3 |0>|0+1>, 4 |0>|0-1>, 5 |2>|1+2>, 6 |2>|1-2>.
  return {{3, 3, 4, 4}, {0, 0, 1, 2}, {5, 6, 6, 5}};
}

CqStrategyValue cq_strategy_value(const std::vector<double>* prior) {
  GopEnsemble s = gallery_gop("cq");
  if (prior) {
    if (prior->size() != s.size()) fail(ErrorCode::InvalidInput, "prior has wrong length");
    for (std::size_t k = 0; k < s.size(); ++k) s.entries[k].p = (*prior)[k];
    s.validate();
  }
  const Povm bob = gallery_povm("thm6-breidbart-povm");
  CqStrategyValue r;
  r.povm_residual = bob.invariant_residual();
  if (r.povm_residual > 1e-10) fail(ErrorCode::Internal, "four-outcome measurement is not a POVM");
  const auto v = product_strategy_value(s, computational_povm(3), bob, cq_guess_table());
  r.value = v.value;
  r.per_state = v.per_state;
  const double c = std::cos(kPi / 8), sn = std::sin(kPi / 8);
  r.identity_residual = std::abs(0.5 * (c + sn) * (c + sn) - c * c);
  r.printed_table_value = product_strategy_value(s, computational_povm(3), bob, {{3, 3, 4, 4}, {0, 0, 1, 2}, {5, 5, 6, 6}}).value;
  return r;
}

Thm6Separation thm6_separation() {
  const auto u = gallery_isometry("qq-equivalence-unitary");
  Thm6Separation r;
  r.equivalence_deviation =
      set_deviation_up_to_phase(apply_local(gallery_gop("qq"), u.matrix, Party::A), gallery_gop("qq-tilde"));
  if (r.equivalence_deviation > 1e-12) fail(ErrorCode::Internal, "qq and qq-tilde are not locally equivalent");
  const auto disk = disk_program_solve(qq_tilde_disk_program());
  r.upper = make_report("qq.upper_bound", "LOSQC success for the quantum-quantum set, via the equivalent tilde set",
                        disk.bound, 0.7805, 0.0, Relation::Le, CertificateKind::Analytic);
  const auto cq = cq_strategy_value();
  r.lower = make_report("cq.lower_bound", "LOSCC success of the explicit classical-quantum strategy", cq.value,
                        0.5 * (1.0 + 1.0 / kSqrt2), 1e-12, Relation::Eq, CertificateKind::Exact);
  r.gap = cq.value - disk.bound;
  r.qq_strategy = computational_relay_value(gallery_gop("qq")).value;
  r.soundness = make_report("qq.bound_soundness", "quantum-quantum upper bound against an explicit LOSCC strategy",
                            disk.bound, r.qq_strategy, 1e-9, Relation::Ge, CertificateKind::DualCertified,
                            "an upper bound on LOSQC success must dominate every LOSCC strategy value");
  return r;
}

}  // namespace obcast
