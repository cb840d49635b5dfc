#include "ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include "error.hpp"
#include "json.hpp"

namespace obcast {

namespace {

constexpr double kStateTol = 1e-12;
const double kInvSqrt2 = 1.0 / std::numbers::sqrt2;
const cplx kI(0.0, 1.0);

StateVector ket(std::size_t d, std::size_t k) { return basis_state(d, k); }

// (|m> + c|n>)/sqrt(2)
StateVector sup(std::size_t d, std::size_t m, std::size_t n, cplx c) {
  std::vector<cplx> v(d, 0.0);
  v[m] += kInvSqrt2;
  v[n] += c * kInvSqrt2;
  return StateVector(std::move(v));
}

StateVector plus(std::size_t d, std::size_t m, std::size_t n) { return sup(d, m, n, 1.0); }
StateVector minus(std::size_t d, std::size_t m, std::size_t n) { return sup(d, m, n, -1.0); }

void check_prior(const std::vector<double>& p) {
  double sum = 0.0;
  for (double x : p) {
    if (!(x >= 0.0) || !std::isfinite(x)) fail(ErrorCode::InvalidInput, "prior entries must be finite and >= 0");
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-12) fail(ErrorCode::InvalidInput, "prior does not sum to 1");
}

void check_state(const StateVector& v, std::size_t d, const char* what) {
  if (v.dim() != d) fail(ErrorCode::InvalidInput, std::string(what) + ": state has wrong dimension");
  if (!v.normalized()) fail(ErrorCode::InvalidInput, std::string(what) + ": state is not normalized");
  for (const auto& z : v.amplitudes) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      fail(ErrorCode::InvalidInput, std::string(what) + ": amplitude is not finite");
    }
  }
}

GopEnsemble make_gop(std::size_t da, std::size_t db, std::vector<std::pair<StateVector, StateVector>> states,
                     std::vector<double> prior) {
  GopEnsemble g;
  g.dim_a = da;
  g.dim_b = db;
  for (std::size_t k = 0; k < states.size(); ++k) {
    g.entries.push_back({std::move(states[k].first), std::move(states[k].second), prior[k]});
  }
  g.validate();
  return g;
}

std::vector<double> uniform(std::size_t n) { return std::vector<double>(n, 1.0 / static_cast<double>(n)); }

// psi_1 with 1/4, the remaining six with 1/8 each.
std::vector<double> seven_prior() { return {0.25, 0.125, 0.125, 0.125, 0.125, 0.125, 0.125}; }

PostInfoEnsemble make_postinfo(std::size_t d, std::vector<std::vector<StateVector>> states) {
  PostInfoEnsemble e;
  e.dim = d;
  e.states = std::move(states);
  e.orthogonal = true;
  e = e.with_uniform_prior();
  e.validate();
  return e;
}

Isometry make_isometry(std::size_t in, std::vector<std::size_t> out_dims, const std::vector<StateVector>& images) {
  std::size_t out = 1;
  for (auto d : out_dims) out *= d;
  Isometry v;
  v.matrix = ComplexMatrix(out, in);
  for (std::size_t k = 0; k < in; ++k) {
    for (std::size_t i = 0; i < out; ++i) v.matrix(i, k) = images[k].amplitudes[i];
  }
  v.output_dims = std::move(out_dims);
  v.validate();
  return v;
}

Povm rank_one_povm(const std::vector<StateVector>& vs) {
  Povm p;
  for (const auto& v : vs) p.effects.push_back(v.projector());
  p.validate();
  return p;
}

GopEnsemble shifts() {
  const StateVector z = ket(2, 0), o = ket(2, 1), p = plus(2, 0, 1), m = minus(2, 0, 1);
  return make_gop(4, 2, {{kron(z, z), z}, {kron(p, m), o}, {kron(m, o), p}, {kron(o, p), m}}, uniform(4));
}

double parse_gen_bb84_angle(const std::string& name) {
  if (name == "gen-bb84") return std::numbers::pi / 2.0;
  const std::string head = "gen-bb84(";
  if (name.size() > head.size() + 1 && name.compare(0, head.size(), head) == 0 && name.back() == ')') {
    const std::string arg = name.substr(head.size(), name.size() - head.size() - 1);
    std::size_t used = 0;
    double theta = 0.0;
    try {
      theta = std::stod(arg, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == arg.size() && std::isfinite(theta)) return theta;
  }
  fail(ErrorCode::UnknownName, "unknown gallery name: " + name);
}

}  // namespace

std::size_t PostInfoEnsemble::total_states() const {
  std::size_t n = 0;
  for (const auto& s : states) n += s.size();
  return n;
}

void PostInfoEnsemble::validate() const {
  if (dim == 0) fail(ErrorCode::InvalidInput, "post-information ensemble has zero dimension");
  if (states.empty()) fail(ErrorCode::InvalidInput, "post-information ensemble has no settings");
  if (prior.size() != states.size()) fail(ErrorCode::InvalidInput, "prior shape does not match settings");
  std::vector<double> flat;
  for (std::size_t t = 0; t < states.size(); ++t) {
    if (states[t].empty()) fail(ErrorCode::InvalidInput, "setting with empty index set");
    if (prior[t].size() != states[t].size()) fail(ErrorCode::InvalidInput, "prior shape does not match index set");
    for (const auto& s : states[t]) check_state(s, dim, "post-information ensemble");
    flat.insert(flat.end(), prior[t].begin(), prior[t].end());
  }
  check_prior(flat);
  if (orthogonal) {
    for (const auto& set : states) {
      for (std::size_t i = 0; i < set.size(); ++i) {
        for (std::size_t j = i + 1; j < set.size(); ++j) {
          if (std::abs(inner(set[i], set[j])) > kStateTol) {
            fail(ErrorCode::InvalidInput, "orthogonality flag set but states in a setting overlap");
          }
        }
      }
    }
  }
}

PostInfoEnsemble PostInfoEnsemble::with_uniform_prior() const {
  PostInfoEnsemble e = *this;
  const double w = 1.0 / static_cast<double>(total_states());
  e.prior.assign(states.size(), {});
  for (std::size_t t = 0; t < states.size(); ++t) e.prior[t].assign(states[t].size(), w);
  return e;
}

void GopEnsemble::validate() const {
  if (dim_a == 0 || dim_b == 0) fail(ErrorCode::InvalidInput, "GOP ensemble has zero dimension");
  if (entries.empty()) fail(ErrorCode::InvalidInput, "GOP ensemble is empty");
  std::vector<double> p;
  for (const auto& e : entries) {
    check_state(e.a, dim_a, "GOP ensemble A side");
    check_state(e.b, dim_b, "GOP ensemble B side");
    p.push_back(e.p);
  }
  check_prior(p);
}

double Povm::invariant_residual() const {
  if (effects.empty()) return std::numeric_limits<double>::infinity();
  const std::size_t d = dim();
  ComplexMatrix sum(d, d);
  double worst = 0.0;
  for (const auto& e : effects) {
    if (e.dim() != d) return std::numeric_limits<double>::infinity();
    worst = std::max(worst, -min_eigenvalue(e));
    sum += e.matrix();
  }
  return std::max(worst, (sum - ComplexMatrix::identity(d)).max_abs());
}

void Povm::validate(double tol) const {
  if (effects.empty()) fail(ErrorCode::InvalidInput, "POVM has no effects");
  if (invariant_residual() > tol) fail(ErrorCode::InvalidInput, "effects are not PSD or do not sum to identity");
}

void Isometry::validate() const {
  std::size_t prod = 1;
  for (auto d : output_dims) prod *= d;
  if (output_dims.empty() || prod != matrix.rows()) {
    fail(ErrorCode::InvalidInput, "isometry output factorization does not match its output dimension");
  }
  if (matrix.rows() < matrix.cols()) fail(ErrorCode::InvalidInput, "isometry output dimension below input");
  const double r = (matrix.adjoint() * matrix - ComplexMatrix::identity(matrix.cols())).max_abs();
  if (r > 1e-10) fail(ErrorCode::InvalidInput, "V^dag V != I");
}

std::string NamedObject::kind() const {
  switch (value.index()) {
    case 0: return "postinfo";
    case 1: return "gop";
    case 2: return "povm";
    default: return "isometry";
  }
}

const std::vector<std::string>& gallery_names() {
  static const std::vector<std::string> names = {
      "bb84", "minimal-qutrit", "prop1-povm", "thm1-pairs", "thm1-isometry", "thm2-eight", "thm2-isometry",
      "cor4-six", "gen-bb84", "obb", "cq", "qq", "qq-tilde", "qq-equivalence-unitary", "shifts",
      "thm6-breidbart-povm"};
  return names;
}

GopEnsemble gen_bb84(double theta) {
  const StateVector z = ket(2, 0), o = ket(2, 1);
  const StateVector n{std::cos(theta / 2.0), std::sin(theta / 2.0)};
  const StateVector mn{std::sin(theta / 2.0), -std::cos(theta / 2.0)};
  return make_gop(2, 2, {{z, z}, {z, o}, {o, n}, {o, mn}}, uniform(4));
}

NamedObject gallery(const std::string& name) {
  if (name == "bb84") {
    return {name, make_postinfo(2, {{ket(2, 0), ket(2, 1)}, {plus(2, 0, 1), minus(2, 0, 1)}})};
  }
  if (name == "minimal-qutrit") {
    const StateVector pp{0.5, 0.5, kInvSqrt2};
    const StateVector pm{0.5, 0.5, -kInvSqrt2};
    return {name, make_postinfo(3, {{ket(3, 0), ket(3, 1)}, {pp, pm}})};
  }
  if (name == "prop1-povm") {
    const StateVector v0{kInvSqrt2, 0.0, 0.5}, v1{kInvSqrt2, 0.0, -0.5};
    const StateVector v2{0.0, kInvSqrt2, 0.5}, v3{0.0, kInvSqrt2, -0.5};
    return {name, rank_one_povm({v0, v1, v2, v3})};
  }
  if (name == "thm1-pairs") {
    return {name, make_postinfo(3, {{plus(3, 0, 1), minus(3, 0, 1)},
                                    {plus(3, 0, 2), minus(3, 0, 2)},
                                    {sup(3, 1, 2, kI), sup(3, 1, 2, -kI)}})};
  }
  if (name == "thm1-isometry") {
    const StateVector e00 = ket(4, 0), e01 = ket(4, 1), e10 = ket(4, 2), e11 = ket(4, 3);
    return {name, make_isometry(3, {2, 2}, {plus(4, 0, 3), minus(4, 0, 3), plus(4, 1, 2)})};
  }
  if (name == "thm2-eight") {
    const std::size_t d = 4;
    return {name, make_gop(d, d,
                           {{ket(d, 0), ket(d, 0)},
                            {ket(d, 0), ket(d, 1)},
                            {ket(d, 1), plus(d, 1, 2)},
                            {ket(d, 1), minus(d, 1, 2)},
                            {ket(d, 2), plus(d, 1, 3)},
                            {ket(d, 2), minus(d, 1, 3)},
                            {ket(d, 3), sup(d, 2, 3, kI)},
                            {ket(d, 3), sup(d, 2, 3, -kI)}},
                           uniform(8))};
  }
  if (name == "thm2-isometry") {
    // Output |jk> on C^3 (x) C^3 has index 3j + k.
    return {name, make_isometry(4, {3, 3}, {ket(9, 0), plus(9, 4, 8), minus(9, 4, 8), plus(9, 5, 7)})};
  }
  if (name == "cor4-six") {
    const std::size_t d = 3;
    return {name, make_gop(d, d,
                           {{ket(d, 0), plus(d, 0, 1)},
                            {ket(d, 0), minus(d, 0, 1)},
                            {ket(d, 1), plus(d, 0, 2)},
                            {ket(d, 1), minus(d, 0, 2)},
                            {ket(d, 2), sup(d, 1, 2, kI)},
                            {ket(d, 2), sup(d, 1, 2, -kI)}},
                           uniform(6))};
  }
  if (name.rfind("gen-bb84", 0) == 0) {
    return {name, gen_bb84(parse_gen_bb84_angle(name))};
  }
  const std::size_t d = 3;
  const StateVector k0 = ket(d, 0), k1 = ket(d, 1), k2 = ket(d, 2);
  if (name == "obb") {
    return {name, make_gop(d, d,
                           {{k0, k1}, {k0, k2}, {k1, plus(d, 1, 2)}, {k1, minus(d, 1, 2)},
                            {k0, k0}, {k2, plus(d, 0, 1)}, {k2, minus(d, 0, 1)}},
                           seven_prior())};
  }
  if (name == "cq") {
    return {name, make_gop(d, d,
                           {{k1, k1}, {k1, plus(d, 0, 2)}, {k1, minus(d, 0, 2)}, {k0, plus(d, 0, 1)},
                            {k0, minus(d, 0, 1)}, {k2, plus(d, 1, 2)}, {k2, minus(d, 1, 2)}},
                           seven_prior())};
  }
  if (name == "qq") {
    // |1-0> = (|1> - |0>)/sqrt(2)
    return {name, make_gop(d, d,
                           {{k1, k1}, {sup(d, 1, 0, -1.0), k2}, {k0, plus(d, 0, 1)}, {k0, minus(d, 0, 1)},
                            {k2, plus(d, 1, 2)}, {k2, minus(d, 1, 2)}, {plus(d, 1, 2), k0}},
                           seven_prior())};
  }
  if (name == "qq-tilde") {
    return {name, make_gop(d, d,
                           {{k1, k1}, {minus(d, 1, 2), k2}, {k0, plus(d, 1, 2)}, {k0, minus(d, 1, 2)},
                            {plus(d, 0, 1), k0}, {k2, plus(d, 0, 1)}, {k2, minus(d, 0, 1)}},
                           seven_prior())};
  }
  if (name == "qq-equivalence-unitary") {
    return {name, make_isometry(3, {3}, {k2, k1, k0})};
  }
  if (name == "shifts") return {name, shifts()};
  if (name == "thm6-breidbart-povm") {
    const double c = std::cos(std::numbers::pi / 8.0) * kInvSqrt2;
    const double s = std::sin(std::numbers::pi / 8.0) * kInvSqrt2;
    return {name, rank_one_povm({StateVector{s, c, s}, StateVector{s, c, -s}, StateVector{-c, s, -c},
                                 StateVector{-c, s, c}})};
  }
  fail(ErrorCode::UnknownName, "unknown gallery name: " + name);
}

namespace {

template <class T>
T gallery_as(const std::string& name, const char* kind) {
  NamedObject o = gallery(name);
  if (auto* v = std::get_if<T>(&o.value)) return *v;
  fail(ErrorCode::InvalidInput, "gallery object " + name + " is not a " + kind);
}

}  // namespace

PostInfoEnsemble gallery_postinfo(const std::string& name) { return gallery_as<PostInfoEnsemble>(name, "postinfo"); }
GopEnsemble gallery_gop(const std::string& name) { return gallery_as<GopEnsemble>(name, "gop"); }
Povm gallery_povm(const std::string& name) { return gallery_as<Povm>(name, "povm"); }
Isometry gallery_isometry(const std::string& name) { return gallery_as<Isometry>(name, "isometry"); }

namespace {

using ojson = nlohmann::ordered_json;

ojson encode_vector(const std::vector<cplx>& v) {
  ojson a = ojson::array();
  for (const auto& z : v) a.push_back(ojson::array({z.real(), z.imag()}));
  return a;
}

std::vector<cplx> decode_vector(const ojson& a) {
  if (!a.is_array()) fail(ErrorCode::InvalidInput, "expected an array of [re, im] pairs");
  std::vector<cplx> v;
  for (const auto& z : a) {
    if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number()) {
      fail(ErrorCode::InvalidInput, "complex scalar must be a two-element [re, im] array");
    }
    v.emplace_back(z[0].get<double>(), z[1].get<double>());
  }
  return v;
}

std::vector<std::size_t> decode_dims(const ojson& j) {
  if (!j.contains("dims") || !j["dims"].is_array()) fail(ErrorCode::InvalidInput, "missing dims");
  std::vector<std::size_t> d;
  for (const auto& x : j["dims"]) {
    if (!x.is_number_unsigned() || x.get<std::size_t>() == 0) fail(ErrorCode::InvalidInput, "dims must be positive");
    d.push_back(x.get<std::size_t>());
  }
  return d;
}

std::vector<double> decode_prior(const ojson& j) {
  std::vector<double> p;
  if (!j.contains("prior")) return p;
  if (!j["prior"].is_array()) fail(ErrorCode::InvalidInput, "prior must be an array");
  for (const auto& x : j["prior"]) {
    if (!x.is_number()) fail(ErrorCode::InvalidInput, "prior entries must be numbers");
    p.push_back(x.get<double>());
  }
  return p;
}

std::vector<std::vector<cplx>> decode_states(const ojson& j, const char* key) {
  if (!j.contains(key) || !j[key].is_array()) fail(ErrorCode::InvalidInput, std::string("missing ") + key);
  std::vector<std::vector<cplx>> out;
  for (const auto& s : j[key]) out.push_back(decode_vector(s));
  return out;
}

ComplexMatrix square_from_flat(const std::vector<cplx>& v, std::size_t d) {
  if (v.size() != d * d) fail(ErrorCode::InvalidInput, "flattened matrix has wrong size");
  return ComplexMatrix(d, d, v);
}

std::vector<cplx> flat(const ComplexMatrix& m) { return m.entries(); }

}  // namespace

std::string to_json(const NamedObject& obj) {
  ojson j;
  j["kind"] = obj.kind();
  if (!obj.name.empty()) j["name"] = obj.name;
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        ojson prior = ojson::array();
        ojson states = ojson::array();
        if constexpr (std::is_same_v<T, PostInfoEnsemble>) {
          j["dims"] = ojson::array({v.dim});
          ojson sizes = ojson::array();
          for (std::size_t t = 0; t < v.settings(); ++t) {
            sizes.push_back(v.states[t].size());
            for (std::size_t i = 0; i < v.states[t].size(); ++i) {
              prior.push_back(v.prior[t][i]);
              states.push_back(encode_vector(v.states[t][i].amplitudes));
            }
          }
          j["prior"] = prior;
          j["states"] = states;
          j["sizes"] = sizes;
          j["orthogonal"] = v.orthogonal;
        } else if constexpr (std::is_same_v<T, GopEnsemble>) {
          j["dims"] = ojson::array({v.dim_a, v.dim_b});
          ojson states_b = ojson::array();
          for (const auto& e : v.entries) {
            prior.push_back(e.p);
            states.push_back(encode_vector(e.a.amplitudes));
            states_b.push_back(encode_vector(e.b.amplitudes));
          }
          j["prior"] = prior;
          j["states"] = states;
          j["states_b"] = states_b;
        } else if constexpr (std::is_same_v<T, Povm>) {
          j["dims"] = ojson::array({v.dim()});
          for (const auto& e : v.effects) states.push_back(encode_vector(flat(e.matrix())));
          j["prior"] = prior;
          j["states"] = states;
        } else {
          ojson dims = ojson::array({v.in_dim()});
          for (auto d : v.output_dims) dims.push_back(d);
          j["dims"] = dims;
          for (std::size_t k = 0; k < v.in_dim(); ++k) states.push_back(encode_vector(v.matrix.col(k)));
          j["prior"] = prior;
          j["states"] = states;
        }
      },
      obj.value);
  return j.dump();
}

NamedObject from_json(const std::string& text) {
  ojson j;
  try {
    j = ojson::parse(text);
  } catch (const std::exception& e) {
    fail(ErrorCode::InvalidInput, std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    fail(ErrorCode::InvalidInput, "ensemble file needs a string field \"kind\"");
  }
  NamedObject obj;
  if (j.contains("name")) {
    if (!j["name"].is_string()) fail(ErrorCode::InvalidInput, "name must be a string");
    obj.name = j["name"].get<std::string>();
  }
  const std::string kind = j["kind"].get<std::string>();
  const auto dims = decode_dims(j);
  const auto prior = decode_prior(j);
  const auto states = decode_states(j, "states");
  if (kind == "postinfo") {
    if (dims.size() != 1) fail(ErrorCode::InvalidInput, "postinfo dims must be [d]");
    PostInfoEnsemble e;
    e.dim = dims[0];
    std::vector<std::size_t> sizes;
    if (j.contains("sizes")) {
      for (const auto& x : j["sizes"]) {
        if (!x.is_number_unsigned()) fail(ErrorCode::InvalidInput, "sizes must be counts");
        sizes.push_back(x.get<std::size_t>());
      }
    } else {
      sizes.push_back(states.size());
    }
    std::size_t total = 0;
    for (auto s : sizes) total += s;
    if (total != states.size() || prior.size() != states.size()) {
      fail(ErrorCode::InvalidInput, "sizes, prior and states disagree in length");
    }
    std::size_t k = 0;
    for (auto s : sizes) {
      e.states.emplace_back();
      e.prior.emplace_back();
      for (std::size_t i = 0; i < s; ++i, ++k) {
        e.states.back().push_back(StateVector(states[k]));
        e.prior.back().push_back(prior[k]);
      }
    }
    e.orthogonal = j.value("orthogonal", false);
    e.validate();
    obj.value = std::move(e);
  } else if (kind == "gop") {
    if (dims.size() != 2) fail(ErrorCode::InvalidInput, "gop dims must be [d_A, d_B]");
    const auto states_b = decode_states(j, "states_b");
    if (states_b.size() != states.size() || prior.size() != states.size()) {
      fail(ErrorCode::InvalidInput, "states, states_b and prior disagree in length");
    }
    GopEnsemble g;
    g.dim_a = dims[0];
    g.dim_b = dims[1];
    for (std::size_t k = 0; k < states.size(); ++k) {
      g.entries.push_back({StateVector(states[k]), StateVector(states_b[k]), prior[k]});
    }
    g.validate();
    obj.value = std::move(g);
  } else if (kind == "povm") {
    if (dims.size() != 1) fail(ErrorCode::InvalidInput, "povm dims must be [d]");
    Povm p;
    for (const auto& s : states) p.effects.emplace_back(square_from_flat(s, dims[0]));
    p.validate();
    obj.value = std::move(p);
  } else if (kind == "isometry") {
    if (dims.size() < 2) fail(ErrorCode::InvalidInput, "isometry dims must be [d_in, out_1, ...]");
    if (states.size() != dims[0]) fail(ErrorCode::InvalidInput, "isometry needs one image per input basis state");
    std::vector<StateVector> images;
    for (const auto& s : states) images.emplace_back(s);
    std::size_t out = 1;
    for (std::size_t k = 1; k < dims.size(); ++k) out *= dims[k];
    for (const auto& im : images) {
      if (im.dim() != out) fail(ErrorCode::InvalidInput, "isometry image has wrong dimension");
    }
    obj.value = make_isometry(dims[0], std::vector<std::size_t>(dims.begin() + 1, dims.end()), images);
  } else {
    fail(ErrorCode::InvalidInput, "unknown kind: " + kind);
  }
  return obj;
}

OrthogonalityReport global_orthogonality_check(const GopEnsemble& s) {
  OrthogonalityReport r;
  for (std::size_t j = 0; j < s.size(); ++j) {
    for (std::size_t k = j + 1; k < s.size(); ++k) {
      const double v = std::abs(inner(s.entries[j].a, s.entries[k].a) * inner(s.entries[j].b, s.entries[k].b));
      if (v > r.max_violation) {
        r.max_violation = v;
        r.worst_j = j;
        r.worst_k = k;
      }
    }
  }
  r.orthogonal = r.max_violation <= kStateTol;
  return r;
}

namespace {

bool parallel(const StateVector& x, const StateVector& y) { return std::abs(inner(x, y)) >= 1.0 - kStateTol; }
bool orthogonal(const StateVector& x, const StateVector& y) { return std::abs(inner(x, y)) <= kStateTol; }

bool orthogonal_within_settings(const std::vector<std::vector<StateVector>>& sets) {
  for (const auto& set : sets) {
    for (std::size_t i = 0; i < set.size(); ++i) {
      for (std::size_t j = i + 1; j < set.size(); ++j) {
        if (!orthogonal(set[i], set[j])) return false;
      }
    }
  }
  return true;
}

}  // namespace

FormDecomposition qubit_qudit_form_check(const GopEnsemble& s) {
  FormDecomposition out;
  if (s.dim_a != 2) {
    out.reason = "d_A = " + std::to_string(s.dim_a) + "; the form requires a qubit A side";
    return out;
  }
  const std::size_t n = s.size();
  std::vector<bool> removable(n, true);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j != k && !orthogonal(s.entries[k].b, s.entries[j].b)) removable[k] = false;
    }
  }

  // Candidate bases {e0, e1}: every orthogonal A pair, then single directions.
  std::vector<std::pair<StateVector, StateVector>> candidates;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = j + 1; k < n; ++k) {
      if (orthogonal(s.entries[j].a, s.entries[k].a)) candidates.emplace_back(s.entries[j].a, s.entries[k].a);
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    const auto& a = s.entries[j].a.amplitudes;
    candidates.emplace_back(s.entries[j].a, StateVector{-std::conj(a[1]), std::conj(a[0])});
  }

  std::size_t best_count = 0;
  std::vector<int> best;
  for (const auto& [e0, e1] : candidates) {
    std::vector<int> setting(n, -1);
    std::size_t count = 0;
    bool ok = true;
    for (std::size_t k = 0; k < n && ok; ++k) {
      if (parallel(s.entries[k].a, e0)) {
        setting[k] = 0;
      } else if (parallel(s.entries[k].a, e1)) {
        setting[k] = 1;
      } else if (!removable[k]) {
        ok = false;
      }
      if (setting[k] >= 0) ++count;
    }
    if (ok && count > best_count) {
      best_count = count;
      best = setting;
    }
  }
  if (best.empty()) {
    out.reason = "some A-side state is neither in the computational pair nor locally removable";
    return out;
  }

  out.fits = true;
  out.setting_of = best;
  double kept = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (best[k] < 0) {
      out.removable.push_back(k);
    } else {
      kept += s.entries[k].p;
    }
  }
  PostInfoEnsemble e;
  e.dim = s.dim_b;
  for (int t = 0; t < 2; ++t) {
    std::vector<StateVector> set;
    std::vector<double> pr;
    for (std::size_t k = 0; k < n; ++k) {
      if (best[k] == t) {
        set.push_back(s.entries[k].b);
        pr.push_back(s.entries[k].p / kept);
      }
    }
    if (!set.empty()) {
      e.states.push_back(std::move(set));
      e.prior.push_back(std::move(pr));
    }
  }
  e.orthogonal = orthogonal_within_settings(e.states);
  e.validate();
  out.induced = std::move(e);
  return out;
}

GopEnsemble swap_parties(const GopEnsemble& s) {
  GopEnsemble g;
  g.dim_a = s.dim_b;
  g.dim_b = s.dim_a;
  for (const auto& e : s.entries) g.entries.push_back({e.b, e.a, e.p});
  return g;
}

GopEnsemble apply_local(const GopEnsemble& s, const ComplexMatrix& u, Party side) {
  const std::size_t d = side == Party::A ? s.dim_a : s.dim_b;
  if (!u.square() || u.rows() != d) fail(ErrorCode::InvalidInput, "local unitary has wrong dimension");
  if ((u.adjoint() * u - ComplexMatrix::identity(d)).max_abs() > 1e-10) {
    fail(ErrorCode::InvalidInput, "local operation is not unitary");
  }
  GopEnsemble g = s;
  for (auto& e : g.entries) {
    StateVector& v = side == Party::A ? e.a : e.b;
    v = StateVector(u.apply(v.amplitudes));
  }
  return g;
}

namespace {

// Class index per entry for a side whose states come from one orthonormal basis; empty if not classical.
std::vector<std::size_t> classical_classes(const GopEnsemble& s, Party side, std::vector<StateVector>& reps) {
  std::vector<std::size_t> cls;
  for (const auto& e : s.entries) {
    const StateVector& v = side == Party::A ? e.a : e.b;
    std::size_t found = reps.size();
    for (std::size_t r = 0; r < reps.size(); ++r) {
      if (parallel(v, reps[r])) {
        found = r;
        break;
      }
      if (!orthogonal(v, reps[r])) return {};
    }
    if (found == reps.size()) reps.push_back(v);
    cls.push_back(found);
  }
  return cls;
}

std::size_t dominant_index(const StateVector& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.dim(); ++i) {
    if (std::abs(v.amplitudes[i]) > std::abs(v.amplitudes[best]) + 1e-12) best = i;
  }
  return best;
}

}  // namespace

bool is_classical_side(const GopEnsemble& s, Party side) {
  std::vector<StateVector> reps;
  return !classical_classes(s, side, reps).empty();
}

PostInfoEnsemble induce_postinfo(const GopEnsemble& s, Party classical) {
  std::vector<StateVector> reps;
  const auto cls = classical_classes(s, classical, reps);
  if (cls.empty()) fail(ErrorCode::Precondition, "states on the classical side are not from one orthonormal basis");
  std::vector<std::size_t> order(reps.size());
  for (std::size_t r = 0; r < reps.size(); ++r) order[r] = r;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return dominant_index(reps[x]) < dominant_index(reps[y]);
  });
  std::vector<std::size_t> rank(reps.size());
  for (std::size_t r = 0; r < order.size(); ++r) rank[order[r]] = r;

  PostInfoEnsemble e;
  e.dim = classical == Party::A ? s.dim_b : s.dim_a;
  e.states.resize(reps.size());
  e.prior.resize(reps.size());
  for (std::size_t k = 0; k < s.size(); ++k) {
    const auto& entry = s.entries[k];
    e.states[rank[cls[k]]].push_back(classical == Party::A ? entry.b : entry.a);
    e.prior[rank[cls[k]]].push_back(entry.p);
  }
  e.orthogonal = orthogonal_within_settings(e.states);
  e.validate();
  return e;
}

double set_deviation_up_to_phase(const GopEnsemble& x, const GopEnsemble& y) {
  if (x.size() != y.size() || x.dim_a != y.dim_a || x.dim_b != y.dim_b) {
    return std::numeric_limits<double>::infinity();
  }
  std::vector<bool> used(y.size(), false);
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const StateVector psi = x.joint(i);
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_j = y.size();
    for (std::size_t j = 0; j < y.size(); ++j) {
      if (used[j] || std::abs(x.entries[i].p - y.entries[j].p) > 1e-12) continue;
      const StateVector phi = y.joint(j);
      const cplx ov = inner(phi, psi);
      const cplx phase = std::abs(ov) > 0.0 ? ov / std::abs(ov) : cplx(1.0);
      double dev = 0.0;
      for (std::size_t k = 0; k < psi.dim(); ++k) {
        dev = std::max(dev, std::abs(psi.amplitudes[k] - phase * phi.amplitudes[k]));
      }
      if (dev < best) {
        best = dev;
        best_j = j;
      }
    }
    if (best_j == y.size()) return std::numeric_limits<double>::infinity();
    used[best_j] = true;
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace obcast
