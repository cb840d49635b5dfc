#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "linalg.hpp"

namespace obcast {

// Per-setting indexed pure states rho_{i|theta} with joint prior p(theta, i).
struct PostInfoEnsemble {
  std::size_t dim = 0;
  std::vector<std::vector<StateVector>> states;  // [theta][i]
  std::vector<std::vector<double>> prior;        // [theta][i], sums to 1
  bool orthogonal = false;                       // states within a setting are pairwise orthogonal

  std::size_t settings() const { return states.size(); }
  std::size_t total_states() const;
  void validate() const;
  PostInfoEnsemble with_uniform_prior() const;
};

struct GopEntry {
  StateVector a;
  StateVector b;
  double p = 0.0;
};

// Product states |a_k>|b_k> with priors p_k.
struct GopEnsemble {
  std::size_t dim_a = 0;
  std::size_t dim_b = 0;
  std::vector<GopEntry> entries;

  std::size_t size() const { return entries.size(); }
  StateVector joint(std::size_t k) const { return kron(entries[k].a, entries[k].b); }
  void validate() const;
};

struct Povm {
  std::vector<HermitianOp> effects;

  std::size_t dim() const { return effects.empty() ? 0 : effects.front().dim(); }
  std::size_t size() const { return effects.size(); }
  // Largest deviation from the invariants: negative eigenvalue depth and |sum - I|.
  double invariant_residual() const;
  void validate(double tol = 1e-10) const;
};

struct Isometry {
  ComplexMatrix matrix;                  // out x in, V^dag V = I
  std::vector<std::size_t> output_dims;  // factorization of the output space

  std::size_t in_dim() const { return matrix.cols(); }
  std::size_t out_dim() const { return matrix.rows(); }
  StateVector apply(const StateVector& v) const { return StateVector(matrix.apply(v.amplitudes)); }
  void validate() const;
};

using GalleryValue = std::variant<PostInfoEnsemble, GopEnsemble, Povm, Isometry>;

struct NamedObject {
  std::string name;  // empty for objects not drawn from the gallery
  GalleryValue value;

  std::string kind() const;
};

const std::vector<std::string>& gallery_names();
// Accepts every name in gallery_names(); "gen-bb84(<theta>)" selects the angle (default pi/2).
NamedObject gallery(const std::string& name);
PostInfoEnsemble gallery_postinfo(const std::string& name);
GopEnsemble gallery_gop(const std::string& name);
Povm gallery_povm(const std::string& name);
Isometry gallery_isometry(const std::string& name);
GopEnsemble gen_bb84(double theta);

std::string to_json(const NamedObject& obj);
NamedObject from_json(const std::string& text);

struct OrthogonalityReport {
  bool orthogonal = false;
  double max_violation = 0.0;
  std::size_t worst_j = 0;
  std::size_t worst_k = 0;
};

OrthogonalityReport global_orthogonality_check(const GopEnsemble& s);

struct FormDecomposition {
  bool fits = false;
  std::string reason;
  PostInfoEnsemble induced;             // settings {0, 1}, states on B
  std::vector<std::size_t> removable;   // entries whose b is orthogonal to every other b
  std::vector<int> setting_of;          // per entry: 0, 1, or -1 when removable
};

FormDecomposition qubit_qudit_form_check(const GopEnsemble& s);

enum class Party { A, B };

GopEnsemble swap_parties(const GopEnsemble& s);
GopEnsemble apply_local(const GopEnsemble& s, const ComplexMatrix& u, Party side);
// Post-information ensemble on the quantum side when `classical` holds states from one orthonormal basis.
PostInfoEnsemble induce_postinfo(const GopEnsemble& s, Party classical);
bool is_classical_side(const GopEnsemble& s, Party side);
// Max amplitude deviation between two ensembles matched as sets, up to per-state global phase.
double set_deviation_up_to_phase(const GopEnsemble& x, const GopEnsemble& y);

}  // namespace obcast
