#pragma once

/// @file rootdata.hpp
/// Root systems of rank <= 4 (plus reducible sums), their Weyl groups acting
/// on the coroot lattice, torsion primes, residue functionals and the
/// genericity conditions GE1/GE2, and finite matrix-group spot checks.
///
/// Ambient vectors are stored multiplied by `RootSystem::denominator` so
/// that every coordinate is an integer (F_4 has half-integral roots).
/// Weyl group elements are integer matrices on the coroot lattice in the
/// basis of simple coroots; column i is the image of the i-th simple coroot.

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "heisweil/gf.hpp"
#include "heisweil/grp.hpp"

namespace heisweil::rootdata {

using gf::FpVector;
using gf::u32;
using gf::u64;
using grp::Elem;

using IntVector = std::vector<int>;

struct RootSystem {
  std::string label;                    // normalized, e.g. "A1+A1", "C2", "D4"
  unsigned rank = 0;
  unsigned ambient_dim = 0;
  int denominator = 1;
  std::vector<IntVector> roots;         // ambient, scaled; simple roots first
  std::vector<IntVector> root_coords;   // in the basis of simple roots
  std::vector<IntVector> coroot_coords; // in the basis of simple coroots

  /// <alpha_a, alpha_b^vee>
  int pairing(std::size_t a, std::size_t b) const;
  bool is_positive(std::size_t a) const;
  /// Index of the root with the given scaled ambient vector.
  std::optional<std::size_t> find(const IntVector& scaled) const;
};

/// Accepts A1-A4, B1-B4, C1-C4, D2-D4, G2, F4 and sums such as "A1+A2".
/// B2 is returned as C2, D3 as A3, D2 as A1+A1, B1 and C1 as A1.
/// Throws DomainError for anything else.
RootSystem make_root_system(const std::string& label);

/// Canonical form of a label: components normalized as above and sorted.
std::string normalize_label(const std::string& label);

/// Number of roots predicted by the type of each component.
std::size_t expected_root_count(const std::string& label);

/// Type of the Levi subsystem spanned by the given simple roots ("" when
/// the subset is empty).
std::string levi_label(const RootSystem& r, const std::vector<unsigned>& simple_subset);

/// Labels of the components read off from the root system itself.
std::string classify(const RootSystem& r);

// ---------------------------------------------------------------------------
// Torsion primes

/// Primes for the root system (components may include E6, E7, E8) together
/// with the primes dividing `pi1_torsion_order`.
std::set<u32> torsion_primes(const std::string& label, u64 pi1_torsion_order = 1);

struct TorsionRow {
  std::string family;     // "A_n", "B_n", ...
  std::set<u32> primes;
};
/// The irreducible table: A_n, B_n, C_n, D_n, G_2, F_4, E_6, E_7, E_8.
std::vector<TorsionRow> torsion_table();

// ---------------------------------------------------------------------------
// Weyl groups

using IntMatrix = std::vector<int>;  // rank x rank, row-major

struct WeylGroup {
  RootSystem roots;
  std::vector<IntMatrix> elements;   // elements[i] is group element i
  grp::GroupPtr group;
  std::vector<Elem> reflection;      // per root index

  /// Image of a vector of simple-coroot coordinates.
  IntVector act(Elem w, const IntVector& coroot) const;
  std::optional<Elem> find(const IntMatrix& m) const;
};

/// Materializes W from the simple reflections. Throws ResourceError above
/// grp::kMaxTableOrder.
WeylGroup weyl_group(const RootSystem& r);

/// The matrix of s_alpha on the coroot lattice.
IntMatrix reflection_matrix(const RootSystem& r, std::size_t root);

// ---------------------------------------------------------------------------
// Residue functionals

/// A functional on the coroot lattice with values in F_p^symbols, given by
/// its values on the simple coroots.
struct ResidueFunctional {
  u32 p = 2;
  unsigned symbols = 1;
  std::vector<FpVector> on_simple;   // rank entries of length `symbols`

  FpVector evaluate(const IntVector& coroot) const;
  bool operator==(const ResidueFunctional& o) const = default;
};

/// X = sum_j a_j (x) lambda_j, where lambda_j are weights in scaled ambient
/// coordinates. Throws DomainError when some lambda_j is not a weight.
ResidueFunctional functional_from_weights(const RootSystem& r, u32 p, const std::vector<IntVector>& weights);

/// X(H_alpha) for the coroot of root `root`.
FpVector evaluate_on_root(const RootSystem& r, const ResidueFunctional& x, std::size_t root);

struct CentralizerResult {
  grp::Subgroup centralizer;   // Z_W(X)
  grp::Subgroup w_prime;       // generated by s_alpha with X(H_alpha) = 0
  grp::Subgroup w_h;           // Weyl group of Phi_H
  std::size_t quotient_order = 0;
  bool is_p_group = false;
  bool ge2 = false;
};

/// `phi_h` lists root indices of the subsystem.
CentralizerResult weyl_centralizer(const WeylGroup& w, const ResidueFunctional& x,
                                   const std::vector<std::size_t>& phi_h);

struct Ge1Result {
  bool holds = false;
  std::optional<std::size_t> witness;  // a root outside Phi_H with X(H_alpha) = 0
};
Ge1Result ge1_check(const RootSystem& r, const ResidueFunctional& x, const std::vector<std::size_t>& phi_h);

// ---------------------------------------------------------------------------
// The Spin_8 example

struct AppendixDReport {
  std::size_t weyl_order = 0;
  std::size_t stabilizer_order = 0;
  bool stabilizer_abelian = false;
  bool stabilizer_normal = false;
  /// Equal to the subgroup generated by even sign changes and the Klein
  /// four-group of double transpositions.
  bool equals_sign_klein_subgroup = false;
  /// Isomorphic to (Z/2)^3 |x (Z/2)^2 with V_4 permuting coordinates.
  bool semidirect_isomorphic = false;
  bool sum_in_twice_lattice = false;   // e1+e2+e3+e4 in 2X*
  std::size_t w_prime_order = 0;
  bool quotient_is_2_group = false;
  bool ge1 = false;
  bool ge2 = false;
};
AppendixDReport appendix_d_report();

// ---------------------------------------------------------------------------
// Finite matrix groups over F_q

enum class MatrixGroupType { sl2, sl3, sp4, gl2 };
std::string to_string(MatrixGroupType t);
/// "SL2", "SL3", "Sp4", "GL2" (case-insensitive, optional underscore).
MatrixGroupType parse_matrix_group(const std::string& s);

struct CommutatorCheck {
  bool holds = false;
  u64 borel_order = 0;
  u64 unipotent_order = 0;
  u64 commutator_order = 0;   // |[P, U]|
};

/// U(F_q) inside [P(F_q), U(F_q)] for the upper triangular Borel P.
/// Supports SL2, SL3, Sp4 with q <= 8.
CommutatorCheck unipotent_commutator_check(MatrixGroupType t, u32 q);

/// |G^ab| for G = SL2, SL3, GL2 over F_q, q <= 8 (subject to the table bound).
std::size_t abelianization_order_check(MatrixGroupType t, u32 q);

// ---------------------------------------------------------------------------
// Scalar restriction on commutator-generated normal subgroups

struct ScalarRestrictionSummary {
  std::size_t instances = 0;
  std::size_t hypothesis_holds = 0;      // U subset of [P, U]
  std::size_t extensions_found = 0;      // instances with at least one extension
  std::size_t extensions_checked = 0;    // extensions examined in total
  std::size_t violations = 0;            // hypothesis holds, restriction to U nontrivial
  std::size_t control_nontrivial = 0;    // hypothesis fails, some restriction nontrivial
  bool passed() const { return violations == 0 && hypothesis_holds > 0 && extensions_found > 0; }
};

/// Random instances of P |x H with H Heisenberg of order 8 or 27, P acting
/// through P/U into Aut_Z(H): every extension of the Heisenberg
/// representation must be trivial on U whenever U lies in [P, U].
ScalarRestrictionSummary scalar_restriction_suite(u64 seed, std::size_t instances);

}  // namespace heisweil::rootdata
