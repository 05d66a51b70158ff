#pragma once

/// @file reps.hpp
/// Exact complex representations of finite groups over cyclotomic fields.
/// Heisenberg representations are monomial and are carried as MonoRep;
/// general representations are dense (DenseRep).

#include <optional>
#include <vector>

#include "heisweil/cyc.hpp"
#include "heisweil/forms.hpp"
#include "heisweil/grp.hpp"
#include "heisweil/heis.hpp"

namespace heisweil::reps {

using cyc::CycMatrix;
using cyc::CycScalar;
using grp::Elem;
using grp::GroupPtr;

/// M e_j = zeta_N^{exps[j]} e_{rows[j]}.
struct MonoMatrix {
  int conductor = 1;
  std::vector<std::uint32_t> rows;
  std::vector<std::uint32_t> exps;

  static MonoMatrix identity(std::size_t n, int conductor);
  std::size_t dim() const { return rows.size(); }
  MonoMatrix operator*(const MonoMatrix& o) const;
  MonoMatrix inverse() const;
  MonoMatrix conj() const;
  CycScalar trace() const;
  CycMatrix dense() const;
  /// True when the matrix is zeta^e * I; stores e.
  bool is_scalar(std::uint32_t* exponent = nullptr) const;
  bool operator==(const MonoMatrix& o) const = default;
};

struct MonoRep {
  GroupPtr group;
  int conductor = 1;
  std::size_t dim = 0;
  std::vector<MonoMatrix> mats;  // indexed by group element
};

struct DenseRep {
  GroupPtr group;
  std::size_t dim = 0;
  std::vector<CycMatrix> mats;
};

DenseRep to_dense(const MonoRep& r);
/// Exhaustive multiplicativity and identity check.
bool is_representation(const MonoRep& r);
bool is_representation(const DenseRep& r);

/// Class function stored per element.
struct Character {
  std::vector<CycScalar> values;
};
Character character(const MonoRep& r);
Character character(const DenseRep& r);
/// (1/|G|) sum chi1(g) conj(chi2(g)).
CycScalar inner_product(const grp::FinGroup& g, const Character& a, const Character& b);
bool is_irreducible(const MonoRep& r);
bool is_irreducible(const DenseRep& r);

/// (1/|G|) sum chi(g^2), in {1, 0, -1}. Throws DomainError for reducible input.
int frobenius_schur(const MonoRep& r);

/// J with rho(g) J = J conj(rho(g)) and J conj(J) = sign * I.
struct RStructure {
  CycMatrix j;
  int sign = 0;
};
std::optional<RStructure> r_structure(const MonoRep& r);

/// T with T r1(g) = r2(g) T, by averaging seeds E_ij in row-major order;
/// normalized so the first nonzero entry is 1.
std::optional<CycMatrix> intertwiner(const MonoRep& r1, const MonoRep& r2);
std::optional<CycMatrix> intertwiner(const DenseRep& r1, const DenseRep& r2);
/// T with T r(x) = r(perm[x]) T.
std::optional<CycMatrix> twisted_intertwiner(const MonoRep& r, const std::vector<Elem>& perm);

/// Restriction to a subgroup, carried on grp::as_group(H).
MonoRep restrict(const MonoRep& r, const grp::Subgroup& h);
/// Induction from H (a representation of as_group(G, H)) to G. Coset
/// representatives are the least elements of the left cosets.
MonoRep induce(const grp::FinGroup& g, const grp::Subgroup& h, const MonoRep& rh);
DenseRep induce(const grp::FinGroup& g, const grp::Subgroup& h, const DenseRep& rh);
/// Basis (reduced echelon) of the vectors fixed by every element of H.
std::vector<std::vector<CycScalar>> invariants(const DenseRep& r, const grp::Subgroup& h);

// ---------------------------------------------------------------------------
// Heisenberg representations

struct HeisenbergRep {
  heis::HeisenbergGroup group;
  std::uint32_t psi = 1;  // psi(a) = zeta_p^{psi * a}
  forms::Polarization polarization;
  std::vector<gf::FpVector> coset_reps;  // V-, lexicographic in minus-coordinates
  MonoRep rep;
};

/// Conductor of all Heisenberg computations for the prime p: lcm(p, 4).
int heisenberg_conductor(std::uint32_t p);

/// Induced from triv x omega_{0,psi} on V+ x P0. Throws DomainError for psi = 0 mod p.
HeisenbergRep heisenberg_rep(const heis::HeisenbergGroup& g, std::uint32_t psi);

struct StoneVonNeumannReport {
  std::uint64_t order = 0;
  std::size_t conjugacy_classes = 0;
  std::size_t expected_classes = 0;      // p^{2n} + p - 1
  std::size_t linear_characters = 0;     // |P/[P,P]|
  std::size_t dimension = 0;
  std::size_t expected_dimension = 0;    // sqrt |V|
  bool irreducible = false;
  bool central_character = false;
  bool restriction_isotypic = false;     // restriction to Z(P) is dim * psi
  bool count_identity = false;           // |V_P| + (p-1) dim^2 = |P|
  bool ok() const;
};
StoneVonNeumannReport verify_stone_von_neumann(const heis::HeisenbergGroup& g, std::uint32_t psi);

struct InvariantsCheck {
  std::size_t invariant_dim = 0;
  std::size_t base_dim = 0;
  bool equivalent = false;
};
/// For isotropic V+ with dual V- (omega(plus_i, minus_j) = delta_ij), the
/// V+-lift invariants of omega_psi as a representation of P0 = preimage of
/// (V+ + V-)^perp, compared with the Heisenberg representation of P0.
InvariantsCheck partial_polarization_invariants(const heis::HeisenbergGroup& g, std::uint32_t psi,
                                                const std::vector<gf::FpVector>& plus,
                                                const std::vector<gf::FpVector>& minus);

// ---------------------------------------------------------------------------
// Clifford theory

struct CliffordComponent {
  DenseRep sigma;
  std::size_t multiplicity = 0;
};

struct CliffordResult {
  std::vector<CliffordComponent> components;
  std::size_t induced_dim = 0;
  std::size_t end_dim = 0;
  std::size_t end_center_dim = 0;
  bool verified = false;
};

/// Decomposes Ind_C^B(rho) for C normal in B and rho irreducible.
CliffordResult clifford_decompose(const grp::FinGroup& b, const grp::Subgroup& c, const DenseRep& rho);

}  // namespace heisweil::reps
