#pragma once

/// @file weil.hpp
/// Projective Weil representations of subgroups A of Aut_Z(P) on the space
/// of the Heisenberg representation, and their linearizations.
///
/// For a in A, T_a is the intertwiner with T_a rho(x) T_a^-1 = rho(a(x)),
/// rescaled to U_a = T_a / sqrt(m) where T_a T_a^* = m I. The cocycle is
/// U_a U_b = zeta_M^{c(a,b)} U_{ab}.

#include <optional>
#include <string>
#include <vector>

#include "heisweil/autz.hpp"
#include "heisweil/cyc.hpp"
#include "heisweil/grp.hpp"
#include "heisweil/heis.hpp"
#include "heisweil/reps.hpp"

namespace heisweil::weil {

using autz::AutGroup;
using autz::CentralAutomorphism;
using cyc::CycMatrix;
using cyc::CycScalar;
using grp::Elem;

struct ProjectiveWeil {
  reps::HeisenbergRep heis;
  AutGroup a;
  int conductor = 1;            // K: all U_a have entries in Q(zeta_K)
  std::vector<CycMatrix> u;     // indexed by element of A
  grp::Cocycle2 c;              // modulus M = lcm(K, 2)
};

/// Permutation of P (as indices of heis.rep.group) induced by f.
std::vector<Elem> element_permutation(const heis::HeisenbergGroup& g, const CentralAutomorphism& f);

ProjectiveWeil projective_weil(const reps::HeisenbergRep& rep, const AutGroup& a);

enum class Flavor { complex, real, quaternionic };
std::string to_string(Flavor f);

struct WeilLinearization {
  Flavor flavor = Flavor::complex;
  int conductor = 1;
  std::vector<CycMatrix> w;     // indexed by element of A
};

/// Checks W(a) rho(x) = rho(a(x)) W(a) on generators of P and
/// W(a g) = W(a) W(g) for every a and every generator g of A.
bool verify_linearization(const ProjectiveWeil& pw, const WeilLinearization& lin);

struct LinearizeResult {
  std::optional<WeilLinearization> linearization;
  grp::CoboundaryResult certificate;  // the solve over Z/N
  std::int64_t modulus = 0;           // N = M * exponent(A^ab)
};

/// Solves c = d(beta) over Z/N and sets W(a) = zeta_N^{-beta(a)} U_a.
LinearizeResult linearize(const ProjectiveWeil& pw);

/// When W2(a) = chi(a) W1(a) for a character chi of A, returns chi as
/// exponents of zeta_n (n = the returned modulus); nullopt otherwise.
struct TwistCharacter {
  std::int64_t modulus = 1;
  std::vector<std::int64_t> exponents;
  bool trivial() const;
};
std::optional<TwistCharacter> twist_between(const ProjectiveWeil& pw, const WeilLinearization& w1,
                                            const WeilLinearization& w2);

/// The lift of V+ used by reps::heisenberg_rep: u -> (f(u), u) with f the
/// splitting correction in the basis polarization.plus.
heis::Splitting polarization_lift(const reps::HeisenbergRep& rep);

/// The elements of Aut_Z(P) passing autz::stabilizer_membership for the
/// polarization lift and the anisotropic block of the rep's polarization.
AutGroup polarization_stabilizer(const reps::HeisenbergRep& rep);

struct PolarizationResult {
  std::optional<WeilLinearization> linearization;
  std::optional<Elem> violating;           // element of A outside the stabilizer
  autz::MembershipResult membership;
};

/// W(a) on block y equals rho(a(t_y)) rho(t_y)^-1 restricted to that block,
/// where t_y = (0, y) runs over the coset representatives of the rep.
PolarizationResult linearize_via_polarization(const ProjectiveWeil& pw);

struct RLinearization {
  WeilLinearization lin;
  reps::RStructure j;
  std::size_t order_two_characters = 0;   // |Hom(A, Z/2)|
  std::size_t solutions_found = 0;        // characters lambda with lambda^2 = mu
  bool unique = false;
};

/// p = 2 only. Rescales a linearization so every W(a) commutes with the
/// R-structure. Throws DomainError for odd p or when no linearization exists.
RLinearization r_linearize(const ProjectiveWeil& pw);

struct GerardinResult {
  std::vector<WeilLinearization> linearizations;  // labelled by position
  std::vector<std::vector<std::int64_t>> characters;  // twist of each, as exponents of zeta_e
  std::int64_t character_modulus = 1;
  std::size_t count = 0;
};

/// Linearizations of the projective Weil representation of the canonical
/// section of a subgroup of Sp(V) on the B = omega/2 model, for p odd.
/// `sp_gens` are symplectic matrices generating the subgroup.
GerardinResult gerardin_weil(std::uint32_t p, unsigned n, const std::vector<gf::FpMatrix>& sp_gens,
                             std::uint32_t psi = 1);

/// Number of linearizations of pw: |A^ab| when c is a coboundary, else 0.
std::size_t count_linearizations(const ProjectiveWeil& pw);

/// A homomorphism A |x P -> Sp(V) |x V# given by its restriction to P,
/// phi[i] = image of P.element(i); A is sent to its projection.
struct SpecialIsoHom {
  std::vector<heis::HeisElement> phi;
};

struct SpecialIsoCheck {
  std::optional<heis::HeisElement> h;
  std::size_t candidates_tested = 0;
};

/// Searches h in P with f2 = f1 o conj_h. Throws DomainError when either
/// map violates the hypotheses (not a special isomorphism, or not
/// equivariant for the projection of A).
SpecialIsoCheck special_iso_uniqueness_check(const AutGroup& a, const heis::HeisenbergGroup& target,
                                             const SpecialIsoHom& f1, const SpecialIsoHom& f2);

}  // namespace heisweil::weil
