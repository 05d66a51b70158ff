#pragma once

/// @file autz.hpp
/// Automorphisms of a Heisenberg group P = V#_B that fix the center.
/// Every such automorphism has the form (a, v) -> (a + mu(v), M v) with
/// M an isometry of omega_P (and of Q_P when p = 2); mu is stored as a full
/// table indexed by gf::vector_index.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "heisweil/gf.hpp"
#include "heisweil/grp.hpp"
#include "heisweil/heis.hpp"

namespace heisweil::autz {

using gf::FpMatrix;
using gf::FpVector;
using gf::u32;
using gf::u64;
using grp::Elem;
using heis::HeisElement;
using heis::HeisenbergGroup;

using HeisPtr = std::shared_ptr<const HeisenbergGroup>;

HeisPtr share(const HeisenbergGroup& g);

struct CentralAutomorphism {
  HeisPtr group;
  FpMatrix m;
  std::vector<u32> mu;

  static CentralAutomorphism identity(HeisPtr g);
  HeisElement apply(const HeisElement& x) const;
  u32 mu_at(const FpVector& v) const { return mu[gf::vector_index(v, group->p())]; }
  bool operator==(const CentralAutomorphism& o) const { return m == o.m && mu == o.mu; }
};

/// f o g. Throws DomainError when the groups differ.
CentralAutomorphism compose(const CentralAutomorphism& f, const CentralAutomorphism& g);
CentralAutomorphism invert(const CentralAutomorphism& f);

/// Conjugation by any lift of u: mu(v) = omega_P(u, v), M = 1.
CentralAutomorphism inner(HeisPtr g, const FpVector& u);

/// The induced map on V.
inline const FpMatrix& project(const CentralAutomorphism& f) { return f.m; }

/// (a, v) -> (a, M v); requires p odd and B = omega_P / 2.
CentralAutomorphism section_odd(HeisPtr g, const FpMatrix& m);

/// The lift of an isometry M whose mu vanishes on the standard basis.
/// Throws DomainError with a witness when M is not an isometry.
CentralAutomorphism lift_pointwise(HeisPtr g, const FpMatrix& m);

/// A pair (v, w) violating mu(v+w) - mu(v) - mu(w) = B(Mv, Mw) - B(v, w),
/// or a vector whose center image is wrong; nullopt when f is an automorphism.
std::optional<std::pair<FpVector, FpVector>> automorphism_violation(const CentralAutomorphism& f);

/// True when M preserves omega_P, and Q_P for p = 2.
bool is_isometry(const HeisenbergGroup& g, const FpMatrix& m);

/// All isometries by backtracking on basis images (|V| <= 4096). Order is
/// lexicographic in the tuple of column indices.
std::vector<FpMatrix> enumerate_isometries(const HeisenbergGroup& g, std::size_t limit = 4096);
/// Number of isometries, by the same search without storing them.
u64 count_isometries(const HeisenbergGroup& g, u64 node_limit = u64{1} << 28);
/// |Sp_2n(F_p)| for the odd type, |O^+-_2n(F_2)| otherwise.
u64 isometry_order_formula(u32 p, unsigned n, heis::HeisType type);

/// The isometry group as a FinGroup; elements[i] is group element i.
struct OrthSymplGroup {
  std::vector<FpMatrix> elements;
  grp::GroupPtr group;
};
OrthSymplGroup isometry_group(const HeisenbergGroup& g);

/// A materialized subgroup of Aut_Z(P); elements[i] is group element i.
struct AutGroup {
  HeisPtr heis;
  std::vector<CentralAutomorphism> elements;
  grp::GroupPtr group;
  std::vector<Elem> generator_indices;

  /// Index of f, or nullopt.
  std::optional<Elem> find(const CentralAutomorphism& f) const;
};
AutGroup generate(HeisPtr g, const std::vector<CentralAutomorphism>& gens,
                  std::size_t max_order = grp::kMaxTableOrder);

/// The inner automorphisms, generated by conjugation with lifts of the basis.
AutGroup inner_subgroup(HeisPtr g);

/// Aut_Z(P) from inner automorphisms of the basis and lifts of generators
/// of the isometry group.
AutGroup full_automorphism_group(HeisPtr g);

struct ExactSequenceReport {
  u64 kernel_order = 0;        // |V|
  u64 image_order = 0;         // |O(V, Q_P)| or |Sp(V)|
  u64 aut_order = 0;
  bool materialized = false;
  bool kernel_is_inner = false;
  bool image_is_full = false;
  std::optional<bool> splits;  // nullopt when not materialized
  std::optional<bool> cohomology_splits;
  /// Splitting predicted by "split iff dim V <= 2" (p = 2) or always (p odd).
  bool fact_predicts_split = false;
  /// Splitting predicted by "nonsplit iff n >= 3" (p = 2) or always (p odd).
  bool intro_predicts_split = false;
  std::string image_name;      // "O+", "O-", "Sp"
};
ExactSequenceReport exact_sequence_report(const HeisenbergGroup& g);

/// Outcome of testing membership in the stabilizer of a lifted isotropic
/// subspace.
struct MembershipResult {
  bool member = false;
  int failed_condition = 0;             // 1: f(lift) != lift, 2: f(x) x^-1 not in lift
  std::optional<HeisElement> witness;
};

/// Checks f(lift) = lift and f(x) x^-1 in lift for every x in the preimage
/// of V+ (+) V0. `v0_basis` spans V0, which must be orthogonal to V+ with
/// nondegenerate restriction of omega_P and trivial intersection with V+.
MembershipResult stabilizer_membership(const CentralAutomorphism& f, const heis::Splitting& vplus,
                                       const std::vector<FpVector>& v0_basis);

std::string to_string(const CentralAutomorphism& f);

}  // namespace heisweil::autz
