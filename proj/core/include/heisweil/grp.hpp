#pragma once

/// @file grp.hpp
/// Finite groups given by a full multiplication table, with the
/// structural queries, complement search, 2-cocycle solving and iterated
/// semidirect products needed elsewhere in the library.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "heisweil/errors.hpp"

namespace heisweil::grp {

using Elem = std::uint32_t;
using u64 = std::uint64_t;

/// Largest order materialized as a table.
inline constexpr std::size_t kMaxTableOrder = 4096;

class FinGroup {
 public:
  FinGroup() = default;
  /// `table[a * order + b]` is the index of a*b. The identity, inverses and
  /// closure are checked; associativity is checked separately.
  FinGroup(std::size_t order, std::vector<Elem> table);

  std::size_t order() const { return n_; }
  Elem identity() const { return identity_; }
  Elem mul(Elem a, Elem b) const { return table_[static_cast<std::size_t>(a) * n_ + b]; }
  Elem inv(Elem a) const { return inv_[a]; }
  Elem pow(Elem a, std::int64_t k) const;
  /// a b a^-1 b^-1
  Elem commutator(Elem a, Elem b) const { return mul(mul(a, b), mul(inv(a), inv(b))); }
  /// g x g^-1
  Elem conj(Elem g, Elem x) const { return mul(mul(g, x), inv(g)); }
  unsigned element_order(Elem a) const;
  const std::vector<Elem>& table() const { return table_; }

  /// Exhaustive for order <= 200, otherwise `samples` random triples.
  bool verify_associativity(u64 seed = 0, std::size_t samples = 10000) const;

  bool operator==(const FinGroup& o) const { return n_ == o.n_ && table_ == o.table_; }

 private:
  std::size_t n_ = 0;
  Elem identity_ = 0;
  std::vector<Elem> table_;
  std::vector<Elem> inv_;
};

using GroupPtr = std::shared_ptr<const FinGroup>;

/// A subgroup (or any subset) of a fixed FinGroup, as a sorted index list
/// with a membership bitmap.
struct Subgroup {
  std::vector<Elem> elems;
  std::vector<char> member;

  std::size_t order() const { return elems.size(); }
  bool contains(Elem x) const { return member[x] != 0; }
  bool operator==(const Subgroup& o) const { return elems == o.elems; }
};

Subgroup make_subset(const FinGroup& g, std::vector<Elem> elems);
Subgroup whole(const FinGroup& g);
Subgroup trivial(const FinGroup& g);
Subgroup generate(const FinGroup& g, const std::vector<Elem>& gens);
bool is_subgroup(const FinGroup& g, const Subgroup& h);
bool is_normal(const FinGroup& g, const Subgroup& h);
bool is_abelian(const FinGroup& g, const Subgroup& h);
Subgroup center(const FinGroup& g);
Subgroup centralizer(const FinGroup& g, const std::vector<Elem>& xs);
Subgroup normalizer(const FinGroup& g, const Subgroup& h);
/// [H, K]
Subgroup commutator_subgroup(const FinGroup& g, const Subgroup& h, const Subgroup& k);
Subgroup derived_subgroup(const FinGroup& g);
/// Classes sorted by their least element; each class sorted.
std::vector<std::vector<Elem>> conjugacy_classes(const FinGroup& g);
unsigned exponent(const FinGroup& g);
std::size_t abelianization_order(const FinGroup& g);
/// A Sylow p-subgroup (trivial when p does not divide |G|).
Subgroup sylow(const FinGroup& g, unsigned p);
/// Greedy generating set: elements of H in index order not already in the
/// subgroup generated so far.
std::vector<Elem> generators(const FinGroup& g, const Subgroup& h);

/// The subgroup H as a group in its own right; `embedding[i]` is the index
/// in G of element i of the new group.
struct SubgroupGroup {
  GroupPtr group;
  std::vector<Elem> embedding;
};
SubgroupGroup as_group(const FinGroup& g, const Subgroup& h);

/// Quotient G/N as a group, with the projection table.
struct Quotient {
  GroupPtr group;
  std::vector<Elem> projection;        // element of G -> coset index
  std::vector<Elem> representatives;   // least element of each coset
};
Quotient quotient(const FinGroup& g, const Subgroup& n);

struct StructureReport {
  Subgroup center;
  Subgroup derived;
  std::vector<std::vector<Elem>> classes;
  std::size_t abelianization_order = 0;
  unsigned exponent = 0;
};
StructureReport structure_queries(const FinGroup& g);

/// An isomorphism G1 -> G2 as a full image table, by generator-image
/// backtracking. Orders above 64 are rejected.
std::optional<std::vector<Elem>> find_isomorphism(const FinGroup& a, const FinGroup& b);

/// Checks that `images` (indexed by source element) is a homomorphism.
bool is_homomorphism(const FinGroup& src, const FinGroup& dst, const std::vector<Elem>& images);

// ---------------------------------------------------------------------------
// Materialization from generators

/// Closes `gens` under `mul`, returning the elements (identity first, then
/// breadth-first order) and the group table. Only |G| * |gens| products are
/// evaluated; the rest of the table follows from the Cayley graph.
template <class T>
struct Materialized {
  std::vector<T> elements;
  GroupPtr group;
  std::vector<Elem> generator_indices;
};

template <class T, class Mul, class Hash = std::hash<T>, class Eq = std::equal_to<T>>
Materialized<T> materialize(const std::vector<T>& gens, const T& one, Mul&& mul,
                            std::size_t max_order = kMaxTableOrder);

// ---------------------------------------------------------------------------
// Complements

struct ComplementResult {
  std::optional<Subgroup> complement;
  /// Set when N is elementary abelian: whether the extension class vanishes
  /// according to the coboundary linear system over F_p.
  std::optional<bool> cohomology_splits;
  std::size_t nodes_visited = 0;
};

/// Exhaustive depth-first search over lifts of generators of E/N. Throws
/// DomainError when N is not normal.
ComplementResult complement_exists(const FinGroup& e, const Subgroup& n);

// ---------------------------------------------------------------------------
// 2-cocycles with values in Z/N

struct Cocycle2 {
  GroupPtr group;
  std::int64_t modulus = 2;
  std::vector<std::int64_t> values;  // values[a * |A| + b]

  std::int64_t operator()(Elem a, Elem b) const { return values[static_cast<std::size_t>(a) * group->order() + b]; }
  /// Returns a violating triple when the cocycle identity fails.
  std::optional<std::tuple<Elem, Elem, Elem>> violation() const;
  /// Pulls back along an embedding of a subgroup.
  Cocycle2 restrict(const SubgroupGroup& h) const;
};

/// (db)(a, b) = b(a) + b(b) - b(ab)
std::vector<std::int64_t> coboundary(const FinGroup& g, const std::vector<std::int64_t>& b, std::int64_t modulus);

struct CoboundaryResult {
  bool solvable = false;
  std::vector<std::int64_t> cochain;                 // b with db = c
  std::vector<std::vector<std::int64_t>> kernel;     // homomorphisms A -> Z/N generating the ambiguity
  /// When unsolvable: a commuting pair with c(a,b) != c(b,a), if any.
  std::optional<std::pair<Elem, Elem>> asymmetric_pair;
  std::size_t sylow2_order = 0;
  std::optional<bool> sylow2_solvable;
};

/// Solves db = c over Z/N. Throws DomainError for an invalid cocycle.
CoboundaryResult coboundary_solve(const Cocycle2& c);

/// All homomorphisms G -> Z/m, as value tables, sorted.
std::vector<std::vector<std::int64_t>> homomorphisms_to_cyclic(const FinGroup& g, std::int64_t m);

// ---------------------------------------------------------------------------
// Iterated semidirect products

/// Action of factor j on factor i (i < j): table[b * |A_i| + a] = b.a
struct FactorAction {
  std::size_t acting = 0;
  std::size_t acted = 0;
  std::vector<Elem> table;
};

/// A_1 x ... x A_n with (a_i)(b_i) = (z_i), where z_k = a_k * (a_{k+1} ... a_n acting on b_k).
/// Elements are encoded in mixed radix with A_1 most significant.
struct IteratedSemidirect {
  std::vector<GroupPtr> factors;
  std::vector<FactorAction> actions;
  GroupPtr group;

  std::vector<Elem> decode(Elem x) const;
  Elem encode(const std::vector<Elem>& parts) const;
  /// The image of A_i in the product.
  Elem embed(std::size_t i, Elem a) const;
};

/// Throws DomainError naming the violated condition and its witness.
IteratedSemidirect iterated_semidirect(std::vector<GroupPtr> factors, std::vector<FactorAction> actions);

struct DescentWitness {
  std::size_t i = 0, j = 0;
  Elem a = 0, b = 0;
};

struct DescentResult {
  std::optional<std::vector<Elem>> map;
  std::optional<DescentWitness> witness;
};

/// Given homomorphisms f_i: A_i -> target (full image tables), checks
/// f_i(b.a) = f_j(b) f_i(a) f_j(b)^-1 for i < j and returns the induced map
/// (a_1, ..., a_n) -> f_1(a_1) ... f_n(a_n).
DescentResult hom_descends(const IteratedSemidirect& s, const FinGroup& target,
                           const std::vector<std::vector<Elem>>& f);

/// For subgroups H_1..H_n of G with H_j normalizing H_i (i < j), forms the
/// iterated semidirect product under conjugation and returns the image of
/// the induced map into G.
Subgroup internal_product(const FinGroup& g, const std::vector<Subgroup>& parts);

// ---------------------------------------------------------------------------

template <class T, class Mul, class Hash, class Eq>
Materialized<T> materialize(const std::vector<T>& gens, const T& one, Mul&& mul, std::size_t max_order) {
  Materialized<T> out;
  std::unordered_map<T, Elem, Hash, Eq> index;
  out.elements.push_back(one);
  index.emplace(one, 0);
  std::vector<T> gen_list;
  for (const T& g : gens)
    if (!Eq{}(g, one)) gen_list.push_back(g);
  const std::size_t r = gen_list.size();
  std::vector<Elem> cayley;  // cayley[x * r + k] = x * g_k
  std::vector<Elem> parent{0};
  std::vector<std::uint32_t> parent_gen{0};
  for (std::size_t x = 0; x < out.elements.size(); ++x) {
    for (std::size_t k = 0; k < r; ++k) {
      T y = mul(out.elements[x], gen_list[k]);
      auto it = index.find(y);
      Elem yi;
      if (it == index.end()) {
        if (out.elements.size() >= max_order) throw ResourceError("materialize: group exceeds order bound");
        yi = static_cast<Elem>(out.elements.size());
        index.emplace(y, yi);
        out.elements.push_back(std::move(y));
        parent.push_back(static_cast<Elem>(x));
        parent_gen.push_back(static_cast<std::uint32_t>(k));
      } else {
        yi = it->second;
      }
      cayley.push_back(yi);
    }
  }
  const std::size_t n = out.elements.size();
  std::vector<Elem> table(n * n);
  for (std::size_t i = 0; i < n; ++i) table[i * n] = static_cast<Elem>(i);
  for (std::size_t j = 1; j < n; ++j) {
    const std::size_t pj = parent[j], k = parent_gen[j];
    for (std::size_t i = 0; i < n; ++i) table[i * n + j] = cayley[table[i * n + pj] * r + k];
  }
  out.group = std::make_shared<const FinGroup>(n, std::move(table));
  for (const T& g : gens) out.generator_indices.push_back(index.at(g));
  return out;
}

}  // namespace heisweil::grp
