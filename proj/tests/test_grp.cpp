#include <doctest.h>

#include <numeric>

#include "heisweil/errors.hpp"
#include "heisweil/grp.hpp"
#include "small_groups.hpp"

using namespace heisweil;
using namespace heisweil::grp;

using namespace heisweil::testing;

namespace {

bool cocycle_identity(const FinGroup& g, const std::vector<std::int64_t>& c, std::int64_t m) {
  const std::size_t n = g.order();
  for (Elem a = 0; a < n; ++a)
    for (Elem b = 0; b < n; ++b)
      for (Elem d = 0; d < n; ++d) {
        const auto lhs = c[a * n + b] + c[g.mul(a, b) * n + d];
        const auto rhs = c[b * n + d] + c[a * n + g.mul(b, d)];
        if ((lhs - rhs) % m != 0) return false;
      }
  return true;
}

}  // namespace

TEST_CASE("structure queries on small groups") {
  const auto q8 = quaternion();
  const auto rq = structure_queries(*q8);
  CHECK(rq.center.order() == 2);
  CHECK(rq.derived == rq.center);
  CHECK(rq.exponent == 4);
  CHECK(rq.classes.size() == 5);

  const auto rd = structure_queries(*d8());
  CHECK(rd.center.order() == 2);
  CHECK(rd.exponent == 4);
  CHECK_FALSE(find_isomorphism(*q8, *d8()));

  const auto z3 = cyclic(3);
  CHECK(abelianization_order(*direct_product(*z3, *z3)) == 9);
  CHECK(abelianization_order(*s4()) == 2);
}

TEST_CASE("sylow subgroups") {
  const auto g = s4();
  CHECK(sylow(*g, 2).order() == 8);
  CHECK(sylow(*g, 3).order() == 3);
  CHECK(sylow(*g, 5).order() == 1);
  const auto q8 = quaternion();
  CHECK(sylow(*q8, 2).order() == 8);
  CHECK(is_subgroup(*g, sylow(*g, 2)));
}

TEST_CASE("complements") {
  const auto z4 = cyclic(4);
  CHECK_FALSE(complement_exists(*z4, generate(*z4, {2})).complement);

  const auto g = s3();
  const auto a3 = derived_subgroup(*g);
  REQUIRE(a3.order() == 3);
  const auto r = complement_exists(*g, a3);
  REQUIRE(r.complement);
  CHECK(r.complement->order() == 2);

  const auto s = s4();
  const auto v4 = derived_subgroup(*as_group(*s, derived_subgroup(*s)).group);
  CHECK(v4.order() == 4);
  CHECK_THROWS_AS(complement_exists(*s, sylow(*s, 3)), DomainError);
}

TEST_CASE("complement certificates satisfy the product conditions") {
  for (const auto& g : {s3(), s4(), d8(), quaternion()}) {
    for (const auto& cls : conjugacy_classes(*g)) {
      const Subgroup n = generate(*g, cls);
      if (!is_normal(*g, n)) continue;
      const auto r = complement_exists(*g, n);
      if (!r.complement) continue;
      CHECK(r.complement->order() * n.order() == g->order());
      for (Elem x : r.complement->elems) CHECK((x == g->identity() || !n.contains(x)));
    }
  }
}

TEST_CASE("iterated semidirect with trivial actions is the direct product") {
  const auto z2 = cyclic(2), z4 = cyclic(4), z3 = cyclic(3);
  const auto s = iterated_semidirect({z2, z4, z3}, {});
  CHECK(s.group->order() == 24);
  const auto direct = direct_product(*direct_product(*z2, *z4), *z3);
  CHECK(exponent(*s.group) == exponent(*direct));
  CHECK(find_isomorphism(*s.group, *direct));

  // Commuting images descend.
  const auto target = cyclic(12);
  std::vector<Elem> f0 = {0, 6}, f1 = {0, 3, 6, 9}, f2 = {0, 4, 8};
  CHECK(hom_descends(s, *target, {f0, f1, f2}).map);
}

TEST_CASE("hom_descends reports non-commuting images") {
  const auto z2 = cyclic(2);
  const auto s = iterated_semidirect({z2, z2}, {});
  const auto target = s3();
  Elem t1 = 0, t2 = 0;
  for (Elem x = 1; x < 6; ++x)
    if (target->element_order(x) == 2) {
      if (t1 == 0) t1 = x;
      else if (target->mul(t1, x) != target->mul(x, t1)) t2 = x;
    }
  REQUIRE(t2 != 0);
  const auto r = hom_descends(s, *target, {{0, t1}, {0, t2}});
  CHECK_FALSE(r.map);
  REQUIRE(r.witness);
  CHECK(r.witness->a == 1);
  CHECK(r.witness->b == 1);
}

TEST_CASE("semidirect action violating the cocycle condition is rejected") {
  const auto z2 = cyclic(2), z3 = cyclic(3);
  // Z/2 acting on Z/3 by inversion gives S3.
  FactorAction inv{1, 0, {0, 1, 2, 0, 2, 1}};
  const auto s = iterated_semidirect({z3, z2}, {inv});
  CHECK(find_isomorphism(*s.group, *s3()));
  FactorAction bad{1, 0, {0, 1, 2, 1, 2, 0}};
  CHECK_THROWS_AS(iterated_semidirect({z3, z2}, {bad}), DomainError);
}

TEST_CASE("coboundary solver") {
  const auto v4 = direct_product(*cyclic(2), *cyclic(2));
  Cocycle2 zero{v4, 2, std::vector<std::int64_t>(16, 0)};
  const auto z = coboundary_solve(zero);
  REQUIRE(z.solvable);
  CHECK(coboundary(*v4, z.cochain, 2) == zero.values);

  // c(a, b) = a_1 b_2: the extension is D8, a nontrivial class.
  Cocycle2 c{v4, 2, std::vector<std::int64_t>(16)};
  for (Elem a = 0; a < 4; ++a)
    for (Elem b = 0; b < 4; ++b) c.values[a * 4 + b] = (a / 2) * (b % 2);
  REQUIRE(cocycle_identity(*v4, c.values, 2));
  bool oracle_solvable = false;
  for (unsigned mask = 0; mask < 16; ++mask) {
    bool ok = true;
    for (Elem a = 0; a < 4 && ok; ++a)
      for (Elem b = 0; b < 4 && ok; ++b) {
        const auto db = ((mask >> a) & 1) + ((mask >> b) & 1) + ((mask >> v4->mul(a, b)) & 1);
        ok = (db - c.values[a * 4 + b]) % 2 == 0;
      }
    oracle_solvable = oracle_solvable || ok;
  }
  CHECK_FALSE(oracle_solvable);
  const auto r = coboundary_solve(c);
  CHECK_FALSE(r.solvable);
  REQUIRE(r.sylow2_solvable);
  CHECK_FALSE(*r.sylow2_solvable);
}

TEST_CASE("every mod-2 cocycle on Z/3 is a coboundary") {
  const auto z3 = cyclic(3);
  std::size_t cocycles = 0;
  for (unsigned mask = 0; mask < 512; ++mask) {
    std::vector<std::int64_t> v(9);
    for (int k = 0; k < 9; ++k) v[k] = (mask >> k) & 1;
    if (!cocycle_identity(*z3, v, 2)) continue;
    ++cocycles;
    Cocycle2 c{z3, 2, v};
    const auto r = coboundary_solve(c);
    REQUIRE(r.solvable);
    CHECK(coboundary(*z3, r.cochain, 2) == v);
  }
  CHECK(cocycles > 1);
}

TEST_CASE("restriction of a solvable cocycle stays solvable") {
  const auto g = s4();
  std::vector<std::int64_t> b(24);
  for (std::size_t i = 0; i < 24; ++i) b[i] = static_cast<std::int64_t>((i * 7 + 3) % 4);
  Cocycle2 c{g, 4, coboundary(*g, b, 4)};
  REQUIRE(coboundary_solve(c).solvable);
  for (unsigned p : {2u, 3u}) {
    const auto h = as_group(*g, sylow(*g, p));
    const auto r = coboundary_solve(c.restrict(h));
    REQUIRE(r.solvable);
    CHECK(coboundary(*h.group, r.cochain, 4) == c.restrict(h).values);
  }
}

TEST_CASE("homomorphisms to cyclic groups") {
  CHECK(homomorphisms_to_cyclic(*s4(), 2).size() == 2);
  CHECK(homomorphisms_to_cyclic(*quaternion(), 2).size() == 4);
  CHECK(homomorphisms_to_cyclic(*cyclic(6), 4).size() == 2);
}
