#include <doctest.h>

#include <random>

#include "heisweil/errors.hpp"
#include "heisweil/heis.hpp"
#include "small_groups.hpp"

using namespace heisweil;
using namespace heisweil::heis;
using heisweil::testing::d8;
using heisweil::testing::quaternion;

namespace {

HeisenbergGroup model(u32 p, unsigned n, HeisType t) { return HeisenbergGroup::standard_model(p, n, t); }

std::size_t noncentral_involutions(const HeisenbergGroup& g) {
  std::size_t count = 0;
  for (u64 i = 0; i < g.order(); ++i) {
    const auto x = g.element(i);
    if (!g.is_central(x) && g.mul(x, x) == g.identity()) ++count;
  }
  return count;
}

bool g_commute(const HeisenbergGroup& g, const HeisElement& x, const HeisElement& y) {
  return g.commutator(x, y) == g.identity();
}

}  // namespace

TEST_CASE("build from a Gram matrix") {
  const auto dihedral = HeisenbergGroup::build(forms::BilinearForm(gf::FpMatrix(2, 2, 2, {0, 1, 0, 0})));
  CHECK(dihedral.order() == 8);
  CHECK(noncentral_involutions(dihedral) >= 2);
  CHECK(grp::find_isomorphism(*dihedral.fin_group(), *d8()));

  const auto quat = HeisenbergGroup::build(forms::BilinearForm(gf::FpMatrix(2, 2, 2, {1, 1, 0, 1})));
  CHECK(noncentral_involutions(quat) == 0);
  CHECK(grp::find_isomorphism(*quat.fin_group(), *quaternion()));

  const auto odd = model(3, 1, HeisType::odd);
  CHECK(odd.order() == 27);
  CHECK(grp::exponent(*odd.fin_group()) == 3);

  CHECK_THROWS_AS(HeisenbergGroup::build(forms::BilinearForm(gf::FpMatrix(2, 2, 2, {1, 0, 0, 1}))), DomainError);
}

TEST_CASE("squares in characteristic two") {
  const auto g = model(2, 2, HeisType::negative);
  for (u64 i = 0; i < g.order(); ++i) {
    const auto x = g.element(i);
    CHECK(g.mul(x, x) == HeisElement{g.B()(x.v, x.v), gf::FpVector(g.dim(), 0)});
  }
}

TEST_CASE("standard models") {
  CHECK(model(2, 2, HeisType::negative).order() == 32);
  CHECK(forms::classify(*model(2, 2, HeisType::negative).q()).kind == forms::FormKind::nonsplit);
  CHECK_THROWS_AS(model(2, 1, HeisType::odd), DomainError);
  CHECK_THROWS_AS(model(3, 1, HeisType::positive), DomainError);
  for (u32 p : {2u, 3u, 5u})
    for (unsigned n = 1; n <= 3; ++n) {
      if (p == 2) {
        CHECK(classify(model(p, n, HeisType::positive)) == HeisType::positive);
        CHECK(classify(model(p, n, HeisType::negative)) == HeisType::negative);
      } else {
        CHECK(classify(model(p, n, HeisType::odd)) == HeisType::odd);
      }
    }
}

TEST_CASE("induced forms") {
  const auto q8 = induced_forms(model(2, 1, HeisType::negative));
  REQUIRE(q8.q);
  CHECK(forms::count_zeros(*q8.q) == 1);
  const auto d = induced_forms(model(2, 1, HeisType::positive));
  REQUIRE(d.q);
  CHECK(forms::count_zeros(*d.q) == 3);
  for (u32 p : {3u, 5u}) {
    const auto g = model(p, 1, HeisType::odd);
    const auto f = induced_forms(g);
    CHECK_FALSE(f.q);
    CHECK(f.omega.is_nondegenerate());
    CHECK(f.omega == forms::associated_alternating(g.B()));
  }
}

TEST_CASE("central products and isomorphism") {
  const auto dd = model(2, 1, HeisType::positive), qq = model(2, 1, HeisType::negative);
  const auto qd = central_product(qq, dd);
  CHECK(qd.order() == 32);
  CHECK(classify(qd) == HeisType::negative);
  CHECK(classify(central_product(dd, dd)) == HeisType::positive);
  CHECK(classify(central_product(qq, qq)) == HeisType::positive);
  CHECK(is_isomorphic(central_product(dd, dd), central_product(qq, qq)));
  CHECK_FALSE(is_isomorphic(dd, qq));
  CHECK_THROWS_AS(central_product(dd, model(3, 1, HeisType::odd)), DomainError);
}

TEST_CASE("isomorphism is invariant under basis change") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<u32> bit(0, 1);
  for (auto t : {HeisType::positive, HeisType::negative}) {
    const auto g = model(2, 2, t);
    for (int trial = 0; trial < 10; ++trial) {
      gf::FpMatrix m(2, 4, 4);
      do {
        for (int i = 0; i < 4; ++i)
          for (int j = 0; j < 4; ++j) m.set(i, j, bit(rng));
      } while (m.rank() < 4);
      const auto h = HeisenbergGroup::build(g.B().pullback(m));
      CHECK(is_isomorphic(g, h));
      CHECK(classify(h) == t);
    }
  }
}

TEST_CASE("is_isomorphic agrees with the abstract oracle up to order 32") {
  const std::vector<HeisenbergGroup> groups = {model(2, 1, HeisType::positive), model(2, 1, HeisType::negative),
                                               model(3, 1, HeisType::odd), model(2, 2, HeisType::positive),
                                               model(2, 2, HeisType::negative)};
  for (std::size_t i = 0; i < groups.size(); ++i)
    for (std::size_t j = i; j < groups.size(); ++j) {
      if (groups[i].order() != groups[j].order()) continue;
      const bool oracle = grp::find_isomorphism(*groups[i].fin_group(), *groups[j].fin_group()).has_value();
      CHECK(is_isomorphic(groups[i], groups[j]) == oracle);
    }
}

TEST_CASE("commutator subgroup is the center") {
  const std::vector<HeisenbergGroup> groups = {
      model(2, 1, HeisType::positive), model(2, 2, HeisType::negative), model(2, 3, HeisType::positive),
      model(2, 4, HeisType::negative), model(3, 1, HeisType::odd),      model(3, 2, HeisType::odd),
      model(5, 1, HeisType::odd)};
  for (const auto& g : groups) {
    const auto fg = g.fin_group();
    const auto z = grp::center(*fg);
    CHECK(z.order() == g.p());
    CHECK(grp::derived_subgroup(*fg) == z);
    for (grp::Elem x = 0; x < fg->order(); ++x) CHECK(z.contains(fg->pow(x, g.p())));
  }
}

TEST_CASE("splittings of subspaces") {
  const auto dd = model(2, 1, HeisType::positive);
  CHECK(splitting(dd, {{1, 0}}).elements.size() == 2);
  CHECK_THROWS_AS(splitting(model(2, 1, HeisType::negative), {{1, 0}}), DomainError);
  const auto odd = model(3, 2, HeisType::odd);
  const auto s = splitting(odd, {{1, 0, 0, 0}, {0, 0, 1, 0}});
  CHECK(s.elements.size() == 9);
  for (const auto& x : s.elements)
    for (const auto& y : s.elements) CHECK(g_commute(odd, x, y));
}

TEST_CASE("a lifted isotropic line and the complementary factor form an internal product") {
  const auto g = central_product(model(2, 1, HeisType::positive), model(2, 1, HeisType::positive));
  const auto fg = g.fin_group();
  const auto lift = splitting(g, {{1, 0, 0, 0}});
  std::vector<grp::Elem> lift_idx, p0_idx;
  for (const auto& x : lift.elements) lift_idx.push_back(static_cast<grp::Elem>(g.index(x)));
  for (u32 a = 0; a < 2; ++a)
    for (u64 k = 0; k < 4; ++k) {
      const auto w = gf::vector_at(k, 2, 2);
      p0_idx.push_back(static_cast<grp::Elem>(g.index({a, {0, 0, w[0], w[1]}})));
    }
  const auto vplus = grp::make_subset(*fg, lift_idx);
  const auto p0 = grp::make_subset(*fg, p0_idx);
  REQUIRE(grp::is_subgroup(*fg, vplus));
  REQUIRE(grp::is_subgroup(*fg, p0));
  std::vector<grp::Elem> gens = lift_idx;
  gens.insert(gens.end(), p0_idx.begin(), p0_idx.end());
  const auto product = grp::internal_product(*fg, {vplus, p0});
  CHECK(product == grp::generate(*fg, gens));
  CHECK(product.order() == 16);
}
