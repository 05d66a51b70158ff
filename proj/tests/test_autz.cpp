#include <doctest.h>

#include <random>

#include "heisweil/autz.hpp"
#include "heisweil/errors.hpp"
#include "heisweil/weil.hpp"
#include "small_groups.hpp"

using namespace heisweil;
using namespace heisweil::autz;
using heis::HeisType;

namespace {

HeisPtr model(u32 p, unsigned n, HeisType t) { return share(HeisenbergGroup::standard_model(p, n, t)); }

unsigned order_of(const CentralAutomorphism& f) {
  CentralAutomorphism x = f;
  unsigned k = 1;
  while (!(x == CentralAutomorphism::identity(f.group))) {
    x = compose(x, f);
    ++k;
  }
  return k;
}

}  // namespace

TEST_CASE("group laws for central automorphisms") {
  const auto g = model(2, 2, HeisType::negative);
  const auto full = full_automorphism_group(g);
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<std::size_t> pick_f(0, full.elements.size() - 1);
  std::uniform_int_distribution<u64> pick_x(0, g->order() - 1);
  for (int t = 0; t < 100; ++t) {
    const auto& f = full.elements[pick_f(rng)];
    const auto x = g->element(pick_x(rng)), y = g->element(pick_x(rng));
    CHECK(f.apply(g->mul(x, y)) == g->mul(f.apply(x), f.apply(y)));
    CHECK(CentralAutomorphism::identity(g).apply(x) == x);
    CHECK(compose(f, invert(f)) == CentralAutomorphism::identity(g));
  }
}

TEST_CASE("inner automorphisms") {
  const auto q = model(2, 1, HeisType::negative);
  CHECK(inner(q, {0, 0}) == CentralAutomorphism::identity(q));
  const HeisElement x{0, {1, 0}}, y{0, {0, 1}};
  const auto direct = q->mul(q->mul(x, y), q->inv(x));
  CHECK(direct == HeisElement{1, {0, 1}});
  CHECK(inner(q, {1, 0}).apply(y) == direct);

  const auto g = model(3, 1, HeisType::odd);
  for (u64 i = 0; i < 9; ++i)
    for (u64 j = 0; j < 9; ++j) {
      const auto u = gf::vector_at(i, 2, 3), w = gf::vector_at(j, 2, 3);
      CHECK(compose(inner(g, u), inner(g, w)) == inner(g, gf::vadd(u, w, 3)));
      CHECK(project(inner(g, u)).is_identity());
    }
}

TEST_CASE("symplectic section for odd p") {
  const auto g = model(3, 1, HeisType::odd);
  const gf::FpMatrix rot(3, 2, 2, {0, 2, 1, 0});
  const auto f = section_odd(g, rot);
  CHECK_FALSE(automorphism_violation(f));
  for (auto m : f.mu) CHECK(m == 0);
  const gf::FpMatrix shear(3, 2, 2, {1, 1, 0, 1});
  const auto h = section_odd(g, shear);
  CHECK(section_odd(g, rot * shear) == compose(f, h));
  CHECK_THROWS_AS(section_odd(model(2, 1, HeisType::positive), gf::FpMatrix::identity(2, 2)), DomainError);
}

TEST_CASE("pointwise lifts in characteristic two") {
  const auto q = model(2, 1, HeisType::negative);
  const auto id = lift_pointwise(q, gf::FpMatrix::identity(2, 2));
  for (auto m : id.mu) CHECK(m == 0);

  const auto f = lift_pointwise(q, gf::FpMatrix(2, 2, 2, {0, 1, 1, 1}));
  CHECK_FALSE(automorphism_violation(f));
  const unsigned k = order_of(f);
  CHECK((k == 3 || k == 6));

  const auto d = model(2, 1, HeisType::positive);
  CHECK_FALSE(automorphism_violation(lift_pointwise(d, gf::FpMatrix(2, 2, 2, {0, 1, 1, 0}))));
  CHECK_THROWS_AS(lift_pointwise(d, gf::FpMatrix(2, 2, 2, {1, 1, 0, 1})), DomainError);
}

TEST_CASE("isometry group orders") {
  for (u32 p : {3u, 5u}) {
    const auto g = model(p, 1, HeisType::odd);
    CHECK(count_isometries(*g) == p * (p * p - 1));
    CHECK(isometry_order_formula(p, 1, HeisType::odd) == p * (p * p - 1));
  }
  CHECK(count_isometries(*model(2, 1, HeisType::positive)) == 2);
  CHECK(count_isometries(*model(2, 1, HeisType::negative)) == 6);
  CHECK(count_isometries(*model(2, 2, HeisType::positive)) == 72);
  CHECK(count_isometries(*model(2, 2, HeisType::negative)) == 120);
  for (unsigned n = 1; n <= 2; ++n)
    for (auto t : {HeisType::positive, HeisType::negative})
      CHECK(count_isometries(*model(2, n, t)) == isometry_order_formula(2, n, t));
}

TEST_CASE("exact sequence reports") {
  const auto d = exact_sequence_report(*model(2, 1, HeisType::positive));
  CHECK(d.aut_order == 8);
  REQUIRE(d.splits);
  CHECK(*d.splits);

  const auto q = exact_sequence_report(*model(2, 1, HeisType::negative));
  CHECK(q.aut_order == 24);
  REQUIRE(q.splits);
  CHECK(*q.splits);
  CHECK(grp::find_isomorphism(*full_automorphism_group(model(2, 1, HeisType::negative)).group, *testing::s4()));

  for (auto [t, image] : {std::pair{HeisType::positive, 72u}, std::pair{HeisType::negative, 120u}}) {
    const auto r = exact_sequence_report(*model(2, 2, t));
    CHECK(r.kernel_order == 16);
    CHECK(r.image_order == image);
    CHECK(r.aut_order == 16 * image);
    CHECK(r.kernel_is_inner);
    CHECK(r.image_is_full);
    CHECK(r.splits.has_value());
  }
  const auto odd = exact_sequence_report(*model(3, 1, HeisType::odd));
  CHECK(odd.aut_order == 9 * 24);
  REQUIRE(odd.splits);
  CHECK(*odd.splits);
}

TEST_CASE("projection has kernel the inner automorphisms") {
  for (const auto& g : {model(2, 1, HeisType::positive), model(2, 1, HeisType::negative), model(2, 2, HeisType::positive),
                        model(2, 2, HeisType::negative), model(3, 1, HeisType::odd)}) {
    const auto full = full_automorphism_group(g);
    CHECK(full.elements.size() == g->v_size() * count_isometries(*g));
    const HeisElement z{1, gf::FpVector(g->dim(), 0)};
    std::size_t kernel = 0;
    for (const auto& f : full.elements) {
      CHECK(f.apply(z) == z);
      if (!project(f).is_identity()) continue;
      ++kernel;
      bool is_inner = false;
      for (u64 i = 0; i < g->v_size() && !is_inner; ++i) is_inner = f == inner(g, gf::vector_at(i, g->dim(), g->p()));
      CHECK(is_inner);
    }
    CHECK(kernel == g->v_size());
    for (std::size_t a = 0; a < full.elements.size(); a += 7)
      for (std::size_t b = 0; b < full.elements.size(); b += 11) {
        const auto ab = compose(full.elements[a], full.elements[b]);
        CHECK(project(ab) == project(full.elements[a]) * project(full.elements[b]));
      }
  }
}

TEST_CASE("polarization stabilizer membership") {
  for (auto t : {HeisType::positive, HeisType::negative}) {
    const auto g = model(2, 2, t);
    const auto rep = reps::heisenberg_rep(*g, 1);
    const auto lift = weil::polarization_lift(rep);
    const auto& v0 = rep.polarization.zero;
    CHECK(stabilizer_membership(CentralAutomorphism::identity(g), lift, v0).member);
    for (const auto& u : rep.polarization.plus) CHECK(stabilizer_membership(inner(g, u), lift, v0).member);
    for (const auto& u : rep.polarization.minus) {
      const auto r = stabilizer_membership(inner(g, u), lift, v0);
      CHECK_FALSE(r.member);
      CHECK(r.witness.has_value());
    }

    const auto full = full_automorphism_group(g);
    std::vector<CentralAutomorphism> members;
    for (const auto& f : full.elements)
      if (stabilizer_membership(f, lift, v0).member) members.push_back(f);
    const auto in = [&](const CentralAutomorphism& f) {
      for (const auto& m : members)
        if (m == f) return true;
      return false;
    };
    for (const auto& f : members) {
      CHECK(in(invert(f)));
      for (const auto& h : members) CHECK(in(compose(f, h)));
    }
    CHECK(weil::polarization_stabilizer(rep).elements.size() == members.size());
  }
}
