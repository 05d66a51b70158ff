#include <doctest.h>

#include "heisweil/errors.hpp"
#include "heisweil/reps.hpp"
#include "small_groups.hpp"

using namespace heisweil;
using namespace heisweil::reps;
using heis::HeisenbergGroup;
using heis::HeisType;

namespace {

HeisenbergGroup model(std::uint32_t p, unsigned n, HeisType t) { return HeisenbergGroup::standard_model(p, n, t); }

MonoRep trivial_rep(grp::GroupPtr g) {
  MonoRep r{g, 1, 1, {}};
  r.mats.assign(g->order(), MonoMatrix::identity(1, 1));
  return r;
}

// Faithful one-dimensional character of a cyclic subgroup, given a generator.
DenseRep cyclic_character(const grp::FinGroup& g, const grp::Subgroup& c, grp::Elem gen) {
  const auto sg = grp::as_group(g, c);
  const int n = static_cast<int>(c.order());
  DenseRep r{sg.group, 1, std::vector<CycMatrix>(c.order())};
  grp::Elem x = g.identity();
  for (int k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < sg.embedding.size(); ++i)
      if (sg.embedding[i] == x) {
        CycMatrix m(1, 1, n);
        m.at(0, 0) = CycScalar::zeta(n, k);
        r.mats[i] = m;
      }
    x = g.mul(x, gen);
  }
  return r;
}

std::vector<HeisenbergGroup> fs_grid() {
  return {model(2, 1, HeisType::positive), model(2, 1, HeisType::negative), model(2, 2, HeisType::positive),
          model(2, 2, HeisType::negative), model(2, 3, HeisType::positive), model(2, 3, HeisType::negative),
          model(3, 1, HeisType::odd),      model(3, 2, HeisType::odd),      model(5, 1, HeisType::odd)};
}

}  // namespace

TEST_CASE("Heisenberg representations in the smallest cases") {
  const auto d = heisenberg_rep(model(2, 1, HeisType::positive), 1);
  CHECK(d.rep.dim == 2);
  for (const auto& m : d.rep.mats)
    for (auto e : m.exps) CHECK((2 * e) % static_cast<std::uint32_t>(d.rep.conductor) == 0);
  CHECK(frobenius_schur(d.rep) == 1);

  const auto q = heisenberg_rep(model(2, 1, HeisType::negative), 1);
  CHECK(q.rep.dim == 2);
  CHECK(frobenius_schur(q.rep) == -1);

  for (std::uint32_t psi : {1u, 2u}) {
    const auto r = heisenberg_rep(model(3, 1, HeisType::odd), psi);
    CHECK(r.rep.dim == 3);
    CHECK(frobenius_schur(r.rep) == 0);
    CHECK_FALSE(r_structure(r.rep));
  }
  CHECK_THROWS_AS(heisenberg_rep(model(3, 1, HeisType::odd), 0), DomainError);
}

TEST_CASE("Heisenberg character is supported on the center") {
  for (const auto& g : {model(2, 2, HeisType::negative), model(3, 1, HeisType::odd), model(5, 1, HeisType::odd)}) {
    const std::uint32_t p = g.p();
    const auto r = heisenberg_rep(g, 1);
    const auto chi = character(r.rep);
    std::int64_t pn = 1;
    for (unsigned i = 0; i < g.n(); ++i) pn *= p;
    for (std::uint64_t i = 0; i < g.order(); ++i) {
      const auto x = g.element(i);
      const auto expected = g.is_central(x) ? CycScalar::zeta(static_cast<int>(p), x.a) * CycScalar::rational(static_cast<int>(p), pn)
                                            : CycScalar::zero(static_cast<int>(p));
      CHECK(chi.values[i] == expected.to_conductor(r.rep.conductor));
    }
    CHECK(inner_product(*r.rep.group, chi, chi) == CycScalar::one(r.rep.conductor));
    CHECK(is_irreducible(r.rep));
  }
}

TEST_CASE("character arithmetic on cyclic groups") {
  const auto z3 = testing::cyclic(3);
  const auto triv = trivial_rep(z3);
  CHECK(is_irreducible(triv));
  const auto reg = induce(*z3, grp::trivial(*z3), trivial_rep(grp::as_group(*z3, grp::trivial(*z3)).group));
  const auto chi = character(reg);
  CHECK(inner_product(*z3, chi, chi) == CycScalar::rational(1, 3).to_conductor(reg.conductor));

  const auto z2 = testing::cyclic(2);
  const auto reg2 = induce(*z2, grp::trivial(*z2), trivial_rep(grp::as_group(*z2, grp::trivial(*z2)).group));
  CHECK(reg2.dim == 2);
  const auto c2 = character(reg2);
  CHECK(c2.values[0] == CycScalar::rational(reg2.conductor, 2));
  CHECK(c2.values[1].is_zero());
}

TEST_CASE("Stone-von Neumann reports") {
  const auto q8 = verify_stone_von_neumann(model(2, 1, HeisType::negative), 1);
  CHECK(q8.ok());
  CHECK(q8.linear_characters == 4);
  CHECK(q8.dimension == 2);
  for (auto t : {HeisType::positive, HeisType::negative}) {
    const auto r = verify_stone_von_neumann(model(2, 2, t), 1);
    CHECK(r.ok());
    CHECK(r.linear_characters == 16);
    CHECK(r.dimension == 4);
    CHECK(r.conjugacy_classes == 17);
  }
  const auto z2 = verify_stone_von_neumann(model(2, 0, HeisType::positive), 1);
  CHECK(z2.ok());
  CHECK(z2.dimension == 1);
}

TEST_CASE("central character and restriction to the center") {
  for (const auto& g : fs_grid()) {
    const auto r = heisenberg_rep(g, 1);
    const auto z = grp::center(*r.rep.group);
    const auto res = restrict(r.rep, z);
    for (std::size_t i = 0; i < res.mats.size(); ++i) {
      const auto x = g.element(grp::as_group(*r.rep.group, z).embedding[i]);
      std::uint32_t e = 0;
      REQUIRE(res.mats[i].is_scalar(&e));
      CHECK(e == (x.a * (static_cast<std::uint32_t>(r.rep.conductor) / g.p())) % static_cast<std::uint32_t>(r.rep.conductor));
    }
  }
}

TEST_CASE("Frobenius-Schur table and R-structures") {
  for (const auto& g : fs_grid()) {
    const auto r = heisenberg_rep(g, 1);
    const int expected = g.p() != 2 ? 0 : g.type() == HeisType::positive ? 1 : -1;
    CHECK(frobenius_schur(r.rep) == expected);
    const auto j = r_structure(r.rep);
    CHECK(j.has_value() == (expected != 0));
    if (!j) continue;
    CHECK(j->sign == expected);
    CHECK(j->j * j->j.conj() == CycMatrix::identity(r.rep.dim, r.rep.conductor).scaled(CycScalar::rational(r.rep.conductor, expected)));
  }
}

TEST_CASE("R-structures of equivalent representations differ by a scalar") {
  for (auto t : {HeisType::positive, HeisType::negative}) {
    const auto r = heisenberg_rep(model(2, 2, t), 1).rep;
    const int n = r.conductor;
    MonoMatrix s = MonoMatrix::identity(r.dim, n);
    s.rows = {2, 0, 3, 1};
    s.exps = {1, 0, 3, 2};
    const MonoMatrix si = s.inverse();
    MonoRep conj = r;
    for (auto& m : conj.mats) m = s * m * si;
    const auto j1 = r_structure(r), j2 = r_structure(conj);
    REQUIRE(j1);
    REQUIRE(j2);
    // If J commutes with rho after conjugation, then S J conj(S)^-1 does so for S rho S^-1.
    const CycMatrix moved = s.dense() * j1->j * si.conj().dense();
    CHECK((moved.inverse() * j2->j).is_scalar());
    CHECK(j1->sign == j2->sign);
  }
}

TEST_CASE("intertwiners") {
  const auto r = heisenberg_rep(model(2, 2, HeisType::positive), 1);
  const auto self = intertwiner(r.rep, r.rep);
  REQUIRE(self);
  CycScalar value;
  CHECK(self->is_scalar(&value));
  CHECK(value == CycScalar::one(value.conductor()));

  // Twist by conjugation with a fixed element.
  const auto& g = *r.rep.group;
  const grp::Elem h = 2;
  MonoRep twisted = r.rep;
  for (grp::Elem x = 0; x < g.order(); ++x) twisted.mats[x] = r.rep.mats[g.conj(h, x)];
  CHECK(intertwiner(r.rep, twisted));

  const auto a = heisenberg_rep(model(3, 1, HeisType::odd), 1), b = heisenberg_rep(model(3, 1, HeisType::odd), 2);
  CHECK_FALSE(intertwiner(a.rep, b.rep));
}

TEST_CASE("invariants of a lifted isotropic line") {
  const auto g = heis::central_product(model(2, 1, HeisType::positive), model(2, 1, HeisType::positive));
  const auto r = partial_polarization_invariants(g, 1, {{1, 0, 0, 0}}, {{0, 1, 0, 0}});
  CHECK(r.invariant_dim == 2);
  CHECK(r.base_dim == 2);
  CHECK(r.equivalent);
}

TEST_CASE("Clifford decomposition") {
  const auto q8 = testing::quaternion();
  const auto z = grp::center(*q8);
  grp::Elem minus_one = 0;
  for (grp::Elem x : z.elems)
    if (x != q8->identity()) minus_one = x;
  const auto rq = clifford_decompose(*q8, z, cyclic_character(*q8, z, minus_one));
  REQUIRE(rq.components.size() == 1);
  CHECK(rq.components[0].sigma.dim == 2);
  CHECK(rq.components[0].multiplicity == 2);
  CHECK(rq.end_dim == 4);
  CHECK(rq.verified);

  const auto d8 = testing::d8();
  grp::Elem rot = 0;
  for (grp::Elem x = 0; x < d8->order(); ++x)
    if (d8->element_order(x) == 4) rot = x;
  const auto c4 = grp::generate(*d8, {rot});
  const auto rd = clifford_decompose(*d8, c4, cyclic_character(*d8, c4, rot));
  REQUIRE(rd.components.size() == 1);
  CHECK(rd.components[0].sigma.dim == 2);
  CHECK(rd.components[0].multiplicity == 1);
  CHECK(rd.end_dim == 1);

  const auto whole = clifford_decompose(*d8, grp::whole(*d8), to_dense(trivial_rep(d8)));
  REQUIRE(whole.components.size() == 1);
  CHECK(whole.components[0].multiplicity == 1);

  for (const auto* res : {&rq, &rd, &whole}) {
    std::size_t total = 0;
    for (const auto& c : res->components) total += c.multiplicity * c.sigma.dim;
    CHECK(total == res->induced_dim);
  }
}
