#include <doctest.h>

#include <set>

#include "heisweil/errors.hpp"
#include "heisweil/weil.hpp"

using namespace heisweil;
using namespace heisweil::weil;
using autz::HeisPtr;
using heis::HeisenbergGroup;
using heis::HeisType;

namespace {

HeisPtr model(std::uint32_t p, unsigned n, HeisType t) { return autz::share(HeisenbergGroup::standard_model(p, n, t)); }

AutGroup sylow2_of_stabilizer(const reps::HeisenbergRep& rep) {
  const auto st = polarization_stabilizer(rep);
  std::vector<CentralAutomorphism> gens;
  for (grp::Elem x : grp::generators(*st.group, grp::sylow(*st.group, 2))) gens.push_back(st.elements[x]);
  return autz::generate(st.heis, gens);
}

// Exhaustive search for b : A -> Z/N with b(x) + b(y) - b(xy) = c(x, y) (scaled to Z/N).
bool exhaustive_coboundary(const grp::Cocycle2& c, std::int64_t n) {
  const auto& g = *c.group;
  const std::size_t k = g.order();
  const std::int64_t scale = n / c.modulus;
  std::vector<std::int64_t> b(k, 0);
  for (;;) {
    bool ok = true;
    for (grp::Elem x = 0; x < k && ok; ++x)
      for (grp::Elem y = 0; y < k && ok; ++y)
        ok = ((b[x] + b[y] - b[g.mul(x, y)] - c(x, y) * scale) % n + n) % n == 0;
    if (ok) return true;
    std::size_t i = 0;
    while (i < k && ++b[i] == n) b[i++] = 0;
    if (i == k) return false;
  }
}

// W_a J = J conj(W_a) for every a.
bool commutes_with(const WeilLinearization& w, const CycMatrix& j) {
  for (const auto& m : w.w)
    if (!(m * j == j * m.conj())) return false;
  return true;
}

}  // namespace

TEST_CASE("trivial subgroup") {
  const auto g = model(2, 2, HeisType::negative);
  const auto rep = reps::heisenberg_rep(*g, 1);
  const auto a = autz::generate(g, {});
  const auto pw = projective_weil(rep, a);
  REQUIRE(pw.u.size() == 1);
  CHECK(pw.u[0] == CycMatrix::identity(rep.rep.dim, pw.u[0].max_conductor()));
  for (auto v : pw.c.values) CHECK(v == 0);
  const auto lin = linearize(pw);
  REQUIRE(lin.linearization);
  CHECK(verify_linearization(pw, *lin.linearization));
  CHECK(count_linearizations(pw) == 1);
  CHECK(linearize_via_polarization(pw).linearization.has_value());
}

TEST_CASE("inner automorphisms obstruct linearization") {
  for (const auto& g : {model(2, 1, HeisType::positive), model(2, 1, HeisType::negative), model(3, 1, HeisType::odd)}) {
    const auto rep = reps::heisenberg_rep(*g, 1);
    const auto pw = projective_weil(rep, autz::inner_subgroup(g));
    CHECK_FALSE(pw.c.violation());
    const auto lin = linearize(pw);
    CHECK_FALSE(lin.linearization);
    CHECK_FALSE(lin.certificate.solvable);
    if (g->p() == 2) CHECK_FALSE(exhaustive_coboundary(pw.c, lin.modulus));
    CHECK(count_linearizations(pw) == 0);
  }
}

TEST_CASE("an order-three isometry of Q8 linearizes") {
  const auto q = model(2, 1, HeisType::negative);
  const auto rep = reps::heisenberg_rep(*q, 1);
  const auto a = autz::generate(q, {autz::lift_pointwise(q, gf::FpMatrix(2, 2, 2, {0, 1, 1, 1}))});
  const auto pw = projective_weil(rep, a);
  const auto lin = linearize(pw);
  REQUIRE(lin.linearization);
  CHECK(verify_linearization(pw, *lin.linearization));
  if (a.elements.size() % 2 == 1) {
    const auto r = r_linearize(pw);
    CHECK(r.unique);
    CHECK(r.order_two_characters == 1);
  }
}

TEST_CASE("polarization path agrees with the cocycle path") {
  for (auto t : {HeisType::positive, HeisType::negative}) {
    const auto g = model(2, 2, t);
    const auto rep = reps::heisenberg_rep(*g, 1);
    const auto a = sylow2_of_stabilizer(rep);
    CHECK(a.elements.size() > 1);
    const auto pw = projective_weil(rep, a);
    const auto pol = linearize_via_polarization(pw);
    REQUIRE(pol.linearization);
    CHECK(verify_linearization(pw, *pol.linearization));
    const auto lin = linearize(pw);
    REQUIRE(lin.linearization);
    CHECK(twist_between(pw, *lin.linearization, *pol.linearization).has_value());
    const auto self = twist_between(pw, *lin.linearization, *lin.linearization);
    REQUIRE(self);
    CHECK(self->trivial());
  }
}

TEST_CASE("polarization path rejects automorphisms moving the lift") {
  const auto g = model(2, 2, HeisType::positive);
  const auto rep = reps::heisenberg_rep(*g, 1);
  const auto a = autz::generate(g, {autz::inner(g, rep.polarization.minus[0])});
  const auto r = linearize_via_polarization(projective_weil(rep, a));
  CHECK_FALSE(r.linearization);
  CHECK(r.violating.has_value());
  CHECK(r.membership.witness.has_value());
}

TEST_CASE("linearizations differ by characters of A") {
  const auto g = model(2, 2, HeisType::positive);
  const auto rep = reps::heisenberg_rep(*g, 1);
  const auto a = sylow2_of_stabilizer(rep);
  const auto pw = projective_weil(rep, a);
  const auto lin = linearize(pw);
  REQUIRE(lin.linearization);
  const auto chars = grp::homomorphisms_to_cyclic(*a.group, 2);
  CHECK(chars.size() > 1);
  for (const auto& chi : chars) {
    WeilLinearization other = *lin.linearization;
    for (std::size_t x = 0; x < other.w.size(); ++x)
      if (chi[x] % 2 != 0) other.w[x] = other.w[x].scaled(CycScalar::rational(1, -1));
    CHECK(verify_linearization(pw, other));
    const auto tw = twist_between(pw, *lin.linearization, other);
    REQUIRE(tw);
    for (std::size_t x = 0; x < chi.size(); ++x)
      CHECK(tw->exponents[x] == (chi[x] % 2) * (tw->modulus / 2));
  }
}

TEST_CASE("R-linearizations of an involution on D8") {
  const auto d = model(2, 1, HeisType::positive);
  const auto rep = reps::heisenberg_rep(*d, 1);
  const auto a = autz::generate(d, {autz::lift_pointwise(d, gf::FpMatrix(2, 2, 2, {0, 1, 1, 0}))});
  REQUIRE(a.elements.size() == 2);
  const auto pw = projective_weil(rep, a);
  const auto r = r_linearize(pw);
  CHECK(r.order_two_characters == 2);
  CHECK(r.solutions_found == 2);
  CHECK_FALSE(r.unique);
  CHECK(r.lin.flavor == Flavor::real);
  CHECK(verify_linearization(pw, r.lin));
  CHECK(commutes_with(r.lin, r.j.j));
  for (const auto& chi : grp::homomorphisms_to_cyclic(*a.group, 2)) {
    WeilLinearization flipped = r.lin;
    for (std::size_t x = 0; x < flipped.w.size(); ++x)
      if (chi[x] % 2 != 0) flipped.w[x] = flipped.w[x].scaled(CycScalar::rational(1, -1));
    CHECK(verify_linearization(pw, flipped));
    CHECK(commutes_with(flipped, r.j.j));
  }
}

TEST_CASE("no A5 inside Aut_Z of the order-32 negative group linearizes") {
  const auto g = model(2, 2, HeisType::negative);
  const auto rep = reps::heisenberg_rep(*g, 1);
  const auto full = autz::full_automorphism_group(g);
  const auto& table = *full.group;
  std::vector<grp::Elem> involutions, threes;
  for (grp::Elem x = 0; x < table.order(); ++x) {
    if (table.element_order(x) == 2) involutions.push_back(x);
    if (table.element_order(x) == 3) threes.push_back(x);
  }
  std::set<std::vector<grp::Elem>> seen;
  for (grp::Elem x : involutions)
    for (grp::Elem y : threes) {
      if (table.element_order(table.mul(x, y)) != 5) continue;
      const auto h = grp::generate(table, {x, y});
      if (h.order() != 60 || !seen.insert(h.elems).second) continue;
      const auto a = autz::generate(g, {full.elements[x], full.elements[y]});
      CHECK(grp::abelianization_order(*a.group) == 1);
      const auto pw = projective_weil(rep, a);
      const auto lin = linearize(pw);
      CHECK_FALSE(lin.certificate.solvable);
      const auto s2 = grp::as_group(*a.group, grp::sylow(*a.group, 2));
      CHECK_FALSE(exhaustive_coboundary(pw.c.restrict(s2), lin.modulus));
      CHECK_THROWS_AS(r_linearize(pw), DomainError);
    }
  CHECK(seen.size() == 16);
}

TEST_CASE("r_linearize rejects odd p") {
  const auto g = model(3, 1, HeisType::odd);
  const auto rep = reps::heisenberg_rep(*g, 1);
  CHECK_THROWS_AS(r_linearize(projective_weil(rep, autz::generate(g, {}))), DomainError);
}

TEST_CASE("Gerardin model counts") {
  for (std::uint32_t p : {3u, 5u}) {
    const gf::FpMatrix s(p, 2, 2, {1, 1, 0, 1}), l(p, 2, 2, {1, 0, 1, 1});
    CHECK(gerardin_weil(p, 1, {s, l}).count == (p == 3 ? 3u : 1u));
    CHECK(gerardin_weil(p, 1, {gf::FpMatrix::identity(p, 2)}).count == 1);
  }
  CHECK_THROWS_AS(gerardin_weil(2, 1, {gf::FpMatrix::identity(2, 2)}), DomainError);
}

TEST_CASE("special isomorphisms are unique up to conjugation") {
  const auto g = model(3, 1, HeisType::odd);
  const auto a = autz::generate(g, {});
  SpecialIsoHom f1, f2, bad;
  const heis::HeisElement w{0, {1, 2}};
  const auto rot = autz::section_odd(g, gf::FpMatrix(3, 2, 2, {0, 2, 1, 0}));
  for (std::uint64_t i = 0; i < g->order(); ++i) {
    const auto x = g->element(i);
    f1.phi.push_back(x);
    f2.phi.push_back(g->mul(g->mul(w, x), g->inv(w)));
    bad.phi.push_back(rot.apply(x));
  }
  const auto same = special_iso_uniqueness_check(a, *g, f1, f1);
  REQUIRE(same.h);
  CHECK(g->is_central(*same.h));
  const auto found = special_iso_uniqueness_check(a, *g, f1, f2);
  REQUIRE(found.h);
  CHECK(found.h->v == w.v);
  CHECK_THROWS_AS(special_iso_uniqueness_check(a, *g, f1, bad), DomainError);
}
