#include <doctest.h>

#include <algorithm>
#include <random>

#include "heisweil/errors.hpp"
#include "heisweil/rootdata.hpp"

using namespace heisweil;
using namespace heisweil::rootdata;

namespace {

const std::vector<std::string> kSmallTypes = {"A1", "A2", "A3", "A4", "B2", "B3", "B4", "C3",
                                              "C4", "D4", "G2", "F4", "A1+A1", "A1+B3"};

bool is_power_of(std::size_t n, u32 p) {
  while (n % p == 0) n /= p;
  return n == 1;
}

IntVector negate(IntVector v) {
  for (int& x : v) x = -x;
  return v;
}

}  // namespace

TEST_CASE("root systems are closed under negation and reflections") {
  for (const auto& label : kSmallTypes) {
    const auto r = make_root_system(label);
    CHECK(r.roots.size() == expected_root_count(label));
    CHECK(classify(r) == r.label);
    for (std::size_t a = 0; a < r.roots.size(); ++a) {
      CHECK(r.find(negate(r.roots[a])).has_value());
      for (std::size_t b = 0; b < r.roots.size(); ++b) {
        // s_a(b) = b - <b, a^v> a
        IntVector img = r.roots[b];
        const int k = r.pairing(b, a);
        for (std::size_t i = 0; i < img.size(); ++i) img[i] -= k * r.roots[a][i];
        CHECK(r.find(img).has_value());
      }
    }
  }
}

TEST_CASE("Weyl group orders") {
  const std::vector<std::pair<std::string, std::size_t>> orders = {
      {"A1", 2}, {"A2", 6}, {"A3", 24}, {"A4", 120}, {"B3", 48}, {"C2", 8},
      {"B4", 384}, {"D4", 192}, {"G2", 12}, {"F4", 1152}, {"A1+A1", 4}};
  for (const auto& [label, order] : orders) CHECK(weyl_group(make_root_system(label)).elements.size() == order);
}

TEST_CASE("label normalization") {
  CHECK(normalize_label("B2") == "C2");
  CHECK(normalize_label("C1") == "A1");
  CHECK(normalize_label("D3") == "A3");
  CHECK(normalize_label("D2") == "A1+A1");
  CHECK_THROWS_AS(make_root_system("E6"), DomainError);
  CHECK_THROWS_AS(torsion_primes("X3"), DomainError);
}

TEST_CASE("torsion primes") {
  using P = std::set<u32>;
  CHECK(torsion_primes("A3").empty());
  CHECK(torsion_primes("C4").empty());
  CHECK(torsion_primes("E8") == P{2, 3, 5});
  CHECK(torsion_primes("A3", 4) == P{2});
  CHECK(torsion_primes("A2", 3) == P{3});
  CHECK(torsion_primes("B3+G2") == P{2});
  CHECK(torsion_primes("F4+A1", 5) == P{2, 3, 5});

  const std::vector<std::pair<std::string, P>> table = {
      {"A_n", {}}, {"C_n", {}}, {"B_n", {2}}, {"D_n", {2}}, {"G_2", {2}},
      {"E_6", {2, 3}}, {"E_7", {2, 3}}, {"F_4", {2, 3}}, {"E_8", {2, 3, 5}}};
  const auto rows = torsion_table();
  REQUIRE(rows.size() == table.size());
  for (const auto& [family, primes] : table) {
    const auto it = std::find_if(rows.begin(), rows.end(), [&](const TorsionRow& r) { return r.family == family; });
    REQUIRE(it != rows.end());
    CHECK(it->primes == primes);
  }
}

TEST_CASE("torsion primes of Levi subsystems are torsion for the ambient system") {
  for (const std::string label : {"A1", "A2", "A3", "A4", "B2", "B3", "B4", "C2", "C3", "C4", "D4", "F4", "G2"}) {
    const auto r = make_root_system(label);
    const auto ambient = torsion_primes(r.label);
    for (unsigned mask = 0; mask < (1u << r.rank); ++mask) {
      std::vector<unsigned> subset;
      for (unsigned i = 0; i < r.rank; ++i)
        if (mask & (1u << i)) subset.push_back(i);
      const auto levi = levi_label(r, subset);
      if (levi.empty()) continue;
      for (u32 p : torsion_primes(levi)) CHECK(ambient.count(p) == 1);
    }
  }
}

TEST_CASE("Weyl centralizers in small cases") {
  // Nonvanishing functional on A1 over F_3.
  const auto a1 = make_root_system("A1");
  const auto wa1 = weyl_group(a1);
  const ResidueFunctional x1{3, 1, {{1}}};
  const auto c1 = weyl_centralizer(wa1, x1, {});
  CHECK(c1.centralizer.order() == 1);
  CHECK(c1.w_prime.order() == 1);
  CHECK(c1.ge2);
  CHECK(ge1_check(a1, x1, {}).holds);

  // A2 functional vanishing only on the first simple coroot; oracle by
  // permutations of the weight coordinates x = (0, 0, 1) mod 3.
  const auto a2 = make_root_system("A2");
  const auto x2 = functional_from_weights(a2, 3, {{0, 0, 1}});
  CHECK(x2.on_simple[0] == gf::FpVector{0});
  std::vector<int> sigma = {0, 1, 2};
  std::size_t oracle = 0;
  do {
    const int x[3] = {0, 0, 1};
    bool fixes = true;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        fixes = fixes && ((x[sigma[i]] - x[sigma[j]] - x[i] + x[j]) % 3 + 3) % 3 == 0;
    if (fixes) ++oracle;
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  const auto c2 = weyl_centralizer(weyl_group(a2), x2, {});
  CHECK(c2.centralizer.order() == oracle);
  CHECK(c2.w_prime.order() == 2);
  CHECK(c2.w_prime.elems == c2.centralizer.elems);

  const ResidueFunctional zero{2, 1, {{0}, {0}, {0}, {0}}};
  const auto d4 = make_root_system("D4");
  CHECK_FALSE(ge1_check(d4, zero, {}).holds);
}

TEST_CASE("GE1 failure witness for a single weight on D4") {
  const auto d4 = make_root_system("D4");
  const int s = d4.denominator;
  const auto x = functional_from_weights(d4, 2, {{s, s, 0, 0}});
  // Oracle: roots +-e_i +- e_j pair to zero mod 2 with e1 + e2 exactly when
  // {i, j} = {1, 2} or {i, j} = {3, 4}.
  std::vector<IntVector> zeros;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      for (int si : {1, -1})
        for (int sj : {1, -1}) {
          IntVector v(4, 0);
          v[i] = si;
          v[j] = sj;
          if ((v[0] + v[1]) % 2 == 0) zeros.push_back(v);
        }
  CHECK(zeros.size() == 8);
  const auto r = ge1_check(d4, x, {});
  CHECK_FALSE(r.holds);
  REQUIRE(r.witness);
  IntVector w = d4.roots[*r.witness];
  for (int& c : w) c /= s;
  CHECK(std::find(zeros.begin(), zeros.end(), w) != zeros.end());
  for (std::size_t a = 0; a < d4.roots.size(); ++a) {
    IntVector v = d4.roots[a];
    for (int& c : v) c /= s;
    const bool vanishes = gf::is_zero(evaluate_on_root(d4, x, a));
    CHECK(vanishes == (std::find(zeros.begin(), zeros.end(), v) != zeros.end()));
  }
}

TEST_CASE("centralizer quotients are p-groups") {
  std::mt19937_64 rng(7);
  for (const std::string label : {"A1", "A2", "A3", "A4", "B2", "B3", "B4", "C3", "C4", "D4", "G2", "F4", "A1+A1"}) {
    const auto r = make_root_system(label);
    const auto w = weyl_group(r);
    for (int t = 0; t < 1000; ++t) {
      const u32 p = std::array<u32, 3>{2, 3, 5}[t % 3];
      const unsigned symbols = 1 + static_cast<unsigned>(t % 3);
      std::uniform_int_distribution<u32> pick(0, p - 1);
      ResidueFunctional x{p, symbols, {}};
      for (unsigned i = 0; i < r.rank; ++i) {
        gf::FpVector v(symbols);
        for (auto& c : v) c = pick(rng);
        x.on_simple.push_back(v);
      }
      std::vector<std::size_t> phi_h;
      for (std::size_t a = 0; a < r.roots.size(); ++a)
        if (gf::is_zero(evaluate_on_root(r, x, a))) phi_h.push_back(a);
      const auto c = weyl_centralizer(w, x, phi_h);
      CHECK(c.centralizer.order() % c.w_prime.order() == 0);
      CHECK(c.quotient_order == c.centralizer.order() / c.w_prime.order());
      CHECK(is_power_of(c.quotient_order, p));
      CHECK(c.is_p_group);
      if (c.ge2) CHECK(c.quotient_order == 1);
    }
  }
}

TEST_CASE("Spin8 stabilizer") {
  const auto r = appendix_d_report();
  CHECK(r.weyl_order == 192);
  CHECK(r.stabilizer_order == 32);
  CHECK_FALSE(r.stabilizer_abelian);
  CHECK(r.stabilizer_normal);
  CHECK(r.equals_sign_klein_subgroup);
  CHECK(r.semidirect_isomorphic);
  CHECK(r.sum_in_twice_lattice);
  CHECK(r.w_prime_order == 1);
  CHECK(r.quotient_is_2_group);
  CHECK(r.ge1);
  CHECK_FALSE(r.ge2);
}

TEST_CASE("unipotent radicals and commutators") {
  CHECK(unipotent_commutator_check(MatrixGroupType::sl2, 4).holds);
  CHECK(unipotent_commutator_check(MatrixGroupType::sl2, 5).holds);
  CHECK_FALSE(unipotent_commutator_check(MatrixGroupType::sl2, 3).holds);
  CHECK_FALSE(unipotent_commutator_check(MatrixGroupType::sl2, 2).holds);
  for (auto t : {MatrixGroupType::sl2, MatrixGroupType::sl3, MatrixGroupType::sp4})
    for (u32 q : {4u, 5u, 7u, 8u}) {
      const auto c = unipotent_commutator_check(t, q);
      CHECK(c.holds);
      CHECK(c.commutator_order == c.unipotent_order);
    }
  CHECK_THROWS_AS(unipotent_commutator_check(MatrixGroupType::sl2, 6), DomainError);
  CHECK_THROWS_AS(unipotent_commutator_check(MatrixGroupType::sl2, 9), DomainError);
}

TEST_CASE("abelianizations of small matrix groups") {
  CHECK(abelianization_order_check(MatrixGroupType::sl2, 4) == 1);
  CHECK(abelianization_order_check(MatrixGroupType::sl2, 2) == 2);
  CHECK(abelianization_order_check(MatrixGroupType::gl2, 5) == 4);
  CHECK(abelianization_order_check(MatrixGroupType::sl2, 5) == 1);
  CHECK_THROWS_AS(abelianization_order_check(MatrixGroupType::sp4, 2), DomainError);
}

TEST_CASE("scalar restriction to U") {
  const auto s = scalar_restriction_suite(0, 100);
  CHECK(s.instances == 100);
  CHECK(s.violations == 0);
  CHECK(s.hypothesis_holds > 0);
  CHECK(s.control_nontrivial > 0);
  CHECK(s.passed());
}
