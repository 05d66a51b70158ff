#include <doctest.h>

#include <random>

#include "heisweil/errors.hpp"
#include "heisweil/forms.hpp"

using namespace heisweil;
using namespace heisweil::forms;

namespace {

FpMatrix random_invertible(u32 p, unsigned dim, std::mt19937_64& rng) {
  std::uniform_int_distribution<u32> pick(0, p - 1);
  for (;;) {
    FpMatrix m(p, dim, dim);
    for (unsigned i = 0; i < dim; ++i)
      for (unsigned j = 0; j < dim; ++j) m.set(i, j, pick(rng));
    if (m.rank() == dim) return m;
  }
}

// Independent zero count: enumerate every vector.
u64 brute_zeros(const QuadraticForm& q) {
  u64 count = 0;
  const u64 size = gf::space_size(q.p, q.dim);
  for (u64 i = 0; i < size; ++i)
    if (q(gf::vector_at(i, q.dim, q.p)) == 0) ++count;
  return count;
}

}  // namespace

TEST_CASE("associated alternating form") {
  CHECK(associated_alternating(BilinearForm(FpMatrix(2, 2, 2, {0, 1, 0, 0}))).gram == FpMatrix(2, 2, 2, {0, 1, 1, 0}));
  CHECK(associated_alternating(BilinearForm(FpMatrix(2, 2, 2, {1, 1, 1, 1}))).gram == FpMatrix(2, 2, 2));
  CHECK(associated_alternating(BilinearForm(FpMatrix(5, 2, 2, {1, 3, 3, 2}))).gram == FpMatrix(5, 2, 2));
}

TEST_CASE("associated alternating form has zero diagonal") {
  for (u32 p : {2u, 3u, 5u})
    for (unsigned dim = 1; dim <= 2; ++dim) {
      const u64 count = gf::space_size(p, dim * dim);
      for (u64 i = 0; i < count; ++i) {
        const auto g = gf::vector_at(i, dim * dim, p);
        const auto w = associated_alternating(BilinearForm(FpMatrix(p, dim, dim, g)));
        CHECK(w.is_alternating());
      }
    }
  std::mt19937_64 rng(2);
  for (u32 p : {2u, 3u, 5u}) {
    std::uniform_int_distribution<u32> pick(0, p - 1);
    for (int t = 0; t < 30; ++t) {
      FpMatrix g(p, 8, 8);
      for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) g.set(i, j, pick(rng));
      CHECK(associated_alternating(BilinearForm(g)).is_alternating());
    }
  }
}

TEST_CASE("polar form") {
  QuadraticForm sq(2, 1);
  sq.diag[0] = 1;
  CHECK(polar_form(sq).gram == FpMatrix(2, 1, 1));

  QuadraticForm hyp(2, 2);
  hyp.upper.set(0, 1, 1);
  CHECK(polar_form(hyp).gram == FpMatrix(2, 2, 2, {0, 1, 1, 0}));

  QuadraticForm sq3(3, 1);
  sq3.diag[0] = 1;
  CHECK(polar_form(sq3).gram(0, 0) == 2);
}

TEST_CASE("classification of standard models") {
  for (unsigned n = 1; n <= 4; ++n) {
    CHECK(classify(standard_split(2, n)) == FormClass{FormKind::split, n});
    CHECK(classify(standard_nonsplit(2, n)) == FormClass{FormKind::nonsplit, n - 1});
  }
  CHECK(classify(QuadraticForm(2, 2)).kind == FormKind::degenerate);
  CHECK_THROWS(classify(QuadraticForm(2, 3)));
}

TEST_CASE("zero counts") {
  QuadraticForm hyp(2, 2);
  hyp.upper.set(0, 1, 1);
  CHECK(count_zeros(hyp) == 3);
  CHECK(count_zeros(norm_form(2)) == 1);
  CHECK(count_zeros(norm_trace_form(4)) == 6);
}

TEST_CASE("zero count decides split type") {
  for (unsigned n = 1; n <= 4; ++n) {
    const u64 split = (u64{1} << (2 * n - 1)) + (u64{1} << (n - 1));
    const u64 nonsplit = (u64{1} << (2 * n - 1)) - (u64{1} << (n - 1));
    for (const auto& q : {standard_split(2, n), standard_nonsplit(2, n)}) {
      const u64 zeros = brute_zeros(q);
      CHECK(count_zeros(q) == zeros);
      const auto c = classify(q);
      CHECK((zeros == split) == (c.kind == FormKind::split));
      CHECK((zeros == nonsplit) == (c.kind == FormKind::nonsplit));
    }
  }
}

TEST_CASE("classification is invariant under basis change") {
  std::mt19937_64 rng(3);
  for (unsigned n = 1; n <= 3; ++n)
    for (int t = 0; t < 10; ++t) {
      const auto m = random_invertible(2, 2 * n, rng);
      for (const auto& q : {standard_split(2, n), standard_nonsplit(2, n)}) {
        const auto pulled = q.pullback(m);
        CHECK(classify(pulled) == classify(q));
        CHECK(count_zeros(pulled) == count_zeros(q));
      }
    }
}

TEST_CASE("polarizations") {
  const auto sp = find_polarization(standard_symplectic(3, 2));
  CHECK(sp.zero.empty());
  CHECK(sp.plus.size() == 2);

  for (unsigned n = 1; n <= 3; ++n) {
    const auto split = find_polarization(standard_split(2, n));
    CHECK(split.zero.empty());
    CHECK(split.plus.size() == n);
    CHECK(split.minus.size() == n);

    const auto q = standard_nonsplit(2, n);
    const auto ns = find_polarization(q);
    CHECK(ns.zero.size() == 2);
    CHECK(ns.plus.size() == witt_index(q));
    // Restriction to V0 is anisotropic.
    for (u32 a = 0; a < 2; ++a)
      for (u32 b = 0; b < 2; ++b) {
        if (a == 0 && b == 0) continue;
        CHECK(q(gf::vadd(gf::vscale(ns.zero[0], a, 2), gf::vscale(ns.zero[1], b, 2), 2)) != 0);
      }
    for (const auto& u : ns.plus) CHECK(q(u) == 0);
    for (const auto& u : ns.minus) CHECK(q(u) == 0);
  }
  CHECK_THROWS_AS(find_polarization(BilinearForm(2, 2)), DomainError);
}

TEST_CASE("symplectic basis") {
  const auto std4 = standard_symplectic(2, 2);
  const auto m = symplectic_basis(std4);
  CHECK(std4.pullback(m) == std4);

  std::mt19937_64 rng(4);
  for (int t = 0; t < 20; ++t) {
    const auto g = std4.pullback(random_invertible(2, 4, rng));
    const auto b = symplectic_basis(g);
    CHECK(g.pullback(b) == std4);
  }
  CHECK_THROWS(symplectic_basis(BilinearForm(2, 2)));
}
