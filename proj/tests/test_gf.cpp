#include <doctest.h>

#include <random>

#include "heisweil/errors.hpp"
#include "heisweil/gf.hpp"

using namespace heisweil;
using namespace heisweil::gf;

TEST_CASE("prime field scalars") {
  CHECK(FpScalar(5, 3).inv().value == 2);
  CHECK((FpScalar(2, 1) + FpScalar(2, 1)).value == 0);
  CHECK(FpScalar(7, -1).value == 6);
  CHECK_THROWS_AS(FpScalar(5, 0).inv(), DomainError);
  CHECK(pow_mod(3, 4, 5) == 1);
  CHECK(is_prime(65521));
  CHECK_FALSE(is_prime(65535));
}

TEST_CASE("extension field multiplicative group") {
  for (u32 p : {2u, 3u, 5u})
    for (unsigned m = 1; m <= 3; ++m) {
      const auto f = FqField::make(p, m);
      for (u32 x = 1; x < f->q(); ++x) CHECK(f->pow(x, f->q() - 1) == 1);
    }
}

TEST_CASE("inverse property over random samples") {
  std::mt19937_64 rng(0);
  for (u32 p : {2u, 3u, 5u, 7u, 11u, 13u})
    for (unsigned m = 1; m <= 4; ++m) {
      const auto f = FqField::make(p, m);
      std::uniform_int_distribution<u32> pick(1, f->q() - 1);
      for (int k = 0; k < 200; ++k) {
        const u32 a = pick(rng);
        CHECK(f->mul(a, f->inv(a)) == 1);
      }
    }
}

TEST_CASE("norm and trace from F_4 to F_2") {
  const auto f = FqField::make(2, 2);
  for (u32 x = 1; x < 4; ++x) CHECK(f->norm_trace(x, 1).first == 1);
  CHECK(f->norm_trace(0, 1).first == 0);
  CHECK(f->norm_trace(1, 1).second == 0);
  CHECK_THROWS_AS(FqField::make(2, 3)->norm_trace(1, 2), DomainError);
}

TEST_CASE("trace additive and norm multiplicative, exhaustive") {
  const std::vector<std::pair<u32, unsigned>> fields = {{2, 2}, {2, 3}, {3, 2}, {2, 4}};
  for (const auto& [p, m] : fields) {
    const auto f = FqField::make(p, m);
    for (unsigned d = 1; d <= m; ++d) {
      if (m % d != 0) continue;
      for (u32 a = 0; a < f->q(); ++a)
        for (u32 b = 0; b < f->q(); ++b) {
          const auto [na, ta] = f->norm_trace(a, d);
          const auto [nb, tb] = f->norm_trace(b, d);
          CHECK(f->norm_trace(f->add(a, b), d).second == f->add(ta, tb));
          CHECK(f->norm_trace(f->mul(a, b), d).first == f->mul(na, nb));
          CHECK(f->in_subfield(na, d));
          CHECK(f->in_subfield(ta, d));
        }
    }
  }
}

TEST_CASE("vector indexing is lexicographic") {
  CHECK(vector_index({0, 1}, 2) == 1);
  CHECK(vector_index({1, 0}, 2) == 2);
  for (u64 i = 0; i < 27; ++i) CHECK(vector_index(vector_at(i, 3, 3), 3) == i);
}

TEST_CASE("solve_linear") {
  const FpMatrix id = FpMatrix::identity(3, 3);
  const auto s = solve_linear(id, {1, 2, 0});
  REQUIRE(s.solution);
  CHECK(*s.solution == FpVector{1, 2, 0});
  CHECK(s.kernel.empty());

  const FpMatrix zero(3, 2, 2);
  CHECK_FALSE(solve_linear(zero, {1, 0}).solution);

  CHECK(FpMatrix(2, 2, 2, {1, 1, 1, 1}).rank() == 1);
}

TEST_CASE("solve_linear solutions substitute exactly") {
  std::mt19937_64 rng(1);
  for (u32 p : {2u, 3u, 7u}) {
    std::uniform_int_distribution<u32> pick(0, p - 1);
    for (int trial = 0; trial < 50; ++trial) {
      FpMatrix a(p, 4, 5);
      for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 5; ++j) a.set(i, j, pick(rng));
      FpVector x(5);
      for (auto& c : x) c = pick(rng);
      const FpVector b = a * x;
      const auto s = solve_linear(a, b);
      REQUIRE(s.solution);
      CHECK(a * *s.solution == b);
      CHECK(s.kernel.size() == 5 - s.rank);
      for (const auto& k : s.kernel) CHECK(is_zero(a * k));
    }
  }
}

TEST_CASE("matrix inverse and determinant") {
  const FpMatrix m(5, 2, 2, {1, 2, 3, 4});
  CHECK(m.determinant() == 3);  // 4 - 6 = -2
  CHECK((m * m.inverse()).is_identity());
}
