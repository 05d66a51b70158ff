#pragma once

/// @file zmod.hpp
/// Linear systems over Z/N, solved per prime-power factor by a
/// Smith-style elimination and recombined by the Chinese remainder theorem.

#include <cstdint>
#include <vector>

namespace heisweil::zmod {

using i64 = std::int64_t;

struct ModSolution {
  bool solvable = false;
  std::vector<i64> solution;                 // one solution, entries in [0, N)
  std::vector<std::vector<i64>> kernel;      // generators of {x : A x = 0}
};

/// Solves rows * x = rhs (mod modulus) for `unknowns` unknowns.
ModSolution solve_mod(const std::vector<std::vector<i64>>& rows, const std::vector<i64>& rhs,
                      i64 modulus, std::size_t unknowns);

/// All elements of the subgroup of (Z/N)^k spanned by `gens`, sorted.
/// Throws ResourceError when more than `limit` elements would be produced.
std::vector<std::vector<i64>> enumerate_span(const std::vector<std::vector<i64>>& gens, i64 modulus,
                                             std::size_t unknowns, std::size_t limit = 1u << 20);

i64 mod_norm(i64 a, i64 m);
i64 gcd(i64 a, i64 b);
i64 lcm(i64 a, i64 b);

}  // namespace heisweil::zmod
