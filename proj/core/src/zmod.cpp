#include "heisweil/zmod.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "heisweil/errors.hpp"
#include "heisweil/gf.hpp"

namespace heisweil::zmod {

i64 mod_norm(i64 a, i64 m) {
  i64 r = a % m;
  return r < 0 ? r + m : r;
}

i64 gcd(i64 a, i64 b) { return std::gcd(a, b); }
i64 lcm(i64 a, i64 b) { return a / std::gcd(a, b) * b; }

namespace {

i64 mulm(i64 a, i64 b, i64 m) {
  return static_cast<i64>(static_cast<__int128>(a) * b % m);
}

i64 inverse(i64 a, i64 m) {
  i64 t = 0, nt = 1, r = m, nr = mod_norm(a, m);
  while (nr != 0) {
    i64 q = r / nr;
    t -= q * nt;
    std::swap(t, nt);
    r -= q * nr;
    std::swap(r, nr);
  }
  if (r != 1) throw InvariantError("zmod: inverse of a non-unit");
  return mod_norm(t, m);
}

struct PrimePowerResult {
  bool solvable = false;
  std::vector<i64> solution;
  std::vector<std::vector<i64>> kernel;
};

// Solves over Z/l^k with minimal-valuation pivoting.
PrimePowerResult solve_prime_power(std::vector<std::vector<i64>> a, std::vector<i64> b, i64 ell, int k,
                                   std::size_t r) {
  i64 mod = 1;
  for (int i = 0; i < k; ++i) mod *= ell;
  const std::size_t m = a.size();
  for (auto& row : a)
    for (auto& x : row) x = mod_norm(x, mod);
  for (auto& x : b) x = mod_norm(x, mod);

  auto val = [&](i64 x) {
    if (x == 0) return k;
    int v = 0;
    while (x % ell == 0) {
      x /= ell;
      ++v;
    }
    return v;
  };
  std::vector<i64> pw(k + 1, 1);
  for (int i = 1; i <= k; ++i) pw[i] = pw[i - 1] * ell;

  std::vector<std::vector<i64>> v(r, std::vector<i64>(r, 0));  // column transform
  for (std::size_t i = 0; i < r; ++i) v[i][i] = 1 % mod;

  std::vector<int> pivot_val;
  std::size_t t = 0;
  while (t < m && t < r) {
    int best = k;
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = t; i < m && best > 0; ++i)
      for (std::size_t j = t; j < r; ++j) {
        int vv = val(a[i][j]);
        if (vv < best) {
          best = vv;
          bi = i;
          bj = j;
          if (best == 0) break;
        }
      }
    if (best == k) break;
    std::swap(a[t], a[bi]);
    std::swap(b[t], b[bi]);
    if (bj != t) {
      for (std::size_t i = 0; i < m; ++i) std::swap(a[i][t], a[i][bj]);
      for (std::size_t i = 0; i < r; ++i) std::swap(v[i][t], v[i][bj]);
    }
    const i64 unit = a[t][t] / pw[best];
    const i64 uinv = inverse(unit, mod);
    for (std::size_t j = 0; j < r; ++j) a[t][j] = mulm(a[t][j], uinv, mod);
    b[t] = mulm(b[t], uinv, mod);
    for (std::size_t i = 0; i < m; ++i) {
      if (i == t || a[i][t] == 0) continue;
      const i64 s = a[i][t] / pw[best];
      for (std::size_t j = 0; j < r; ++j) a[i][j] = mod_norm(a[i][j] - mulm(s, a[t][j], mod), mod);
      b[i] = mod_norm(b[i] - mulm(s, b[t], mod), mod);
    }
    for (std::size_t j = t + 1; j < r; ++j) {
      if (a[t][j] == 0) continue;
      const i64 s = a[t][j] / pw[best];
      a[t][j] = 0;
      for (std::size_t i = 0; i < r; ++i) v[i][j] = mod_norm(v[i][j] - mulm(s, v[i][t], mod), mod);
    }
    pivot_val.push_back(best);
    ++t;
  }
  const std::size_t rank = t;
  PrimePowerResult out;
  for (std::size_t i = rank; i < m; ++i)
    if (b[i] != 0) return out;
  std::vector<i64> y(r, 0);
  for (std::size_t i = 0; i < rank; ++i) {
    if (val(b[i]) < pivot_val[i]) return out;
    y[i] = b[i] / pw[pivot_val[i]];
  }
  out.solvable = true;
  out.solution.assign(r, 0);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) out.solution[i] = mod_norm(out.solution[i] + mulm(v[i][j], y[j], mod), mod);
  auto push_column = [&](std::size_t col, i64 scale) {
    std::vector<i64> g(r);
    for (std::size_t i = 0; i < r; ++i) g[i] = mulm(v[i][col], scale, mod);
    if (std::any_of(g.begin(), g.end(), [](i64 x) { return x != 0; })) out.kernel.push_back(g);
  };
  for (std::size_t i = 0; i < rank; ++i)
    if (pivot_val[i] > 0) push_column(i, pw[k - pivot_val[i]]);
  for (std::size_t i = rank; i < r; ++i) push_column(i, 1);
  return out;
}

}  // namespace

ModSolution solve_mod(const std::vector<std::vector<i64>>& rows, const std::vector<i64>& rhs, i64 modulus,
                      std::size_t unknowns) {
  if (modulus < 1) throw DomainError("solve_mod: modulus must be positive");
  if (rows.size() != rhs.size()) throw DomainError("solve_mod: row/rhs count mismatch");
  for (const auto& row : rows)
    if (row.size() != unknowns) throw DomainError("solve_mod: row length mismatch");
  ModSolution out;
  out.solution.assign(unknowns, 0);
  if (modulus == 1) {
    out.solvable = true;
    return out;
  }
  out.solvable = true;
  for (gf::u64 ell64 : gf::prime_divisors(static_cast<gf::u64>(modulus))) {
    const i64 ell = static_cast<i64>(ell64);
    int k = 0;
    i64 pk = 1;
    for (i64 n = modulus; n % ell == 0; n /= ell) {
      ++k;
      pk *= ell;
    }
    PrimePowerResult part = solve_prime_power(rows, rhs, ell, k, unknowns);
    if (!part.solvable) {
      out.solvable = false;
      out.solution.clear();
      out.kernel.clear();
      return out;
    }
    // CRT idempotent: e = 1 mod pk, 0 mod modulus/pk.
    const i64 rest = modulus / pk;
    const i64 e = mulm(rest, inverse(mod_norm(rest, pk), pk), modulus);
    for (std::size_t i = 0; i < unknowns; ++i)
      out.solution[i] = mod_norm(out.solution[i] + mulm(part.solution[i], e, modulus), modulus);
    for (const auto& g : part.kernel) {
      std::vector<i64> lifted(unknowns);
      for (std::size_t i = 0; i < unknowns; ++i) lifted[i] = mulm(g[i], e, modulus);
      out.kernel.push_back(std::move(lifted));
    }
  }
  return out;
}

std::vector<std::vector<i64>> enumerate_span(const std::vector<std::vector<i64>>& gens, i64 modulus,
                                             std::size_t unknowns, std::size_t limit) {
  std::set<std::vector<i64>> seen;
  std::vector<std::vector<i64>> frontier{std::vector<i64>(unknowns, 0)};
  seen.insert(frontier.front());
  while (!frontier.empty()) {
    std::vector<std::vector<i64>> next;
    for (const auto& x : frontier)
      for (const auto& g : gens) {
        std::vector<i64> y(unknowns);
        for (std::size_t i = 0; i < unknowns; ++i) y[i] = mod_norm(x[i] + g[i], modulus);
        if (seen.insert(y).second) {
          if (seen.size() > limit) throw ResourceError("enumerate_span: span exceeds limit");
          next.push_back(std::move(y));
        }
      }
    frontier = std::move(next);
  }
  return {seen.begin(), seen.end()};
}

}  // namespace heisweil::zmod
