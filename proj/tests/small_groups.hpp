#pragma once

#include <memory>
#include <numeric>
#include <vector>

#include "heisweil/grp.hpp"

// Small groups built directly from permutations or explicit tables.
namespace heisweil::testing {

using grp::Elem;
using grp::FinGroup;
using grp::GroupPtr;
using grp::materialize;

inline GroupPtr cyclic(std::size_t n) {
  std::vector<Elem> t(n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) t[a * n + b] = static_cast<Elem>((a + b) % n);
  return std::make_shared<const FinGroup>(n, t);
}

using Perm = std::vector<int>;

inline Perm pmul(const Perm& a, const Perm& b) {  // apply b first
  Perm out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[b[i]];
  return out;
}

struct PermHash {
  std::size_t operator()(const Perm& p) const {
    std::size_t h = 0;
    for (int x : p) h = h * 31 + static_cast<std::size_t>(x);
    return h;
  }
};

inline GroupPtr perm_group(const std::vector<Perm>& gens) {
  Perm id(gens[0].size());
  std::iota(id.begin(), id.end(), 0);
  return materialize<Perm, decltype(&pmul), PermHash>(gens, id, &pmul).group;
}

inline GroupPtr quaternion() {
  // Elements (sign, unit) with unit in {1, i, j, k}.
  static const int unit[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  static const int sign[4][4] = {{0, 0, 0, 0}, {0, 1, 0, 1}, {0, 1, 1, 0}, {0, 0, 1, 1}};
  std::vector<Elem> t(64);
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b) {
      const int s = (a / 4 + b / 4 + sign[a % 4][b % 4]) % 2;
      t[a * 8 + b] = static_cast<Elem>(4 * s + unit[a % 4][b % 4]);
    }
  return std::make_shared<const FinGroup>(8, t);
}

inline GroupPtr direct_product(const FinGroup& a, const FinGroup& b) {
  const std::size_t n = a.order() * b.order();
  std::vector<Elem> t(n * n);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      t[x * n + y] = static_cast<Elem>(a.mul(x / b.order(), y / b.order()) * b.order() + b.mul(x % b.order(), y % b.order()));
  return std::make_shared<const FinGroup>(n, t);
}


inline GroupPtr s3() { return perm_group({{1, 0, 2}, {1, 2, 0}}); }
inline GroupPtr s4() { return perm_group({{1, 0, 2, 3}, {1, 2, 3, 0}}); }
inline GroupPtr d8() { return perm_group({{1, 2, 3, 0}, {0, 3, 2, 1}}); }

}  // namespace heisweil::testing
