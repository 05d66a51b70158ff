#include "heisweil/rootdata.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <deque>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "heisweil/autz.hpp"
#include "heisweil/errors.hpp"
#include "heisweil/heis.hpp"
#include "heisweil/reps.hpp"
#include "heisweil/weil.hpp"

namespace heisweil::rootdata {

namespace {

struct Component {
  char family = 'A';
  unsigned rank = 1;
};

std::string component_name(const Component& c) { return std::string(1, c.family) + std::to_string(c.rank); }

// Rewrites low-rank coincidences; D2 becomes two A1 components.
std::vector<Component> normalize_component(Component c) {
  switch (c.family) {
    case 'B':
    case 'C':
      if (c.rank == 1) return {{'A', 1}};
      if (c.rank == 2) return {{'C', 2}};
      return {c};
    case 'D':
      if (c.rank == 2) return {{'A', 1}, {'A', 1}};
      if (c.rank == 3) return {{'A', 3}};
      return {c};
    default:
      return {c};
  }
}

bool component_order(const Component& a, const Component& b) {
  return a.family != b.family ? a.family < b.family : a.rank < b.rank;
}

std::vector<Component> parse_label(const std::string& label) {
  std::vector<Component> out;
  std::stringstream ss(label);
  std::string part;
  while (std::getline(ss, part, '+')) {
    std::string s;
    for (char ch : part)
      if (!std::isspace(static_cast<unsigned char>(ch)) && ch != '_') s.push_back(ch);
    require(s.size() >= 2, "unknown root system type '" + part + "'");
    Component c;
    c.family = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
    const std::string digits = s.substr(1);
    require(std::all_of(digits.begin(), digits.end(), [](char d) { return std::isdigit(static_cast<unsigned char>(d)); }),
            "unknown root system type '" + part + "'");
    require(digits.size() <= 3, "unknown root system type '" + part + "'");
    c.rank = static_cast<unsigned>(std::stoul(digits));
    bool ok = c.rank >= 1;
    switch (c.family) {
      case 'A': case 'B': case 'C': break;
      case 'D': ok = ok && c.rank >= 2; break;
      case 'E': ok = ok && c.rank >= 6 && c.rank <= 8; break;
      case 'F': ok = ok && c.rank == 4; break;
      case 'G': ok = ok && c.rank == 2; break;
      default: ok = false;
    }
    require(ok, "unknown root system type '" + part + "'");
    for (const Component& n : normalize_component(c)) out.push_back(n);
  }
  require(!out.empty(), "empty root system label");
  std::sort(out.begin(), out.end(), component_order);
  return out;
}

std::string join(const std::vector<Component>& cs) {
  std::string s;
  for (const Component& c : cs) {
    if (!s.empty()) s += "+";
    s += component_name(c);
  }
  return s;
}

u64 component_root_count(const Component& c) {
  const u64 n = c.rank;
  switch (c.family) {
    case 'A': return n * (n + 1);
    case 'B': case 'C': return 2 * n * n;
    case 'D': return 2 * n * (n - 1);
    case 'E': return n == 6 ? 72 : n == 7 ? 126 : 240;
    case 'F': return 48;
    default: return 12;
  }
}

// Simple roots of one component in its own coordinates, scaled by 2 when
// `twice` is set.
std::vector<IntVector> component_simple_roots(const Component& c, bool twice) {
  const unsigned n = c.rank;
  std::vector<IntVector> out;
  auto e = [](unsigned dim, std::initializer_list<std::pair<unsigned, int>> terms) {
    IntVector v(dim, 0);
    for (auto [i, x] : terms) v[i] += x;
    return v;
  };
  switch (c.family) {
    case 'A':
      for (unsigned i = 0; i < n; ++i) out.push_back(e(n + 1, {{i, 1}, {i + 1, -1}}));
      break;
    case 'B':
      for (unsigned i = 0; i + 1 < n; ++i) out.push_back(e(n, {{i, 1}, {i + 1, -1}}));
      out.push_back(e(n, {{n - 1, 1}}));
      break;
    case 'C':
      for (unsigned i = 0; i + 1 < n; ++i) out.push_back(e(n, {{i, 1}, {i + 1, -1}}));
      out.push_back(e(n, {{n - 1, 2}}));
      break;
    case 'D':
      for (unsigned i = 0; i + 1 < n; ++i) out.push_back(e(n, {{i, 1}, {i + 1, -1}}));
      out.push_back(e(n, {{n - 2, 1}, {n - 1, 1}}));
      break;
    case 'G':
      out.push_back({1, -1, 0});
      out.push_back({-2, 1, 1});
      break;
    case 'F':
      // Already doubled; callers pass twice = false.
      out.push_back({0, 2, -2, 0});
      out.push_back({0, 0, 2, -2});
      out.push_back({0, 0, 0, 2});
      out.push_back({1, -1, -1, -1});
      return out;
    default:
      throw DomainError("no root data for " + component_name(c));
  }
  if (twice)
    for (auto& v : out)
      for (int& x : v) x *= 2;
  return out;
}

int dot(const IntVector& a, const IntVector& b) {
  int s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

struct IntVectorHash {
  std::size_t operator()(const IntVector& v) const {
    std::size_t h = 1469598103934665603ull;
    for (int x : v) h = (h ^ static_cast<std::size_t>(static_cast<unsigned>(x))) * 1099511628211ull;
    return h;
  }
};

// Dynkin components of a subset of simple roots.
std::vector<std::vector<unsigned>> dynkin_components(const RootSystem& r, const std::vector<unsigned>& subset) {
  std::vector<std::vector<unsigned>> comps;
  std::vector<char> seen(r.rank, 0);
  for (unsigned s : subset) {
    if (seen[s]) continue;
    std::vector<unsigned> comp{s};
    seen[s] = 1;
    for (std::size_t k = 0; k < comp.size(); ++k)
      for (unsigned t : subset)
        if (!seen[t] && r.pairing(comp[k], t) != 0) {
          seen[t] = 1;
          comp.push_back(t);
        }
    std::sort(comp.begin(), comp.end());
    comps.push_back(comp);
  }
  return comps;
}

Component identify_component(const RootSystem& r, const std::vector<unsigned>& comp) {
  std::vector<char> in(r.rank, 0);
  for (unsigned s : comp) in[s] = 1;
  std::map<int, unsigned> by_length;
  unsigned count = 0;
  for (std::size_t a = 0; a < r.roots.size(); ++a) {
    bool inside = true;
    for (unsigned i = 0; i < r.rank && inside; ++i)
      if (r.root_coords[a][i] != 0 && !in[i]) inside = false;
    if (!inside) continue;
    ++count;
    ++by_length[dot(r.roots[a], r.roots[a])];
  }
  const unsigned k = static_cast<unsigned>(comp.size());
  if (by_length.size() == 1) {
    if (count == k * (k + 1)) return {'A', k};
    if (count == 2 * k * (k - 1)) return {'D', k};
  } else {
    if (k == 2 && count == 12) return {'G', 2};
    if (k == 4 && count == 48) return {'F', 4};
    if (count == 2 * k * k) {
      const unsigned short_count = by_length.begin()->second;
      if (k == 2) return {'C', 2};
      return short_count == 2 * k ? Component{'B', k} : Component{'C', k};
    }
  }
  throw InvariantError("unrecognized root subsystem");
}

std::string label_of_subset(const RootSystem& r, const std::vector<unsigned>& subset) {
  std::vector<Component> cs;
  for (const auto& comp : dynkin_components(r, subset)) cs.push_back(identify_component(r, comp));
  std::sort(cs.begin(), cs.end(), component_order);
  return join(cs);
}

bool is_prime_power_of(std::size_t n, u32 p) {
  while (n % p == 0) n /= p;
  return n == 1;
}

}  // namespace

// ---------------------------------------------------------------------------

int RootSystem::pairing(std::size_t a, std::size_t b) const {
  return 2 * dot(roots[a], roots[b]) / dot(roots[b], roots[b]);
}

bool RootSystem::is_positive(std::size_t a) const {
  return std::all_of(root_coords[a].begin(), root_coords[a].end(), [](int c) { return c >= 0; });
}

std::optional<std::size_t> RootSystem::find(const IntVector& scaled) const {
  for (std::size_t a = 0; a < roots.size(); ++a)
    if (roots[a] == scaled) return a;
  return std::nullopt;
}

std::string normalize_label(const std::string& label) { return join(parse_label(label)); }

std::size_t expected_root_count(const std::string& label) {
  std::size_t n = 0;
  for (const Component& c : parse_label(label)) n += component_root_count(c);
  return n;
}

RootSystem make_root_system(const std::string& label) {
  const auto comps = parse_label(label);
  bool twice = false;
  for (const Component& c : comps) {
    bool ok = false;
    switch (c.family) {
      case 'A': case 'B': case 'C': case 'D': ok = c.rank <= 4; break;
      case 'F': case 'G': ok = true; break;
      default: break;
    }
    require(ok, "root data for " + component_name(c) + " is not tabulated (torsion primes only)");
    if (c.family == 'F') twice = true;
  }
  RootSystem r;
  r.label = join(comps);
  r.denominator = twice ? 2 : 1;
  std::vector<std::vector<IntVector>> blocks;
  for (const Component& c : comps) {
    blocks.push_back(component_simple_roots(c, twice && c.family != 'F'));
    r.ambient_dim += static_cast<unsigned>(blocks.back().front().size());
  }
  std::vector<IntVector> simple;
  unsigned offset = 0;
  for (const auto& b : blocks) {
    for (const IntVector& v : b) {
      IntVector w(r.ambient_dim, 0);
      std::copy(v.begin(), v.end(), w.begin() + offset);
      simple.push_back(w);
    }
    offset += static_cast<unsigned>(b.front().size());
  }
  r.rank = static_cast<unsigned>(simple.size());

  std::unordered_map<IntVector, std::size_t, IntVectorHash> index;
  for (unsigned i = 0; i < r.rank; ++i) {
    r.roots.push_back(simple[i]);
    IntVector unit(r.rank, 0);
    unit[i] = 1;
    r.root_coords.push_back(unit);
    r.coroot_coords.push_back(unit);
    index.emplace(simple[i], i);
  }
  for (std::size_t a = 0; a < r.roots.size(); ++a) {
    for (unsigned i = 0; i < r.rank; ++i) {
      const IntVector& x = r.roots[a];
      const int xa = 2 * dot(x, simple[i]) / dot(simple[i], simple[i]);   // <x, a_i^vee>
      const int ax = 2 * dot(simple[i], x) / dot(x, x);                   // <a_i, x^vee>
      IntVector y = x;
      for (unsigned k = 0; k < r.ambient_dim; ++k) y[k] -= xa * simple[i][k];
      if (index.count(y)) continue;
      IntVector rc = r.root_coords[a], cc = r.coroot_coords[a];
      rc[i] -= xa;
      cc[i] -= ax;
      index.emplace(y, r.roots.size());
      r.roots.push_back(std::move(y));
      r.root_coords.push_back(std::move(rc));
      r.coroot_coords.push_back(std::move(cc));
    }
  }
  check_invariant(r.roots.size() == expected_root_count(r.label), "root count does not match the type of " + r.label);
  return r;
}

std::string levi_label(const RootSystem& r, const std::vector<unsigned>& simple_subset) {
  for (unsigned s : simple_subset) require(s < r.rank, "simple root index out of range");
  return label_of_subset(r, simple_subset);
}

std::string classify(const RootSystem& r) {
  std::vector<unsigned> all(r.rank);
  std::iota(all.begin(), all.end(), 0u);
  return label_of_subset(r, all);
}

// ---------------------------------------------------------------------------

std::set<u32> torsion_primes(const std::string& label, u64 pi1_torsion_order) {
  require(pi1_torsion_order >= 1, "fundamental group torsion order must be positive");
  std::set<u32> out;
  for (const Component& c : parse_label(label)) {
    switch (c.family) {
      case 'B': case 'D': case 'G':
        out.insert(2);
        break;
      case 'E':
        out.insert({2, 3});
        if (c.rank == 8) out.insert(5);
        break;
      case 'F':
        out.insert({2, 3});
        break;
      default:
        break;
    }
  }
  for (u64 q : gf::prime_divisors(pi1_torsion_order)) out.insert(static_cast<u32>(q));
  return out;
}

std::vector<TorsionRow> torsion_table() {
  return {{"A_n", {}},        {"B_n", {2}},       {"C_n", {}},
          {"D_n", {2}},       {"G_2", {2}},       {"F_4", {2, 3}},
          {"E_6", {2, 3}},    {"E_7", {2, 3}},    {"E_8", {2, 3, 5}}};
}

// ---------------------------------------------------------------------------

IntMatrix reflection_matrix(const RootSystem& r, std::size_t root) {
  const unsigned n = r.rank;
  IntMatrix m(n * n, 0);
  for (unsigned i = 0; i < n; ++i) {
    m[i * n + i] = 1;
    const int c = r.pairing(root, i);
    for (unsigned k = 0; k < n; ++k) m[k * n + i] -= c * r.coroot_coords[root][k];
  }
  return m;
}

IntVector WeylGroup::act(Elem w, const IntVector& coroot) const {
  const unsigned n = roots.rank;
  const IntMatrix& m = elements[w];
  IntVector out(n, 0);
  for (unsigned i = 0; i < n; ++i)
    for (unsigned j = 0; j < n; ++j) out[i] += m[i * n + j] * coroot[j];
  return out;
}

std::optional<Elem> WeylGroup::find(const IntMatrix& m) const {
  for (std::size_t i = 0; i < elements.size(); ++i)
    if (elements[i] == m) return static_cast<Elem>(i);
  return std::nullopt;
}

WeylGroup weyl_group(const RootSystem& r) {
  const unsigned n = r.rank;
  auto mul = [n](const IntMatrix& a, const IntMatrix& b) {
    IntMatrix c(n * n, 0);
    for (unsigned i = 0; i < n; ++i)
      for (unsigned k = 0; k < n; ++k) {
        const int aik = a[i * n + k];
        if (aik == 0) continue;
        for (unsigned j = 0; j < n; ++j) c[i * n + j] += aik * b[k * n + j];
      }
    return c;
  };
  std::vector<IntMatrix> gens;
  for (unsigned i = 0; i < n; ++i) gens.push_back(reflection_matrix(r, i));
  IntMatrix one(n * n, 0);
  for (unsigned i = 0; i < n; ++i) one[i * n + i] = 1;
  auto mat = grp::materialize<IntMatrix, decltype(mul)&, IntVectorHash>(gens, one, mul);
  WeylGroup w;
  w.roots = r;
  w.elements = std::move(mat.elements);
  w.group = mat.group;
  std::unordered_map<IntMatrix, Elem, IntVectorHash> index;
  for (std::size_t i = 0; i < w.elements.size(); ++i) index.emplace(w.elements[i], static_cast<Elem>(i));
  for (std::size_t a = 0; a < r.roots.size(); ++a) w.reflection.push_back(index.at(reflection_matrix(r, a)));
  return w;
}

// ---------------------------------------------------------------------------

FpVector ResidueFunctional::evaluate(const IntVector& coroot) const {
  FpVector out(symbols, 0);
  for (std::size_t i = 0; i < coroot.size(); ++i) {
    const u32 c = gf::reduce_mod(coroot[i], p);
    if (c == 0) continue;
    for (unsigned j = 0; j < symbols; ++j) out[j] = gf::add_mod(out[j], gf::mul_mod(c, on_simple[i][j], p), p);
  }
  return out;
}

ResidueFunctional functional_from_weights(const RootSystem& r, u32 p, const std::vector<IntVector>& weights) {
  gf::validate_prime(p);
  require(!weights.empty(), "a residue functional needs at least one symbol");
  ResidueFunctional x;
  x.p = p;
  x.symbols = static_cast<unsigned>(weights.size());
  x.on_simple.assign(r.rank, FpVector(x.symbols, 0));
  for (unsigned j = 0; j < x.symbols; ++j) {
    require(weights[j].size() == r.ambient_dim, "weight has the wrong ambient dimension");
    for (unsigned i = 0; i < r.rank; ++i) {
      const int num = 2 * dot(weights[j], r.roots[i]);
      const int den = dot(r.roots[i], r.roots[i]);
      require(num % den == 0, "symbol " + std::to_string(j) + " is not a weight of " + r.label);
      x.on_simple[i][j] = gf::reduce_mod(num / den, p);
    }
  }
  return x;
}

FpVector evaluate_on_root(const RootSystem& r, const ResidueFunctional& x, std::size_t root) {
  return x.evaluate(r.coroot_coords[root]);
}

CentralizerResult weyl_centralizer(const WeylGroup& w, const ResidueFunctional& x,
                                   const std::vector<std::size_t>& phi_h) {
  const RootSystem& r = w.roots;
  require(x.on_simple.size() == r.rank, "functional rank does not match the Weyl group");
  const unsigned n = r.rank;
  std::vector<Elem> stab;
  for (std::size_t g = 0; g < w.elements.size(); ++g) {
    bool fixed = true;
    for (unsigned i = 0; i < n && fixed; ++i) {
      IntVector col(n);
      for (unsigned k = 0; k < n; ++k) col[k] = w.elements[g][k * n + i];
      fixed = x.evaluate(col) == x.on_simple[i];
    }
    if (fixed) stab.push_back(static_cast<Elem>(g));
  }
  CentralizerResult out;
  out.centralizer = grp::make_subset(*w.group, stab);
  std::vector<Elem> vanishing, h_refl;
  for (std::size_t a = 0; a < r.roots.size(); ++a)
    if (gf::is_zero(evaluate_on_root(r, x, a))) vanishing.push_back(w.reflection[a]);
  for (std::size_t a : phi_h) {
    require(a < r.roots.size(), "root index out of range in Phi_H");
    h_refl.push_back(w.reflection[a]);
  }
  out.w_prime = grp::generate(*w.group, vanishing);
  out.w_h = grp::generate(*w.group, h_refl);
  for (Elem e : out.w_prime.elems) check_invariant(out.centralizer.contains(e), "W' is not inside the centralizer");
  out.quotient_order = out.centralizer.order() / out.w_prime.order();
  out.is_p_group = is_prime_power_of(out.quotient_order, x.p);
  out.ge2 = out.centralizer == out.w_h;
  return out;
}

Ge1Result ge1_check(const RootSystem& r, const ResidueFunctional& x, const std::vector<std::size_t>& phi_h) {
  std::vector<char> inside(r.roots.size(), 0);
  for (std::size_t a : phi_h) {
    require(a < r.roots.size(), "root index out of range in Phi_H");
    inside[a] = 1;
  }
  for (std::size_t a = 0; a < r.roots.size(); ++a)
    if (!inside[a] && gf::is_zero(evaluate_on_root(r, x, a))) return {false, a};
  return {true, std::nullopt};
}

// ---------------------------------------------------------------------------

AppendixDReport appendix_d_report() {
  const RootSystem r = make_root_system("D4");
  const WeylGroup w = weyl_group(r);
  const grp::FinGroup& g = *w.group;
  AppendixDReport rep;
  rep.weyl_order = g.order();

  const ResidueFunctional x = functional_from_weights(r, 2, {{1, 1, 0, 0}, {0, 1, 1, 0}});
  const CentralizerResult c = weyl_centralizer(w, x, {});
  rep.stabilizer_order = c.centralizer.order();
  rep.stabilizer_abelian = grp::is_abelian(g, c.centralizer);
  rep.stabilizer_normal = grp::is_normal(g, c.centralizer);
  rep.w_prime_order = c.w_prime.order();
  rep.quotient_is_2_group = c.is_p_group;
  rep.ge2 = c.ge2;
  rep.ge1 = ge1_check(r, x, {}).holds;

  const ResidueFunctional sum = functional_from_weights(r, 2, {{1, 1, 1, 1}});
  rep.sum_in_twice_lattice = std::all_of(sum.on_simple.begin(), sum.on_simple.end(), gf::is_zero);

  auto root = [&](int i, int j, int sj) {
    IntVector v(4, 0);
    v[i] = 1;
    v[j] = sj;
    return w.reflection[*r.find(v)];
  };
  std::vector<Elem> gens;
  for (int j = 1; j < 4; ++j) gens.push_back(g.mul(root(0, j, -1), root(0, j, 1)));
  gens.push_back(g.mul(root(0, 1, -1), root(2, 3, -1)));
  gens.push_back(g.mul(root(0, 2, -1), root(1, 3, -1)));
  rep.equals_sign_klein_subgroup = grp::generate(g, gens) == c.centralizer;

  // (Z/2)^3 as even subsets of {1,2,3,4}; V_4 permutes coordinates.
  std::vector<unsigned> masks;
  for (unsigned m = 0; m < 16; ++m)
    if (__builtin_popcount(m) % 2 == 0) masks.push_back(m);
  auto mask_index = [&](unsigned m) {
    return static_cast<Elem>(std::find(masks.begin(), masks.end(), m) - masks.begin());
  };
  std::vector<Elem> ntab(64), ktab(16), action(32);
  for (unsigned a = 0; a < 8; ++a)
    for (unsigned b = 0; b < 8; ++b) ntab[a * 8 + b] = mask_index(masks[a] ^ masks[b]);
  for (unsigned a = 0; a < 4; ++a)
    for (unsigned b = 0; b < 4; ++b) ktab[a * 4 + b] = a ^ b;
  const std::array<std::array<unsigned, 4>, 4> perms{{{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}}};
  for (unsigned b = 0; b < 4; ++b)
    for (unsigned a = 0; a < 8; ++a) {
      unsigned image = 0;
      for (unsigned i = 0; i < 4; ++i)
        if (masks[a] >> i & 1u) image |= 1u << perms[b][i];
      action[b * 8 + a] = mask_index(image);
    }
  auto n_group = std::make_shared<const grp::FinGroup>(8, ntab);
  auto k_group = std::make_shared<const grp::FinGroup>(4, ktab);
  const auto sd = grp::iterated_semidirect({n_group, k_group}, {grp::FactorAction{1, 0, action}});
  const auto stab = grp::as_group(g, c.centralizer);
  rep.semidirect_isomorphic = grp::find_isomorphism(*sd.group, *stab.group).has_value();
  return rep;
}

// ---------------------------------------------------------------------------
// Matrices over F_q, n <= 4

std::string to_string(MatrixGroupType t) {
  switch (t) {
    case MatrixGroupType::sl2: return "SL2";
    case MatrixGroupType::sl3: return "SL3";
    case MatrixGroupType::sp4: return "Sp4";
    default: return "GL2";
  }
}

MatrixGroupType parse_matrix_group(const std::string& s) {
  std::string t;
  for (char ch : s)
    if (ch != '_') t.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(ch))));
  if (t == "SL2") return MatrixGroupType::sl2;
  if (t == "SL3") return MatrixGroupType::sl3;
  if (t == "SP4") return MatrixGroupType::sp4;
  if (t == "GL2") return MatrixGroupType::gl2;
  throw DomainError("unknown matrix group '" + s + "' (expected SL2, SL3, Sp4 or GL2)");
}

namespace {

struct SmallMat {
  std::array<std::uint8_t, 16> e{};
  bool operator==(const SmallMat& o) const = default;
};

struct SmallMatHash {
  std::size_t operator()(const SmallMat& m) const {
    u64 h = 0;
    for (std::uint8_t x : m.e) h = (h << 4) | x;
    return std::hash<u64>{}(h);
  }
};

class MatOps {
 public:
  MatOps(u32 q, unsigned n) : n_(n) {
    require(q >= 2 && q <= 8, "matrix groups are supported for q <= 8");
    const auto pd = gf::prime_divisors(q);
    require(pd.size() == 1, "q must be a prime power");
    unsigned m = 0;
    for (u64 x = 1; x < q; x *= pd[0]) ++m;
    f_ = gf::FqField::make(static_cast<u32>(pd[0]), m);
  }
  const gf::FqField& field() const { return *f_; }
  unsigned n() const { return n_; }

  SmallMat identity() const {
    SmallMat m;
    for (unsigned i = 0; i < n_; ++i) m.e[i * 4 + i] = 1;
    return m;
  }
  u32 at(const SmallMat& m, unsigned i, unsigned j) const { return m.e[i * 4 + j]; }
  void set(SmallMat& m, unsigned i, unsigned j, u32 v) const { m.e[i * 4 + j] = static_cast<std::uint8_t>(v); }

  SmallMat mul(const SmallMat& a, const SmallMat& b) const {
    SmallMat c;
    for (unsigned i = 0; i < n_; ++i)
      for (unsigned j = 0; j < n_; ++j) {
        u32 s = 0;
        for (unsigned k = 0; k < n_; ++k) s = f_->add(s, f_->mul(at(a, i, k), at(b, k, j)));
        set(c, i, j, s);
      }
    return c;
  }

  SmallMat inverse(const SmallMat& a) const {
    SmallMat x = a, y = identity();
    for (unsigned c = 0; c < n_; ++c) {
      unsigned piv = c;
      while (piv < n_ && at(x, piv, c) == 0) ++piv;
      check_invariant(piv < n_, "singular matrix in a matrix group");
      for (unsigned j = 0; j < n_; ++j) {
        std::swap(x.e[c * 4 + j], x.e[piv * 4 + j]);
        std::swap(y.e[c * 4 + j], y.e[piv * 4 + j]);
      }
      const u32 s = f_->inv(at(x, c, c));
      for (unsigned j = 0; j < n_; ++j) {
        set(x, c, j, f_->mul(s, at(x, c, j)));
        set(y, c, j, f_->mul(s, at(y, c, j)));
      }
      for (unsigned r = 0; r < n_; ++r) {
        if (r == c || at(x, r, c) == 0) continue;
        const u32 t = at(x, r, c);
        for (unsigned j = 0; j < n_; ++j) {
          set(x, r, j, f_->sub(at(x, r, j), f_->mul(t, at(x, c, j))));
          set(y, r, j, f_->sub(at(y, r, j), f_->mul(t, at(y, c, j))));
        }
      }
    }
    return y;
  }

  SmallMat elementary(unsigned i, unsigned j, u32 t) const {
    SmallMat m = identity();
    set(m, i, j, t);
    return m;
  }

  SmallMat diagonal(const std::vector<u32>& d) const {
    SmallMat m;
    for (unsigned i = 0; i < n_; ++i) set(m, i, i, d[i]);
    return m;
  }

  // F_p-basis 1, g, ..., g^{m-1} of F_q.
  std::vector<u32> additive_basis() const {
    std::vector<u32> b;
    for (unsigned k = 0; k < f_->m(); ++k) b.push_back(f_->pow(f_->primitive_element(), k));
    return b;
  }

 private:
  unsigned n_;
  std::shared_ptr<const gf::FqField> f_;
};

unsigned matrix_size(MatrixGroupType t) {
  switch (t) {
    case MatrixGroupType::sl3: return 3;
    case MatrixGroupType::sp4: return 4;
    default: return 2;
  }
}

// Symplectic form with antidiagonal (1, 1, -1, -1); its upper triangular
// elements form a Borel subgroup.
bool preserves_antidiagonal_form(const MatOps& ops, const SmallMat& m) {
  const gf::FqField& f = ops.field();
  const u32 one = 1, minus = f.neg(1);
  auto j = [&](unsigned r, unsigned c) -> u32 {
    if (r + c != 3) return 0;
    return r < 2 ? one : minus;
  };
  for (unsigned a = 0; a < 4; ++a)
    for (unsigned b = 0; b < 4; ++b) {
      u32 s = 0;
      for (unsigned r = 0; r < 4; ++r)
        for (unsigned c = 0; c < 4; ++c) {
          const u32 jr = j(r, c);
          if (jr == 0) continue;
          s = f.add(s, f.mul(f.mul(ops.at(m, r, a), jr), ops.at(m, c, b)));
        }
      if (s != j(a, b)) return false;
    }
  return true;
}

using MatSet = std::unordered_set<SmallMat, SmallMatHash>;

MatSet close_under(const MatOps& ops, const std::vector<SmallMat>& gens) {
  MatSet seen{ops.identity()};
  std::deque<SmallMat> queue{ops.identity()};
  while (!queue.empty()) {
    const SmallMat x = queue.front();
    queue.pop_front();
    for (const SmallMat& g : gens) {
      SmallMat y = ops.mul(x, g);
      if (seen.insert(y).second) queue.push_back(y);
    }
  }
  return seen;
}

}  // namespace

CommutatorCheck unipotent_commutator_check(MatrixGroupType t, u32 q) {
  require(t != MatrixGroupType::gl2, "unipotent_commutator_check supports SL2, SL3 and Sp4");
  const unsigned n = matrix_size(t);
  const MatOps ops(q, n);
  const gf::FqField& f = ops.field();
  const u32 g = f.primitive_element();
  const u32 gi = f.inv(g);

  // U: all upper unitriangular matrices, filtered by the form for Sp4.
  const unsigned slots = n * (n - 1) / 2;
  std::vector<SmallMat> unipotent;
  const u64 total = gf::ipow(q, slots);
  for (u64 code = 0; code < total; ++code) {
    SmallMat m = ops.identity();
    u64 c = code;
    for (unsigned i = 0; i < n; ++i)
      for (unsigned j = i + 1; j < n; ++j) {
        ops.set(m, i, j, static_cast<u32>(c % q));
        c /= q;
      }
    if (t == MatrixGroupType::sp4 && !preserves_antidiagonal_form(ops, m)) continue;
    unipotent.push_back(m);
  }

  std::vector<SmallMat> torus_gens;
  if (t == MatrixGroupType::sp4) {
    torus_gens.push_back(ops.diagonal({g, 1, 1, gi}));
    torus_gens.push_back(ops.diagonal({1, g, gi, 1}));
  } else {
    for (unsigned i = 0; i + 1 < n; ++i) {
      std::vector<u32> d(n, 1);
      d[i] = g;
      d[i + 1] = gi;
      torus_gens.push_back(ops.diagonal(d));
    }
  }

  std::vector<SmallMat> u_gens;
  MatSet u_closure{ops.identity()};
  for (const SmallMat& u : unipotent) {
    if (u_closure.count(u)) continue;
    u_gens.push_back(u);
    u_closure = close_under(ops, u_gens);
  }
  check_invariant(u_closure.size() == unipotent.size(), "unipotent radical is not closed");

  std::vector<SmallMat> borel_gens = torus_gens;
  borel_gens.insert(borel_gens.end(), u_gens.begin(), u_gens.end());

  // [P, U] is the normal closure in P of the commutators [x, u] with x
  // running over generators of P.
  std::vector<SmallMat> s_gens;
  MatSet s{ops.identity()};
  auto absorb = [&](const SmallMat& c) {
    if (s.count(c)) return;
    s_gens.push_back(c);
    s = close_under(ops, s_gens);
  };
  for (const SmallMat& x : borel_gens) {
    const SmallMat xi = ops.inverse(x);
    for (const SmallMat& u : unipotent) absorb(ops.mul(ops.mul(x, u), ops.mul(xi, ops.inverse(u))));
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (const SmallMat& x : borel_gens) {
      const SmallMat xi = ops.inverse(x);
      for (std::size_t k = 0; k < s_gens.size(); ++k) {
        const SmallMat c = ops.mul(ops.mul(x, s_gens[k]), xi);
        if (!s.count(c)) {
          absorb(c);
          changed = true;
        }
      }
    }
  }

  CommutatorCheck out;
  out.unipotent_order = unipotent.size();
  out.borel_order = gf::ipow(q - 1, t == MatrixGroupType::sp4 ? 2 : n - 1) * out.unipotent_order;
  out.commutator_order = s.size();
  out.holds = s.size() == unipotent.size();
  return out;
}

std::size_t abelianization_order_check(MatrixGroupType t, u32 q) {
  require(t != MatrixGroupType::sp4, "abelianization_order_check supports SL2, SL3 and GL2");
  const unsigned n = matrix_size(t);
  const MatOps ops(q, n);
  std::vector<SmallMat> gens;
  for (u32 b : ops.additive_basis())
    for (unsigned i = 0; i < n; ++i)
      for (unsigned j = 0; j < n; ++j)
        if (i != j) gens.push_back(ops.elementary(i, j, b));
  if (t == MatrixGroupType::gl2) gens.push_back(ops.diagonal({ops.field().primitive_element(), 1}));
  auto mul = [&ops](const SmallMat& a, const SmallMat& b) { return ops.mul(a, b); };
  const auto mat = grp::materialize<SmallMat, decltype(mul)&, SmallMatHash>(gens, ops.identity(), mul);
  return grp::abelianization_order(*mat.group);
}

// ---------------------------------------------------------------------------

namespace {

using Perm = std::array<std::uint8_t, 5>;

struct PermHash {
  std::size_t operator()(const Perm& p) const {
    std::size_t h = 0;
    for (auto x : p) h = h * 7 + x;
    return h;
  }
};

struct SmallGroup {
  std::string name;
  grp::GroupPtr group;
  grp::Subgroup u;
};

Perm perm_from_cycles(std::initializer_list<std::initializer_list<int>> cycles) {
  Perm p{0, 1, 2, 3, 4};
  for (const auto& c : cycles) {
    std::vector<int> v(c);
    for (std::size_t i = 0; i < v.size(); ++i) p[v[i]] = static_cast<std::uint8_t>(v[(i + 1) % v.size()]);
  }
  return p;
}

grp::Materialized<Perm> perm_group(const std::vector<Perm>& gens) {
  auto mul = [](const Perm& a, const Perm& b) {
    Perm c{};
    for (int i = 0; i < 5; ++i) c[i] = a[b[i]];
    return c;
  };
  return grp::materialize<Perm, decltype(mul)&, PermHash>(gens, Perm{0, 1, 2, 3, 4}, mul);
}

bool is_double_transposition_or_identity(const Perm& p) {
  int fixed = 0;
  for (int i = 0; i < 4; ++i) {
    if (p[i] == i) ++fixed;
    else if (p[p[i]] != i) return false;
  }
  return fixed == 4 || fixed == 0;
}

bool is_even(const Perm& p) {
  int inversions = 0;
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j)
      if (p[i] > p[j]) ++inversions;
  return inversions % 2 == 0;
}

SmallGroup perm_family(const std::string& name, const std::vector<Perm>& gens, const std::function<bool(const Perm&)>& in_u) {
  const auto m = perm_group(gens);
  std::vector<Elem> u;
  for (std::size_t i = 0; i < m.elements.size(); ++i)
    if (in_u(m.elements[i])) u.push_back(static_cast<Elem>(i));
  return {name, m.group, grp::make_subset(*m.group, u)};
}

std::vector<SmallGroup> small_families() {
  std::vector<SmallGroup> out;
  const Perm c3 = perm_from_cycles({{0, 1, 2}});
  const Perm v = perm_from_cycles({{0, 1}, {2, 3}});
  const Perm t = perm_from_cycles({{0, 1}});
  const Perm c4 = perm_from_cycles({{0, 1, 2, 3}});
  out.push_back(perm_family("A4/V4", {c3, v}, is_double_transposition_or_identity));
  out.push_back(perm_family("S4/V4", {t, c4}, is_double_transposition_or_identity));
  out.push_back(perm_family("S4/A4", {t, c4}, is_even));
  {
    const MatOps ops(3, 2);
    auto mul = [&ops](const SmallMat& a, const SmallMat& b) { return ops.mul(a, b); };
    const auto m = grp::materialize<SmallMat, decltype(mul)&, SmallMatHash>(
        {ops.elementary(0, 1, 1), ops.elementary(1, 0, 1)}, ops.identity(), mul);
    out.push_back({"SL2(3)/Q8", m.group, grp::sylow(*m.group, 2)});
  }
  const Perm c6 = perm_from_cycles({{0, 1, 2}, {3, 4}});
  out.push_back(perm_family("Z6/Z2", {c6}, [](const Perm& p) {
    return p[0] == 0 && p[1] == 1 && p[2] == 2;
  }));
  out.push_back(perm_family("D8/Z2", {c4, perm_from_cycles({{0, 2}})}, [](const Perm& p) {
    return p == Perm{0, 1, 2, 3, 4} || p == Perm{2, 3, 0, 1, 4};
  }));
  return out;
}

// Extends generator images to a map on all of `src`; nullopt when the
// assignment is inconsistent or not a homomorphism.
std::optional<std::vector<Elem>> extend_hom(const grp::FinGroup& src, const std::vector<Elem>& gens,
                                            const std::vector<Elem>& images, const grp::FinGroup& dst) {
  constexpr Elem unset = ~Elem{0};
  std::vector<Elem> img(src.order(), unset);
  img[src.identity()] = dst.identity();
  std::vector<Elem> queue{src.identity()};
  for (std::size_t k = 0; k < queue.size(); ++k) {
    const Elem x = queue[k];
    for (std::size_t i = 0; i < gens.size(); ++i) {
      const Elem y = src.mul(x, gens[i]);
      const Elem v = dst.mul(img[x], images[i]);
      if (img[y] == unset) {
        img[y] = v;
        queue.push_back(y);
      } else if (img[y] != v) {
        return std::nullopt;
      }
    }
  }
  if (!grp::is_homomorphism(src, dst, img)) return std::nullopt;
  return img;
}

}  // namespace

ScalarRestrictionSummary scalar_restriction_suite(u64 seed, std::size_t instances) {
  std::mt19937_64 rng(seed);
  const auto families = small_families();
  const std::array<heis::HeisenbergGroup, 3> targets{
      heis::HeisenbergGroup::standard_model(2, 1, heis::HeisType::positive),
      heis::HeisenbergGroup::standard_model(2, 1, heis::HeisType::negative),
      heis::HeisenbergGroup::standard_model(3, 1, heis::HeisType::odd)};
  std::map<std::pair<std::size_t, u32>, weil::ProjectiveWeil> cache;
  auto projective = [&](std::size_t h, u32 psi) -> const weil::ProjectiveWeil& {
    auto it = cache.find({h, psi});
    if (it == cache.end()) {
      const auto a = autz::full_automorphism_group(autz::share(targets[h]));
      it = cache.emplace(std::make_pair(h, psi), weil::projective_weil(reps::heisenberg_rep(targets[h], psi), a)).first;
    }
    return it->second;
  };

  ScalarRestrictionSummary out;
  for (std::size_t inst = 0; inst < instances; ++inst) {
    const SmallGroup& fam = families[rng() % families.size()];
    const std::size_t h = rng() % targets.size();
    const u32 p = targets[h].p();
    const u32 psi = 1 + static_cast<u32>(rng() % (p - 1));
    const weil::ProjectiveWeil& pw = projective(h, psi);
    const grp::FinGroup& a = *pw.a.group;
    const grp::FinGroup& pg = *fam.group;

    const grp::Quotient quo = grp::quotient(pg, fam.u);
    const grp::FinGroup& qg = *quo.group;
    const auto qgens = grp::generators(qg, grp::whole(qg));
    std::vector<Elem> q_image;
    for (int attempt = 0; attempt < 32 && q_image.empty(); ++attempt) {
      std::vector<Elem> imgs;
      for (Elem gq : qgens) {
        const unsigned ord = qg.element_order(gq);
        std::vector<Elem> cands;
        for (Elem x = 0; x < a.order(); ++x)
          if (ord % a.element_order(x) == 0) cands.push_back(x);
        imgs.push_back(cands[rng() % cands.size()]);
      }
      if (auto hom = extend_hom(qg, qgens, imgs, a)) q_image = *hom;
    }
    if (q_image.empty()) q_image.assign(qg.order(), a.identity());
    std::vector<Elem> img(pg.order());
    for (Elem x = 0; x < pg.order(); ++x) img[x] = q_image[quo.projection[x]];

    ++out.instances;
    const grp::Subgroup pu = grp::commutator_subgroup(pg, grp::whole(pg), fam.u);
    const bool hyp = std::all_of(fam.u.elems.begin(), fam.u.elems.end(), [&](Elem u) { return pu.contains(u); });
    if (hyp) ++out.hypothesis_holds;

    const std::int64_t big_m = pw.c.modulus;
    const std::int64_t modulus = big_m * grp::exponent(pg);
    grp::Cocycle2 cp;
    cp.group = fam.group;
    cp.modulus = modulus;
    cp.values.resize(pg.order() * pg.order());
    for (Elem x = 0; x < pg.order(); ++x)
      for (Elem y = 0; y < pg.order(); ++y)
        cp.values[x * pg.order() + y] = pw.c(img[x], img[y]) * (modulus / big_m);
    const grp::CoboundaryResult solve = grp::coboundary_solve(cp);
    if (!solve.solvable) continue;
    ++out.extensions_found;

    const int cond = std::lcm(static_cast<int>(modulus), pw.conductor);
    const cyc::CycMatrix& u1 = pw.u[a.identity()];
    cyc::CycScalar s1;
    check_invariant(u1.is_scalar(&s1), "U_1 is not scalar");
    const cyc::CycScalar one = cyc::CycScalar::one(cond);
    bool some_nontrivial = false;
    const auto chars = grp::homomorphisms_to_cyclic(pg, modulus);
    for (std::size_t k = 0; k < chars.size(); ++k) {
      std::vector<std::int64_t> b(pg.order());
      for (Elem x = 0; x < pg.order(); ++x) b[x] = (solve.cochain[x] + chars[k][x]) % modulus;
      auto pi = [&](Elem x) {
        return pw.u[img[x]].scaled(cyc::CycScalar::zeta(cond, -b[x] * (cond / modulus)));
      };
      if (k == 0) {
        for (Elem gen : grp::generators(pg, grp::whole(pg)))
          for (Elem y = 0; y < pg.order(); ++y)
            check_invariant(pi(gen) * pi(y) == pi(pg.mul(gen, y)), "extension is not multiplicative");
      }
      ++out.extensions_checked;
      for (Elem u : fam.u.elems) {
        const cyc::CycScalar value = s1 * cyc::CycScalar::zeta(cond, -b[u] * (cond / modulus));
        if (!(value == one)) {
          some_nontrivial = true;
          break;
        }
      }
    }
    if (some_nontrivial) {
      if (hyp) ++out.violations;
      else ++out.control_nontrivial;
    }
  }
  return out;
}

}  // namespace heisweil::rootdata
