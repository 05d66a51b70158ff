#include "heisweil/grp.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

#include "heisweil/gf.hpp"
#include "heisweil/zmod.hpp"

namespace heisweil::grp {

FinGroup::FinGroup(std::size_t order, std::vector<Elem> table) : n_(order), table_(std::move(table)) {
  if (n_ == 0) throw DomainError("FinGroup: empty group");
  if (table_.size() != n_ * n_) throw DomainError("FinGroup: table size mismatch");
  for (Elem x : table_)
    if (x >= n_) throw DomainError("FinGroup: table entry out of range");
  bool found = false;
  for (std::size_t e = 0; e < n_ && !found; ++e) {
    bool ok = true;
    for (std::size_t x = 0; x < n_ && ok; ++x) ok = mul(static_cast<Elem>(e), static_cast<Elem>(x)) == x &&
                                                    mul(static_cast<Elem>(x), static_cast<Elem>(e)) == x;
    if (ok) {
      identity_ = static_cast<Elem>(e);
      found = true;
    }
  }
  if (!found) throw DomainError("FinGroup: no identity element");
  std::vector<char> seen(n_);
  for (std::size_t a = 0; a < n_; ++a) {
    std::fill(seen.begin(), seen.end(), 0);
    for (std::size_t b = 0; b < n_; ++b) {
      Elem c = table_[a * n_ + b];
      if (seen[c]) throw DomainError("FinGroup: table is not a Latin square");
      seen[c] = 1;
    }
  }
  inv_.assign(n_, 0);
  for (std::size_t a = 0; a < n_; ++a)
    for (std::size_t b = 0; b < n_; ++b)
      if (table_[a * n_ + b] == identity_) {
        inv_[a] = static_cast<Elem>(b);
        break;
      }
  for (std::size_t a = 0; a < n_; ++a)
    if (mul(inv_[a], static_cast<Elem>(a)) != identity_) throw DomainError("FinGroup: left and right inverses differ");
}

Elem FinGroup::pow(Elem a, std::int64_t k) const {
  if (k < 0) {
    a = inv(a);
    k = -k;
  }
  Elem r = identity_;
  Elem base = a;
  while (k > 0) {
    if (k & 1) r = mul(r, base);
    base = mul(base, base);
    k >>= 1;
  }
  return r;
}

unsigned FinGroup::element_order(Elem a) const {
  unsigned k = 1;
  for (Elem x = a; x != identity_; x = mul(x, a)) ++k;
  return k;
}

bool FinGroup::verify_associativity(u64 seed, std::size_t samples) const {
  if (n_ <= 200) {
    for (Elem a = 0; a < n_; ++a)
      for (Elem b = 0; b < n_; ++b) {
        const Elem ab = mul(a, b);
        for (Elem c = 0; c < n_; ++c)
          if (mul(ab, c) != mul(a, mul(b, c))) return false;
      }
    return true;
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Elem> dist(0, static_cast<Elem>(n_ - 1));
  for (std::size_t s = 0; s < samples; ++s) {
    const Elem a = dist(rng), b = dist(rng), c = dist(rng);
    if (mul(mul(a, b), c) != mul(a, mul(b, c))) return false;
  }
  return true;
}

Subgroup make_subset(const FinGroup& g, std::vector<Elem> elems) {
  Subgroup h;
  std::sort(elems.begin(), elems.end());
  elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
  h.member.assign(g.order(), 0);
  for (Elem x : elems) h.member[x] = 1;
  h.elems = std::move(elems);
  return h;
}

Subgroup whole(const FinGroup& g) {
  std::vector<Elem> all(g.order());
  std::iota(all.begin(), all.end(), Elem{0});
  return make_subset(g, std::move(all));
}

Subgroup trivial(const FinGroup& g) { return make_subset(g, {g.identity()}); }

namespace {

// Closure of `start` (assumed to be a subgroup, or just {1}) together with gens.
Subgroup close(const FinGroup& g, std::vector<Elem> start, const std::vector<Elem>& gens) {
  std::vector<char> in(g.order(), 0);
  std::vector<Elem> elems;
  for (Elem x : start)
    if (!in[x]) {
      in[x] = 1;
      elems.push_back(x);
    }
  if (!in[g.identity()]) {
    in[g.identity()] = 1;
    elems.push_back(g.identity());
  }
  std::vector<Elem> all_gens = gens;
  all_gens.insert(all_gens.end(), start.begin(), start.end());
  std::vector<Elem> useful;
  for (Elem s : all_gens)
    if (s != g.identity()) useful.push_back(s);
  std::sort(useful.begin(), useful.end());
  useful.erase(std::unique(useful.begin(), useful.end()), useful.end());
  for (std::size_t i = 0; i < elems.size(); ++i)
    for (Elem s : useful) {
      const Elem y = g.mul(elems[i], s);
      if (!in[y]) {
        in[y] = 1;
        elems.push_back(y);
      }
    }
  Subgroup h;
  h.member = std::move(in);
  std::sort(elems.begin(), elems.end());
  h.elems = std::move(elems);
  return h;
}

}  // namespace

Subgroup generate(const FinGroup& g, const std::vector<Elem>& gens) { return close(g, {}, gens); }

bool is_subgroup(const FinGroup& g, const Subgroup& h) {
  if (h.elems.empty() || !h.contains(g.identity())) return false;
  for (Elem a : h.elems)
    for (Elem b : h.elems)
      if (!h.contains(g.mul(a, b))) return false;
  return true;
}

std::vector<Elem> generators(const FinGroup& g, const Subgroup& h) {
  std::vector<Elem> gens;
  Subgroup cur = trivial(g);
  for (Elem x : h.elems) {
    if (cur.contains(x)) continue;
    gens.push_back(x);
    cur = close(g, cur.elems, {x});
    if (cur.order() == h.order()) break;
  }
  return gens;
}

bool is_normal(const FinGroup& g, const Subgroup& h) {
  const auto hg = generators(g, h);
  for (Elem x = 0; x < g.order(); ++x)
    for (Elem s : hg)
      if (!h.contains(g.conj(x, s))) return false;
  return true;
}

bool is_abelian(const FinGroup& g, const Subgroup& h) {
  const auto hg = generators(g, h);
  for (Elem a : hg)
    for (Elem b : hg)
      if (g.mul(a, b) != g.mul(b, a)) return false;
  return true;
}

Subgroup centralizer(const FinGroup& g, const std::vector<Elem>& xs) {
  std::vector<Elem> out;
  for (Elem y = 0; y < g.order(); ++y) {
    bool ok = true;
    for (Elem x : xs)
      if (g.mul(x, y) != g.mul(y, x)) {
        ok = false;
        break;
      }
    if (ok) out.push_back(y);
  }
  return make_subset(g, std::move(out));
}

Subgroup center(const FinGroup& g) { return centralizer(g, generators(g, whole(g))); }

Subgroup normalizer(const FinGroup& g, const Subgroup& h) {
  const auto hg = generators(g, h);
  std::vector<Elem> out;
  for (Elem x = 0; x < g.order(); ++x) {
    bool ok = true;
    for (Elem s : hg)
      if (!h.contains(g.conj(x, s))) {
        ok = false;
        break;
      }
    if (ok) out.push_back(x);
  }
  return make_subset(g, std::move(out));
}

Subgroup commutator_subgroup(const FinGroup& g, const Subgroup& h, const Subgroup& k) {
  std::vector<char> seen(g.order(), 0);
  std::vector<Elem> comms;
  for (Elem a : h.elems)
    for (Elem b : k.elems) {
      const Elem c = g.commutator(a, b);
      if (!seen[c]) {
        seen[c] = 1;
        comms.push_back(c);
      }
    }
  return generate(g, comms);
}

Subgroup derived_subgroup(const FinGroup& g) {
  const Subgroup all = whole(g);
  return commutator_subgroup(g, all, all);
}

std::vector<std::vector<Elem>> conjugacy_classes(const FinGroup& g) {
  const auto gens = generators(g, whole(g));
  std::vector<char> done(g.order(), 0);
  std::vector<std::vector<Elem>> classes;
  for (Elem x = 0; x < g.order(); ++x) {
    if (done[x]) continue;
    std::vector<Elem> cls{x};
    done[x] = 1;
    for (std::size_t i = 0; i < cls.size(); ++i)
      for (Elem s : gens) {
        const Elem y = g.conj(s, cls[i]);
        if (!done[y]) {
          done[y] = 1;
          cls.push_back(y);
        }
      }
    std::sort(cls.begin(), cls.end());
    classes.push_back(std::move(cls));
  }
  return classes;
}

unsigned exponent(const FinGroup& g) {
  u64 e = 1;
  for (Elem x = 0; x < g.order(); ++x) e = std::lcm(e, static_cast<u64>(g.element_order(x)));
  return static_cast<unsigned>(e);
}

std::size_t abelianization_order(const FinGroup& g) { return g.order() / derived_subgroup(g).order(); }

Subgroup sylow(const FinGroup& g, unsigned p) {
  std::size_t target = 1;
  for (std::size_t n = g.order(); n % p == 0; n /= p) target *= p;
  Subgroup cur = trivial(g);
  while (cur.order() < target) {
    const Subgroup norm = normalizer(g, cur);
    bool grown = false;
    for (Elem x : norm.elems) {
      if (cur.contains(x)) continue;
      unsigned o = g.element_order(x);
      unsigned m = o;
      while (m % p == 0) m /= p;
      const Elem y = g.pow(x, m);
      if (cur.contains(y)) continue;
      cur = close(g, cur.elems, {y});
      grown = true;
      break;
    }
    check_invariant(grown, "sylow: failed to extend a p-subgroup");
  }
  return cur;
}

SubgroupGroup as_group(const FinGroup& g, const Subgroup& h) {
  const std::size_t m = h.order();
  std::vector<Elem> pos(g.order(), 0);
  for (std::size_t i = 0; i < m; ++i) pos[h.elems[i]] = static_cast<Elem>(i);
  std::vector<Elem> table(m * m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      const Elem c = g.mul(h.elems[i], h.elems[j]);
      if (!h.contains(c)) throw DomainError("as_group: subset is not closed");
      table[i * m + j] = pos[c];
    }
  return {std::make_shared<const FinGroup>(m, std::move(table)), h.elems};
}

Quotient quotient(const FinGroup& g, const Subgroup& n) {
  if (!is_subgroup(g, n) || !is_normal(g, n)) throw DomainError("quotient: subgroup is not normal");
  Quotient q;
  const Elem unset = static_cast<Elem>(-1);
  q.projection.assign(g.order(), unset);
  for (Elem x = 0; x < g.order(); ++x) {
    if (q.projection[x] != unset) continue;
    const Elem c = static_cast<Elem>(q.representatives.size());
    q.representatives.push_back(x);
    for (Elem y : n.elems) q.projection[g.mul(x, y)] = c;
  }
  const std::size_t m = q.representatives.size();
  std::vector<Elem> table(m * m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      table[i * m + j] = q.projection[g.mul(q.representatives[i], q.representatives[j])];
  q.group = std::make_shared<const FinGroup>(m, std::move(table));
  return q;
}

StructureReport structure_queries(const FinGroup& g) {
  StructureReport r;
  r.center = center(g);
  r.derived = derived_subgroup(g);
  r.classes = conjugacy_classes(g);
  r.abelianization_order = g.order() / r.derived.order();
  r.exponent = exponent(g);
  return r;
}

bool is_homomorphism(const FinGroup& src, const FinGroup& dst, const std::vector<Elem>& images) {
  if (images.size() != src.order()) return false;
  for (Elem a = 0; a < src.order(); ++a)
    for (Elem b = 0; b < src.order(); ++b)
      if (images[src.mul(a, b)] != dst.mul(images[a], images[b])) return false;
  return true;
}

namespace {

// Extends generator images to a map on <gens>, or fails on inconsistency or
// non-injectivity.
std::optional<std::vector<Elem>> extend_images(const FinGroup& a, const FinGroup& b, const std::vector<Elem>& gens,
                                               const std::vector<Elem>& imgs) {
  const Elem unset = static_cast<Elem>(-1);
  std::vector<Elem> map(a.order(), unset);
  std::vector<char> used(b.order(), 0);
  map[a.identity()] = b.identity();
  used[b.identity()] = 1;
  std::vector<Elem> queue{a.identity()};
  for (std::size_t i = 0; i < queue.size(); ++i) {
    const Elem x = queue[i];
    for (std::size_t k = 0; k < imgs.size(); ++k) {
      const Elem y = a.mul(x, gens[k]);
      const Elem fy = b.mul(map[x], imgs[k]);
      if (map[y] == unset) {
        if (used[fy]) return std::nullopt;
        used[fy] = 1;
        map[y] = fy;
        queue.push_back(y);
      } else if (map[y] != fy) {
        return std::nullopt;
      }
    }
  }
  return map;
}

}  // namespace

std::optional<std::vector<Elem>> find_isomorphism(const FinGroup& a, const FinGroup& b) {
  if (a.order() > 64 || b.order() > 64) throw ResourceError("find_isomorphism: order above 64");
  if (a.order() != b.order()) return std::nullopt;
  const auto gens = generators(a, whole(a));
  std::vector<std::vector<Elem>> candidates(gens.size());
  for (std::size_t k = 0; k < gens.size(); ++k) {
    const unsigned o = a.element_order(gens[k]);
    for (Elem y = 0; y < b.order(); ++y)
      if (b.element_order(y) == o) candidates[k].push_back(y);
  }
  std::vector<Elem> imgs;
  std::function<std::optional<std::vector<Elem>>(std::size_t)> rec = [&](std::size_t k) -> std::optional<std::vector<Elem>> {
    if (k == gens.size()) {
      auto m = extend_images(a, b, gens, imgs);
      if (m && is_homomorphism(a, b, *m)) return m;
      return std::nullopt;
    }
    for (Elem y : candidates[k]) {
      imgs.push_back(y);
      std::vector<Elem> prefix(gens.begin(), gens.begin() + static_cast<std::ptrdiff_t>(k + 1));
      if (extend_images(a, b, prefix, imgs)) {
        if (auto m = rec(k + 1)) return m;
      }
      imgs.pop_back();
    }
    return std::nullopt;
  };
  return rec(0);
}

// ---------------------------------------------------------------------------
// Complements

namespace {

struct ElemAbelianCoords {
  unsigned p = 0;
  std::vector<Elem> basis;
  std::vector<gf::FpVector> coords;  // indexed by element of G, valid on N
  std::vector<Elem> element_of;      // indexed by vector_index
};

std::optional<ElemAbelianCoords> elementary_abelian_coords(const FinGroup& g, const Subgroup& n) {
  if (n.order() < 2 || !is_abelian(g, n)) return std::nullopt;
  const auto primes = gf::prime_divisors(n.order());
  if (primes.size() != 1) return std::nullopt;
  const unsigned p = static_cast<unsigned>(primes[0]);
  for (Elem x : n.elems)
    if (x != g.identity() && g.element_order(x) != p) return std::nullopt;
  ElemAbelianCoords c;
  c.p = p;
  c.basis = generators(g, n);
  const unsigned d = static_cast<unsigned>(c.basis.size());
  c.coords.assign(g.order(), {});
  c.element_of.assign(n.order(), 0);
  for (u64 idx = 0; idx < n.order(); ++idx) {
    gf::FpVector v = gf::vector_at(idx, d, p);
    Elem x = g.identity();
    for (unsigned i = 0; i < d; ++i) x = g.mul(x, g.pow(c.basis[i], v[i]));
    c.coords[x] = v;
    c.element_of[idx] = x;
  }
  return c;
}

bool cohomology_splits(const FinGroup& e, const Quotient& q, const ElemAbelianCoords& c) {
  const std::size_t qn = q.group->order();
  const std::size_t d = c.basis.size();
  const auto qgens = generators(*q.group, whole(*q.group));
  const unsigned p = c.p;
  // action matrices: act[x](i, j) = coordinate i of s(x) basis_j s(x)^-1
  std::vector<gf::FpMatrix> act;
  for (std::size_t x = 0; x < qn; ++x) {
    std::vector<gf::FpVector> cols;
    for (Elem b : c.basis) cols.push_back(c.coords[e.conj(q.representatives[x], b)]);
    act.push_back(gf::FpMatrix::from_columns(p, d, cols));
  }
  const std::size_t unknowns = qn * d;
  const std::size_t rows = qn * qgens.size() * d + d;
  gf::FpMatrix a(p, rows, unknowns);
  gf::FpVector rhs(rows, 0);
  std::size_t row = 0;
  for (std::size_t x = 0; x < qn; ++x)
    for (Elem gq : qgens) {
      const Elem xg = q.group->mul(static_cast<Elem>(x), gq);
      const Elem f = e.mul(e.mul(q.representatives[x], q.representatives[gq]), e.inv(q.representatives[xg]));
      const gf::FpVector& fv = c.coords[f];
      // n(x) + act_x n(g) - n(xg) = -f
      for (std::size_t i = 0; i < d; ++i, ++row) {
        a.set(row, x * d + i, static_cast<std::int64_t>(a(row, x * d + i)) + 1);
        for (std::size_t j = 0; j < d; ++j)
          a.set(row, gq * d + j, static_cast<std::int64_t>(a(row, gq * d + j)) + act[x](i, j));
        a.set(row, xg * d + i, static_cast<std::int64_t>(a(row, xg * d + i)) - 1);
        rhs[row] = gf::neg_mod(fv[i], p);
      }
    }
  const Elem one = q.projection[e.identity()];
  for (std::size_t i = 0; i < d; ++i, ++row) a.set(row, one * d + i, 1);
  return gf::solve_linear(a, rhs).solution.has_value();
}

}  // namespace

ComplementResult complement_exists(const FinGroup& e, const Subgroup& n) {
  if (!is_subgroup(e, n)) throw DomainError("complement_exists: N is not a subgroup");
  if (!is_normal(e, n)) throw DomainError("complement_exists: N is not normal");
  ComplementResult out;
  const Quotient q = quotient(e, n);
  if (auto coords = elementary_abelian_coords(e, n); coords && q.group->order() * coords->basis.size() <= 4096)
    out.cohomology_splits = cohomology_splits(e, q, *coords);

  const auto qgens = generators(*q.group, whole(*q.group));
  std::vector<Elem> lifts;
  for (Elem x : qgens) lifts.push_back(q.representatives[x]);

  auto meets_n = [&](const Subgroup& h) {
    for (Elem x : h.elems)
      if (x != e.identity() && n.contains(x)) return true;
    return false;
  };
  std::function<std::optional<Subgroup>(std::size_t, const Subgroup&)> rec =
      [&](std::size_t k, const Subgroup& h) -> std::optional<Subgroup> {
    ++out.nodes_visited;
    if (k == lifts.size()) return h;
    for (Elem m : n.elems) {
      const Elem cand = e.mul(lifts[k], m);
      Subgroup next = close(e, h.elems, {cand});
      if (meets_n(next)) continue;
      if (auto found = rec(k + 1, next)) return found;
    }
    return std::nullopt;
  };
  out.complement = rec(0, trivial(e));
  if (out.complement) {
    check_invariant(out.complement->order() * n.order() == e.order(), "complement_exists: |H||N| != |E|");
    check_invariant(!meets_n(*out.complement), "complement_exists: H meets N");
  }
  if (out.cohomology_splits)
    check_invariant(*out.cohomology_splits == out.complement.has_value(),
                    "complement_exists: cohomology and search disagree");
  return out;
}

// ---------------------------------------------------------------------------
// 2-cocycles

std::optional<std::tuple<Elem, Elem, Elem>> Cocycle2::violation() const {
  const FinGroup& g = *group;
  const std::size_t n = g.order();
  auto bad = [&](Elem a, Elem b, Elem c) {
    return zmod::mod_norm((*this)(a, b) + (*this)(g.mul(a, b), c) - (*this)(b, c) - (*this)(a, g.mul(b, c)),
                          modulus) != 0;
  };
  if (n <= 512) {
    for (Elem a = 0; a < n; ++a)
      for (Elem b = 0; b < n; ++b)
        for (Elem c = 0; c < n; ++c)
          if (bad(a, b, c)) return std::make_tuple(a, b, c);
    return std::nullopt;
  }
  std::mt19937_64 rng(0);
  std::uniform_int_distribution<Elem> dist(0, static_cast<Elem>(n - 1));
  for (int s = 0; s < 200000; ++s) {
    const Elem a = dist(rng), b = dist(rng), c = dist(rng);
    if (bad(a, b, c)) return std::make_tuple(a, b, c);
  }
  return std::nullopt;
}

Cocycle2 Cocycle2::restrict(const SubgroupGroup& h) const {
  Cocycle2 out;
  out.group = h.group;
  out.modulus = modulus;
  const std::size_t m = h.group->order();
  out.values.resize(m * m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) out.values[i * m + j] = (*this)(h.embedding[i], h.embedding[j]);
  return out;
}

std::vector<std::int64_t> coboundary(const FinGroup& g, const std::vector<std::int64_t>& b, std::int64_t modulus) {
  const std::size_t n = g.order();
  std::vector<std::int64_t> out(n * n);
  for (Elem x = 0; x < n; ++x)
    for (Elem y = 0; y < n; ++y) out[x * n + y] = zmod::mod_norm(b[x] + b[y] - b[g.mul(x, y)], modulus);
  return out;
}

namespace {

// Sections s with s(x) + s(y) + c(x, y) = s(xy), parametrized by the values
// t_k = s(g_k) on generators: s(x) = coeff[x] . t + constant[x].
struct SectionSystem {
  std::vector<Elem> gens;
  std::vector<std::vector<std::int64_t>> coeff;
  std::vector<std::int64_t> constant;
  zmod::ModSolution solution;
};

SectionSystem solve_sections(const FinGroup& g, std::int64_t modulus, const std::vector<std::int64_t>& c) {
  SectionSystem sys;
  const std::size_t n = g.order();
  sys.gens = generators(g, whole(g));
  const std::size_t r = sys.gens.size();
  auto cv = [&](Elem a, Elem b) { return c.empty() ? 0 : c[static_cast<std::size_t>(a) * n + b]; };
  sys.coeff.assign(n, std::vector<std::int64_t>(r, 0));
  sys.constant.assign(n, 0);
  std::vector<char> seen(n, 0);
  const Elem one = g.identity();
  seen[one] = 1;
  sys.constant[one] = zmod::mod_norm(-cv(one, one), modulus);
  std::vector<Elem> queue{one};
  std::vector<std::vector<std::int64_t>> rows;
  std::vector<std::int64_t> rhs;
  for (std::size_t i = 0; i < queue.size(); ++i) {
    const Elem x = queue[i];
    for (std::size_t k = 0; k < r; ++k) {
      const Elem y = g.mul(x, sys.gens[k]);
      // predicted s(y) = s(x) + t_k + c(x, g_k)
      std::vector<std::int64_t> pc = sys.coeff[x];
      pc[k] = zmod::mod_norm(pc[k] + 1, modulus);
      const std::int64_t pk = zmod::mod_norm(sys.constant[x] + cv(x, sys.gens[k]), modulus);
      if (!seen[y]) {
        seen[y] = 1;
        sys.coeff[y] = std::move(pc);
        sys.constant[y] = pk;
        queue.push_back(y);
        continue;
      }
      std::vector<std::int64_t> row(r);
      bool nonzero = false;
      for (std::size_t j = 0; j < r; ++j) {
        row[j] = zmod::mod_norm(pc[j] - sys.coeff[y][j], modulus);
        nonzero = nonzero || row[j] != 0;
      }
      const std::int64_t b = zmod::mod_norm(sys.constant[y] - pk, modulus);
      if (!nonzero && b == 0) continue;
      rows.push_back(std::move(row));
      rhs.push_back(b);
    }
  }
  sys.solution = zmod::solve_mod(rows, rhs, modulus, r);
  return sys;
}

std::vector<std::int64_t> evaluate_section(const SectionSystem& sys, const std::vector<std::int64_t>& t,
                                           std::int64_t modulus, bool with_constant) {
  std::vector<std::int64_t> s(sys.coeff.size());
  for (std::size_t x = 0; x < s.size(); ++x) {
    __int128 acc = with_constant ? sys.constant[x] : 0;
    for (std::size_t k = 0; k < t.size(); ++k) acc += static_cast<__int128>(sys.coeff[x][k]) * t[k];
    s[x] = static_cast<std::int64_t>(acc % modulus);
  }
  return s;
}

}  // namespace

CoboundaryResult coboundary_solve(const Cocycle2& c) {
  if (!c.group) throw DomainError("coboundary_solve: missing group");
  const FinGroup& g = *c.group;
  if (c.values.size() != g.order() * g.order()) throw DomainError("coboundary_solve: table size mismatch");
  if (auto v = c.violation()) {
    std::ostringstream os;
    os << "coboundary_solve: cocycle identity fails at (" << std::get<0>(*v) << ", " << std::get<1>(*v) << ", "
       << std::get<2>(*v) << ")";
    throw DomainError(os.str());
  }
  CoboundaryResult out;
  const SectionSystem sys = solve_sections(g, c.modulus, c.values);
  for (const auto& kv : sys.solution.kernel) out.kernel.push_back(evaluate_section(sys, kv, c.modulus, false));
  if (sys.solution.solvable) {
    out.solvable = true;
    auto s = evaluate_section(sys, sys.solution.solution, c.modulus, true);
    out.cochain.resize(s.size());
    for (std::size_t x = 0; x < s.size(); ++x) out.cochain[x] = zmod::mod_norm(-s[x], c.modulus);
    check_invariant(coboundary(g, out.cochain, c.modulus) == [&] {
      std::vector<std::int64_t> norm(c.values.size());
      for (std::size_t i = 0; i < norm.size(); ++i) norm[i] = zmod::mod_norm(c.values[i], c.modulus);
      return norm;
    }(), "coboundary_solve: db != c");
    return out;
  }
  for (Elem a = 0; a < g.order() && !out.asymmetric_pair; ++a)
    for (Elem b = a + 1; b < g.order(); ++b)
      if (g.mul(a, b) == g.mul(b, a) && zmod::mod_norm(c(a, b) - c(b, a), c.modulus) != 0) {
        out.asymmetric_pair = std::make_pair(a, b);
        break;
      }
  const Subgroup s2 = sylow(g, 2);
  out.sylow2_order = s2.order();
  if (s2.order() == g.order()) {
    out.sylow2_solvable = false;
  } else {
    const Cocycle2 rc = c.restrict(as_group(g, s2));
    out.sylow2_solvable = solve_sections(*rc.group, rc.modulus, rc.values).solution.solvable;
  }
  return out;
}

std::vector<std::vector<std::int64_t>> homomorphisms_to_cyclic(const FinGroup& g, std::int64_t m) {
  const SectionSystem sys = solve_sections(g, m, {});
  const auto ts = zmod::enumerate_span(sys.solution.kernel, m, sys.gens.size());
  std::vector<std::vector<std::int64_t>> out;
  for (const auto& t : ts) out.push_back(evaluate_section(sys, t, m, false));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Iterated semidirect products

std::vector<Elem> IteratedSemidirect::decode(Elem x) const {
  std::vector<Elem> parts(factors.size());
  for (std::size_t i = factors.size(); i-- > 0;) {
    const Elem m = static_cast<Elem>(factors[i]->order());
    parts[i] = x % m;
    x /= m;
  }
  return parts;
}

Elem IteratedSemidirect::encode(const std::vector<Elem>& parts) const {
  Elem x = 0;
  for (std::size_t i = 0; i < factors.size(); ++i) x = x * static_cast<Elem>(factors[i]->order()) + parts[i];
  return x;
}

Elem IteratedSemidirect::embed(std::size_t i, Elem a) const {
  std::vector<Elem> parts(factors.size());
  for (std::size_t k = 0; k < factors.size(); ++k) parts[k] = factors[k]->identity();
  parts[i] = a;
  return encode(parts);
}

namespace {

std::string witness_text(const char* what, std::size_t i, std::size_t j, Elem a, Elem b) {
  std::ostringstream os;
  os << what << " (i=" << i << ", j=" << j << ", a=" << a << ", b=" << b << ")";
  return os.str();
}

}  // namespace

IteratedSemidirect iterated_semidirect(std::vector<GroupPtr> factors, std::vector<FactorAction> actions) {
  const std::size_t n = factors.size();
  if (n == 0) throw DomainError("iterated_semidirect: no factors");
  std::size_t total = 1;
  for (const auto& f : factors) {
    total *= f->order();
    if (total > kMaxTableOrder) throw ResourceError("iterated_semidirect: product exceeds order bound");
  }
  // act[i][j] (j > i): table of A_j acting on A_i; trivial when absent.
  std::vector<std::vector<std::vector<Elem>>> act(n, std::vector<std::vector<Elem>>(n));
  for (const auto& a : actions) {
    if (a.acted >= a.acting || a.acting >= n) throw DomainError("iterated_semidirect: action must have acting > acted");
    if (a.table.size() != factors[a.acting]->order() * factors[a.acted]->order())
      throw DomainError("iterated_semidirect: action table size mismatch");
    act[a.acted][a.acting] = a.table;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (act[i][j].empty()) {
        const std::size_t mi = factors[i]->order(), mj = factors[j]->order();
        act[i][j].resize(mi * mj);
        for (std::size_t b = 0; b < mj; ++b)
          for (std::size_t a = 0; a < mi; ++a) act[i][j][b * mi + a] = static_cast<Elem>(a);
      }
  std::vector<std::size_t> orders(n);
  for (std::size_t i = 0; i < n; ++i) orders[i] = factors[i]->order();
  auto apply = [&](std::size_t i, std::size_t j, Elem b, Elem a) {
    return act[i][j][static_cast<std::size_t>(b) * orders[i] + a];
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const FinGroup& ai = *factors[i];
      const FinGroup& aj = *factors[j];
      for (Elem b = 0; b < aj.order(); ++b)
        for (Elem a = 0; a < ai.order(); ++a) {
          if (apply(i, j, aj.identity(), a) != a)
            throw DomainError(witness_text("iterated_semidirect: identity acts nontrivially", i, j, a, b));
          for (Elem a2 = 0; a2 < ai.order(); ++a2)
            if (apply(i, j, b, ai.mul(a, a2)) != ai.mul(apply(i, j, b, a), apply(i, j, b, a2)))
              throw DomainError(witness_text("iterated_semidirect: action is not by automorphisms", i, j, a, b));
          for (Elem b2 = 0; b2 < aj.order(); ++b2)
            if (apply(i, j, aj.mul(b, b2), a) != apply(i, j, b, apply(i, j, b2, a)))
              throw DomainError(witness_text("iterated_semidirect: not a group action", i, j, a, b));
        }
      for (std::size_t k = j + 1; k < n; ++k) {
        const FinGroup& ak = *factors[k];
        for (Elem c = 0; c < ak.order(); ++c)
          for (Elem b = 0; b < aj.order(); ++b) {
            const Elem cb = apply(j, k, c, b);
            for (Elem a = 0; a < ai.order(); ++a)
              if (apply(i, j, cb, apply(i, k, c, a)) != apply(i, k, c, apply(i, j, b, a))) {
                std::ostringstream os;
                os << "iterated_semidirect: cocycle condition fails (i=" << i << ", j=" << j << ", k=" << k
                   << ", a=" << a << ", b=" << b << ", c=" << c << ")";
                throw DomainError(os.str());
              }
          }
      }
    }
  IteratedSemidirect s;
  s.factors = std::move(factors);
  s.actions = std::move(actions);
  std::vector<Elem> table(total * total);
  for (Elem x = 0; x < total; ++x) {
    const auto a = s.decode(x);
    for (Elem y = 0; y < total; ++y) {
      const auto b = s.decode(y);
      std::vector<Elem> z(n);
      for (std::size_t k = 0; k < n; ++k) {
        Elem v = b[k];
        for (std::size_t l = n; l-- > k + 1;) v = apply(k, l, a[l], v);
        z[k] = s.factors[k]->mul(a[k], v);
      }
      table[static_cast<std::size_t>(x) * total + y] = s.encode(z);
    }
  }
  auto group = std::make_shared<const FinGroup>(total, std::move(table));
  check_invariant(group->verify_associativity(), "iterated_semidirect: product is not associative");
  s.group = std::move(group);
  return s;
}

DescentResult hom_descends(const IteratedSemidirect& s, const FinGroup& target,
                           const std::vector<std::vector<Elem>>& f) {
  const std::size_t n = s.factors.size();
  if (f.size() != n) throw DomainError("hom_descends: need one map per factor");
  for (std::size_t i = 0; i < n; ++i) {
    if (f[i].size() != s.factors[i]->order()) throw DomainError("hom_descends: map size mismatch");
    if (!is_homomorphism(*s.factors[i], target, f[i])) throw DomainError("hom_descends: f_i is not a homomorphism");
  }
  DescentResult out;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (Elem b = 0; b < s.factors[j]->order(); ++b)
        for (Elem a = 0; a < s.factors[i]->order(); ++a) {
          // ^b a computed inside the product: embed(j,b) embed(i,a) embed(j,b)^-1
          const Elem ba = s.decode(s.group->conj(s.embed(j, b), s.embed(i, a)))[i];
          if (f[i][ba] != target.conj(f[j][b], f[i][a])) {
            out.witness = DescentWitness{i, j, a, b};
            return out;
          }
        }
  std::vector<Elem> map(s.group->order());
  for (Elem x = 0; x < map.size(); ++x) {
    const auto parts = s.decode(x);
    Elem y = target.identity();
    for (std::size_t i = 0; i < n; ++i) y = target.mul(y, f[i][parts[i]]);
    map[x] = y;
  }
  if (map.size() <= 512) check_invariant(is_homomorphism(*s.group, target, map), "hom_descends: map is not a homomorphism");
  out.map = std::move(map);
  return out;
}

Subgroup internal_product(const FinGroup& g, const std::vector<Subgroup>& parts) {
  std::vector<GroupPtr> factors;
  std::vector<SubgroupGroup> subs;
  for (const auto& h : parts) {
    subs.push_back(as_group(g, h));
    factors.push_back(subs.back().group);
  }
  std::vector<FactorAction> actions;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    std::vector<Elem> pos(g.order(), 0);
    for (std::size_t k = 0; k < subs[i].embedding.size(); ++k) pos[subs[i].embedding[k]] = static_cast<Elem>(k);
    for (std::size_t j = i + 1; j < parts.size(); ++j) {
      FactorAction a{j, i, {}};
      const std::size_t mi = parts[i].order();
      a.table.resize(parts[j].order() * mi);
      for (std::size_t b = 0; b < parts[j].order(); ++b)
        for (std::size_t x = 0; x < mi; ++x) {
          const Elem y = g.conj(subs[j].embedding[b], subs[i].embedding[x]);
          if (!parts[i].contains(y)) throw DomainError("internal_product: H_j does not normalize H_i");
          a.table[b * mi + x] = pos[y];
        }
      actions.push_back(std::move(a));
    }
  }
  const IteratedSemidirect s = iterated_semidirect(std::move(factors), std::move(actions));
  std::vector<std::vector<Elem>> f;
  for (const auto& sg : subs) f.push_back(sg.embedding);
  const DescentResult d = hom_descends(s, g, f);
  check_invariant(d.map.has_value(), "internal_product: conjugation action must descend");
  return make_subset(g, *d.map);
}

}  // namespace heisweil::grp
