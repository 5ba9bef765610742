#include "mw/congruence.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace mw {

namespace {

struct UnionFind {
  std::vector<std::uint32_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::uint32_t find(std::uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(std::uint32_t a, std::uint32_t b) {
    a = find(a), b = find(b);
    if (a == b) return false;
    if (a < b) std::swap(a, b);
    parent[a] = b;
    return true;
  }
};

Congruence normalize(UnionFind& uf) {
  const std::size_t n = uf.parent.size();
  std::vector<std::uint32_t> id(n, UINT32_MAX);
  Congruence c;
  c.blocks.resize(n);
  std::uint32_t next = 0;
  for (std::uint32_t x = 0; x < n; ++x) {
    auto r = uf.find(x);
    if (id[r] == UINT32_MAX) id[r] = next++;
    c.blocks[x] = id[r];
  }
  return c;
}

// Close the union-find under one-slot translations of the pending pairs.
void saturate(const Algebra& alg, UnionFind& uf, std::vector<Pair> work) {
  const std::size_t n = alg.size();
  std::vector<Elem> args;
  auto merge = [&](Elem x, Elem y) {
    if (uf.unite(x, y)) work.emplace_back(x, y);
  };
  while (!work.empty()) {
    auto [a, b] = work.back();
    work.pop_back();
    for (std::size_t op = 0; op < alg.op_count(); ++op) {
      const int r = alg.arity(op);
      const Elem* t = alg.op(op).entries.data();
      if (r == 1) {
        merge(t[a], t[b]);
      } else if (r == 2) {
        for (std::size_t y = 0; y < n; ++y) merge(t[a * n + y], t[b * n + y]);
        for (std::size_t x = 0; x < n; ++x) merge(t[x * n + a], t[x * n + b]);
      } else if (r > 2) {
        const std::size_t others = ipow(n, r - 1);
        args.assign(r - 1, 0);
        for (int s = 0; s < r; ++s)
          for (std::size_t c = 0; c < others; ++c) {
            decode_tuple(c, n, args);
            std::size_t ia = 0, ib = 0;
            for (int q = 0, j = 0; q < r; ++q) {
              Elem va = q == s ? a : args[j];
              Elem vb = q == s ? b : args[j];
              if (q != s) ++j;
              ia = ia * n + va;
              ib = ib * n + vb;
            }
            merge(t[ia], t[ib]);
          }
      }
    }
  }
}

}  // namespace

Congruence Congruence::zero(std::size_t n) {
  Congruence c;
  c.blocks.resize(n);
  std::iota(c.blocks.begin(), c.blocks.end(), 0);
  return c;
}

Congruence Congruence::one(std::size_t n) {
  Congruence c;
  c.blocks.assign(n, 0);
  return c;
}

Congruence Congruence::from_labels(std::span<const std::uint32_t> labels) {
  std::map<std::uint32_t, std::uint32_t> id;
  Congruence c;
  for (auto l : labels) {
    auto [it, fresh] = id.emplace(l, static_cast<std::uint32_t>(id.size()));
    c.blocks.push_back(it->second);
  }
  return c;
}

std::size_t Congruence::block_count() const {
  std::uint32_t m = 0;
  for (auto b : blocks) m = std::max(m, b + 1);
  return blocks.empty() ? 0 : m;
}

bool Congruence::leq(const Congruence& o) const {
  // every block of this lies inside one block of o
  std::vector<std::uint32_t> img(block_count(), UINT32_MAX);
  for (std::size_t x = 0; x < blocks.size(); ++x) {
    auto& v = img[blocks[x]];
    if (v == UINT32_MAX) v = o.blocks[x];
    else if (v != o.blocks[x]) return false;
  }
  return true;
}

std::vector<std::vector<Elem>> Congruence::classes() const {
  std::vector<std::vector<Elem>> out(block_count());
  for (std::size_t x = 0; x < blocks.size(); ++x) out[blocks[x]].push_back(static_cast<Elem>(x));
  return out;
}

std::vector<Elem> Congruence::block_of(Elem a) const {
  std::vector<Elem> out;
  for (std::size_t x = 0; x < blocks.size(); ++x)
    if (blocks[x] == blocks[a]) out.push_back(static_cast<Elem>(x));
  return out;
}

std::vector<Pair> Congruence::spanning_pairs() const {
  std::vector<Pair> out;
  std::vector<int> first(block_count(), -1);
  for (std::size_t x = 0; x < blocks.size(); ++x) {
    int& f = first[blocks[x]];
    if (f < 0) f = static_cast<int>(x);
    else out.emplace_back(static_cast<Elem>(f), static_cast<Elem>(x));
  }
  return out;
}

Congruence cg_extend(const Algebra& alg, const Congruence& base, std::span<const Pair> pairs) {
  const std::size_t n = alg.size();
  if (base.universe() != n) throw Error(Errc::InvalidArgument, "congruence over a different universe");
  UnionFind uf(n);
  for (auto [a, b] : base.spanning_pairs()) uf.unite(a, b);
  std::vector<Pair> work;
  for (auto [a, b] : pairs) {
    if (a >= n || b >= n) throw Error(Errc::ElementOutOfRange, "pair element out of range");
    if (uf.unite(a, b)) work.emplace_back(a, b);
  }
  saturate(alg, uf, std::move(work));
  return normalize(uf);
}

Congruence cg(const Algebra& alg, std::span<const Pair> pairs) {
  return cg_extend(alg, Congruence::zero(alg.size()), pairs);
}

Congruence join(const Algebra& alg, const Congruence& a, const Congruence& b) {
  auto p = b.spanning_pairs();
  return cg_extend(alg, a, p);
}

Congruence meet(const Congruence& a, const Congruence& b) {
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> id;
  Congruence c;
  for (std::size_t x = 0; x < a.blocks.size(); ++x) {
    auto [it, fresh] = id.emplace(std::make_pair(a.blocks[x], b.blocks[x]), static_cast<std::uint32_t>(id.size()));
    c.blocks.push_back(it->second);
  }
  return c;
}

bool is_compatible(const Algebra& alg, const Congruence& c) {
  // one-slot translations of spanning pairs suffice
  const std::size_t n = alg.size();
  std::vector<Elem> args;
  for (auto [a, b] : c.spanning_pairs())
    for (std::size_t op = 0; op < alg.op_count(); ++op) {
      const int r = alg.arity(op);
      if (r == 0) continue;
      const Elem* t = alg.op(op).entries.data();
      const std::size_t others = ipow(n, r - 1);
      args.assign(r - 1, 0);
      for (int s = 0; s < r; ++s)
        for (std::size_t k = 0; k < others; ++k) {
          decode_tuple(k, n, args);
          std::size_t ia = 0, ib = 0;
          for (int q = 0, j = 0; q < r; ++q) {
            Elem va = q == s ? a : args[j];
            Elem vb = q == s ? b : args[j];
            if (q != s) ++j;
            ia = ia * n + va;
            ib = ib * n + vb;
          }
          if (!c.related(t[ia], t[ib])) return false;
        }
    }
  return true;
}

bool composes_to(const Congruence& a, const Congruence& b, const Congruence& target) {
  const std::size_t n = a.universe();
  auto bc = b.classes();
  for (std::size_t x = 0; x < n; ++x) {
    std::vector<char> reach(n, 0);
    for (std::size_t y = 0; y < n; ++y)
      if (a.blocks[y] == a.blocks[x])
        for (Elem z : bc[b.blocks[y]]) reach[z] = 1;
    for (std::size_t z = 0; z < n; ++z)
      if (static_cast<bool>(reach[z]) != (target.blocks[z] == target.blocks[x])) return false;
  }
  return true;
}

bool canonical_less(const Congruence& a, const Congruence& b) {
  auto ca = a.block_count(), cb = b.block_count();
  if (ca != cb) return ca > cb;
  return a.blocks < b.blocks;
}

std::int64_t CongruenceLattice::index_of(const Congruence& c) const {
  auto it = std::lower_bound(members.begin(), members.end(), c, canonical_less);
  if (it == members.end() || !(*it == c)) return -1;
  return it - members.begin();
}

std::size_t CongruenceLattice::require(const Congruence& c) const {
  auto i = index_of(c);
  if (i < 0) throw Error(Errc::InvalidArgument, "not a member of the congruence lattice");
  return static_cast<std::size_t>(i);
}

std::size_t CongruenceLattice::join_index(std::size_t a, std::size_t b) const {
  // least upper bound in the refinement order
  std::size_t best = one;
  for (std::size_t c = 0; c < size(); ++c)
    if (leq[a][c] && leq[b][c] && leq[c][best]) best = c;
  return best;
}

std::size_t CongruenceLattice::meet_index(std::size_t a, std::size_t b) const {
  return require(meet(members[a], members[b]));
}

std::vector<std::pair<std::size_t, std::size_t>> CongruenceLattice::hasse_edges() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t a = 0; a < size(); ++a)
    for (std::size_t b = 0; b < size(); ++b) {
      if (a == b || !leq[a][b]) continue;
      bool cover = true;
      for (std::size_t c = 0; c < size() && cover; ++c)
        if (c != a && c != b && leq[a][c] && leq[c][b]) cover = false;
      if (cover) out.emplace_back(a, b);
    }
  return out;
}

bool CongruenceLattice::is_modular() const {
  // a <= c implies a ∨ (b ∧ c) = (a ∨ b) ∧ c
  for (std::size_t a = 0; a < size(); ++a)
    for (std::size_t c = 0; c < size(); ++c) {
      if (!leq[a][c]) continue;
      for (std::size_t b = 0; b < size(); ++b)
        if (join_index(a, meet_index(b, c)) != meet_index(join_index(a, b), c)) return false;
    }
  return true;
}

CongruenceLattice congruence_lattice(const Algebra& alg, std::size_t cap) {
  const std::size_t n = alg.size();
  std::vector<Congruence> found;
  std::set<std::vector<std::uint32_t>> seen;
  auto add = [&](Congruence c) {
    if (seen.insert(c.blocks).second) {
      found.push_back(std::move(c));
      if (found.size() > cap) throw Error(Errc::SizeOverflow, "congruence lattice exceeds cap");
    }
  };
  add(Congruence::zero(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) {
      Pair p{static_cast<Elem>(a), static_cast<Elem>(b)};
      add(cg(alg, std::span<const Pair>(&p, 1)));
    }
  // join closure; principal congruences join-generate the lattice
  for (std::size_t i = 0; i < found.size(); ++i)
    for (std::size_t j = 0; j < i; ++j) {
      if (found[i].leq(found[j]) || found[j].leq(found[i])) continue;
      add(join(alg, found[i], found[j]));
    }
  add(Congruence::one(n));
  std::sort(found.begin(), found.end(), canonical_less);
  CongruenceLattice L;
  L.members = std::move(found);
  L.zero = 0;
  L.one = L.members.size() - 1;
  L.leq.assign(L.size(), std::vector<char>(L.size(), 0));
  for (std::size_t a = 0; a < L.size(); ++a)
    for (std::size_t b = 0; b < L.size(); ++b) L.leq[a][b] = L.members[a].leq(L.members[b]);
  return L;
}

Quotient quotient(const Algebra& alg, const Congruence& c) {
  const std::size_t n = alg.size();
  const std::size_t m = c.block_count();
  Quotient q;
  q.proj.resize(n);
  q.rep.assign(m, 0);
  std::vector<char> seen(m, 0);
  for (std::size_t x = 0; x < n; ++x) {
    q.proj[x] = static_cast<Elem>(c.blocks[x]);
    if (!seen[c.blocks[x]]) seen[c.blocks[x]] = 1, q.rep[c.blocks[x]] = static_cast<Elem>(x);
  }
  std::map<std::string, OpTable> ops;
  std::vector<Elem> args;
  for (std::size_t op = 0; op < alg.op_count(); ++op) {
    const int r = alg.arity(op);
    OpTable t{r, std::vector<Elem>(ipow(m, r))};
    args.resize(r);
    for (std::size_t i = 0; i < t.entries.size(); ++i) {
      decode_tuple(i, m, args);
      for (auto& a : args) a = q.rep[a];
      t.entries[i] = q.proj[alg.apply(op, args)];
    }
    ops[alg.op_name(op)] = std::move(t);
  }
  q.algebra = Algebra(m, std::move(ops));
  return q;
}

Congruence congruence_mod(const Quotient& q, const Congruence& c) {
  std::vector<std::uint32_t> labels(q.rep.size());
  for (std::size_t b = 0; b < q.rep.size(); ++b) labels[b] = c.blocks[q.rep[b]];
  return Congruence::from_labels(labels);
}

Congruence lift_congruence(const Quotient& q, const Congruence& c) {
  std::vector<std::uint32_t> labels(q.proj.size());
  for (std::size_t x = 0; x < q.proj.size(); ++x) labels[x] = c.blocks[q.proj[x]];
  return Congruence::from_labels(labels);
}

}  // namespace mw
