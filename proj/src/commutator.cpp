#include "mw/commutator.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <set>

namespace mw {

// ------------------------------------------------------------ workbench

Workbench::Workbench(Algebra alg, Caps caps) : alg_(std::move(alg)), caps_(caps) {}

Workbench::Workbench(Algebra alg, Circuit maltsev, Caps caps)
    : alg_(std::move(alg)), caps_(caps), maltsev_(std::move(maltsev)), searched_(true) {
  if (!verify_maltsev(alg_, *maltsev_)) throw Error(Errc::NotMaltsev, "supplied circuit is not a Maltsev operation");
}

bool Workbench::is_maltsev() {
  if (!searched_) {
    maltsev_ = find_maltsev(alg_, caps_.clone);
    searched_ = true;
  }
  return maltsev_.has_value();
}

const Circuit& Workbench::maltsev() {
  if (!is_maltsev()) throw Error(Errc::NotMaltsev, "no Maltsev polynomial exists");
  return *maltsev_;
}

std::span<const Elem> Workbench::maltsev_table() {
  if (mtable_.empty()) mtable_ = circuit_to_function(alg_, maltsev(), 3, 20'000'000).table;
  return mtable_;
}

const CongruenceLattice& Workbench::lattice() {
  if (!lattice_) lattice_ = congruence_lattice(alg_, caps_.lattice);
  return *lattice_;
}

const std::vector<std::vector<Elem>>& Workbench::unary_permutations() {
  if (perms_) return *perms_;
  perms_.emplace();
  const std::size_t n = size();
  try {
    auto clone = generate_polynomial_clone(alg_, 1, caps_.clone);
    for (std::size_t i = 0; i < clone.size(); ++i) {
      auto t = clone.table(i);
      std::vector<char> hit(n, 0);
      bool bij = true;
      for (Elem e : t) {
        if (hit[e]) {
          bij = false;
          break;
        }
        hit[e] = 1;
      }
      if (bij) perms_->emplace_back(t.begin(), t.end());
    }
  } catch (const Error& e) {
    if (e.code() != Errc::CapExceeded) throw;
    perms_->clear();
  }
  return *perms_;
}

Circuit map_constants(const Circuit& c, std::span<const Elem> proj) {
  Circuit out = c;
  for (auto& g : out.gates)
    if (g.kind == Gate::Kind::Const) g.value = proj[g.value];
  return out;
}

std::unique_ptr<Workbench> Workbench::quotient_bench(const Congruence& c, Quotient* qout) {
  Quotient q = quotient(alg_, c);
  auto mt = maltsev_table();
  auto wb = std::make_unique<Workbench>(q.algebra, caps_);
  wb->maltsev_ = map_constants(maltsev(), q.proj);
  wb->searched_ = true;
  const std::size_t n = size(), m = q.rep.size();
  wb->mtable_.resize(m * m * m);
  for (std::size_t x = 0; x < m; ++x)
    for (std::size_t y = 0; y < m; ++y)
      for (std::size_t z = 0; z < m; ++z)
        wb->mtable_[(x * m + y) * m + z] = q.proj[mt[(q.rep[x] * n + q.rep[y]) * n + q.rep[z]]];
  if (qout) *qout = std::move(q);
  return wb;
}

Congruence Workbench::commutator(const std::vector<Congruence>& alphas, CommutatorMethod method) {
  std::vector<std::vector<std::uint32_t>> key;
  for (const auto& a : alphas) key.push_back(a.blocks);
  auto k = std::make_pair(static_cast<int>(method), key);
  auto it = memo_.find(k);
  if (it != memo_.end()) return it->second;
  Congruence c = higher_commutator(*this, alphas, method);
  memo_.emplace(std::move(k), c);
  return c;
}

std::vector<Pair> pair_orbit_representatives(std::size_t n, const Congruence& c,
                                             const std::vector<std::vector<Elem>>& perms,
                                             bool include_diagonal) {
  // union-find over pair indices a*n+b
  std::vector<std::uint32_t> parent(n * n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& p : perms)
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        if (!c.related(static_cast<Elem>(a), static_cast<Elem>(b))) continue;
        auto x = find(static_cast<std::uint32_t>(a * n + b));
        auto y = find(static_cast<std::uint32_t>(p[a] * n + p[b]));
        if (x != y) parent[std::max(x, y)] = std::min(x, y);
      }
  std::vector<Pair> out;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      if (!c.related(static_cast<Elem>(a), static_cast<Elem>(b))) continue;
      if (a == b && !include_diagonal) continue;
      auto i = static_cast<std::uint32_t>(a * n + b);
      if (find(i) == i) out.emplace_back(static_cast<Elem>(a), static_cast<Elem>(b));
    }
  // a root may be a diagonal pair standing for an orbit we dropped; orbits
  // never mix diagonal and off-diagonal pairs, so nothing is lost
  return out;
}

// ------------------------------------------------------------ absorbing

bool is_absorbing_at(std::size_t n, int k, std::span<const Elem> table, std::span<const Elem> anchor) {
  const Elem v = table[encode_tuple(anchor, n)];
  std::vector<Elem> args(k);
  for (std::size_t i = 0; i < table.size(); ++i) {
    decode_tuple(i, n, args);
    bool hits = false;
    for (int s = 0; s < k && !hits; ++s) hits = args[s] == anchor[s];
    if (hits && table[i] != v) return false;
  }
  return true;
}

std::vector<AbsorbingWitness> absorbing_at(const Algebra& alg, int k, std::span<const Elem> anchor,
                                           std::size_t cap) {
  if (anchor.size() != static_cast<std::size_t>(k)) throw Error(Errc::InvalidArgument, "anchor length must equal k");
  for (Elem a : anchor)
    if (a >= alg.size()) throw Error(Errc::ElementOutOfRange, "anchor element out of range");
  auto clone = generate_polynomial_clone(alg, k, cap);
  std::vector<AbsorbingWitness> out;
  for (std::size_t i = 0; i < clone.size(); ++i) {
    auto t = clone.table(i);
    if (!is_absorbing_at(alg.size(), k, t, anchor)) continue;
    AbsorbingWitness w;
    w.function = clone.function(i);
    w.circuit = clone.witness(alg, i);
    w.anchor.assign(anchor.begin(), anchor.end());
    w.value = t[encode_tuple(anchor, alg.size())];
    out.push_back(std::move(w));
  }
  return out;
}

std::optional<AbsorbingWitness> find_absorbing(const Algebra& alg, int k, std::span<const Elem> anchor,
                                               const std::function<bool(std::span<const Elem>)>& pred,
                                               std::size_t cap) {
  if (anchor.size() != static_cast<std::size_t>(k)) throw Error(Errc::InvalidArgument, "anchor length must equal k");
  std::int64_t hit = -1;
  auto clone = generate_polynomial_clone(alg, k, cap, [&](const PolynomialClone& c, std::uint32_t i) {
    auto t = c.table(i);
    if (is_absorbing_at(alg.size(), k, t, anchor) && pred(t)) {
      hit = i;
      return false;
    }
    return true;
  });
  if (hit < 0) return std::nullopt;
  AbsorbingWitness w;
  w.function = clone.function(hit);
  w.circuit = clone.witness(alg, hit);
  w.anchor.assign(anchor.begin(), anchor.end());
  w.value = w.function.table[encode_tuple(anchor, alg.size())];
  return w;
}

// ------------------------------------------------------------ commutator

namespace {

void check_args(const Workbench& wb, const std::vector<Congruence>& alphas) {
  if (alphas.empty()) throw Error(Errc::InvalidArgument, "commutator needs at least one congruence");
  for (const auto& a : alphas)
    if (a.universe() != wb.size()) throw Error(Errc::InvalidArgument, "congruence over a different universe");
}

// Odometer over a product of index ranges; f returns false to stop.
template <class F>
void for_each_tuple(const std::vector<std::size_t>& radix, F&& f) {
  for (auto r : radix)
    if (r == 0) return;
  std::vector<std::size_t> idx(radix.size(), 0);
  while (true) {
    if (!f(idx)) return;
    std::size_t q = radix.size();
    while (q > 0) {
      --q;
      if (++idx[q] < radix[q]) break;
      idx[q] = 0;
      if (q == 0) return;
    }
    if (radix.empty()) return;
  }
}

// Apply the absorbing projection D = D_k ∘ … ∘ D_1 to a cube row.
void absorb(std::span<const Elem> mt, std::size_t n, int k, Elem* g) {
  const std::size_t w = std::size_t{1} << k;
  for (int i = 0; i < k; ++i) {
    const std::size_t bit = std::size_t{1} << i;
    const Elem g0 = g[0];
    for (std::size_t mask = 0; mask < w; ++mask)
      if (mask & bit) g[mask] = mt[(g[mask] * n + g[mask ^ bit]) * n + g0];
    for (std::size_t mask = 0; mask < w; ++mask)
      if (!(mask & bit)) g[mask] = g0;
  }
}

Congruence cube_commutator(Workbench& wb, const std::vector<Congruence>& alphas) {
  const Algebra& A = wb.algebra();
  const int k = static_cast<int>(alphas.size());
  if (k > 6) throw Error(Errc::InvalidArgument, "cube method supports arity at most 6");
  const std::size_t w = std::size_t{1} << k;
  Congruence gamma = wb.zero();
  while (true) {
    std::unique_ptr<Workbench> holder;
    Quotient q;
    Workbench* B = &wb;
    if (!gamma.is_zero()) {
      holder = wb.quotient_bench(gamma, &q);
      B = holder.get();
    }
    const std::size_t nb = B->size();
    auto mt = B->maltsev_table();
    const auto& perms = B->unary_permutations();
    std::vector<std::vector<Pair>> reps(k);
    std::vector<std::size_t> radix(k);
    bool trivial = false;
    for (int i = 0; i < k; ++i) {
      Congruence ai = join(A, alphas[i], gamma);
      if (B != &wb) ai = congruence_mod(q, ai);
      reps[i] = pair_orbit_representatives(nb, ai, perms, false);
      radix[i] = reps[i].size();
      if (reps[i].empty()) trivial = true;
    }
    if (trivial) return gamma;

    std::optional<Pair> violation;
    std::vector<Elem> row(w), g(w);
    for_each_tuple(radix, [&](const std::vector<std::size_t>& idx) {
      RowSet set(w);
      for (std::size_t e = 0; e < nb; ++e) {
        std::fill(row.begin(), row.end(), static_cast<Elem>(e));
        set.insert(row.data());
      }
      for (int i = 0; i < k; ++i) {
        auto [a, b] = reps[i][idx[i]];
        for (std::size_t mask = 0; mask < w; ++mask) row[mask] = (mask >> i) & 1 ? b : a;
        set.insert(row.data());
      }
      close_subpower(B->algebra(), set, wb.caps().cube, [&](std::uint32_t r) {
        const Elem* s = set.row(r);
        std::copy(s, s + w, g.begin());
        absorb(mt, nb, k, g.data());
        if (g[w - 1] != g[0]) {
          violation = Pair{g[0], g[w - 1]};
          return false;
        }
        return true;
      });
      return !violation;
    });
    if (!violation) return gamma;
    Pair p = *violation;
    if (B != &wb) p = Pair{q.rep[p.first], q.rep[p.second]};
    gamma = cg_extend(A, gamma, std::span<const Pair>(&p, 1));
  }
}

Congruence clone_commutator(Workbench& wb, const std::vector<Congruence>& alphas) {
  const Algebra& A = wb.algebra();
  const std::size_t n = A.size();
  const int k = static_cast<int>(alphas.size());
  auto clone = generate_polynomial_clone(A, k, wb.caps().clone);
  std::vector<std::vector<Elem>> blocks_of(k);
  std::vector<Pair> pairs;
  std::set<Pair> seen;
  const std::size_t anchors = ipow(n, k);
  std::vector<Elem> a(k), b(k);
  for (std::size_t i = 0; i < clone.size(); ++i) {
    auto t = clone.table(i);
    for (std::size_t ai = 0; ai < anchors; ++ai) {
      decode_tuple(ai, n, a);
      if (!is_absorbing_at(n, k, t, a)) continue;
      const Elem v = t[ai];
      std::vector<std::size_t> radix(k);
      std::vector<std::vector<Elem>> cls(k);
      for (int s = 0; s < k; ++s) {
        cls[s] = alphas[s].block_of(a[s]);
        radix[s] = cls[s].size();
      }
      for_each_tuple(radix, [&](const std::vector<std::size_t>& idx) {
        for (int s = 0; s < k; ++s) b[s] = cls[s][idx[s]];
        Elem u = t[encode_tuple(b, n)];
        if (u != v && seen.insert(Pair{std::min(u, v), std::max(u, v)}).second) pairs.emplace_back(v, u);
        return true;
      });
    }
  }
  return cg(A, pairs);
}

}  // namespace

Congruence higher_commutator(Workbench& wb, const std::vector<Congruence>& alphas, CommutatorMethod method) {
  check_args(wb, alphas);
  if (alphas.size() == 1) return alphas[0];
  wb.maltsev();  // NotMaltsev
  if (method == CommutatorMethod::Clone) return clone_commutator(wb, alphas);
  return cube_commutator(wb, alphas);
}

// ------------------------------------------------------------ centralizer

CentralizerVerdict check_centralizes(Workbench& wb, const std::vector<Congruence>& alphas,
                                     const Congruence& delta, std::vector<int> block_arities) {
  check_args(wb, alphas);
  const Algebra& A = wb.algebra();
  const std::size_t n = A.size();
  const int blocks = static_cast<int>(alphas.size());
  if (blocks > 6) throw Error(Errc::InvalidArgument, "at most 6 congruences");
  if (block_arities.empty()) block_arities.assign(blocks, 1);
  if (block_arities.size() != alphas.size()) throw Error(Errc::InvalidArgument, "one arity per congruence");
  Quotient q = quotient(A, delta);
  const Algebra& B = q.algebra;
  const std::size_t nb = B.size();
  const std::size_t w = std::size_t{1} << blocks;
  const std::size_t last = std::size_t{1} << (blocks - 1);

  // unary polynomial permutations act independently on every variable
  std::vector<std::vector<Elem>> perms;
  bool maltsev = wb.is_maltsev();
  if (maltsev) perms = wb.unary_permutations();
  std::vector<int> slot_block;
  std::vector<std::vector<Pair>> reps;
  std::vector<std::size_t> radix;
  for (int i = 0; i < blocks; ++i) {
    if (block_arities[i] < 1) throw Error(Errc::InvalidArgument, "block arity must be positive");
    auto r = pair_orbit_representatives(n, alphas[i], perms, true);
    for (int j = 0; j < block_arities[i]; ++j) {
      slot_block.push_back(i);
      reps.push_back(r);
      radix.push_back(r.size());
    }
  }

  CentralizerVerdict verdict;
  std::vector<Elem> row(w);
  for_each_tuple(radix, [&](const std::vector<std::size_t>& idx) {
    // a block whose slots are all diagonal makes the condition trivial
    std::vector<char> moved(blocks, 0);
    for (std::size_t s = 0; s < idx.size(); ++s) {
      auto [a, b] = reps[s][idx[s]];
      if (a != b) moved[slot_block[s]] = 1;
    }
    for (int i = 0; i < blocks; ++i)
      if (!moved[i]) return true;
    ++verdict.cubes;
    RowSet set(w);
    for (std::size_t e = 0; e < nb; ++e) {
      std::fill(row.begin(), row.end(), static_cast<Elem>(e));
      set.insert(row.data());
    }
    for (std::size_t s = 0; s < idx.size(); ++s) {
      auto [a, b] = reps[s][idx[s]];
      const int i = slot_block[s];
      for (std::size_t mask = 0; mask < w; ++mask) row[mask] = q.proj[(mask >> i) & 1 ? b : a];
      set.insert(row.data());
    }
    bool bad = false;
    try {
      close_subpower(B, set, wb.caps().cube, [&](std::uint32_t r) {
        const Elem* s = set.row(r);
        for (std::size_t y = 0; y + 1 < last; ++y)
          if (s[y] != s[y | last]) return true;
        if (s[last - 1] != s[w - 1]) {
          bad = true;
          return false;
        }
        return true;
      });
    } catch (const Error& e) {
      if (e.code() != Errc::CapExceeded) throw;
      verdict.complete = false;
    }
    if (bad) {
      verdict.holds = false;
      return false;
    }
    return true;
  });
  return verdict;
}

// ------------------------------------------------------------ series

SeriesResult derived_series(Workbench& wb, const Congruence& alpha) {
  SeriesResult r;
  r.terms.push_back(alpha);
  Congruence cur = alpha;
  for (int i = 0;; ++i) {
    if (cur.is_zero()) {
      r.degree = i;
      return r;
    }
    Congruence next = wb.commutator({cur, cur});
    if (next == cur) return r;
    r.terms.push_back(next);
    cur = next;
  }
}

SeriesResult central_series(Workbench& wb, const Congruence& alpha) {
  SeriesResult r;
  r.terms.push_back(alpha);
  Congruence cur = alpha;
  for (int i = 0;; ++i) {
    if (cur.is_zero()) {
      r.degree = i;
      return r;
    }
    Congruence next = wb.commutator({alpha, cur});
    if (next == cur) return r;
    r.terms.push_back(next);
    cur = next;
  }
}

SeriesResult supernilpotent_series(Workbench& wb, const Congruence& alpha) {
  SeriesResult r;
  r.terms.push_back(alpha);
  if (alpha.is_zero()) {
    r.degree = 0;
    return r;
  }
  for (int arity = 2; arity <= wb.caps().max_arity; ++arity) {
    Congruence c = wb.commutator(std::vector<Congruence>(arity, alpha));
    r.terms.push_back(c);
    if (c.is_zero()) {
      r.degree = arity - 1;
      return r;
    }
    // two equal consecutive terms above 0: treated as stable
    if (r.terms.size() >= 3 && r.terms[r.terms.size() - 2] == c) return r;
  }
  return r;
}

namespace {

bool is_prime(std::size_t p) {
  if (p < 2) return false;
  for (std::size_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

// prime whose powers all block counts are; 0 if all counts are 1; -1 if none
int block_prime(const Congruence& alpha, const Congruence& beta) {
  std::map<std::uint32_t, std::set<std::uint32_t>> inside;
  for (std::size_t x = 0; x < alpha.universe(); ++x) inside[alpha.blocks[x]].insert(beta.blocks[x]);
  int prime = 0;
  for (auto& [blk, bs] : inside) {
    std::size_t c = bs.size();
    if (c == 1) continue;
    std::size_t p = 2;
    while (c % p) ++p;
    while (c % p == 0) c /= p;
    if (c != 1) return -1;
    if (prime == 0) prime = static_cast<int>(p);
    else if (prime != static_cast<int>(p)) return -1;
  }
  return prime;
}

}  // namespace

SupernilpotenceCertificate is_supernilpotent(Workbench& wb, const Congruence& alpha) {
  SupernilpotenceCertificate cert;
  cert.nilpotent = central_series(wb, alpha).degree.has_value();
  if (!cert.nilpotent) return cert;
  const auto& L = wb.lattice();
  std::vector<std::size_t> cands;
  std::vector<int> primes;
  for (std::size_t i = 0; i < L.size(); ++i) {
    if (!L.members[i].leq(alpha)) continue;
    int p = block_prime(alpha, L.members[i]);
    if (p < 0) continue;
    cands.push_back(i);
    primes.push_back(p);
  }
  std::set<std::vector<std::uint32_t>> failed;
  std::vector<std::size_t> chosen;
  std::function<bool(const Congruence&)> dfs = [&](const Congruence& M) -> bool {
    if (M.is_zero()) return true;
    if (failed.count(M.blocks)) return false;
    for (std::size_t c = 0; c < cands.size(); ++c) {
      const Congruence& beta = L.members[cands[c]];
      Congruence next = meet(M, beta);
      if (next == M) continue;
      if (!chosen.empty() && !(composes_to(M, beta, alpha) && composes_to(beta, M, alpha))) continue;
      chosen.push_back(c);
      if (dfs(next)) return true;
      chosen.pop_back();
    }
    failed.insert(M.blocks);
    return false;
  };
  if (dfs(alpha)) {
    cert.holds = true;
    for (auto c : chosen) {
      cert.betas.push_back(L.members[cands[c]]);
      cert.primes.push_back(primes[c]);
    }
  }
  (void)is_prime;
  return cert;
}

// ------------------------------------------------------------ Fitting

FittingData fitting(Workbench& wb) {
  FittingData F;
  const std::size_t height = wb.size() + 1;

  // lower series
  Congruence g = wb.one();
  F.lower.push_back(g);
  for (std::size_t step = 0; step < height; ++step) {
    if (g.is_zero()) {
      F.lower_length = static_cast<int>(F.lower.size()) - 1;
      break;
    }
    std::optional<Congruence> prev;
    Congruence c = g;
    bool stable = false;
    for (int arity = 2; arity <= wb.caps().max_arity; ++arity) {
      c = wb.commutator(std::vector<Congruence>(arity, g));
      if (c.is_zero() || (prev && *prev == c)) {
        stable = true;
        break;
      }
      prev = c;
    }
    if (!stable) F.lower_complete = false;
    if (c == g) break;  // stuck above 0: infinite
    F.lower.push_back(c);
    g = c;
  }

  // upper series
  Congruence lam = wb.zero();
  F.upper.push_back(lam);
  const auto& L = wb.lattice();
  for (std::size_t step = 0; step < height; ++step) {
    if (lam.is_one()) {
      F.upper_length = static_cast<int>(F.upper.size()) - 1;
      break;
    }
    Quotient q;
    auto qb = wb.quotient_bench(lam, &q);
    Congruence next = lam;
    for (const auto& beta : L.members) {
      if (!lam.leq(beta) || beta.leq(next)) continue;
      if (is_supernilpotent(*qb, congruence_mod(q, beta)).holds) next = join(wb.algebra(), next, beta);
    }
    if (next == lam) break;
    F.upper.push_back(next);
    lam = next;
  }
  F.fitting_congruence = F.upper.size() > 1 ? F.upper[1] : wb.zero();
  if (F.lower_length && F.upper_length) {
    F.agree = *F.lower_length == *F.upper_length;
    F.length = F.upper_length;
  } else if (!F.lower_length && !F.upper_length) {
    F.agree = true;
  } else {
    F.agree = !F.lower_complete;
    F.length = F.upper_length ? F.upper_length : F.lower_length;
  }
  return F;
}

// ------------------------------------------------------------ class generators

ClassDecomposition commutator_class_generators(Workbench& wb, const std::vector<Congruence>& alphas, Elem zero) {
  check_args(wb, alphas);
  const Algebra& A = wb.algebra();
  const std::size_t n = A.size();
  if (zero >= n) throw Error(Errc::ElementOutOfRange, "zero out of range");
  const int k = static_cast<int>(alphas.size());
  ClassDecomposition out;
  out.gamma = wb.commutator(alphas);
  out.block = out.gamma.block_of(zero);
  auto mt = wb.maltsev_table();
  auto add = [&](Elem x, Elem y) { return mt[(x * n + zero) * n + y]; };

  std::vector<std::vector<Elem>> cls(k);
  std::vector<std::size_t> radix(k);
  for (int i = 0; i < k; ++i) {
    cls[i] = alphas[i].block_of(zero);
    radix[i] = cls[i].size();
  }
  std::set<Elem> N{zero};
  const std::set<Elem> target(out.block.begin(), out.block.end());
  const std::size_t pts = ipow(n, k);
  std::vector<Elem> g(pts), args(k), shifted(k);
  std::vector<std::size_t> chosen;

  if (N != target) {
    auto clone = generate_polynomial_clone(A, k, wb.caps().clone, [&](const PolynomialClone& c, std::uint32_t idx) {
      auto t = c.table(idx);
      std::copy(t.begin(), t.end(), g.begin());
      // absorbing projection at 0̄ over the whole table
      for (int i = 0; i < k; ++i) {
        const Elem g0 = g[encode_tuple(std::vector<Elem>(k, zero), n)];
        std::vector<Elem> next(pts);
        for (std::size_t x = 0; x < pts; ++x) {
          decode_tuple(x, n, args);
          shifted = args;
          shifted[i] = zero;
          next[x] = mt[(g[x] * n + g[encode_tuple(shifted, n)]) * n + g0];
        }
        g.swap(next);
      }
      const Elem c0 = g[encode_tuple(std::vector<Elem>(k, zero), n)];
      std::set<Elem> image;
      for_each_tuple(radix, [&](const std::vector<std::size_t>& ix) {
        for (int i = 0; i < k; ++i) args[i] = cls[i][ix[i]];
        image.insert(mt[(g[encode_tuple(args, n)] * n + c0) * n + zero]);
        return true;
      });
      std::set<Elem> grown;
      for (Elem a : N)
        for (Elem b : image) grown.insert(add(a, b));
      if (grown.size() > N.size()) {
        N = std::move(grown);
        chosen.push_back(idx);
      }
      return N != target;
    });
    if (N != target) throw Error(Errc::ConstructionFailed, "clone exhausted before the class was covered");
    // circuits: q = m(D f, c, 0) with D_i g = m(g, g[x_i := 0], g(0̄))
    const std::string mname = "__m";
    for (auto idx : chosen) {
      Circuit f = clone.witness(A, idx);
      KAryFunction ft = clone.function(idx);
      Circuit cur = f;
      std::vector<Elem> ztuple(k, zero);
      for (int i = 0; i < k; ++i) {
        const Elem g0 = eval_circuit(A, cur, ztuple);
        std::vector<Circuit> subst;
        for (int v = 0; v < k; ++v) subst.push_back(v == i ? const_circuit(zero) : var_circuit(v));
        Circuit fixed = substitute(cur, subst);
        std::vector<Circuit> margs{cur, fixed, const_circuit(g0)};
        cur = substitute(wb.maltsev(), margs);
      }
      const Elem c0 = eval_circuit(A, cur, ztuple);
      std::vector<Circuit> margs{cur, const_circuit(c0), const_circuit(zero)};
      out.generators.push_back(substitute(wb.maltsev(), margs));
    }
  }
  out.sum.assign(N.begin(), N.end());
  return out;
}

}  // namespace mw
