#include "mw/wreath.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "mw/bundled.hpp"

namespace mw {

std::vector<std::size_t> prime_factors(std::size_t n) {
  std::vector<std::size_t> out;
  for (std::size_t p = 2; p * p <= n; ++p)
    if (n % p == 0) {
      out.push_back(p);
      while (n % p == 0) n /= p;
    }
  if (n > 1) out.push_back(n);
  return out;
}

bool AffineLevel::elementary() const {
  if (exponent == 1) return true;
  auto f = prime_factors(exponent);
  return f.size() == 1 && f[0] == exponent;
}

AffineLevel make_level(Algebra ops, std::vector<Elem> add) {
  const std::size_t n = ops.size();
  if (add.size() != n * n) throw Error(Errc::InvalidArgument, "group table has the wrong size");
  AffineLevel L;
  L.algebra = std::move(ops);
  L.add = std::move(add);
  L.neg.assign(n, 0);
  auto plus = [&](std::size_t a, std::size_t b) { return L.add[a * n + b]; };
  for (std::size_t a = 0; a < n; ++a) {
    if (plus(a, 0) != a || plus(0, a) != a) throw Error(Errc::SectionFailure, "level: 0 is not neutral");
    bool found = false;
    for (std::size_t b = 0; b < n; ++b) {
      if (plus(a, b) != plus(b, a)) throw Error(Errc::SectionFailure, "level: addition not commutative");
      if (plus(a, b) == 0) {
        L.neg[a] = static_cast<Elem>(b);
        found = true;
      }
      for (std::size_t c = 0; c < n; ++c)
        if (plus(plus(a, b), c) != plus(a, plus(b, c))) throw Error(Errc::SectionFailure, "level: not associative");
    }
    if (!found) throw Error(Errc::SectionFailure, "level: missing inverse");
  }
  L.exponent = 1;
  for (std::size_t a = 0; a < n; ++a) {
    std::size_t ord = 1;
    for (std::size_t x = a; x != 0; x = plus(x, a)) ++ord;
    L.exponent = std::lcm(L.exponent, ord);
  }
  auto clone = generate_polynomial_clone(L.algebra, 1);
  for (std::size_t i = 0; i < clone.size(); ++i) {
    auto t = clone.table(i);
    if (t[0] == 0) L.scalars.emplace_back(t.begin(), t.end());
  }
  return L;
}

AffineLevel cyclic_level(std::size_t n, const Algebra& signature) {
  std::vector<OpSpec> ops;
  for (std::size_t i = 0; i < signature.op_count(); ++i) {
    const auto& name = signature.op_name(i);
    const int r = signature.arity(i);
    if (name == "add" && r == 2) ops.push_back({name, 2, [n](auto a) { return Elem((a[0] + a[1]) % n); }});
    else if (name == "neg" && r == 1) ops.push_back({name, 1, [n](auto a) { return Elem((n - a[0]) % n); }});
    else if (r == 1) ops.push_back({name, 1, [](auto a) { return a[0]; }});
    else throw Error(Errc::SignatureMismatch, "no cyclic interpretation for operation " + name);
  }
  std::vector<Elem> add(n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) add[a * n + b] = Elem((a + b) % n);
  return make_level(tabulate(n, ops), std::move(add));
}

Algebra build_wreath(const AffineLevel& L, const Algebra& U, const TwistSet& T) {
  if (!L.algebra.same_signature(U)) throw Error(Errc::SignatureMismatch, "level and top have different signatures");
  for (const auto& [name, t] : T) {
    int i = U.op_index(name);
    if (i < 0) throw Error(Errc::SignatureMismatch, "twist for unknown operation " + name);
    if (t.size() != ipow(U.size(), U.arity(i))) throw Error(Errc::SignatureMismatch, "twist table size for " + name);
    for (Elem e : t)
      if (e >= L.size()) throw Error(Errc::ElementOutOfRange, "twist value outside L");
  }
  const std::size_t nl = L.size(), nu = U.size(), n = nl * nu;
  if (n > 256) throw Error(Errc::SizeOverflow, "wreath product larger than 256 elements");
  std::map<std::string, OpTable> ops;
  for (std::size_t o = 0; o < U.op_count(); ++o) {
    const int r = U.arity(o);
    const auto& name = U.op_name(o);
    auto it = T.find(name);
    const std::size_t lo = static_cast<std::size_t>(L.algebra.require_op(name));
    OpTable t{r, std::vector<Elem>(ipow(n, r))};
    std::vector<Elem> x(r), ls(r), us(r);
    for (std::size_t i = 0; i < t.entries.size(); ++i) {
      decode_tuple(i, n, x);
      for (int s = 0; s < r; ++s) {
        ls[s] = static_cast<Elem>(x[s] / nu);
        us[s] = static_cast<Elem>(x[s] % nu);
      }
      Elem l = L.algebra.apply(lo, ls);
      if (it != T.end()) l = L.plus(l, it->second[encode_tuple(us, nu)]);
      t.entries[i] = static_cast<Elem>(l * nu + U.apply(o, us));
    }
    ops.emplace(name, std::move(t));
  }
  return Algebra(n, std::move(ops));
}

std::size_t WreathPresentation::above_size(std::size_t i) const {
  std::size_t s = top.size();
  for (std::size_t j = i + 1; j < levels.size(); ++j) s *= levels[j].size();
  return s;
}

std::size_t WreathPresentation::coordinate(std::size_t idx, std::size_t level) const {
  if (level >= levels.size()) return idx % top.size();
  return (idx / above_size(level)) % levels[level].size();
}

Algebra WreathPresentation::reconstruct() const {
  Algebra w = top;
  for (std::size_t i = levels.size(); i-- > 0;) w = build_wreath(levels[i], w, twists[i]);
  return w;
}

bool verify_presentation(const Algebra& alg, const WreathPresentation& w) {
  const std::size_t n = alg.size();
  if (w.iso.size() != n) return false;
  std::vector<char> seen(n, 0);
  for (Elem e : w.iso) {
    if (e >= n || seen[e]) return false;
    seen[e] = 1;
  }
  Algebra r = w.reconstruct();
  if (r.size() != n || !r.same_signature(alg)) return false;
  for (std::size_t o = 0; o < alg.op_count(); ++o) {
    const int k = alg.arity(o);
    std::vector<Elem> x(k), y(k);
    for (std::size_t i = 0; i < ipow(n, k); ++i) {
      decode_tuple(i, n, x);
      for (int s = 0; s < k; ++s) y[s] = w.iso[x[s]];
      if (w.iso[alg.apply(o, x)] != r.apply(o, y)) return false;
    }
  }
  return true;
}

WreathPresentation decompose_central(Workbench& wb, const Congruence& zeta, Elem zero) {
  const Algebra& A = wb.algebra();
  const std::size_t n = A.size();
  if (zero >= n) throw Error(Errc::ElementOutOfRange, "zero out of range");
  if (zeta.universe() != n || !is_compatible(A, zeta)) throw Error(Errc::InvalidArgument, "not a congruence");
  if (!wb.commutator({wb.one(), zeta}).is_zero()) throw Error(Errc::NotCentral, "[1, zeta] is not 0");
  auto mt = wb.maltsev_table();
  auto m = [&](Elem x, Elem y, Elem z) { return mt[(x * n + y) * n + z]; };
  Quotient q = quotient(A, zeta);
  const std::size_t nu = q.algebra.size();

  std::vector<Elem> block{zero};
  for (Elem a : zeta.block_of(zero))
    if (a != zero) block.push_back(a);
  const std::size_t nl = block.size();
  std::vector<int> lidx(n, -1);
  for (std::size_t i = 0; i < nl; ++i) lidx[block[i]] = static_cast<int>(i);

  const Elem u0 = q.proj[zero];
  std::vector<Elem> s(nu);
  for (std::size_t u = 0; u < nu; ++u) s[u] = u == u0 ? zero : q.rep[u];
  std::vector<Elem> iso(n), psi(n);
  std::vector<char> hit(n, 0);
  for (std::size_t a = 0; a < n; ++a) {
    int l = lidx[m(static_cast<Elem>(a), s[q.proj[a]], zero)];
    if (l < 0) throw Error(Errc::SectionFailure, "section image left the zero block");
    std::size_t idx = static_cast<std::size_t>(l) * nu + q.proj[a];
    if (idx >= n || hit[idx]) throw Error(Errc::SectionFailure, "section map is not injective");
    hit[idx] = 1;
    iso[a] = static_cast<Elem>(idx);
    psi[idx] = static_cast<Elem>(a);
  }
  auto lcoord = [&](Elem a) { return static_cast<Elem>(iso[a] / nu); };

  std::vector<Elem> add(nl * nl);
  for (std::size_t i = 0; i < nl; ++i)
    for (std::size_t j = 0; j < nl; ++j) {
      int r = lidx[m(block[i], zero, block[j])];
      if (r < 0) throw Error(Errc::SectionFailure, "loop sum left the zero block");
      add[i * nl + j] = static_cast<Elem>(r);
    }

  std::map<std::string, OpTable> lops;
  TwistSet twists;
  for (std::size_t o = 0; o < A.op_count(); ++o) {
    const int k = A.arity(o);
    OpTable fl{k, std::vector<Elem>(ipow(nl, k))};
    std::vector<Elem> args(k), x(k);
    for (std::size_t i = 0; i < fl.entries.size(); ++i) {
      decode_tuple(i, nl, args);
      for (int j = 0; j < k; ++j) x[j] = psi[args[j] * nu + u0];
      fl.entries[i] = lcoord(A.apply(o, x));
    }
    lops.emplace(A.op_name(o), std::move(fl));
  }
  AffineLevel L = make_level(Algebra(nl, lops), std::move(add));
  for (std::size_t o = 0; o < A.op_count(); ++o) {
    const int k = A.arity(o);
    const Elem f0 = L.algebra.apply(o, std::vector<Elem>(k, 0));
    std::vector<Elem> t(ipow(nu, k));
    std::vector<Elem> us(k), x(k);
    for (std::size_t i = 0; i < t.size(); ++i) {
      decode_tuple(i, nu, us);
      for (int j = 0; j < k; ++j) x[j] = psi[us[j]];  // l = 0
      t[i] = L.minus(lcoord(A.apply(o, x)), f0);
    }
    twists.emplace(A.op_name(o), std::move(t));
  }

  WreathPresentation w;
  w.levels.push_back(std::move(L));
  w.top = q.algebra;
  w.twists.push_back(std::move(twists));
  w.iso = std::move(iso);
  w.series = {wb.zero(), zeta};
  w.zero = zero;
  if (!verify_presentation(A, w)) throw Error(Errc::SectionFailure, "wreath presentation does not reproduce the tables");
  return w;
}

WreathPresentation decompose_series(Workbench& wb, const std::vector<Congruence>& series, Elem zero) {
  const Algebra& A = wb.algebra();
  const std::size_t n = A.size();
  if (series.empty() || !series.front().is_zero()) throw Error(Errc::NotCentralSeries, "series must start at 0");
  for (std::size_t i = 1; i < series.size(); ++i) {
    if (!series[i - 1].leq(series[i])) throw Error(Errc::NotCentralSeries, "series is not increasing");
    if (!wb.commutator({wb.one(), series[i]}).leq(series[i - 1]))
      throw Error(Errc::NotCentralSeries, "[1, alpha_i] is not below alpha_(i-1)");
  }
  WreathPresentation w;
  w.series = series;
  w.zero = zero;
  if (series.size() == 1) {
    w.top = A;
    w.iso.resize(n);
    std::iota(w.iso.begin(), w.iso.end(), 0);
    return w;
  }
  WreathPresentation first = decompose_central(wb, series[1], zero);
  Quotient q;
  auto qb = wb.quotient_bench(series[1], &q);
  std::vector<Congruence> rest;
  for (std::size_t i = 1; i < series.size(); ++i) rest.push_back(congruence_mod(q, series[i]));
  WreathPresentation up = decompose_series(*qb, rest, q.proj[zero]);

  const std::size_t nu = q.algebra.size();
  std::vector<Elem> up_inv(nu);
  for (std::size_t b = 0; b < nu; ++b) up_inv[up.iso[b]] = static_cast<Elem>(b);
  TwistSet t0;
  for (const auto& [name, table] : first.twists[0]) {
    const int k = A.arity(A.require_op(name));
    std::vector<Elem> t(table.size()), ys(k), bs(k);
    for (std::size_t i = 0; i < t.size(); ++i) {
      decode_tuple(i, nu, ys);
      for (int j = 0; j < k; ++j) bs[j] = up_inv[ys[j]];
      t[i] = table[encode_tuple(bs, nu)];
    }
    t0.emplace(name, std::move(t));
  }
  w.levels.push_back(first.levels[0]);
  w.twists.push_back(std::move(t0));
  for (std::size_t i = 0; i < up.levels.size(); ++i) {
    w.levels.push_back(up.levels[i]);
    w.twists.push_back(up.twists[i]);
  }
  w.top = up.top;
  w.iso.resize(n);
  for (std::size_t a = 0; a < n; ++a) w.iso[a] = static_cast<Elem>((first.iso[a] / nu) * nu + up.iso[q.proj[a]]);
  if (!verify_presentation(A, w)) throw Error(Errc::SectionFailure, "iterated presentation does not reproduce the tables");
  return w;
}

WreathPresentation elementary_refinement(Workbench& wb, const WreathPresentation& w) {
  const Algebra& A = wb.algebra();
  WreathPresentation cur = w;
  while (true) {
    std::size_t i = 0;
    while (i < cur.levels.size() && cur.levels[i].elementary()) ++i;
    if (i == cur.levels.size()) return cur;
    const AffineLevel& L = cur.levels[i];
    const std::size_t p = prime_factors(L.exponent).front();
    std::vector<Elem> inv(A.size());
    for (std::size_t a = 0; a < A.size(); ++a) inv[cur.iso[a]] = static_cast<Elem>(a);
    const std::size_t base = cur.iso[cur.zero];
    const std::size_t stride = cur.above_size(i);
    std::vector<Pair> pairs;
    for (std::size_t l = 0; l < L.size(); ++l) {
      Elem pl = 0;
      for (std::size_t r = 0; r < p; ++r) pl = L.plus(pl, static_cast<Elem>(l));
      std::size_t idx = base + pl * stride;  // zero has coordinate 0 on every level
      pairs.emplace_back(cur.zero, inv[idx]);
    }
    Congruence beta = cg_extend(A, cur.series[i], pairs);
    if (beta == cur.series[i] || beta == cur.series[i + 1] || !beta.leq(cur.series[i + 1]))
      throw Error(Errc::ConstructionFailed, "p-multiples do not split the level");
    std::vector<Congruence> s = cur.series;
    s.insert(s.begin() + static_cast<std::ptrdiff_t>(i) + 1, beta);
    cur = decompose_series(wb, s, cur.zero);
  }
}

namespace {

std::size_t permutation_order(const std::vector<Elem>& p) {
  std::size_t ord = 1;
  std::vector<char> seen(p.size(), 0);
  for (std::size_t s = 0; s < p.size(); ++s) {
    if (seen[s]) continue;
    std::size_t len = 0;
    for (std::size_t x = s; !seen[x]; x = p[x]) {
      seen[x] = 1;
      ++len;
    }
    ord = std::lcm(ord, len);
  }
  return ord;
}

bool is_permutation(const std::vector<Elem>& p) {
  std::vector<char> seen(p.size(), 0);
  for (Elem e : p) {
    if (e >= p.size() || seen[e]) return false;
    seen[e] = 1;
  }
  return true;
}

}  // namespace

LoopOps loop_ops(const Algebra& alg, const Circuit& m, Elem zero) {
  if (!verify_maltsev(alg, m)) throw Error(Errc::NotMaltsev, "not a Maltsev circuit");
  const std::size_t n = alg.size();
  auto mt = circuit_to_function(alg, m, 3).table;
  auto sum = [&](Elem x, Elem y) { return mt[(x * n + zero) * n + y]; };
  LoopOps ops;
  for (std::size_t y = 0; y < n; ++y) {
    std::vector<Elem> r(n), l(n);
    for (std::size_t x = 0; x < n; ++x) {
      r[x] = sum(static_cast<Elem>(x), static_cast<Elem>(y));
      l[x] = sum(static_cast<Elem>(y), static_cast<Elem>(x));
    }
    if (!is_permutation(r) || !is_permutation(l)) throw Error(Errc::DivisionNotFound, "a translation is not bijective");
    ops.order = std::lcm(ops.order, std::lcm(permutation_order(r), permutation_order(l)));
  }
  {
    CircuitBuilder b;
    std::uint32_t in[3] = {b.var(0), b.constant(zero), b.var(1)};
    ops.add = b.finish(b.splice(m, in));
  }
  // x/y = R_y^{N-1}(x), x\y = L_x^{N-1}(y)
  for (int side = 0; side < 2; ++side) {
    CircuitBuilder b;
    const std::uint32_t x = b.var(0), y = b.var(1), z0 = b.constant(zero);
    std::uint32_t cur = side == 0 ? x : y;
    for (std::size_t t = 0; t + 1 < ops.order; ++t) {
      std::uint32_t in[3] = {side == 0 ? cur : x, z0, side == 0 ? y : cur};
      cur = b.splice(m, in);
    }
    (side == 0 ? ops.rdiv : ops.ldiv) = b.finish(cur);
  }
  auto add = circuit_to_function(alg, ops.add, 2).table;
  auto rdiv = circuit_to_function(alg, ops.rdiv, 2).table;
  auto ldiv = circuit_to_function(alg, ops.ldiv, 2).table;
  for (std::size_t x = 0; x < n; ++x) {
    if (add[x * n + zero] != x || add[zero * n + x] != x) throw Error(Errc::DivisionNotFound, "0 is not neutral");
    for (std::size_t y = 0; y < n; ++y) {
      Elem s = add[x * n + y];
      if (rdiv[s * n + y] != x || ldiv[x * n + s] != y) throw Error(Errc::DivisionNotFound, "division identities fail");
    }
  }
  return ops;
}

Circuit u_power(const Circuit& add, std::size_t q, std::size_t l) {
  if (q == 0) throw Error(Errc::InvalidArgument, "q must be positive");
  CircuitBuilder b;
  std::uint32_t cur = b.var(0);
  for (std::size_t r = 0; r < l; ++r) {
    std::uint32_t s = cur;
    for (std::size_t j = 1; j < q; ++j) {
      std::uint32_t in[2] = {s, cur};
      s = b.splice(add, in);
    }
    cur = s;
  }
  return b.finish(cur);
}

Circuit r_prime(Workbench& wb, const WreathPresentation& w, std::size_t p) {
  const Algebra& A = wb.algebra();
  const std::size_t n = A.size();
  const Congruence& alpha = w.series.back();
  for (const auto& L : w.levels)
    if (!L.elementary()) throw Error(Errc::InvalidArgument, "presentation is not elementary");
  if (!is_supernilpotent(wb, alpha).holds) throw Error(Errc::NotSupernilpotent, "alpha is not supernilpotent");
  LoopOps loop = loop_ops(A, wb.maltsev(), w.zero);
  std::set<std::size_t> primes;
  for (const auto& L : w.levels)
    if (L.exponent > 1) primes.insert(L.exponent);
  const std::size_t k = w.levels.size();
  Circuit t = var_circuit(0);
  for (std::size_t q : primes) {
    if (q == p) continue;
    Circuit u = u_power(loop.add, q, k);
    Circuit arg[1] = {t};
    t = substitute(u, arg);
  }
  auto tt = circuit_to_function(A, t, 1).table;
  const auto block = alpha.block_of(w.zero);
  auto in_kp = [&](Elem x) {
    for (std::size_t j = 0; j < k; ++j)
      if (w.levels[j].exponent != p && w.coordinate(w.iso[x], j) != 0) return false;
    return true;
  };
  // order of t on K_p
  std::size_t N = 1;
  for (Elem x : block) {
    if (!in_kp(x)) continue;
    std::size_t len = 1;
    Elem y = tt[x];
    while (y != x && len <= n) {
      y = tt[y];
      ++len;
    }
    if (y != x) throw Error(Errc::NotSupernilpotent, "t_p is not a permutation of K_p");
    N = std::lcm(N, len);
  }
  Circuit r = var_circuit(0);
  for (std::size_t i = 0; i < N; ++i) {
    Circuit arg[1] = {r};
    r = substitute(t, arg);
  }
  auto rt = circuit_to_function(A, r, 1).table;
  for (Elem x : block)
    for (std::size_t j = 0; j < k; ++j) {
      std::size_t want = w.levels[j].exponent == p ? w.coordinate(w.iso[x], j) : 0;
      if (w.coordinate(w.iso[rt[x]], j) != want)
        throw Error(Errc::NotSupernilpotent, "projection property of r_p fails");
    }
  return r;
}

std::vector<std::vector<bool>> dependence_matrix(Workbench& wb, const WreathPresentation& w) {
  const Algebra& A = wb.algebra();
  const std::size_t n = A.size(), k = w.levels.size();
  std::vector<std::vector<bool>> D(k, std::vector<bool>(k, false));
  std::vector<Elem> inv(n);
  for (std::size_t a = 0; a < n; ++a) inv[w.iso[a]] = static_cast<Elem>(a);
  auto clone = generate_polynomial_clone(A, 1, wb.caps().clone);
  for (std::size_t c = 0; c < clone.size(); ++c) {
    auto t = clone.table(c);
    for (std::size_t x = 0; x < n; ++x) {
      const std::size_t ix = w.iso[x];
      for (std::size_t j = 0; j < k; ++j) {
        const std::size_t stride = w.above_size(j), cj = w.coordinate(ix, j);
        for (std::size_t v = 0; v < w.levels[j].size(); ++v) {
          if (v == cj) continue;
          const Elem y = inv[ix - cj * stride + v * stride];
          const std::size_t fx = w.iso[t[x]], fy = w.iso[t[y]];
          for (std::size_t i = 0; i < k; ++i)
            if (!D[i][j] && w.coordinate(fx, i) != w.coordinate(fy, i)) D[i][j] = true;
        }
      }
    }
  }
  return D;
}

bool dependence_says_supernilpotent(const WreathPresentation& w, const std::vector<std::vector<bool>>& D) {
  for (std::size_t i = 0; i < D.size(); ++i)
    for (std::size_t j = 0; j < D.size(); ++j)
      if (D[i][j] && (i > j || w.levels[i].exponent != w.levels[j].exponent)) return false;
  return true;
}

bool projection_is_homomorphism(const Algebra& alg, const WreathPresentation& w,
                                const std::vector<std::size_t>& dropped) {
  const std::size_t n = alg.size();
  std::vector<std::uint32_t> labels(n);
  for (std::size_t a = 0; a < n; ++a) {
    std::size_t idx = w.iso[a];
    for (std::size_t j : dropped) idx -= w.coordinate(idx, j) * w.above_size(j);
    labels[a] = static_cast<std::uint32_t>(idx);
  }
  return is_compatible(alg, Congruence::from_labels(labels));
}

}  // namespace mw
