#include "mw/clonoid.hpp"

#include <set>

namespace mw {

namespace {

bool is_prime(std::uint32_t n) {
  if (n < 2) return false;
  for (std::uint32_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::vector<std::uint32_t> digits(std::uint32_t x, std::uint32_t base, std::uint32_t len) {
  std::vector<std::uint32_t> d(len);
  for (std::uint32_t i = len; i-- > 0;) {
    d[i] = x % base;
    x /= base;
  }
  return d;
}

std::uint32_t undigits(const std::vector<std::uint32_t>& d, std::uint32_t base) {
  std::uint32_t x = 0;
  for (auto v : d) x = x * base + v;
  return x;
}

std::uint32_t vadd(std::uint32_t a, std::uint32_t b, std::uint32_t base, std::uint32_t len) {
  auto da = digits(a, base, len), db = digits(b, base, len);
  for (std::uint32_t i = 0; i < len; ++i) da[i] = (da[i] + db[i]) % base;
  return undigits(da, base);
}

std::uint32_t vscale(std::uint32_t s, std::uint32_t a, std::uint32_t base, std::uint32_t len) {
  auto da = digits(a, base, len);
  for (auto& v : da) v = (v * (s % base)) % base;
  return undigits(da, base);
}

bool constant(const std::vector<std::uint32_t>& t) {
  for (auto v : t)
    if (v != t[0]) return false;
  return true;
}

}  // namespace

ClonoidContext::ClonoidContext(std::uint32_t p_, std::uint32_t q_, std::uint32_t k_, std::uint32_t l_)
    : p(p_), q(q_), k(k_), l(l_) {
  if (!is_prime(p) || !is_prime(q) || p == q) throw Error(Errc::InvalidArgument, "p and q must be distinct primes");
  if (k < 1 || l < 1) throw Error(Errc::InvalidArgument, "dimensions must be positive");
  if (ipow_capped(p, k, 1u << 20) == 0 || ipow_capped(q, l, 1u << 20) == 0)
    throw Error(Errc::SizeOverflow, "group too large");
  for (std::uint32_t x = 1; x < q; ++x)
    if ((p * x) % q == 1) p_inv = x;
}

std::uint32_t ClonoidContext::uadd(std::uint32_t a, std::uint32_t b) const { return vadd(a, b, p, k); }
std::uint32_t ClonoidContext::uscale(std::uint32_t s, std::uint32_t a) const { return vscale(s, a, p, k); }
std::uint32_t ClonoidContext::ladd(std::uint32_t a, std::uint32_t b) const { return vadd(a, b, q, l); }
std::uint32_t ClonoidContext::lscale(std::uint32_t s, std::uint32_t a) const { return vscale(s, a, q, l); }

bool Hyperplane::contains(const ClonoidContext& ctx, std::uint32_t u) const {
  auto d = digits(u, ctx.p, ctx.k);
  std::uint32_t s = 0;
  for (std::size_t i = 0; i < d.size(); ++i) s = (s + d[i] * normal[i]) % ctx.p;
  return s == 0;
}

std::vector<Hyperplane> hyperplanes(std::uint32_t p, std::uint32_t k) {
  if (!is_prime(p) || k < 1) throw Error(Errc::InvalidArgument, "p must be prime and k positive");
  std::vector<Hyperplane> out;
  const std::uint32_t n = static_cast<std::uint32_t>(ipow(p, k));
  for (std::uint32_t v = 1; v < n; ++v) {
    auto d = digits(v, p, k);
    std::size_t f = 0;
    while (d[f] == 0) ++f;
    if (d[f] == 1) out.push_back(Hyperplane{d});
  }
  return out;
}

namespace {

std::uint32_t smallest_outside(const ClonoidContext& ctx, const Hyperplane& H) {
  for (std::uint32_t u = 0; u < ctx.usize(); ++u)
    if (!H.contains(ctx, u)) return u;
  throw Error(Errc::InvalidArgument, "hyperplane is everything");
}

std::uint32_t lsum(const ClonoidContext& ctx, const std::vector<std::uint32_t>& t) {
  std::uint32_t s = 0;
  for (auto v : t) s = ctx.ladd(s, v);
  return s;
}

// make t(0) = 0 and the sum over U nonzero
void zero_and_spread(const ClonoidContext& ctx, std::vector<std::uint32_t>& t, std::vector<NormStep>& trace) {
  const std::uint32_t n = ctx.usize();
  if (t[0] != 0) {
    std::uint32_t c = t[0];
    for (auto& v : t) v = ctx.lsub(v, c);
    trace.push_back({NormStep::Kind::SubConst, c, 0, {}});
  }
  if (lsum(ctx, t) == 0) {
    std::uint32_t a = 0;
    while (a < n && t[a] == 0) ++a;
    if (a == n) throw Error(Errc::NormalizationFailed, "function vanished");
    std::uint32_t c = t[a];
    std::vector<std::uint32_t> s(n);
    for (std::uint32_t x = 0; x < n; ++x) s[x] = ctx.lsub(t[ctx.uadd(x, a)], c);
    t = std::move(s);
    trace.push_back({NormStep::Kind::Shift, c, a, {}});
  }
  if (t[0] != 0 || lsum(ctx, t) == 0) throw Error(Errc::NormalizationFailed, "could not reach t(0) = 0 with a nonzero sum");
}

}  // namespace

ConjunctionFamily family_for(const ClonoidContext& ctx, const Hyperplane& H, std::uint32_t lval) {
  if (lval == 0 || lval >= ctx.lsize()) throw Error(Errc::InvalidArgument, "l must be a nonzero element of L");
  ConjunctionFamily f{ctx, H, lval, std::vector<std::uint32_t>(ctx.usize()), smallest_outside(ctx, H), {}};
  for (std::uint32_t u = 0; u < ctx.usize(); ++u) f.t1[u] = H.contains(ctx, u) ? 0 : lval;
  return f;
}

ConjunctionFamily normalize_unary(const ClonoidContext& ctx, const std::vector<std::uint32_t>& input) {
  const std::uint32_t n = ctx.usize();
  if (input.size() != n) throw Error(Errc::InvalidArgument, "table must have |U| entries");
  for (auto v : input)
    if (v >= ctx.lsize()) throw Error(Errc::ElementOutOfRange, "value outside L");
  if (constant(input)) throw Error(Errc::ConstantInput, "constant function");
  std::vector<NormStep> trace;
  std::vector<std::uint32_t> t = input;
  zero_and_spread(ctx, t, trace);

  // (3) first hyperplane in canonical order with a nonconstant H-sum
  std::optional<Hyperplane> H;
  for (const auto& h : hyperplanes(ctx.p, ctx.k)) {
    std::vector<std::uint32_t> members;
    for (std::uint32_t u = 0; u < n; ++u)
      if (h.contains(ctx, u)) members.push_back(u);
    std::vector<std::uint32_t> s(n, 0);
    for (std::uint32_t x = 0; x < n; ++x)
      for (auto m : members) s[x] = ctx.ladd(s[x], t[ctx.uadd(x, m)]);
    if (constant(s)) continue;
    H = h;
    if (members.size() > 1) {
      t = std::move(s);
      trace.push_back({NormStep::Kind::HSum, 0, 0, members});
      zero_and_spread(ctx, t, trace);
    }
    break;
  }
  if (!H) throw Error(Errc::NormalizationFailed, "no hyperplane gives a nonconstant sum");

  // (4) collapse to the two-valued function
  std::vector<std::uint32_t> s(n, 0);
  for (std::uint32_t x = 0; x < n; ++x)
    for (std::uint32_t i = 0; i < ctx.p; ++i) s[x] = ctx.ladd(s[x], t[ctx.uscale(i, x)]);
  trace.push_back({NormStep::Kind::Scale, 0, 0, {}});
  ConjunctionFamily fam = family_for(ctx, *H, s[smallest_outside(ctx, *H)]);
  if (fam.t1 != s || replay_trace(ctx, input, trace) != s) throw Error(Errc::NormalizationFailed, "result is not two-valued on H");
  fam.trace = std::move(trace);
  return fam;
}

std::vector<std::uint32_t> replay_trace(const ClonoidContext& ctx, std::vector<std::uint32_t> t,
                                        const std::vector<NormStep>& trace, std::size_t steps) {
  const std::uint32_t n = ctx.usize();
  if (t.size() != n) throw Error(Errc::InvalidArgument, "table must have |U| entries");
  for (std::size_t s = 0; s < trace.size() && s < steps; ++s) {
    const auto& st = trace[s];
    std::vector<std::uint32_t> r(n, 0);
    for (std::uint32_t x = 0; x < n; ++x) switch (st.kind) {
        case NormStep::Kind::SubConst: r[x] = ctx.lsub(t[x], st.value); break;
        case NormStep::Kind::Shift: r[x] = ctx.lsub(t[ctx.uadd(x, st.shift)], st.value); break;
        case NormStep::Kind::HSum:
          for (auto m : st.members) r[x] = ctx.ladd(r[x], t[ctx.uadd(x, m)]);
          break;
        case NormStep::Kind::Scale:
          for (std::uint32_t i = 0; i < ctx.p; ++i) r[x] = ctx.ladd(r[x], t[ctx.uscale(i, x)]);
          break;
      }
    t = std::move(r);
  }
  return t;
}

void LinExpr::add(const Atom& a, std::uint32_t coeff, std::uint32_t q) {
  coeff %= q;
  if (coeff == 0) return;
  auto [it, fresh] = terms.emplace(a, coeff);
  if (!fresh) {
    it->second = (it->second + coeff) % q;
    if (it->second == 0) terms.erase(it);
  }
}

std::uint32_t LinExpr::eval(const ConjunctionFamily& fam, std::span<const std::uint32_t> u) const {
  const auto& ctx = fam.ctx;
  std::uint32_t out = 0;
  for (const auto& [atom, coeff] : terms) {
    std::uint32_t arg = atom.c;
    for (std::size_t i = 0; i < arity; ++i) arg = ctx.uadd(arg, ctx.uscale(atom.b[i], u[i]));
    out = ctx.ladd(out, ctx.lscale(coeff, fam.t1[arg]));
  }
  return out;
}

std::vector<std::uint32_t> LinExpr::table(const ConjunctionFamily& fam, std::size_t cap) const {
  const std::size_t rows = ipow_capped(fam.ctx.usize(), arity, cap);
  if (rows == 0) throw Error(Errc::SizeOverflow, "table beyond cap");
  std::vector<std::uint32_t> out(rows), u(arity);
  for (std::size_t i = 0; i < rows; ++i) {
    std::size_t x = i;
    for (std::size_t j = arity; j-- > 0;) {
      u[j] = static_cast<std::uint32_t>(x % fam.ctx.usize());
      x /= fam.ctx.usize();
    }
    out[i] = eval(fam, u);
  }
  return out;
}

LinExpr build_tn(const ConjunctionFamily& fam, std::size_t n) {
  if (n < 1) throw Error(Errc::InvalidArgument, "n must be positive");
  const auto& ctx = fam.ctx;
  const std::uint32_t p = ctx.p, q = ctx.q;
  // T_1(u) = t1(a) - t1(u): l exactly on H
  LinExpr T;
  T.arity = 1;
  T.add(Atom{{0}, fam.a}, 1, q);
  T.add(Atom{{1}, 0}, q - 1, q);
  for (std::size_t m = 1; m < n; ++m) {
    // T_{m+1}(…, u_m, v) = p^{-1} (Σ_{i<p} T_m(…, u_m - i v) - Σ_{0<i<p} T_m(…, v - i a))
    LinExpr next;
    next.arity = m + 1;
    for (const auto& [atom, coeff] : T.terms) {
      const std::uint32_t bl = atom.b[m - 1];
      for (std::uint32_t i = 0; i < p; ++i) {
        Atom x{atom.b, atom.c};
        x.b.push_back((p - (i * bl) % p) % p);
        next.add(x, coeff * ctx.p_inv, q);
      }
      for (std::uint32_t i = 1; i < p; ++i) {
        Atom x{atom.b, atom.c};
        x.b[m - 1] = 0;
        x.b.push_back(bl);
        x.c = ctx.usub(atom.c, ctx.uscale((i * bl) % p, fam.a));
        next.add(x, (q - 1) * coeff % q * ctx.p_inv, q);
      }
    }
    T = std::move(next);
  }
  return T;
}

LinExpr interpolate(const ConjunctionFamily& fam, std::size_t n, const std::vector<std::uint32_t>& f) {
  const auto& ctx = fam.ctx;
  const std::uint32_t p = ctx.p, q = ctx.q;
  if (f.size() != ipow(p, n)) throw Error(Errc::InvalidArgument, "f must have p^n entries");
  // multiples of l
  std::vector<std::int64_t> mult(ctx.lsize(), -1);
  for (std::uint32_t c = 0; c < q; ++c) mult[ctx.lscale(c, fam.lval)] = c;
  LinExpr out;
  out.arity = n;
  LinExpr T = build_tn(fam, n);
  std::vector<std::uint32_t> abar(n);
  for (std::size_t idx = 0; idx < f.size(); ++idx) {
    if (f[idx] >= ctx.lsize() || mult[f[idx]] < 0)
      throw Error(Errc::ValueOutsideCyclicSubgroup, "value outside the subgroup generated by l");
    const auto c = static_cast<std::uint32_t>(mult[f[idx]]);
    if (c == 0) continue;
    std::size_t x = idx;
    for (std::size_t j = n; j-- > 0;) {
      abar[j] = static_cast<std::uint32_t>(x % p);
      x /= p;
    }
    // T_n(x̄ - ā'), ā'_i = abar_i · a
    for (const auto& [atom, coeff] : T.terms) {
      Atom y = atom;
      for (std::size_t i = 0; i < n; ++i) y.c = ctx.usub(y.c, ctx.uscale((atom.b[i] * abar[i]) % p, fam.a));
      out.add(y, coeff * c, q);
    }
  }
  return out;
}

nlohmann::json expr_to_json(const LinExpr& e) {
  nlohmann::json lin = nlohmann::json::array();
  for (const auto& [atom, coeff] : e.terms)
    lin.push_back({coeff, {{"t1_arg", {{"b", atom.b}, {"c", atom.c}}}}});
  return {{"lin", lin}};
}

}  // namespace mw
