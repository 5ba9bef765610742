#include <doctest.h>

#include <set>

#include "mw/clonoid.hpp"

using namespace mw;

namespace {

// oracle: vectors as plain digit lists, subgroups by brute-force closure
std::vector<int> vec(std::uint32_t x, int p, int k) {
  std::vector<int> d(k);
  for (int i = k - 1; i >= 0; --i, x /= p) d[i] = static_cast<int>(x % p);
  return d;
}

// every index-p subgroup of Z_p^k, as sets of encoded elements
std::set<std::set<std::uint32_t>> index_p_subgroups(int p, int k) {
  const std::uint32_t n = static_cast<std::uint32_t>(ipow(p, k));
  std::set<std::set<std::uint32_t>> out;
  // a subgroup of index p is the kernel of a nonzero functional
  for (std::uint32_t f = 1; f < n; ++f) {
    auto fv = vec(f, p, k);
    std::set<std::uint32_t> ker;
    for (std::uint32_t x = 0; x < n; ++x) {
      auto xv = vec(x, p, k);
      int s = 0;
      for (int i = 0; i < k; ++i) s += fv[i] * xv[i];
      if (s % p == 0) ker.insert(x);
    }
    out.insert(ker);
  }
  return out;
}

std::set<std::uint32_t> members(const ClonoidContext& ctx, const Hyperplane& h) {
  std::set<std::uint32_t> s;
  for (std::uint32_t u = 0; u < ctx.usize(); ++u)
    if (h.contains(ctx, u)) s.insert(u);
  return s;
}

std::vector<std::uint32_t> indicator(const ConjunctionFamily& fam, std::size_t n) {
  const auto N = fam.ctx.usize();
  std::vector<std::uint32_t> out(ipow(N, n));
  for (std::size_t i = 0; i < out.size(); ++i) {
    bool all = true;
    std::size_t x = i;
    for (std::size_t j = 0; j < n; ++j, x /= N) all = all && fam.H.contains(fam.ctx, static_cast<std::uint32_t>(x % N));
    out[i] = all ? fam.lval : 0;
  }
  return out;
}

std::uint32_t lsum(const ClonoidContext& ctx, const std::vector<std::uint32_t>& t) {
  std::uint32_t s = 0;
  for (auto v : t) s = ctx.ladd(s, v);
  return s;
}

// Properties of a normalized family. The nonzero-sum property is
// checked on the function before the final collapse: the collapsed one
// sums to p^(k-1)(p-1)·l, which vanishes when q | p-1.
void check_normalized(const ConjunctionFamily& fam, const std::vector<std::uint32_t>& input) {
  const auto& ctx = fam.ctx;
  CHECK(fam.t1[0] == 0);
  REQUIRE(!fam.trace.empty());
  CHECK(replay_trace(ctx, input, fam.trace) == fam.t1);
  auto pre = replay_trace(ctx, input, fam.trace, fam.trace.size() - 1);
  CHECK(pre[0] == 0);
  CHECK(lsum(ctx, pre) != 0);
  CHECK((lsum(ctx, fam.t1) == 0) == ((ctx.p - 1) % ctx.q == 0));
  CHECK(fam.lval != 0);
  CHECK_FALSE(fam.H.contains(ctx, fam.a));
  for (std::uint32_t u = 0; u < ctx.usize(); ++u) CHECK(fam.t1[u] == (fam.H.contains(ctx, u) ? 0u : fam.lval));
}

}  // namespace

TEST_CASE("hyperplane examples and counts") {
  CHECK(hyperplanes(2, 3).size() == 7);
  CHECK(hyperplanes(3, 1).size() == 1);
  CHECK(hyperplanes(2, 2).size() == 3);
  ClonoidContext c31(3, 2);
  CHECK(members(c31, hyperplanes(3, 1)[0]) == std::set<std::uint32_t>{0});
  CHECK_THROWS_AS(hyperplanes(4, 1), Error);
  for (int p : {2, 3, 5})
    for (int k : {1, 2, 3}) {
      ClonoidContext ctx(p, p == 2 ? 3 : 2, k);
      auto hs = hyperplanes(p, k);
      CHECK(hs.size() == (ipow(p, k) - 1) / (p - 1));
      std::set<std::set<std::uint32_t>> got;
      for (const auto& h : hs) {
        CHECK(h.normal.size() == static_cast<std::size_t>(k));
        auto s = members(ctx, h);
        CHECK(s.size() == ipow(p, k - 1));
        got.insert(s);
      }
      CHECK(got == index_p_subgroups(p, k));
    }
}

TEST_CASE("each nonzero vector lies in (p^(k-1)-1)/(p-1) hyperplanes") {
  for (int p : {2, 3})
    for (int k : {1, 2, 3}) {
      ClonoidContext ctx(p, p == 2 ? 3 : 2, k);
      auto hs = hyperplanes(p, k);
      for (std::uint32_t x = 1; x < ctx.usize(); ++x) {
        std::size_t c = 0;
        for (const auto& h : hs) c += h.contains(ctx, x);
        CHECK(c == (ipow(p, k - 1) - 1) / (p - 1));
      }
    }
}

TEST_CASE("context arithmetic") {
  CHECK_THROWS_AS(ClonoidContext(2, 2), Error);
  CHECK_THROWS_AS(ClonoidContext(2, 4), Error);
  for (auto [p, q] : {std::pair{2u, 3u}, {3u, 2u}, {2u, 5u}, {5u, 3u}}) {
    ClonoidContext ctx(p, q);
    CHECK((ctx.p * ctx.p_inv) % q == 1);
  }
  ClonoidContext ctx(3, 2, 2);
  // (1,2) + (2,2) = (0,1)
  CHECK(ctx.uadd(1 * 3 + 2, 2 * 3 + 2) == 1);
  CHECK(ctx.uscale(2, 1 * 3 + 2) == 2 * 3 + 1);
  CHECK(ctx.usub(0, 1) == 2);
}

TEST_CASE("normalize_unary examples") {
  ClonoidContext ctx(2, 3);
  auto fam = normalize_unary(ctx, {0, 1});
  CHECK(fam.H.normal == std::vector<std::uint32_t>{1});
  CHECK(fam.lval == 1);
  CHECK(fam.t1 == std::vector<std::uint32_t>{0, 1});
  check_normalized(fam, {0, 1});

  CHECK_THROWS_AS(normalize_unary(ctx, {2, 2}), Error);
  try {
    normalize_unary(ClonoidContext(3, 2, 2), std::vector<std::uint32_t>(9, 1));
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ConstantInput);
  }
  CHECK_THROWS_AS(normalize_unary(ctx, {0, 1, 1}), Error);
  CHECK_THROWS_AS(normalize_unary(ctx, {0, 3}), Error);

  ClonoidContext c2(2, 3, 2);
  for (std::uint32_t pt = 1; pt < 4; ++pt) {
    std::vector<std::uint32_t> t(4, 0);
    t[pt] = 1;
    check_normalized(normalize_unary(c2, t), t);
  }
}

TEST_CASE("normalize_unary on every nonconstant unary map (small cases)") {
  for (auto [p, q, k] : {std::tuple{2u, 3u, 1u}, {3u, 2u, 1u}, {2u, 3u, 2u}, {3u, 2u, 2u}, {2u, 5u, 1u}}) {
    ClonoidContext ctx(p, q, k);
    const std::size_t n = ctx.usize(), total = ipow(q, n);
    for (std::size_t code = 0; code < total; ++code) {
      std::vector<std::uint32_t> t(n);
      std::size_t x = code;
      for (auto& v : t) v = static_cast<std::uint32_t>(x % q), x /= q;
      bool cst = std::all_of(t.begin(), t.end(), [&](auto v) { return v == t[0]; });
      if (cst) {
        CHECK_THROWS_AS(normalize_unary(ctx, t), Error);
        continue;
      }
      auto fam = normalize_unary(ctx, t);
      check_normalized(fam, t);
      CHECK_FALSE(fam.trace.empty());
      CHECK(fam.trace.back().kind == NormStep::Kind::Scale);
    }
  }
}

TEST_CASE("build_tn is the conjunction indicator") {
  for (auto [p, q, k] : {std::tuple{2u, 3u, 1u}, {3u, 2u, 1u}, {2u, 5u, 1u}, {2u, 3u, 2u}, {3u, 2u, 2u}, {5u, 2u, 1u}}) {
    ClonoidContext ctx(p, q, k);
    for (const auto& H : hyperplanes(p, k))
      for (std::uint32_t l = 1; l < ctx.lsize(); ++l) {
        auto fam = family_for(ctx, H, l);
        for (std::size_t n = 1; n <= 4 && ipow(ctx.usize(), n) <= 20000; ++n) {
          auto T = build_tn(fam, n);
          CHECK(T.arity == n);
          CHECK(T.atom_count() <= ipow(p, n + 1));
          CHECK(T.table(fam) == indicator(fam, n));
        }
      }
  }
}

TEST_CASE("build_tn small examples") {
  ClonoidContext ctx(2, 3);
  auto fam = family_for(ctx, hyperplanes(2, 1)[0], 1);
  // t_2 over Z2: l only at (0,0)
  CHECK(build_tn(fam, 2).table(fam) == std::vector<std::uint32_t>{1, 0, 0, 0});
  ClonoidContext c32(3, 2);
  auto f3 = family_for(c32, hyperplanes(3, 1)[0], 1);
  auto t3 = build_tn(f3, 3).table(f3);
  REQUIRE(t3.size() == 27);
  CHECK(t3[0] == 1);
  for (std::size_t i = 1; i < 27; ++i) CHECK(t3[i] == 0);
  CHECK_THROWS_AS(build_tn(fam, 0), Error);
  auto j = expr_to_json(build_tn(fam, 1));
  CHECK(j["lin"].size() == 2);
  CHECK(j["lin"][0][1]["t1_arg"].contains("b"));
}

TEST_CASE("interpolate") {
  ClonoidContext ctx(2, 3, 2);
  auto fam = family_for(ctx, hyperplanes(2, 2)[1], 2);
  // f = 0 gives the empty combination
  CHECK(interpolate(fam, 2, std::vector<std::uint32_t>(4, 0)).atom_count() == 0);
  // self-interpolation
  std::vector<std::uint32_t> conj(4, 0);
  conj[0] = fam.lval;
  CHECK(interpolate(fam, 2, conj).table(fam) == build_tn(fam, 2).table(fam));
  ClonoidContext c33(2, 3, 1, 2);
  auto f33 = family_for(c33, hyperplanes(2, 1)[0], 1);  // l = (0,1)
  CHECK_THROWS_AS(interpolate(f33, 1, {0, 3}), Error);   // (1,0) ∉ ⟨l⟩
  CHECK(interpolate(f33, 1, {0, 2}).table(f33) == std::vector<std::uint32_t>{0, 2});
  CHECK_THROWS_AS(interpolate(fam, 2, {0, 0, 0}), Error);

  // every f over (U/H)^n, checked on all lifts
  for (auto [p, q, k] : {std::tuple{2u, 3u, 1u}, {2u, 3u, 2u}, {3u, 2u, 1u}}) {
    ClonoidContext c(p, q, k);
    auto fm = family_for(c, hyperplanes(p, k).back(), 1);
    for (std::size_t n : {1u, 2u}) {
      const std::size_t cells = ipow(p, n), total = ipow(q, cells);
      for (std::size_t code = 0; code < total; ++code) {
        std::vector<std::uint32_t> f(cells);
        std::size_t x = code;
        for (auto& v : f) v = static_cast<std::uint32_t>(x % q), x /= q;
        auto tab = interpolate(fm, n, f).table(fm);
        // coset of u: j with u ∈ j·a + H
        std::vector<std::uint32_t> coset(c.usize());
        for (std::uint32_t u = 0; u < c.usize(); ++u)
          for (std::uint32_t j = 0; j < p; ++j)
            if (fm.H.contains(c, c.usub(u, c.uscale(j, fm.a)))) coset[u] = j;
        for (std::size_t i = 0; i < tab.size(); ++i) {
          std::size_t y = i, cell = 0, w = 1;
          for (std::size_t t = 0; t < n; ++t, y /= c.usize(), w *= p) cell += coset[y % c.usize()] * w;
          CHECK(tab[i] == f[cell]);
        }
      }
    }
  }
}
