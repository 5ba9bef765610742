#include "mw/clone.hpp"

namespace mw {

PolynomialClone::PolynomialClone(int arity, std::size_t universe)
    : k_(arity), n_(universe), rows_(ipow(universe, arity)) {}

KAryFunction PolynomialClone::function(std::size_t i) const {
  auto t = table(i);
  return KAryFunction{k_, {t.begin(), t.end()}};
}

std::uint32_t PolynomialClone::build(const Algebra& alg, CircuitBuilder& b, std::size_t i,
                                     std::vector<std::int64_t>& memo) const {
  if (memo[i] >= 0) return static_cast<std::uint32_t>(memo[i]);
  const Origin& o = origins_[i];
  std::uint32_t g;
  if (o.op == Origin::kGenerator) {
    if (o.tag < static_cast<std::uint32_t>(k_)) g = b.var(o.tag);
    else g = b.constant(static_cast<Elem>(o.tag - k_));
  } else {
    std::vector<std::uint32_t> in;
    for (auto a : o.args) in.push_back(build(alg, b, a, memo));
    g = b.apply(alg.op_name(o.op), std::move(in));
  }
  memo[i] = g;
  return g;
}

Circuit PolynomialClone::witness(const Algebra& alg, std::size_t i) const {
  CircuitBuilder b;
  // declare variables first so circuits read naturally
  for (int v = 0; v < k_; ++v) b.var(v);
  std::vector<std::int64_t> memo(size(), -1);
  return b.finish(build(alg, b, i, memo));
}

PolynomialClone generate_polynomial_clone(
    const Algebra& alg, int k, std::size_t cap,
    const std::function<bool(const PolynomialClone&, std::uint32_t)>& on_new) {
  if (k < 0) throw Error(Errc::InvalidArgument, "negative arity");
  const std::size_t n = alg.size();
  if (ipow_capped(n, k, 5'000'000) == 0) throw Error(Errc::SizeOverflow, "|A|^k too large");
  PolynomialClone clone(k, n);
  const std::size_t w = clone.points();
  std::vector<Elem> row(w), args(k);
  auto add = [&](std::uint32_t tag) {
    if (clone.rows().insert(row.data()).second)
      clone.origins().push_back(Origin{Origin::kGenerator, tag, {}});
  };
  for (int v = 0; v < k; ++v) {
    for (std::size_t i = 0; i < w; ++i) {
      decode_tuple(i, n, args);
      row[i] = args[v];
    }
    add(static_cast<std::uint32_t>(v));
  }
  for (std::size_t e = 0; e < n; ++e) {
    std::fill(row.begin(), row.end(), static_cast<Elem>(e));
    add(static_cast<std::uint32_t>(k + e));
  }
  std::function<bool(std::uint32_t)> cb;
  if (on_new) cb = [&](std::uint32_t i) { return on_new(clone, i); };
  close_subpower(alg, clone.rows(), cap, cb, &clone.origins());
  return clone;
}

bool is_maltsev_table(std::size_t n, std::span<const Elem> m) {
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      if (m[(y * n + x) * n + x] != y) return false;
      if (m[(x * n + x) * n + y] != y) return false;
    }
  return true;
}

bool verify_maltsev(const Algebra& alg, const Circuit& candidate) {
  if (candidate.input_arity() > 3) throw Error(Errc::InvalidArgument, "Maltsev candidate must be ternary");
  Evaluator ev(alg, candidate);
  const std::size_t n = alg.size();
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      Elem a[3] = {Elem(y), Elem(x), Elem(x)};
      if (ev(a) != y) return false;
      Elem b[3] = {Elem(x), Elem(x), Elem(y)};
      if (ev(b) != y) return false;
    }
  return true;
}

std::optional<Circuit> find_maltsev(const Algebra& alg, std::size_t cap) {
  const std::size_t n = alg.size();
  std::int64_t hit = -1;
  auto clone = generate_polynomial_clone(alg, 3, cap, [&](const PolynomialClone& c, std::uint32_t i) {
    if (is_maltsev_table(n, c.table(i))) {
      hit = i;
      return false;
    }
    return true;
  });
  if (hit < 0) return std::nullopt;
  return clone.witness(alg, static_cast<std::size_t>(hit));
}

}  // namespace mw
