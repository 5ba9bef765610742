#include "mw/bundled.hpp"

#include <array>

namespace mw {

Algebra tabulate(std::size_t n, const std::vector<OpSpec>& ops) {
  std::map<std::string, OpTable> tables;
  for (const auto& o : ops) {
    OpTable t;
    t.arity = o.arity;
    const std::size_t rows = ipow(n, o.arity);
    std::vector<Elem> args(o.arity);
    t.entries.resize(rows);
    for (std::size_t i = 0; i < rows; ++i) {
      decode_tuple(i, n, args);
      t.entries[i] = o.fn(args);
    }
    tables.emplace(o.name, std::move(t));
  }
  return Algebra(n, std::move(tables));
}

Algebra cyclic_group(std::size_t n) {
  return tabulate(n, {{"add", 2, [n](auto a) { return Elem((a[0] + a[1]) % n); }},
                      {"neg", 1, [n](auto a) { return Elem((n - a[0]) % n); }}});
}

namespace {

// S3 as permutations of {0,1,2}; index 0 is the identity
Algebra symmetric3() {
  static const std::array<std::array<int, 3>, 6> perm{{{0, 1, 2}, {1, 2, 0}, {2, 0, 1}, {0, 2, 1}, {2, 1, 0}, {1, 0, 2}}};
  auto index = [](std::array<int, 3> p) {
    for (std::size_t i = 0; i < 6; ++i)
      if (perm[i] == p) return Elem(i);
    return Elem(0);
  };
  return tabulate(6, {{"mul", 2,
                       [&](auto a) {
                         std::array<int, 3> r{};
                         for (int x = 0; x < 3; ++x) r[x] = perm[a[0]][perm[a[1]][x]];
                         return index(r);
                       }},
                      {"inv", 1, [&](auto a) {
                         std::array<int, 3> r{};
                         for (int x = 0; x < 3; ++x) r[perm[a[0]][x]] = x;
                         return index(r);
                       }}});
}

// L × U with L = Z_q, U = Z_p, element l*p+v; u(l,v) = (l + twist(v), v)
Algebra twisted(std::size_t q, std::size_t p, std::function<std::size_t(std::size_t)> twist) {
  const std::size_t n = q * p;
  auto mk = [p](std::size_t l, std::size_t v) { return Elem(l * p + v); };
  return tabulate(n, {{"add", 2,
                       [=](auto a) { return mk((a[0] / p + a[1] / p) % q, (a[0] % p + a[1] % p) % p); }},
                      {"neg", 1, [=](auto a) { return mk((q - a[0] / p) % q, (p - a[0] % p) % p); }},
                      {"u", 1, [=](auto a) { return mk((a[0] / p + twist(a[0] % p)) % q, a[0] % p); }}});
}

// Z2 ⊗ Z3 ⊗ Z2: (l1,l2,v) -> index (l1*3+l2)*2+v
Algebra tower() {
  auto mk = [](int l1, int l2, int v) { return Elem(((l1 % 2) * 3 + l2 % 3) * 2 + v % 2); };
  auto l1 = [](Elem x) { return x / 6; };
  auto l2 = [](Elem x) { return (x / 2) % 3; };
  auto v = [](Elem x) { return x % 2; };
  return tabulate(12, {{"add", 2, [=](auto a) { return mk(l1(a[0]) + l1(a[1]), l2(a[0]) + l2(a[1]), v(a[0]) + v(a[1])); }},
                       {"neg", 1, [=](auto a) { return mk(2 - l1(a[0]), 3 - l2(a[0]), 2 - v(a[0])); }},
                       {"u", 1, [=](auto a) {
                          return mk(l1(a[0]) + (l2(a[0]) != 0), l2(a[0]) + v(a[0]), v(a[0]));
                        }}});
}

}  // namespace

const std::vector<std::string>& bundled_names() {
  static const std::vector<std::string> names{"z2",     "z3",      "z4",    "z6",    "z8",  "z2xz2",
                                              "s3",     "twist32", "twist23", "tower", "proj2", "one"};
  return names;
}

Algebra bundled(const std::string& name) {
  if (name == "z2") return cyclic_group(2);
  if (name == "z3") return cyclic_group(3);
  if (name == "z4") return cyclic_group(4);
  if (name == "z6") return cyclic_group(6);
  if (name == "z8") return cyclic_group(8);
  if (name == "z2xz2")
    return tabulate(4, {{"add", 2, [](auto a) { return Elem(a[0] ^ a[1]); }},
                        {"neg", 1, [](auto a) { return a[0]; }}});
  if (name == "s3") return symmetric3();
  if (name == "twist32") return twisted(3, 2, [](std::size_t v) { return v; });
  if (name == "twist23") return twisted(2, 3, [](std::size_t v) { return v == 1 ? 1 : 0; });
  if (name == "tower") return tower();
  if (name == "proj2") return Algebra(2, {});
  if (name == "one") return cyclic_group(1);
  throw Error(Errc::NotFound, "no bundled algebra named " + name);
}

std::string bundled_description(const std::string& name) {
  static const std::map<std::string, std::string> d{
      {"z2", "(Z2,+)"},
      {"z3", "(Z3,+)"},
      {"z4", "(Z4,+)"},
      {"z6", "(Z6,+)"},
      {"z8", "(Z8,+)"},
      {"z2xz2", "(Z2xZ2,+)"},
      {"s3", "symmetric group on 3 points"},
      {"twist32", "Z3 over Z2 with u(l,v) = (l+v, v); element l*2+v"},
      {"twist23", "Z2 over Z3 with u(l,v) = (l+[v=1], v); element l*3+v"},
      {"tower", "Z2 over Z3 over Z2 with u(l1,l2,v) = (l1+[l2!=0], l2+v, v); element (l1*3+l2)*2+v"},
      {"proj2", "2-element set, no operations"},
      {"one", "1-element group"}};
  auto it = d.find(name);
  return it == d.end() ? "" : it->second;
}

}  // namespace mw
