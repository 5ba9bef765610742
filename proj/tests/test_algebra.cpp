#include <doctest.h>

#include <set>

#include "mw/bundled.hpp"
#include "mw/clone.hpp"
#include "mw/io.hpp"

using namespace mw;

namespace {

Circuit mcircuit() {
  // x - y + z over add/neg
  CircuitBuilder b;
  auto x = b.var(0), y = b.var(1), z = b.var(2);
  return b.finish(b.apply("add", {b.apply("add", {x, b.apply("neg", {y})}), z}));
}

}  // namespace

TEST_CASE("eval_circuit examples") {
  Algebra z4 = cyclic_group(4), z3 = cyclic_group(3);
  Elem three[] = {3};
  CHECK(eval_circuit(z4, var_circuit(0), three) == 3);
  Elem a[] = {1, 3, 3};
  CHECK(eval_circuit(z4, mcircuit(), a) == 1);
  CircuitBuilder b;
  auto x = b.var(0), y = b.var(1), z = b.var(2);
  Circuit ff = b.finish(b.apply("add", {b.apply("add", {x, y}), z}));
  Elem ones[] = {1, 1, 1};
  CHECK(eval_circuit(z3, ff, ones) == 0);
}

TEST_CASE("evaluation errors") {
  Algebra z2 = cyclic_group(2);
  Circuit bad;
  bad.gates = {Gate::var(0), Gate::apply("mul", {0, 0})};
  bad.out = 1;
  Elem a[] = {0};
  CHECK_THROWS_AS(eval_circuit(z2, bad, a), Error);
  Circuit arity;
  arity.gates = {Gate::var(0), Gate::apply("add", {0})};
  arity.out = 1;
  CHECK_THROWS_AS(eval_circuit(z2, arity, a), Error);
  Elem big[] = {5};
  CHECK_THROWS_AS(eval_circuit(z2, var_circuit(0), big), Error);
}

TEST_CASE("circuit_to_function examples") {
  Algebra z2 = cyclic_group(2);
  CHECK(circuit_to_function(z2, const_circuit(0), 1).table == std::vector<Elem>{0, 0});
  CHECK(circuit_to_function(z2, var_circuit(1), 2).table == std::vector<Elem>{0, 1, 0, 1});
  CircuitBuilder b;
  Circuit xor2 = b.finish(b.apply("add", {b.var(0), b.var(1)}));
  CHECK(circuit_to_function(z2, xor2, 2).table == std::vector<Elem>{0, 1, 1, 0});
  CHECK_THROWS_AS(circuit_to_function(z2, xor2, 30, 1000), Error);
}

TEST_CASE("polynomial clone sizes") {
  // oracle: affine maps n*x+c over Z3 and a*x+b*y+c over Z2
  std::set<std::vector<Elem>> affine1, affine2;
  for (int n = 0; n < 3; ++n)
    for (int c = 0; c < 3; ++c) {
      std::vector<Elem> t;
      for (int x = 0; x < 3; ++x) t.push_back(Elem((n * x + c) % 3));
      affine1.insert(t);
    }
  for (int a = 0; a < 2; ++a)
    for (int bb = 0; bb < 2; ++bb)
      for (int c = 0; c < 2; ++c) {
        std::vector<Elem> t;
        for (int x = 0; x < 2; ++x)
          for (int y = 0; y < 2; ++y) t.push_back(Elem((a * x + bb * y + c) % 2));
        affine2.insert(t);
      }
  auto c1 = generate_polynomial_clone(cyclic_group(3), 1);
  CHECK(c1.size() == 9);
  for (std::size_t i = 0; i < c1.size(); ++i) {
    auto t = c1.table(i);
    CHECK(affine1.count({t.begin(), t.end()}) == 1);
  }
  auto c2 = generate_polynomial_clone(cyclic_group(2), 2);
  CHECK(c2.size() == affine2.size());
  CHECK_THROWS_AS(generate_polynomial_clone(bundled("s3"), 2, 100), Error);
}

TEST_CASE("clone closure and witnesses") {
  for (auto name : {"z4", "s3", "twist32"}) {
    Algebra A = bundled(name);
    auto c = generate_polynomial_clone(A, 1);
    const std::size_t n = A.size();
    CHECK(c.find(std::vector<Elem>(c.table(0).begin(), c.table(0).end())) >= 0);
    for (std::size_t i = 0; i < c.size(); ++i) {
      auto w = c.witness(A, i);
      auto f = circuit_to_function(A, w, 1);
      auto t = c.table(i);
      CHECK(std::equal(t.begin(), t.end(), f.table.begin()));
    }
    // closed under every basic operation
    for (std::size_t o = 0; o < A.op_count(); ++o) {
      if (A.arity(o) != 2 && A.arity(o) != 1) continue;
      for (std::size_t i = 0; i < c.size(); ++i)
        for (std::size_t j = 0; j < (A.arity(o) == 2 ? c.size() : 1); ++j) {
          std::vector<Elem> r(n);
          for (std::size_t x = 0; x < n; ++x)
            r[x] = A.arity(o) == 2 ? A.apply(o, {c.table(i)[x], c.table(j)[x]}) : A.apply(o, {c.table(i)[x]});
          CHECK(c.find(r) >= 0);
        }
    }
  }
}

TEST_CASE("eval agrees with circuit_to_function") {
  Algebra A = bundled("twist32");
  auto c = generate_polynomial_clone(A, 2);
  for (std::size_t i = 0; i < c.size(); i += 7) {
    Circuit w = c.witness(A, i);
    auto f = circuit_to_function(A, w, 2);
    Elem args[2];
    for (std::size_t k = 0; k < f.table.size(); ++k) {
      decode_tuple(k, A.size(), args);
      CHECK(eval_circuit(A, w, args) == f.table[k]);
    }
  }
}

TEST_CASE("Maltsev verification and search") {
  Algebra z4 = cyclic_group(4);
  CHECK(verify_maltsev(z4, mcircuit()));
  CHECK_FALSE(verify_maltsev(z4, var_circuit(0)));
  // x y^-1 z in S3
  Algebra s3 = bundled("s3");
  CircuitBuilder b;
  auto x = b.var(0), y = b.var(1), z = b.var(2);
  Circuit xyz = b.finish(b.apply("mul", {b.apply("mul", {x, b.apply("inv", {y})}), z}));
  CHECK(verify_maltsev(s3, xyz));

  Algebra z2 = cyclic_group(2);
  auto m2 = find_maltsev(z2);
  REQUIRE(m2);
  auto t2 = circuit_to_function(z2, *m2, 3).table;
  for (std::size_t i = 0; i < 8; ++i) CHECK(t2[i] == ((i >> 2) ^ (i >> 1) ^ i) % 2);

  CHECK_FALSE(find_maltsev(bundled("proj2")).has_value());

  Algebra z3 = cyclic_group(3);
  auto m3 = find_maltsev(z3);
  REQUIRE(m3);
  auto t3 = circuit_to_function(z3, *m3, 3).table;
  for (int a = 0; a < 3; ++a)
    for (int bb = 0; bb < 3; ++bb)
      for (int c = 0; c < 3; ++c) CHECK(t3[(a * 3 + bb) * 3 + c] == (a - bb + c + 3) % 3);
}

TEST_CASE("bundled algebras validate and are Maltsev") {
  for (const auto& name : bundled_names()) {
    Algebra A = bundled(name);
    if (name == "proj2") continue;
    CHECK_MESSAGE(find_maltsev(A).has_value(), name);
  }
}

TEST_CASE("bundled data files match the built-in tables") {
  for (const auto& name : bundled_names()) {
    Algebra A = load_algebra_file(std::string(MW_DATA_DIR) + "/" + name + ".json");
    CHECK_MESSAGE(A == bundled(name), name);
  }
}

TEST_CASE("json roundtrip and parse errors") {
  Algebra A = bundled("twist32");
  CHECK(algebra_from_json(algebra_to_json(A)) == A);
  Circuit m = mcircuit();
  Circuit back = circuit_from_json(circuit_to_json(m));
  CHECK(circuit_to_function(A, back, 3).table == circuit_to_function(A, m, 3).table);
  try {
    parse_json_text("{\n  \"size\": 2,\n  \"ops\": [\n}");
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ParseError);
    CHECK(std::string(e.what()).find("line 4") != std::string::npos);
  }
  CHECK_THROWS_AS(algebra_from_json(parse_json_text(R"({"size":2,"ops":{"f":{"arity":1,"table":[0]}}})")), Error);
  CHECK_THROWS_AS(algebra_from_json(parse_json_text(R"({"size":2,"ops":{"f":{"arity":1,"table":[0,7]}}})")), Error);
}
