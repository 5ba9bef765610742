#include <doctest.h>

#include "mw/bundled.hpp"
#include "mw/csat.hpp"

using namespace mw;

namespace {

CsatInstance pair_instance(const Algebra& a, Circuit l, Circuit r, std::size_t vars) {
  CsatInstance inst;
  inst.alg = a;
  inst.lhs = std::move(l);
  inst.rhs = std::move(r);
  inst.vars = vars;
  return inst;
}

Circuit plus_one_z2() {
  CircuitBuilder b;
  return b.finish(b.apply("add", {b.var(0), b.constant(1)}));
}

Graph graph(std::size_t n, std::vector<std::pair<std::size_t, std::size_t>> e) { return Graph{n, std::move(e)}; }

// all edge subsets of K_n
std::vector<Graph> all_graphs(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> k;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v) k.emplace_back(u, v);
  std::vector<Graph> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << k.size()); ++mask) {
    Graph g{n, {}};
    for (std::size_t i = 0; i < k.size(); ++i)
      if (mask >> i & 1) g.edges.push_back(k[i]);
    out.push_back(g);
  }
  return out;
}

}  // namespace

TEST_CASE("brute force solvers") {
  Algebra z2 = cyclic_group(2);
  auto same = brute_csat(pair_instance(z2, plus_one_z2(), plus_one_z2(), 2));
  CHECK(same.satisfiable);
  CHECK(same.witness == std::vector<Elem>{0, 0});
  CHECK(brute_ceqv(pair_instance(z2, plus_one_z2(), plus_one_z2(), 2)).equivalent);

  auto inst = pair_instance(z2, var_circuit(0), plus_one_z2(), 1);
  CHECK_FALSE(brute_csat(inst).satisfiable);
  auto ce = brute_ceqv(inst);
  CHECK_FALSE(ce.equivalent);
  CHECK(ce.counterexample == std::vector<Elem>{0});

  // least witness: x0 + x1 = 1 over Z2 is first met at (0,1)
  CircuitBuilder b;
  auto s = b.finish(b.apply("add", {b.var(0), b.var(1)}));
  CHECK(brute_csat(pair_instance(z2, s, const_circuit(1), 2)).witness == std::vector<Elem>{0, 1});

  try {
    brute_csat(pair_instance(z2, var_circuit(0), var_circuit(0), 40), 1000);
    FAIL("expected overflow");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::SearchSpaceOverflow);
  }
  CHECK_THROWS_AS(brute_csat(pair_instance(z2, var_circuit(3), var_circuit(0), 1)), Error);
}

TEST_CASE("graph and cnf input") {
  auto g = parse_dimacs_graph("c triangle\np edge 3 3\ne 1 2\ne 2 3\ne 1 3\n");
  CHECK(g.vertices == 3);
  CHECK(g.edges.size() == 3);
  CHECK(g.edges[0] == std::pair<std::size_t, std::size_t>{0, 1});
  CHECK_THROWS_AS(parse_dimacs_graph("e 1 2\n"), Error);
  CHECK_THROWS_AS(parse_dimacs_graph("p edge 2 1\ne 1 3\n"), Error);
  auto j = graph_from_json(nlohmann::json::parse(R"({"vertices": 2, "edges": [[0, 1]]})"));
  CHECK(j.edges.size() == 1);
  CHECK_THROWS_AS(graph_from_json(nlohmann::json::parse(R"({"vertices": 2, "edges": [[0, 2]]})")), Error);

  auto f = parse_dimacs_cnf("p cnf 2 2\n1 2 -1 0\n-2 -2 -2 0\n");
  CHECK(f.vars == 2);
  REQUIRE(f.clauses.size() == 2);
  CHECK(f.clauses[0] == Clause{1, 2, -1});
  CHECK_THROWS_AS(parse_dimacs_cnf("p cnf 2 1\n1 2 0\n"), Error);
  CHECK_THROWS_AS(parse_dimacs_cnf("p cnf 1 1\n1 2 1 0\n"), Error);

  CHECK(is_colorable(graph(3, {{0, 1}, {1, 2}, {0, 2}}), 3));
  CHECK_FALSE(is_colorable(graph(3, {{0, 1}, {1, 2}, {0, 2}}), 2));
  CHECK_FALSE(is_colorable(graph(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}), 3));
  CHECK(cnf_satisfiable(Cnf{0, {}}));
  CHECK_FALSE(cnf_satisfiable(Cnf{1, {{1, 1, 1}, {-1, -1, -1}}}));
}

TEST_CASE("reducer data for the two twist algebras") {
  for (auto name : {"twist23", "twist32"}) {
    Workbench wb(bundled(name));
    Reducer r(wb);
    const auto n = wb.size();
    CHECK(r.lambda().block_count() == (name == std::string("twist23") ? 3u : 2u));
    CHECK(r.p() == (name == std::string("twist23") ? 3u : 2u));
    // g only sees x/λ and lands in [0]_λ; t1 is two-valued with 0 exactly on H
    auto gt = circuit_to_function(wb.algebra(), r.g(), 1).table;
    auto tt = circuit_to_function(wb.algebra(), r.t1(), 1).table;
    for (Elem x = 0; x < n; ++x) {
      CHECK(r.lambda().related(gt[x], 0));
      for (Elem y = 0; y < n; ++y)
        if (r.lambda().related(x, y)) CHECK(gt[x] == gt[y]);
      CHECK(tt[x] == (r.coset(x) == 0 ? Elem{0} : r.l_elem()));
    }
    CHECK(r.l_elem() != 0);
    CHECK(r.lambda().related(r.l_elem(), 0));
  }
  // Fitting length 1 and 3 are rejected
  Workbench z4(cyclic_group(4));
  CHECK_THROWS_AS(Reducer{z4}, Error);
  // S3: λ is the A3 partition, M = Z2 over [0]_λ = Z3
  Workbench s3(bundled("s3"));
  Reducer rs(s3);
  CHECK(rs.p() == 2);
  CHECK(rs.q() == 3);
  CHECK(rs.verify_tower(2, rs.tower(2)));
}

TEST_CASE("absorbing towers, k = 2") {
  Workbench wb(bundled("twist23"));
  Reducer r(wb);
  for (std::size_t n = 0; n <= 4; ++n) {
    auto t = r.tower(n);
    CHECK(r.verify_tower(n, t));
    if (n > 0) CHECK(r.tower_expr(n).atom_count() <= ipow(r.p(), n + 1));
  }
  // all inputs in H: output 0; one input off H for n = 1: output l
  auto t2 = r.tower(2);
  CHECK(eval_circuit(wb.algebra(), t2, std::vector<Elem>{0, 0}) == 0);
  Workbench tw(bundled("twist32"));
  Reducer r2(tw);
  for (std::size_t n = 1; n <= 3; ++n) CHECK(r2.verify_tower(n, r2.tower(n)));
}

TEST_CASE("coloring reduction") {
  Workbench wb(bundled("twist23"));
  Reducer r(wb);
  auto empty = r.color_to_csat(graph(2, {}));
  CHECK(brute_csat(empty).satisfiable);
  auto tri = r.color_to_csat(graph(3, {{0, 1}, {1, 2}, {0, 2}}));
  CHECK(brute_csat(tri).satisfiable);
  CHECK_FALSE(brute_ceqv(Reducer::ceqv_companion(tri)).equivalent);
  CHECK(tri.manifest["provenance"] == "color_to_csat");
  CHECK(tri.manifest["p"] == 3);
  auto k4 = r.color_to_csat(graph(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}), true);
  CHECK_FALSE(brute_csat(k4).satisfiable);
  CHECK(brute_ceqv(Reducer::ceqv_companion(k4)).equivalent);
  // self-loops make a graph uncolorable
  CHECK_FALSE(brute_csat(r.color_to_csat(graph(1, {{0, 0}}))).satisfiable);
  CHECK_THROWS_AS(r.color_to_csat(graph(2, {{0, 2}})), Error);

  // literal and compact instances compute the same function on all 3-vertex graphs
  for (const auto& g : all_graphs(3)) {
    auto a = r.color_to_csat(g, false), b = r.color_to_csat(g, true);
    CHECK(circuit_to_function(wb.algebra(), a.lhs, 3).table == circuit_to_function(wb.algebra(), b.lhs, 3).table);
    CHECK(brute_csat(a).satisfiable == is_colorable(g, 3));
  }

  Workbench tw(bundled("twist32"));
  Reducer r2(tw);
  try {
    r2.color_to_csat(graph(2, {{0, 1}}));
    FAIL("expected UnsupportedPrime");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::UnsupportedPrime);
  }
}

TEST_CASE("3-SAT reduction") {
  Workbench tw(bundled("twist32"));
  Reducer r(tw);
  CHECK(brute_csat(r.sat3_to_csat(Cnf{0, {}})).satisfiable);
  CHECK_FALSE(brute_csat(r.sat3_to_csat(Cnf{1, {{1, 1, 1}, {-1, -1, -1}}})).satisfiable);
  CHECK_FALSE(brute_csat(r.sat3_to_csat(Cnf{1, {{1, 1, 1}, {-1, -1, -1}}}, false)).satisfiable);
  Cnf f{3, {{1, -2, 3}, {-1, 2, -3}, {2, 3, 3}}};
  auto a = r.sat3_to_csat(f, true), b = r.sat3_to_csat(f, false);
  CHECK(brute_csat(a).satisfiable == cnf_satisfiable(f));
  CHECK(circuit_to_function(tw.algebra(), a.lhs, 3).table == circuit_to_function(tw.algebra(), b.lhs, 3).table);
  CHECK(a.lhs.apply_count() < b.lhs.apply_count());
  CHECK_THROWS_AS(r.sat3_to_csat(Cnf{1, {{1, 2, 1}}}), Error);

  Workbench t23(bundled("twist23"));
  Reducer r3(t23);
  CHECK_THROWS_AS(r3.sat3_to_csat(Cnf{1, {{1, 1, 1}}}), Error);
}

TEST_CASE("size report") {
  Workbench wb(bundled("twist23"));
  Reducer r(wb);
  auto s = size_report(r, 4);
  REQUIRE(s.gates.size() == 4);
  CHECK(s.gates[0] == r.tower(1).apply_count());
  for (std::size_t i = 1; i < 4; ++i) CHECK(s.gates[i] >= s.gates[i - 1]);
  CHECK(s.ratio > 1);
  auto j = size_report_json(s);
  CHECK(j["rows"].size() == 4);
}

TEST_CASE("h gadget") {
  Workbench twist(bundled("twist32"));
  auto h1 = build_h(twist, {twist.zero(), Congruence::from_labels(std::vector<std::uint32_t>{0, 1, 0, 1, 0, 1})});
  CHECK(h1.arity == 1);
  CHECK(h1.verified);

  Workbench z8(cyclic_group(8));
  auto lc = central_series(z8, z8.one()).terms;
  std::reverse(lc.begin(), lc.end());
  auto h = build_h(z8, lc);  // Abelian: one level, h = x
  CHECK(h.verified);
  CHECK(h.arity == 1);
  CHECK(h.image.size() == 8);

  auto twc = central_series(twist, twist.one()).terms;
  std::reverse(twc.begin(), twc.end());
  REQUIRE(twc.size() == 3);
  auto h2 = build_h(twist, twc);
  CHECK(h2.verified);
  CHECK(h2.image == twc[1].block_of(0));

  Workbench tower(bundled("tower"));
  auto tc = central_series(tower, tower.one());
  if (tc.degree) {
    auto s = tc.terms;
    std::reverse(s.begin(), s.end());
    auto ht = build_h(tower, s);
    CHECK(ht.image == s[1].block_of(0));
  }
  CHECK_THROWS_AS(build_h(twist, {twist.zero(), twist.one()}), Error);
}
