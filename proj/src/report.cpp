#include "mw/report.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <sstream>

#include "mw/bundled.hpp"
#include "mw/clonoid.hpp"
#include "mw/wreath.hpp"

namespace mw {

Caps to_caps(const RunCaps& c) {
  Caps caps;
  caps.clone = c.clone;
  return caps;
}

json caps_json(const RunCaps& c) { return {{"clone", c.clone}, {"search", c.search}, {"seed", c.seed}}; }

json error_json(Errc code, const std::string& message) {
  return {{"error", {{"code", errc_name(code)}, {"message", message}}}};
}

namespace {

// value or a per-field error object, so one failing analysis does not hide the rest
json guarded(const std::function<json()>& f) {
  try {
    return f();
  } catch (const Error& e) {
    return error_json(e.code(), e.what());
  }
}

json degree(const std::optional<int>& d) { return d ? json(*d) : json(nullptr); }

json blocks_list(const std::vector<Congruence>& cs) {
  json out = json::array();
  for (const auto& c : cs) out.push_back(c.blocks);
  return out;
}

}  // namespace

json analyze_report(Workbench& wb) {
  const Algebra& a = wb.algebra();
  json sig = json::array();
  for (std::size_t o = 0; o < a.op_count(); ++o) sig.push_back({{"name", a.op_name(o)}, {"arity", a.arity(o)}});
  json r;
  r["size"] = a.size();
  r["signature"] = sig;
  r["hash"] = algebra_hash(a);
  r["maltsev"] = guarded([&]() -> json {
    if (!wb.is_maltsev()) return nullptr;
    return circuit_to_json(wb.maltsev());
  });
  r["con_size"] = guarded([&]() -> json { return wb.lattice().size(); });
  r["nilpotent_degree"] = guarded([&] { return degree(central_series(wb, wb.one()).degree); });
  r["solvable_degree"] = guarded([&] { return degree(derived_series(wb, wb.one()).degree); });
  r["supernilpotent_degree"] = guarded([&] { return degree(supernilpotent_series(wb, wb.one()).degree); });
  r["fitting_length"] = guarded([&] { return degree(fitting(wb).length); });
  return r;
}

json lattice_report(Workbench& wb) {
  const auto& L = wb.lattice();
  json edges = json::array();
  for (auto [x, y] : L.hasse_edges()) edges.push_back({x, y});
  return {{"size", L.size()},
          {"members", blocks_list(L.members)},
          {"zero", L.zero},
          {"one", L.one},
          {"hasse", edges},
          {"modular", L.is_modular()}};
}

json commutator_report(Workbench& wb, const std::vector<Congruence>& alphas) {
  if (!alphas.empty()) {
    Congruence c = wb.commutator(alphas);
    return {{"alphas", blocks_list(alphas)}, {"commutator", c.blocks}};
  }
  const auto& L = wb.lattice();
  json rows = json::array();
  for (std::size_t i = 0; i < L.size(); ++i)
    for (std::size_t j = i; j < L.size(); ++j)
      rows.push_back({{"alphas", {i, j}}, {"commutator", L.require(wb.commutator({L.members[i], L.members[j]}))}});
  return {{"members", blocks_list(L.members)}, {"binary", rows}};
}

json fitting_report(Workbench& wb) {
  auto f = fitting(wb);
  return {{"lower", blocks_list(f.lower)},
          {"upper", blocks_list(f.upper)},
          {"fitting_congruence", f.fitting_congruence.blocks},
          {"length", degree(f.length)},
          {"lower_length", degree(f.lower_length)},
          {"upper_length", degree(f.upper_length)},
          {"lower_complete", f.lower_complete},
          {"agree", f.agree}};
}

json supernilpotent_report(Workbench& wb) {
  auto cert = is_supernilpotent(wb, wb.one());
  auto s = supernilpotent_series(wb, wb.one());
  json members = json::array();
  const auto& L = wb.lattice();
  for (std::size_t i = 0; i < L.size(); ++i)
    members.push_back({{"index", i}, {"supernilpotent", is_supernilpotent(wb, L.members[i]).holds}});
  return {{"supernilpotent", cert.holds},
          {"nilpotent", cert.nilpotent},
          {"primes", cert.primes},
          {"degree", degree(s.degree)},
          {"series", blocks_list(s.terms)},
          {"members", members}};
}

// ------------------------------------------------------------ instances

json instance_to_json(const CsatInstance& inst) {
  return {{"algebra", algebra_to_json(inst.alg)},
          {"lhs", circuit_to_json(inst.lhs)},
          {"rhs", circuit_to_json(inst.rhs)},
          {"vars", inst.vars},
          {"var_names", inst.var_names},
          {"manifest", inst.manifest}};
}

CsatInstance instance_from_json(const json& j) {
  CsatInstance inst;
  try {
    inst.alg = algebra_from_json(j.at("algebra"));
    inst.lhs = circuit_from_json(j.at("lhs"));
    inst.rhs = circuit_from_json(j.at("rhs"));
    inst.vars = j.at("vars").get<std::size_t>();
    inst.var_names = j.value("var_names", std::vector<std::string>{});
    inst.manifest = j.value("manifest", json::object());
  } catch (const json::exception& e) {
    throw Error(Errc::ParseError, std::string("instance: ") + e.what());
  }
  validate(inst.alg, inst.lhs);
  validate(inst.alg, inst.rhs);
  return inst;
}

json solve_report(const CsatInstance& inst, const std::string& mode, std::size_t cap) {
  json r{{"mode", mode}, {"vars", inst.vars}};
  std::vector<Elem> point;
  if (mode == "csat") {
    auto s = brute_csat(inst, cap);
    r["verdict"] = s.satisfiable ? "satisfiable" : "unsatisfiable";
    r["scanned"] = s.scanned;
    if (s.satisfiable) point = s.witness;
    r["witness"] = s.satisfiable ? json(s.witness) : json(nullptr);
  } else if (mode == "ceqv") {
    auto s = brute_ceqv(inst, cap);
    r["verdict"] = s.equivalent ? "equivalent" : "not equivalent";
    r["scanned"] = s.scanned;
    if (!s.equivalent) point = s.counterexample;
    r["counterexample"] = s.equivalent ? json(nullptr) : json(s.counterexample);
  } else {
    throw Error(Errc::InvalidArgument, "mode must be csat or ceqv, got " + mode);
  }
  // coloring instances: vertex v gets the coset of its value
  const auto& m = inst.manifest;
  if (!point.empty() && m.contains("cosets") && m.value("provenance", std::string()).starts_with("color_to_csat")) {
    auto cosets = m["cosets"].get<std::vector<std::size_t>>();
    std::vector<std::size_t> colors;
    for (Elem x : point) colors.push_back(cosets.at(x));
    r["coloring"] = colors;
  }
  return r;
}

// ------------------------------------------------------------ suites

void PropertyTally::check(bool ok, const std::string& what) {
  ++checks;
  if (!ok && failures++ == 0) first_failure = what;
}

bool SuiteResult::pass() const {
  return std::all_of(properties.begin(), properties.end(), [](const auto& p) { return p.failures == 0; });
}

PropertyTally& SuiteResult::property(const std::string& name) {
  for (auto& p : properties)
    if (p.name == name) return p;
  properties.emplace_back().name = name;
  return properties.back();
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"empty", "hc-laws", "loops", "clonoid", "reduction-oracle",
                                              "sat3-oracle"};
  return names;
}

namespace {

using Tuple = std::vector<std::size_t>;

std::vector<Tuple> all_tuples(std::size_t m, std::size_t k) {
  std::vector<Tuple> out;
  Tuple t(k, 0);
  while (true) {
    out.push_back(t);
    std::size_t q = k;
    while (q > 0 && ++t[q - 1] == m) t[--q] = 0;
    if (q == 0) return out;
  }
}

std::vector<Tuple> sample(std::vector<Tuple> all, std::size_t keep, std::mt19937_64& rng) {
  if (all.size() <= keep) return all;
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(keep);
  std::sort(all.begin(), all.end());
  return all;
}

void hc_laws(SuiteResult& res, const RunCaps& caps) {
  std::mt19937_64 rng(caps.seed);
  for (const auto& name : bundled_names()) {
    Workbench wb(bundled(name), to_caps(caps));
    if (!wb.is_maltsev()) continue;
    const auto& L = wb.lattice();
    const auto& M = L.members;
    const Algebra& A = wb.algebra();
    auto comm = [&](const Tuple& idx) {
      std::vector<Congruence> a;
      for (auto i : idx) a.push_back(M[i]);
      return a.size() == 1 ? a[0] : wb.commutator(a);
    };
    // quotient benches, one per lattice member
    std::vector<std::unique_ptr<Workbench>> qb(M.size());
    std::vector<Quotient> qs(M.size());
    auto bench = [&](std::size_t b) -> Workbench& {
      if (!qb[b]) qb[b] = wb.quotient_bench(M[b], &qs[b]);
      return *qb[b];
    };
    for (std::size_t k : {2u, 3u}) {
      // some ternary commutators of the 12-element tower take ~20 s each: pairs only there
      if (wb.size() > 8 && k > 2) continue;
      const auto tuples = sample(all_tuples(M.size(), k), k == 2 ? 25 : 30, rng);
      for (const auto& idx : tuples) {
        const std::string tag = name + " " + std::to_string(k) + "-ary";
        const Congruence c = comm(idx);
        Congruence mt = M[idx[0]];
        for (auto i : idx) mt = meet(mt, M[i]);
        res.property("HC1").check(c.leq(mt), tag);
        for (const auto& jdx : all_tuples(M.size(), k)) {
          bool above = true;
          for (std::size_t s = 0; s < k; ++s) above = above && L.leq[idx[s]][jdx[s]];
          if (above) res.property("HC2").check(c.leq(comm(jdx)), tag);
        }
        res.property("HC3").check(c.leq(comm(Tuple(idx.begin() + 1, idx.end()))), tag);
        auto perm = idx;
        std::sort(perm.begin(), perm.end());
        do res.property("HC4").check(comm(perm) == c, tag);
        while (std::next_permutation(perm.begin(), perm.end()));
        std::vector<Congruence> a;
        for (auto i : idx) a.push_back(M[i]);
        for (const auto& beta : M) {
          auto v = check_centralizes(wb, a, beta);
          if (v.complete) res.property("HC5").check(c.leq(beta) == v.holds, tag);
        }
        // HC6: commutators commute with taking quotients
        for (std::size_t b = 0; b < M.size(); ++b) {
          if (b == L.zero) continue;
          Workbench& q = bench(b);
          std::vector<Congruence> aq;
          for (auto i : idx) aq.push_back(congruence_mod(qs[b], join(A, M[i], M[b])));
          res.property("HC6").check(q.commutator(aq) == congruence_mod(qs[b], join(A, c, M[b])), tag);
        }
        // HC7: each place distributes over binary joins
        for (std::size_t pos = 0; pos < k; ++pos)
          for (std::size_t g = 0; g < M.size(); ++g) {
            auto i1 = idx, i2 = idx;
            i2[pos] = g;
            i1[pos] = L.join_index(idx[pos], g);
            res.property("HC7").check(comm(i1) == join(A, c, comm(i2)), tag);
          }
        // HC8: nesting a tail commutator only shrinks it
        for (std::size_t i = 1; i + 1 < k; ++i) {
          std::vector<Congruence> nested;
          for (std::size_t s = 0; s < i; ++s) nested.push_back(M[idx[s]]);
          nested.push_back(comm(Tuple(idx.begin() + i, idx.end())));
          res.property("HC8").check(wb.commutator(nested).leq(c), tag);
        }
      }
    }
  }
}

// Z2 over Z2 with u(l, v) = (l + v, v)
Algebra z2_tower() {
  Algebra sig = tabulate(2, {{"add", 2, [](auto a) { return Elem(a[0] ^ a[1]); }},
                             {"neg", 1, [](auto a) { return a[0]; }},
                             {"u", 1, [](auto a) { return a[0]; }}});
  return build_wreath(cyclic_level(2, sig), sig, {{"u", {0, 1}}});
}

void loops(SuiteResult& res) {
  struct Case {
    std::string name;
    Algebra alg;
    std::size_t vanish;  // u_{2^vanish} ≡ 0
  };
  std::vector<Case> cases{{"z2 tower", z2_tower(), 2},
                          {"z4", cyclic_group(4), 2},
                          {"z2xz2", bundled("z2xz2"), 2},
                          {"z8", bundled("z8"), 3}};
  for (const auto& name : bundled_names()) cases.push_back({name, bundled(name), 0});
  for (const auto& c : cases) {
    Workbench wb(c.alg);
    if (!wb.is_maltsev()) continue;
    const std::size_t n = wb.size();
    auto ops = loop_ops(wb.algebra(), wb.maltsev());
    auto add = circuit_to_function(wb.algebra(), ops.add, 2).table;
    auto ld = circuit_to_function(wb.algebra(), ops.ldiv, 2).table;
    auto rd = circuit_to_function(wb.algebra(), ops.rdiv, 2).table;
    for (std::size_t x = 0; x < n; ++x) {
      res.property("loop identity").check(add[x] == x && add[x * n] == x, c.name);
      for (std::size_t y = 0; y < n; ++y) {
        res.property("left division").check(add[x * n + ld[x * n + y]] == y, c.name);
        res.property("right division").check(add[rd[y * n + x] * n + x] == y, c.name);
      }
    }
    if (c.vanish == 0) continue;
    auto u = circuit_to_function(wb.algebra(), u_power(ops.add, 2, c.vanish), 1).table;
    res.property("u_{p^k} vanishes").check(std::all_of(u.begin(), u.end(), [](Elem e) { return e == 0; }), c.name);
    auto u3 = circuit_to_function(wb.algebra(), u_power(ops.add, 3, 1), 1).table;
    std::sort(u3.begin(), u3.end());
    res.property("u_3 bijective").check(std::adjacent_find(u3.begin(), u3.end()) == u3.end(), c.name);
  }
}

void clonoid(SuiteResult& res, const RunCaps& caps) {
  std::mt19937_64 rng(caps.seed);
  for (std::uint32_t p : {2u, 3u, 5u})
    for (std::uint32_t k : {1u, 2u, 3u})
      res.property("hyperplane count")
          .check(hyperplanes(p, k).size() == (ipow(p, k) - 1) / (p - 1),
                 "p=" + std::to_string(p) + " k=" + std::to_string(k));
  for (auto [p, q, k] : {std::tuple{2u, 3u, 1u}, {3u, 2u, 1u}, {2u, 5u, 1u}, {2u, 3u, 2u}}) {
    ClonoidContext ctx(p, q, k);
    // a few random nonconstant unary tables
    std::uniform_int_distribution<std::uint32_t> val(0, ctx.lsize() - 1);
    for (int trial = 0; trial < 4; ++trial) {
      std::vector<std::uint32_t> t(ctx.usize());
      do std::generate(t.begin(), t.end(), [&] { return val(rng); });
      while (std::all_of(t.begin(), t.end(), [&](auto v) { return v == t[0]; }));
      const std::string tag = "p=" + std::to_string(p) + " q=" + std::to_string(q) + " k=" + std::to_string(k);
      auto fam = normalize_unary(ctx, t);
      res.property("normalization replays").check(replay_trace(ctx, t, fam.trace) == fam.t1, tag);
      for (std::size_t n = 1; n <= 3; ++n) {
        auto T = build_tn(fam, n);
        res.property("atom bound").check(T.atom_count() <= ipow(p, k * n + 1), tag);
        auto tab = T.table(fam);
        bool ok = true;
        for (std::size_t i = 0; i < tab.size(); ++i) {
          bool all = true;
          std::size_t x = i;
          for (std::size_t j = 0; j < n; ++j, x /= ctx.usize()) all = all && fam.H.contains(ctx, x % ctx.usize());
          ok = ok && tab[i] == (all ? fam.lval : 0u);
        }
        res.property("conjunction indicator").check(ok, tag + " n=" + std::to_string(n));
      }
    }
  }
}

void reduction_oracle(SuiteResult& res, const RunCaps& caps) {
  Workbench wb(bundled("twist23"), to_caps(caps));
  Reducer r(wb);
  for (std::size_t v = 1; v <= 4; ++v) {
    std::vector<std::pair<std::size_t, std::size_t>> kn;
    for (std::size_t a = 0; a < v; ++a)
      for (std::size_t b = a + 1; b < v; ++b) kn.emplace_back(a, b);
    for (std::size_t mask = 0; mask < (std::size_t{1} << kn.size()); ++mask) {
      Graph g{v, {}};
      for (std::size_t i = 0; i < kn.size(); ++i)
        if (mask >> i & 1) g.edges.push_back(kn[i]);
      const bool want = is_colorable(g, 3);
      const std::string tag = std::to_string(v) + " vertices, mask " + std::to_string(mask);
      auto inst = r.color_to_csat(g);
      res.property("csat iff colorable").check(brute_csat(inst, caps.search).satisfiable == want, tag);
      res.property("ceqv iff not colorable")
          .check(brute_ceqv(Reducer::ceqv_companion(inst), caps.search).equivalent != want, tag);
    }
  }
}

void sat3_oracle(SuiteResult& res, const RunCaps& caps) {
  std::mt19937_64 rng(caps.seed);
  std::uniform_int_distribution<int> var(1, 3), sign(0, 1), count(0, 3);
  for (const char* name : {"twist32", "s3"}) {
    Workbench wb(bundled(name), to_caps(caps));
    Reducer r(wb);
    for (int trial = 0; trial < 150; ++trial) {
      Cnf f;
      const int m = count(rng);
      for (int c = 0; c < m; ++c) {
        Clause cl;
        for (int& l : cl) l = var(rng) * (sign(rng) ? -1 : 1);
        f.clauses.push_back(cl);
      }
      for (const auto& c : f.clauses)
        for (int l : c) f.vars = std::max<std::size_t>(f.vars, std::abs(l));
      const bool want = cnf_satisfiable(f);
      const std::string tag = std::string(name) + " trial " + std::to_string(trial);
      res.property("compact").check(brute_csat(r.sat3_to_csat(f, true), caps.search).satisfiable == want, tag);
      if (trial % 10 == 0)
        res.property("literal").check(brute_csat(r.sat3_to_csat(f, false), caps.search).satisfiable == want, tag);
    }
  }
}

}  // namespace

SuiteResult run_suite(const std::string& name, const RunCaps& caps) {
  SuiteResult res{name, {}};
  if (name == "empty") return res;
  if (name == "hc-laws") hc_laws(res, caps);
  else if (name == "loops") loops(res);
  else if (name == "clonoid") clonoid(res, caps);
  else if (name == "reduction-oracle") reduction_oracle(res, caps);
  else if (name == "sat3-oracle") sat3_oracle(res, caps);
  else throw Error(Errc::UnknownSuite, "unknown suite '" + name + "'");
  return res;
}

json suite_json(const SuiteResult& r) {
  json props = json::array();
  for (const auto& p : r.properties) {
    json row{{"name", p.name}, {"checks", p.checks}, {"failures", p.failures}};
    if (p.failures) row["first_failure"] = p.first_failure;
    props.push_back(row);
  }
  return {{"suite", r.suite}, {"pass", r.pass()}, {"properties", props}};
}

// ------------------------------------------------------------ envelopes

json wrap_report(const std::string& command, const json& input_hashes, const RunCaps& caps, json result,
                 double seconds) {
  json manifest{{"command", command},
                {"input_hashes", input_hashes},
                {"caps", caps_json(caps)},
                {"version", kVersion},
                {"timings", {{"wall_seconds", seconds}}}};
  return {{"manifest", manifest}, {"result", std::move(result)}};
}

namespace {

void flatten(const json& j, const std::string& prefix, std::ostringstream& out) {
  const bool scalar_array =
      j.is_array() && std::all_of(j.begin(), j.end(), [](const json& e) { return e.is_primitive(); });
  if (j.is_object() && !j.empty()) {
    for (auto it = j.begin(); it != j.end(); ++it)
      flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
  } else if (j.is_array() && !scalar_array) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "[" + std::to_string(i) + "]", out);
  } else {
    out << prefix << ": " << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
  }
}

}  // namespace

std::string text_summary(const json& report) {
  std::ostringstream out;
  if (report.contains("error")) {
    out << "error " << report["error"].value("code", "") << ": " << report["error"].value("message", "") << "\n";
    return out.str();
  }
  flatten(report.contains("result") ? report["result"] : report, "", out);
  return out.str();
}

}  // namespace mw
