#include <cmath>
#include <sstream>

#include "acceptance.hpp"
#include "mw/bundled.hpp"
#include "mw/csat.hpp"

using namespace mw;

namespace acc {

namespace {

// independent oracle: try every coloring
bool colorable(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges, std::size_t k) {
  std::vector<std::size_t> c(n, 0);
  while (true) {
    bool ok = true;
    for (auto [u, v] : edges) ok = ok && c[u] != c[v];
    if (ok) return true;
    std::size_t i = 0;
    while (i < n && ++c[i] == k) c[i++] = 0;
    if (i == n) return false;
  }
}

// independent oracle: evaluate the clauses on every assignment
bool satisfiable(std::size_t vars, const std::vector<Clause>& cls) {
  for (std::size_t x = 0; x < (std::size_t{1} << vars); ++x) {
    bool all = true;
    for (const auto& c : cls) {
      bool any = false;
      for (int lit : c) any = any || (((x >> (std::abs(lit) - 1)) & 1) == (lit > 0 ? 1u : 0u));
      all = all && any;
    }
    if (all) return true;
  }
  return false;
}

}  // namespace

Outcome coloring_reduction() {
  Workbench wb(bundled("twist23"));
  Reducer r(wb);
  std::vector<std::pair<std::size_t, std::size_t>> k4;
  for (std::size_t u = 0; u < 4; ++u)
    for (std::size_t v = u + 1; v < 4; ++v) k4.emplace_back(u, v);
  std::size_t graphs = 0, colorable_count = 0, bad = 0;
  std::string first;
  for (std::size_t mask = 0; mask < 64; ++mask) {
    Graph g{4, {}};
    for (std::size_t i = 0; i < 6; ++i)
      if (mask >> i & 1) g.edges.push_back(k4[i]);
    const bool want = colorable(4, g.edges, 3);
    auto inst = r.color_to_csat(g);
    const bool sat = brute_csat(inst).satisfiable;
    const bool eqv = brute_ceqv(Reducer::ceqv_companion(inst)).equivalent;
    ++graphs;
    colorable_count += want;
    if (sat != want || eqv == want) {
      if (bad++ == 0) first = "edge mask " + std::to_string(mask);
    }
  }
  std::ostringstream s;
  s << graphs << " graphs on 4 vertices over twist23, " << colorable_count << " 3-colorable";
  if (bad) s << "; " << bad << " mismatches, first " << first;
  return {bad == 0, s.str()};
}

Outcome sat3_reduction() {
  Workbench wb(bundled("twist32"));
  Reducer r(wb);
  // clauses: multisets of three literals over x1..x3
  const int lits[6] = {1, -1, 2, -2, 3, -3};
  std::vector<Clause> all;
  for (int a = 0; a < 6; ++a)
    for (int b = a; b < 6; ++b)
      for (int c = b; c < 6; ++c) all.push_back({lits[a], lits[b], lits[c]});
  std::size_t formulas = 0, sats = 0, bad = 0, literal_checked = 0;
  std::string first;
  auto run = [&](const std::vector<Clause>& cls) {
    std::size_t vars = 0;
    for (const auto& c : cls)
      for (int l : c) vars = std::max<std::size_t>(vars, std::abs(l));
    const bool want = satisfiable(vars, cls);
    Cnf f{vars, cls};
    bool ok = brute_csat(r.sat3_to_csat(f)).satisfiable == want;
    // the uncompacted instance on a deterministic sample
    if (formulas % 97 == 0) {
      ++literal_checked;
      ok = ok && brute_csat(r.sat3_to_csat(f, false)).satisfiable == want;
    }
    ++formulas;
    sats += want;
    if (!ok && bad++ == 0) {
      std::ostringstream s;
      for (const auto& c : cls) s << "(" << c[0] << " " << c[1] << " " << c[2] << ")";
      first = s.str();
    }
  };
  run({});
  const std::size_t m = all.size();
  for (std::size_t i = 0; i < m; ++i) {
    run({all[i]});
    for (std::size_t j = i + 1; j < m; ++j) {
      run({all[i], all[j]});
      for (std::size_t k = j + 1; k < m; ++k) run({all[i], all[j], all[k]});
    }
  }
  std::ostringstream s;
  s << formulas << " formulas over twist32, " << sats << " satisfiable, " << literal_checked
    << " also checked uncompacted";
  if (bad) s << "; " << bad << " mismatches, first " << first;
  return {bad == 0, s.str()};
}

Outcome size_accounting() {
  Workbench wb(bundled("twist23"));
  Reducer r(wb);
  auto rep = size_report(r, 4);
  std::ostringstream s;
  s << "gates";
  for (auto g : rep.gates) s << " " << g;
  s.setf(std::ios::fixed);
  s.precision(3);
  s << ", ratio " << rep.ratio << ", residual " << rep.residual;
  bool monotone = true;
  for (std::size_t i = 1; i < rep.gates.size(); ++i) monotone = monotone && rep.gates[i] >= rep.gates[i - 1];
  return {monotone && rep.residual < 0.10 && rep.ratio > 1, s.str()};
}

}  // namespace acc
