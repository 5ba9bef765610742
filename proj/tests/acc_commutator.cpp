#include <algorithm>
#include <chrono>
#include <sstream>

#include "acceptance.hpp"
#include "mw/bundled.hpp"
#include "mw/commutator.hpp"

using namespace mw;

namespace acc {

namespace {

struct Tally {
  std::size_t checks = 0, failures = 0;
  std::string first;
  void check(bool ok, const std::string& what) {
    ++checks;
    if (!ok && failures++ == 0) first = what;
  }
};

std::vector<std::vector<std::size_t>> tuples(std::size_t m, int k) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> t(k, 0);
  while (true) {
    out.push_back(t);
    int q = k - 1;
    while (q >= 0 && ++t[q] == m) t[q--] = 0;
    if (q < 0) return out;
  }
}

}  // namespace

Outcome commutator_laws() {
  Tally t;
  std::ostringstream info;
  for (auto name : {"z4", "z2xz2", "s3", "twist32"}) {
    Workbench wb(bundled(name));
    const auto& L = wb.lattice();
    const auto& M = L.members;
    auto comm = [&](const std::vector<std::size_t>& idx) {
      std::vector<Congruence> a;
      for (auto i : idx) a.push_back(M[i]);
      return wb.commutator(a);
    };
    std::size_t cubes = 0;
    for (int k = 2; k <= 3; ++k)
      for (const auto& idx : tuples(M.size(), k)) {
        std::string tag = std::string(name) + " k=" + std::to_string(k);
        Congruence c = comm(idx);
        // HC1
        Congruence mt = M[idx[0]];
        for (auto i : idx) mt = meet(mt, M[i]);
        t.check(c.leq(mt), tag + " HC1");
        // HC3
        std::vector<std::size_t> tail(idx.begin() + 1, idx.end());
        Congruence ct = tail.size() == 1 ? M[tail[0]] : comm(tail);
        t.check(c.leq(ct), tag + " HC3");
        // HC4
        auto perm = idx;
        std::sort(perm.begin(), perm.end());
        do t.check(comm(perm) == c, tag + " HC4");
        while (std::next_permutation(perm.begin(), perm.end()));
        // HC2 against every coordinatewise larger tuple
        for (const auto& jdx : tuples(M.size(), k)) {
          bool above = true;
          for (int s = 0; s < k; ++s) above = above && L.leq[idx[s]][jdx[s]];
          if (above) t.check(c.leq(comm(jdx)), tag + " HC2");
        }
        // HC5 against the term-condition verifier
        std::vector<Congruence> a;
        for (auto i : idx) a.push_back(M[i]);
        for (const auto& beta : M) {
          auto v = check_centralizes(wb, a, beta);
          cubes += v.cubes;
          t.check(v.complete, tag + " verifier complete");
          t.check(c.leq(beta) == v.holds, tag + " HC5");
        }
        // and the commutator itself is the least such beta among all congruences
        t.check(L.index_of(c) >= 0, tag + " member");
      }
    info << name << ":|Con|=" << M.size() << ",cubes=" << cubes << " ";
  }
  std::ostringstream d;
  d << t.checks << " checks, " << t.failures << " failures; " << info.str();
  if (t.failures) d << "first failure: " << t.first;
  return {t.failures == 0, d.str()};
}

}  // namespace acc
