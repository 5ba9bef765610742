#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>

#include <json.hpp>

#include "mw/clonoid.hpp"
#include "mw/wreath.hpp"

namespace mw {

struct CsatInstance {
  Algebra alg;
  Circuit lhs, rhs;       // C, C′
  std::size_t vars = 0;   // x_0 … x_{vars-1}, shared
  std::vector<std::string> var_names;
  nlohmann::json manifest = nlohmann::json::object();
};

struct CsatResult {
  bool satisfiable = false;
  std::vector<Elem> witness;  // lexicographically least
  std::size_t scanned = 0;
};

struct CeqvResult {
  bool equivalent = true;
  std::vector<Elem> counterexample;  // lexicographically least
  std::size_t scanned = 0;
};

constexpr std::size_t kDefaultSearchCap = 50'000'000;

// Exhaustive scans; SearchSpaceOverflow when |A|^vars exceeds cap.
CsatResult brute_csat(const CsatInstance& inst, std::size_t cap = kDefaultSearchCap);
CeqvResult brute_ceqv(const CsatInstance& inst, std::size_t cap = kDefaultSearchCap);

struct Graph {
  std::size_t vertices = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
};

// DIMACS "p edge n m" / "e u v" (1-based) and {"vertices": n, "edges": [[u,v],…]} (0-based)
Graph parse_dimacs_graph(const std::string& text);
Graph graph_from_json(const nlohmann::json& j);
bool is_colorable(const Graph& g, std::size_t colors);

// A clause is three nonzero literals, DIMACS style (-3 = ¬x3, 1-based).
using Clause = std::array<int, 3>;
struct Cnf {
  std::size_t vars = 0;
  std::vector<Clause> clauses;
};
Cnf parse_dimacs_cnf(const std::string& text);
bool cnf_satisfiable(const Cnf& f);

// Result of the h construction for a series α_i = [1, α_{i+1}].
struct HGadget {
  Circuit h;
  std::size_t arity = 1;
  std::vector<Elem> image;  // h(([0]_α)^arity), equals [0]_{α_1}
  bool verified = false;    // exhaustive check ran (it is skipped beyond cap)
};

// series: 0 = α_0 < … < α_n = α
HGadget build_h(Workbench& wb, const std::vector<Congruence>& series, Elem zero = 0,
                std::size_t verify_cap = 2'000'000);

// Everything the Fitting-length-2 reductions need: λ the Fitting congruence,
// ρ = 1 and M = A/λ elementary Abelian of exponent p, [0]_λ elementary
// Abelian of exponent q ≠ p under the loop addition.
class Reducer {
 public:
  explicit Reducer(Workbench& wb);

  const Algebra& algebra() const { return wb_.algebra(); }
  std::size_t p() const { return fam_->ctx.p; }
  std::size_t q() const { return fam_->ctx.q; }
  const ConjunctionFamily& family() const { return *fam_; }
  const Congruence& lambda() const { return lambda_; }
  Elem l_elem() const { return l_elem_; }
  // coset index (0…p-1) of x's class modulo H, i.e. j with x/λ ∈ j·a + H
  std::size_t coset(Elem x) const { return coset_[x]; }
  const Circuit& g() const { return g_; }
  const Circuit& t1() const { return t1_; }
  const LoopOps& loop() const { return loop_; }

  // t_n: l iff no argument's M-projection lies in H, else 0
  Circuit tower(std::size_t n);
  // verifies the tower invariants over all of A^n; false if a point fails
  bool verify_tower(std::size_t n, const Circuit& t, std::size_t cap = 2'000'000) const;

  // compact: fold the per-slot linear forms into the atoms (same function,
  // far fewer gates); otherwise splice the slot circuits into t_n literally
  CsatInstance color_to_csat(const Graph& g, bool compact = false);
  CsatInstance sat3_to_csat(const Cnf& f, bool compact = true);
  // C vs constant 0
  static CsatInstance ceqv_companion(const CsatInstance& inst);

  // atoms of the interpolated conjunction over n slots
  const LinExpr& tower_expr(std::size_t n);
  const LinExpr& cnf_expr(std::size_t clauses);

 private:
  struct SlotForm {
    std::vector<std::uint32_t> coeff;  // per variable, over Z_p
    std::uint32_t c = 0;               // U code of the constant part
  };
  Circuit from_expr(const LinExpr& e, std::size_t vars, const std::vector<Circuit>& slots);
  Circuit from_forms(const LinExpr& e, std::size_t vars, const std::vector<SlotForm>& forms);

  Workbench& wb_;
  Congruence lambda_;
  LoopOps loop_;
  std::optional<ConjunctionFamily> fam_;
  std::vector<std::uint32_t> mcode_, lcode_;  // element -> U code of x/λ; element of [0]_λ -> L code
  std::vector<Elem> mrep_, lelem_;            // inverses
  std::vector<std::size_t> coset_;
  Elem l_elem_ = 0;
  Circuit g_, t1_;
  std::map<std::size_t, LinExpr> towers_, cnfs_;
};

struct SizeReport {
  std::vector<std::size_t> n, gates, atoms;
  double ratio = 0;     // fitted growth factor per step
  double residual = 0;  // max relative deviation of the geometric fit
};

SizeReport size_report(Reducer& r, std::size_t max_n = 4);
nlohmann::json size_report_json(const SizeReport& s);

}  // namespace mw
