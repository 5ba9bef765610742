#include "mw/csat.hpp"

#include <cmath>
#include <set>
#include <sstream>
#include <unordered_map>

#include "mw/io.hpp"

namespace mw {

namespace {

// Circuit assembly over the loop operations with constant folding.
class Synth {
 public:
  Synth(const Algebra& A, const LoopOps& loop, Elem zero = 0) : A_(A), loop_(loop), zero_(zero) {}

  std::uint32_t var(std::uint32_t i) { return b_.var(i); }
  std::uint32_t constant(Elem e) {
    auto id = b_.constant(e);
    consts_[id] = e;
    return id;
  }
  std::optional<Elem> value(std::uint32_t id) const {
    auto it = consts_.find(id);
    if (it == consts_.end()) return std::nullopt;
    return it->second;
  }
  std::uint32_t splice(const Circuit& c, const std::vector<std::uint32_t>& in) {
    std::vector<Elem> vals;
    for (auto g : in) {
      auto v = value(g);
      if (!v) return b_.splice(c, in);
      vals.push_back(*v);
    }
    return constant(eval_circuit(A_, c, vals));
  }
  std::uint32_t add(std::uint32_t x, std::uint32_t y) {
    if (value(x) == zero_) return y;
    if (value(y) == zero_) return x;
    return splice(loop_.add, {x, y});
  }
  std::uint32_t sub(std::uint32_t x, std::uint32_t y) {
    if (value(y) == zero_) return x;
    return splice(loop_.rdiv, {x, y});
  }
  std::uint32_t scale(std::size_t k, std::uint32_t x) {
    std::uint32_t r = constant(zero_);
    for (std::size_t i = 0; i < k; ++i) r = add(r, x);
    return r;
  }
  Circuit finish(std::uint32_t out) const { return b_.finish(out); }

 private:
  const Algebra& A_;
  const LoopOps& loop_;
  Elem zero_;
  CircuitBuilder b_;
  std::unordered_map<std::uint32_t, Elem> consts_;
};

// Coordinates of an elementary Abelian group given by its points and addition.
struct Coords {
  std::uint32_t prime = 1, dim = 0;
  std::map<std::uint32_t, std::uint32_t> code;  // point -> code
  std::vector<std::uint32_t> point;             // code -> point
};

Coords coordinatize(const std::vector<std::uint32_t>& pts, std::uint32_t zero,
                    const std::function<std::uint32_t(std::uint32_t, std::uint32_t)>& add) {
  Coords c;
  const std::size_t n = pts.size();
  auto pf = prime_factors(n);
  if (n == 1) {
    c.code[zero] = 0;
    c.point = {zero};
    return c;
  }
  if (pf.size() != 1) throw Error(Errc::PresentationMismatch, "group order is not a prime power");
  c.prime = static_cast<std::uint32_t>(pf[0]);
  // greedy basis; span as point -> digit vector in basis order
  std::map<std::uint32_t, std::vector<std::uint32_t>> span{{zero, {}}};
  for (auto x : pts) {
    if (span.count(x)) continue;
    std::map<std::uint32_t, std::vector<std::uint32_t>> next;
    for (auto& [s, v] : span) {
      auto w = v;
      w.push_back(0);
      next[s] = w;
      std::uint32_t cur = s;
      for (std::uint32_t j = 1; j < c.prime; ++j) {
        cur = add(cur, x);
        w.back() = j;
        next[cur] = w;
      }
    }
    if (next.size() != span.size() * c.prime) throw Error(Errc::PresentationMismatch, "group is not elementary Abelian");
    span = std::move(next);
    ++c.dim;
  }
  if (span.size() != n) throw Error(Errc::PresentationMismatch, "points are not closed under addition");
  c.point.assign(n, 0);
  for (auto& [s, v] : span) {
    std::uint32_t code = 0;
    for (auto d : v) code = code * c.prime + d;
    c.code[s] = code;
    c.point[code] = s;
  }
  // addition must be the vector addition
  for (auto a : pts)
    for (auto b : pts) {
      std::uint32_t ca = c.code[a], cb = c.code[b], r = 0, w = 1;
      for (std::uint32_t i = 0; i < c.dim; ++i, ca /= c.prime, cb /= c.prime, w *= c.prime)
        r += ((ca % c.prime + cb % c.prime) % c.prime) * w;
      auto it = c.code.find(add(a, b));
      if (it == c.code.end() || it->second != r) throw Error(Errc::PresentationMismatch, "addition is not componentwise");
    }
  return c;
}

// Assignments in lexicographic order, evaluated a chunk of lanes at a time.
template <class F>
void scan(const CsatInstance& inst, std::size_t cap, F&& visit) {
  const std::size_t n = inst.alg.size();
  for (const Circuit* c : {&inst.lhs, &inst.rhs})
    if (c->input_arity() > inst.vars) throw Error(Errc::InvalidArgument, "circuit uses more variables than the instance");
  const std::size_t total = inst.vars == 0 ? 1 : ipow_capped(n, inst.vars, cap);
  if (total == 0 || total > cap) throw Error(Errc::SearchSpaceOverflow, "assignment space exceeds the search cap");
  Evaluator L(inst.alg, inst.lhs), R(inst.alg, inst.rhs);
  constexpr std::size_t kLanes = 4096;
  std::vector<Elem> vars(std::max<std::size_t>(inst.vars, 1) * kLanes), lo(kLanes), ro(kLanes), tuple(inst.vars);
  for (std::size_t start = 0; start < total; start += kLanes) {
    const std::size_t lanes = std::min(kLanes, total - start);
    for (std::size_t t = 0; t < lanes; ++t) {
      std::size_t x = start + t;
      for (std::size_t j = inst.vars; j-- > 0; x /= n) vars[j * lanes + t] = static_cast<Elem>(x % n);
    }
    L.run_lanes(vars.data(), lanes, lo.data());
    R.run_lanes(vars.data(), lanes, ro.data());
    for (std::size_t t = 0; t < lanes; ++t)
      if (visit(lo[t], ro[t])) {
        for (std::size_t j = 0; j < inst.vars; ++j) tuple[j] = vars[j * lanes + t];
        visit.found(start + t, tuple);
        return;
      }
  }
}

struct Stop {
  bool want_equal = true;
  std::size_t idx = 0;
  bool hit = false;
  std::vector<Elem> tuple;
  bool operator()(Elem a, Elem b) const { return (a == b) == want_equal; }
  void found(std::size_t i, const std::vector<Elem>& t) {
    hit = true;
    idx = i;
    tuple = t;
  }
};

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

}  // namespace

CsatResult brute_csat(const CsatInstance& inst, std::size_t cap) {
  Stop s;
  scan(inst, cap, s);
  CsatResult r;
  r.satisfiable = s.hit;
  r.witness = s.tuple;
  r.scanned = s.hit ? s.idx + 1 : (inst.vars == 0 ? 1 : ipow(inst.alg.size(), inst.vars));
  return r;
}

CeqvResult brute_ceqv(const CsatInstance& inst, std::size_t cap) {
  Stop s;
  s.want_equal = false;
  scan(inst, cap, s);
  CeqvResult r;
  r.equivalent = !s.hit;
  r.counterexample = s.tuple;
  r.scanned = s.hit ? s.idx + 1 : (inst.vars == 0 ? 1 : ipow(inst.alg.size(), inst.vars));
  return r;
}

Graph parse_dimacs_graph(const std::string& text) {
  Graph g;
  bool header = false;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == 'c') continue;
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    auto fail = [&](const std::string& what) {
      return Error(Errc::ParseError, "line " + std::to_string(lineno) + ": " + what);
    };
    if (tag == "p") {
      std::string kind;
      std::size_t m = 0;
      if (!(ls >> kind >> g.vertices >> m) || (kind != "edge" && kind != "col")) throw fail("bad problem line");
      header = true;
    } else if (tag == "e") {
      long long u = 0, v = 0;
      if (!header) throw fail("edge before problem line");
      if (!(ls >> u >> v) || u < 1 || v < 1 || static_cast<std::size_t>(u) > g.vertices ||
          static_cast<std::size_t>(v) > g.vertices)
        throw fail("bad edge");
      g.edges.emplace_back(u - 1, v - 1);
    } else {
      throw fail("unknown line");
    }
  }
  if (!header) throw Error(Errc::ParseError, "missing problem line");
  return g;
}

Graph graph_from_json(const nlohmann::json& j) {
  try {
    Graph g;
    g.vertices = j.at("vertices").get<std::size_t>();
    for (const auto& e : j.at("edges")) {
      auto u = e.at(0).get<std::size_t>(), v = e.at(1).get<std::size_t>();
      if (u >= g.vertices || v >= g.vertices) throw Error(Errc::ElementOutOfRange, "edge endpoint out of range");
      g.edges.emplace_back(u, v);
    }
    return g;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::ParseError, std::string("graph: ") + e.what());
  }
}

bool is_colorable(const Graph& g, std::size_t colors) {
  std::vector<std::size_t> col(g.vertices, 0);
  const std::size_t total = g.vertices == 0 ? 1 : ipow(colors, g.vertices);
  for (std::size_t x = 0; x < total; ++x) {
    std::size_t y = x;
    for (auto& c : col) c = y % colors, y /= colors;
    bool ok = true;
    for (auto [u, v] : g.edges) ok = ok && col[u] != col[v];
    if (ok) return true;
  }
  return false;
}

Cnf parse_dimacs_cnf(const std::string& text) {
  Cnf f;
  bool header = false;
  std::vector<int> pending;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == 'c' || line[0] == '%') continue;
    auto fail = [&](const std::string& what) {
      return Error(Errc::ParseError, "line " + std::to_string(lineno) + ": " + what);
    };
    std::istringstream ls(line);
    if (line[0] == 'p') {
      std::string p, kind;
      std::size_t m = 0;
      if (!(ls >> p >> kind >> f.vars >> m) || kind != "cnf") throw fail("bad problem line");
      header = true;
      continue;
    }
    if (!header) throw fail("clause before problem line");
    int lit = 0;
    while (ls >> lit) {
      if (lit == 0) {
        if (pending.size() != 3) throw fail("clauses must have exactly three literals");
        f.clauses.push_back({pending[0], pending[1], pending[2]});
        pending.clear();
      } else {
        if (static_cast<std::size_t>(std::abs(lit)) > f.vars) throw fail("literal out of range");
        pending.push_back(lit);
      }
    }
    if (!ls.eof()) throw fail("bad literal");
  }
  if (!header) throw Error(Errc::ParseError, "missing problem line");
  if (!pending.empty()) throw Error(Errc::ParseError, "unterminated clause");
  return f;
}

bool cnf_satisfiable(const Cnf& f) {
  const std::size_t total = std::size_t{1} << f.vars;
  for (std::size_t x = 0; x < total; ++x) {
    bool all = true;
    for (const auto& c : f.clauses) {
      bool any = false;
      for (int lit : c) {
        bool v = (x >> (std::abs(lit) - 1)) & 1;
        any = any || (lit > 0 ? v : !v);
      }
      all = all && any;
    }
    if (all) return true;
  }
  return false;
}

HGadget build_h(Workbench& wb, const std::vector<Congruence>& series, Elem zero, std::size_t verify_cap) {
  const Algebra& A = wb.algebra();
  if (series.size() < 2) throw Error(Errc::InvalidArgument, "series needs at least two terms");
  if (!series.front().is_zero()) throw Error(Errc::PresentationMismatch, "series must start at 0");
  for (std::size_t i = 0; i + 1 < series.size(); ++i)
    if (wb.commutator({wb.one(), series[i + 1]}) != series[i])
      throw Error(Errc::PresentationMismatch, "series is not α_i = [1, α_{i+1}]");
  const Congruence& top = series.back();
  const auto block_top = top.block_of(zero), block1 = series[1].block_of(zero);

  HGadget out;
  if (series.size() == 2) {
    out.h = var_circuit(0);
  } else {
    Quotient qt;
    auto qb = wb.quotient_bench(series[1], &qt);
    std::vector<Congruence> qs;
    for (std::size_t i = 1; i < series.size(); ++i) qs.push_back(congruence_mod(qt, series[i]));
    HGadget inner = build_h(*qb, qs, qt.proj[zero], verify_cap);
    Circuit hp = map_constants(inner.h, qt.rep);

    auto gens = commutator_class_generators(wb, {wb.one(), series[2]}, zero);
    if (gens.gamma != series[1]) throw Error(Errc::ConstructionFailed, "commutator does not match the series");
    LoopOps loop = loop_ops(A, wb.maltsev(), zero);
    auto addt = circuit_to_function(A, loop.add, 2).table;
    const std::size_t n = A.size();
    const auto block2 = series[2].block_of(zero);
    // greedy c_a(x) = c(a, x) until the loop closure covers [0]_{α_1}
    std::set<Elem> N{zero};
    const std::set<Elem> target(block1.begin(), block1.end());
    std::vector<std::pair<std::size_t, Elem>> chosen;
    for (std::size_t gi = 0; gi < gens.generators.size() && N != target; ++gi) {
      auto ct = circuit_to_function(A, gens.generators[gi], 2).table;
      for (std::size_t a = 0; a < n && N != target; ++a) {
        std::set<Elem> grown;
        for (Elem s : N)
          for (Elem x : block2) grown.insert(addt[s * n + ct[a * n + x]]);
        if (grown.size() > N.size()) {
          N = std::move(grown);
          chosen.emplace_back(gi, static_cast<Elem>(a));
        }
      }
    }
    if (N != target) throw Error(Errc::ConstructionFailed, "absorbing polynomials do not cover the bottom class");
    // h = Σ_j c_j(a_j, h'(ȳ_j))
    Synth s(A, loop, zero);
    std::uint32_t acc = s.constant(zero);
    std::uint32_t next_var = 0;
    for (auto [gi, a] : chosen) {
      std::vector<std::uint32_t> in;
      for (std::size_t v = 0; v < inner.arity; ++v) in.push_back(s.var(next_var++));
      auto hv = s.splice(hp, in);
      acc = s.add(acc, s.splice(gens.generators[gi], {s.constant(a), hv}));
    }
    out.h = s.finish(acc);
    out.arity = next_var;
  }

  // exhaustive check over ([0]_α)^arity
  const std::size_t B = block_top.size();
  const std::size_t pts = ipow_capped(B, out.arity, verify_cap);
  if (pts == 0) return out;
  const auto& below = series[series.size() - 2];
  std::vector<Elem> canon(A.size());
  for (const auto& cls : below.classes())
    for (Elem x : cls) canon[x] = cls.front();
  Evaluator ev(A, out.h);
  std::vector<Elem> x(out.arity), y(out.arity);
  std::vector<std::size_t> ix(out.arity, 0);
  std::set<Elem> image;
  for (std::size_t i = 0; i < pts; ++i) {
    std::size_t r = i;
    for (std::size_t j = out.arity; j-- > 0; r /= B) {
      x[j] = block_top[r % B];
      y[j] = canon[x[j]];
    }
    Elem v = ev(x);
    if (ev(y) != v) throw Error(Errc::ConstructionFailed, "h depends on more than the top level");
    image.insert(v);
  }
  std::vector<Elem> z(out.arity, zero);
  if (ev(z) != zero) throw Error(Errc::ConstructionFailed, "h(0,…,0) ≠ 0");
  if (image != std::set<Elem>(block1.begin(), block1.end()))
    throw Error(Errc::ConstructionFailed, "image of h is not the bottom class");
  out.image.assign(image.begin(), image.end());
  out.verified = true;
  return out;
}

Reducer::Reducer(Workbench& wb) : wb_(wb) {
  const Algebra& A = wb.algebra();
  const std::size_t n = A.size();
  loop_ = loop_ops(A, wb.maltsev(), 0);
  auto f = fitting(wb);
  if (!f.length || *f.length != 2) throw Error(Errc::PresentationMismatch, "reductions are automated for Fitting length 2");
  lambda_ = f.fitting_congruence;
  auto addt = circuit_to_function(A, loop_.add, 2).table;

  // M = A/λ on class representatives
  auto classes = lambda_.classes();
  std::vector<std::uint32_t> mpts;
  for (std::uint32_t i = 0; i < classes.size(); ++i) mpts.push_back(i);
  auto cls_of = [&](Elem x) { return lambda_.blocks[x]; };
  Coords M = coordinatize(mpts, cls_of(0), [&](std::uint32_t a, std::uint32_t b) {
    return cls_of(addt[classes[a].front() * n + classes[b].front()]);
  });
  // L = [0]_λ
  auto block = lambda_.block_of(0);
  std::vector<std::uint32_t> lpts(block.begin(), block.end());
  Coords L = coordinatize(lpts, 0, [&](std::uint32_t a, std::uint32_t b) { return addt[a * n + b]; });
  if (M.prime == L.prime || M.dim == 0 || L.dim == 0)
    throw Error(Errc::PresentationMismatch, "levels must be nontrivial of different primes");
  ClonoidContext ctx(M.prime, L.prime, M.dim, L.dim);

  mcode_.assign(n, 0);
  lcode_.assign(n, UINT32_MAX);
  for (Elem x = 0; x < n; ++x) mcode_[x] = M.code.at(cls_of(x));
  mrep_.assign(ctx.usize(), 0);
  for (std::uint32_t u = 0; u < ctx.usize(); ++u) mrep_[u] = classes[M.point[u]].front();
  lelem_.assign(ctx.lsize(), 0);
  for (auto [pt, code] : L.code) {
    lcode_[pt] = code;
    lelem_[code] = static_cast<Elem>(pt);
  }

  // a nonconstant unary polynomial into [0]_λ that only sees x/λ
  std::optional<std::uint32_t> found;
  auto clone = generate_polynomial_clone(A, 1, wb.caps().clone, [&](const PolynomialClone& c, std::uint32_t idx) {
    auto t = c.table(idx);
    bool ok = false;
    for (Elem x = 0; x < n; ++x) {
      if (lcode_[t[x]] == UINT32_MAX || t[x] != t[mrep_[mcode_[x]]]) return true;
      ok = ok || t[x] != t[0];
    }
    if (ok) found = idx;
    return !ok;
  });
  if (!found) throw Error(Errc::ConstructionFailed, "no unary polynomial from A/λ into [0]_λ");
  g_ = clone.witness(A, *found);
  auto gt = clone.table(*found);
  std::vector<std::uint32_t> t(ctx.usize());
  for (std::uint32_t u = 0; u < ctx.usize(); ++u) t[u] = lcode_[gt[mrep_[u]]];
  fam_ = normalize_unary(ctx, t);

  // replay the normalization on circuits
  Circuit cur = g_;
  for (const auto& st : fam_->trace) {
    Synth s(A, loop_);
    const auto x = s.var(0);
    std::uint32_t out = 0;
    switch (st.kind) {
      case NormStep::Kind::SubConst:
        out = s.sub(s.splice(cur, {x}), s.constant(lelem_[st.value]));
        break;
      case NormStep::Kind::Shift:
        out = s.sub(s.splice(cur, {s.add(x, s.constant(mrep_[st.shift]))}), s.constant(lelem_[st.value]));
        break;
      case NormStep::Kind::HSum:
        out = s.constant(0);
        for (auto m : st.members) out = s.add(out, s.splice(cur, {s.add(x, s.constant(mrep_[m]))}));
        break;
      case NormStep::Kind::Scale:
        out = s.constant(0);
        for (std::uint32_t i = 0; i < ctx.p; ++i) out = s.add(out, s.splice(cur, {s.scale(i, x)}));
        break;
    }
    cur = s.finish(out);
  }
  t1_ = cur;
  auto tt = circuit_to_function(A, t1_, 1).table;
  for (Elem x = 0; x < n; ++x)
    if (tt[x] != lelem_[fam_->t1[mcode_[x]]]) throw Error(Errc::NormalizationFailed, "replayed circuit disagrees");
  l_elem_ = lelem_[fam_->lval];
  coset_.assign(n, 0);
  for (Elem x = 0; x < n; ++x)
    for (std::uint32_t j = 0; j < ctx.p; ++j)
      if (fam_->H.contains(ctx, ctx.usub(mcode_[x], ctx.uscale(j, fam_->a)))) coset_[x] = j;
}

const LinExpr& Reducer::tower_expr(std::size_t n) {
  auto it = towers_.find(n);
  if (it != towers_.end()) return it->second;
  const std::size_t p = fam_->ctx.p;
  std::vector<std::uint32_t> f(ipow(p, n));
  for (std::size_t i = 0; i < f.size(); ++i) {
    bool all = true;
    for (std::size_t x = i, j = 0; j < n; ++j, x /= p) all = all && x % p != 0;
    f[i] = all ? fam_->lval : 0;
  }
  return towers_[n] = interpolate(*fam_, n, f);
}

const LinExpr& Reducer::cnf_expr(std::size_t m) {
  auto it = cnfs_.find(m);
  if (it != cnfs_.end()) return it->second;
  const std::size_t p = fam_->ctx.p, slots = 3 * m;
  std::vector<std::uint32_t> f(ipow(p, slots));
  for (std::size_t i = 0; i < f.size(); ++i) {
    // slot 0 is the most significant digit
    std::vector<std::size_t> d(slots);
    for (std::size_t x = i, j = slots; j-- > 0; x /= p) d[j] = x % p;
    bool all = true;
    for (std::size_t c = 0; c < m; ++c) all = all && (d[3 * c] || d[3 * c + 1] || d[3 * c + 2]);
    f[i] = all ? fam_->lval : 0;
  }
  return cnfs_[m] = interpolate(*fam_, slots, f);
}

Circuit Reducer::from_expr(const LinExpr& e, std::size_t vars, const std::vector<Circuit>& slots) {
  Synth s(wb_.algebra(), loop_);
  std::vector<std::uint32_t> in;
  for (std::uint32_t v = 0; v < vars; ++v) in.push_back(s.var(v));
  std::vector<std::uint32_t> slot;
  for (const auto& c : slots) slot.push_back(s.splice(c, in));
  std::uint32_t out = s.constant(0);
  for (const auto& [atom, coeff] : e.terms) {
    std::uint32_t arg = s.constant(0);
    for (std::size_t i = 0; i < atom.b.size(); ++i) arg = s.add(arg, s.scale(atom.b[i], slot[i]));
    arg = s.add(arg, s.constant(mrep_[atom.c]));
    out = s.add(out, s.scale(coeff, s.splice(t1_, {arg})));
  }
  return s.finish(out);
}

Circuit Reducer::from_forms(const LinExpr& e, std::size_t vars, const std::vector<SlotForm>& forms) {
  const auto& ctx = fam_->ctx;
  LinExpr folded;
  folded.arity = vars;
  for (const auto& [atom, coeff] : e.terms) {
    Atom y{std::vector<std::uint32_t>(vars, 0), atom.c};
    for (std::size_t i = 0; i < atom.b.size(); ++i) {
      for (std::size_t v = 0; v < vars; ++v) y.b[v] = (y.b[v] + atom.b[i] * forms[i].coeff[v]) % ctx.p;
      y.c = ctx.uadd(y.c, ctx.uscale(atom.b[i], forms[i].c));
    }
    folded.add(y, coeff, ctx.q);
  }
  std::vector<Circuit> id;
  for (std::uint32_t v = 0; v < vars; ++v) id.push_back(var_circuit(v));
  return from_expr(folded, vars, id);
}

Circuit Reducer::tower(std::size_t n) {
  if (n == 0) return const_circuit(l_elem_);
  std::vector<Circuit> id;
  for (std::uint32_t v = 0; v < n; ++v) id.push_back(var_circuit(v));
  return from_expr(tower_expr(n), n, id);
}

bool Reducer::verify_tower(std::size_t n, const Circuit& t, std::size_t cap) const {
  const std::size_t N = wb_.size();
  const std::size_t total = n == 0 ? 1 : ipow_capped(N, n, cap);
  if (total == 0) throw Error(Errc::CapExceeded, "tower check beyond cap");
  Evaluator ev(wb_.algebra(), t);
  std::vector<Elem> x(n);
  for (std::size_t i = 0; i < total; ++i) {
    bool none = true;
    for (std::size_t r = i, j = n; j-- > 0; r /= N) {
      x[j] = static_cast<Elem>(r % N);
      none = none && coset_[x[j]] != 0;
    }
    if (ev(x) != (none ? l_elem_ : Elem{0})) return false;
  }
  return true;
}

namespace {

void describe(CsatInstance& inst, const Reducer& r, const std::string& provenance) {
  inst.manifest["algebra_hash"] = algebra_hash(inst.alg);
  inst.manifest["p"] = r.p();
  inst.manifest["q"] = r.q();
  inst.manifest["fitting_length"] = 2;
  inst.manifest["H_normal"] = r.family().H.normal;
  inst.manifest["l"] = r.l_elem();
  std::vector<std::size_t> cosets;
  for (std::size_t x = 0; x < inst.alg.size(); ++x) cosets.push_back(r.coset(static_cast<Elem>(x)));
  inst.manifest["cosets"] = cosets;  // element -> color
  inst.manifest["M"] = "A/lambda (first elementary factor, rho = 1)";
  inst.manifest["provenance"] = provenance;
  inst.manifest["gates"] = {{"lhs", inst.lhs.apply_count()}, {"rhs", inst.rhs.apply_count()}};
}

}  // namespace

CsatInstance Reducer::color_to_csat(const Graph& g, bool compact) {
  const std::uint32_t p = fam_->ctx.p;
  if (p == 2) throw Error(Errc::UnsupportedPrime, "p = 2: use the 3-SAT reduction");
  for (auto [u, v] : g.edges)
    if (u >= g.vertices || v >= g.vertices) throw Error(Errc::ElementOutOfRange, "edge endpoint out of range");
  CsatInstance inst;
  inst.alg = wb_.algebra();
  inst.vars = g.vertices;
  for (std::size_t v = 0; v < g.vertices; ++v) inst.var_names.push_back(std::to_string(v) + ":0");
  // k = 2: |E| = n^{k-1} holds with n = |E|, no padding needed
  const std::size_t m = g.edges.size();
  if (m == 0) {
    inst.lhs = const_circuit(l_elem_);
  } else if (compact) {
    std::vector<SlotForm> forms;
    for (auto [u, v] : g.edges) {
      SlotForm f{std::vector<std::uint32_t>(g.vertices, 0), 0};
      f.coeff[u] = (f.coeff[u] + 1) % p;
      f.coeff[v] = (f.coeff[v] + p - 1) % p;
      forms.push_back(f);
    }
    inst.lhs = from_forms(tower_expr(m), g.vertices, forms);
  } else {
    std::vector<Circuit> slots;
    for (auto [u, v] : g.edges) {
      Circuit args[2] = {var_circuit(static_cast<std::uint32_t>(u)), var_circuit(static_cast<std::uint32_t>(v))};
      slots.push_back(u == v ? const_circuit(0) : substitute(loop_.rdiv, args));
    }
    inst.lhs = from_expr(tower_expr(m), g.vertices, slots);
  }
  inst.rhs = const_circuit(l_elem_);
  describe(inst, *this, "color_to_csat");
  inst.manifest["edges"] = m;
  inst.manifest["padded_edges"] = m;
  inst.manifest["compact"] = compact;
  return inst;
}

CsatInstance Reducer::sat3_to_csat(const Cnf& f, bool compact) {
  const std::uint32_t p = fam_->ctx.p;
  if (p != 2) throw Error(Errc::UnsupportedPrime, "3-SAT reduction needs exp(M) = 2");
  for (const auto& c : f.clauses)
    for (int lit : c)
      if (lit == 0 || static_cast<std::size_t>(std::abs(lit)) > f.vars)
        throw Error(Errc::ElementOutOfRange, "literal out of range");
  CsatInstance inst;
  inst.alg = wb_.algebra();
  inst.vars = f.vars;
  for (std::size_t v = 0; v < f.vars; ++v) inst.var_names.push_back(std::to_string(v + 1) + ":0");
  const Elem etilde = mrep_[fam_->a];
  if (f.clauses.empty()) {
    inst.lhs = const_circuit(l_elem_);
  } else if (compact) {
    std::vector<SlotForm> forms;
    for (const auto& c : f.clauses)
      for (int lit : c) {
        SlotForm s{std::vector<std::uint32_t>(f.vars, 0), 0};
        const std::size_t v = std::abs(lit) - 1;
        s.coeff[v] = lit > 0 ? 1 : p - 1;
        if (lit < 0) s.c = fam_->a;
        forms.push_back(s);
      }
    inst.lhs = from_forms(cnf_expr(f.clauses.size()), f.vars, forms);
  } else {
    std::vector<Circuit> slots;
    for (const auto& c : f.clauses)
      for (int lit : c) {
        Circuit x = var_circuit(static_cast<std::uint32_t>(std::abs(lit) - 1));
        if (lit > 0) {
          slots.push_back(x);
        } else {
          Circuit args[2] = {const_circuit(etilde), x};
          slots.push_back(substitute(loop_.rdiv, args));
        }
      }
    inst.lhs = from_expr(cnf_expr(f.clauses.size()), f.vars, slots);
  }
  inst.rhs = const_circuit(l_elem_);
  describe(inst, *this, "sat3_to_csat");
  inst.manifest["clauses"] = f.clauses.size();
  inst.manifest["compact"] = compact;
  return inst;
}

CsatInstance Reducer::ceqv_companion(const CsatInstance& inst) {
  CsatInstance c = inst;
  c.rhs = const_circuit(0);
  c.manifest["provenance"] = inst.manifest.value("provenance", std::string()) + "/ceqv";
  c.manifest["gates"]["rhs"] = 0;
  return c;
}

SizeReport size_report(Reducer& r, std::size_t max_n) {
  SizeReport s;
  for (std::size_t n = 1; n <= max_n; ++n) {
    s.n.push_back(n);
    s.gates.push_back(r.tower(n).apply_count());
    s.atoms.push_back(r.tower_expr(n).atom_count());
  }
  // least squares on log(gates) = α + β n
  const double k = static_cast<double>(s.n.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < s.n.size(); ++i) {
    const double x = static_cast<double>(s.n[i]), y = std::log(static_cast<double>(std::max<std::size_t>(s.gates[i], 1)));
    sx += x, sy += y, sxx += x * x, sxy += x * y;
  }
  const double denom = k * sxx - sx * sx;
  const double beta = denom == 0 ? 0 : (k * sxy - sx * sy) / denom, alpha = (sy - beta * sx) / k;
  s.ratio = std::exp(beta);
  for (std::size_t i = 0; i < s.n.size(); ++i) {
    const double fit = std::exp(alpha + beta * static_cast<double>(s.n[i]));
    const double g = static_cast<double>(std::max<std::size_t>(s.gates[i], 1));
    s.residual = std::max(s.residual, std::abs(g - fit) / g);
  }
  return s;
}

nlohmann::json size_report_json(const SizeReport& s) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < s.n.size(); ++i) rows.push_back({{"n", s.n[i]}, {"gates", s.gates[i]}, {"atoms", s.atoms[i]}});
  return {{"rows", rows}, {"ratio", s.ratio}, {"residual", s.residual}};
}

}  // namespace mw
