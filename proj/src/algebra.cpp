#include "mw/algebra.hpp"

#include <algorithm>
#include <unordered_map>

namespace mw {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::UnknownOperation: return "UnknownOperation";
    case Errc::ArityMismatch: return "ArityMismatch";
    case Errc::ElementOutOfRange: return "ElementOutOfRange";
    case Errc::SizeOverflow: return "SizeOverflow";
    case Errc::CapExceeded: return "CapExceeded";
    case Errc::NotFound: return "NotFound";
    case Errc::ParseError: return "ParseError";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::NotMaltsev: return "NotMaltsev";
    case Errc::NotCentral: return "NotCentral";
    case Errc::NotCentralSeries: return "NotCentralSeries";
    case Errc::SectionFailure: return "SectionFailure";
    case Errc::SignatureMismatch: return "SignatureMismatch";
    case Errc::DivisionNotFound: return "DivisionNotFound";
    case Errc::NotSupernilpotent: return "NotSupernilpotent";
    case Errc::ConstantInput: return "ConstantInput";
    case Errc::NormalizationFailed: return "NormalizationFailed";
    case Errc::ValueOutsideCyclicSubgroup: return "ValueOutsideCyclicSubgroup";
    case Errc::ConstructionFailed: return "ConstructionFailed";
    case Errc::PresentationMismatch: return "PresentationMismatch";
    case Errc::UnsupportedPrime: return "UnsupportedPrime";
    case Errc::SearchSpaceOverflow: return "SearchSpaceOverflow";
    case Errc::LatticeOverflow: return "LatticeOverflow";
    case Errc::UnknownSuite: return "UnknownSuite";
  }
  return "Unknown";
}

std::size_t ipow(std::size_t base, std::size_t exp) {
  std::size_t r = 1;
  while (exp--) r *= base;
  return r;
}

std::size_t ipow_capped(std::size_t base, std::size_t exp, std::size_t cap) {
  std::size_t r = 1;
  while (exp--) {
    if (base != 0 && r > cap / base) return 0;
    r *= base;
  }
  return r > cap ? 0 : r;
}

void decode_tuple(std::size_t idx, std::size_t size, std::span<Elem> out) {
  for (std::size_t i = out.size(); i-- > 0;) {
    out[i] = static_cast<Elem>(idx % size);
    idx /= size;
  }
}

std::size_t encode_tuple(std::span<const Elem> args, std::size_t size) {
  std::size_t idx = 0;
  for (Elem a : args) idx = idx * size + a;
  return idx;
}

Algebra::Algebra(std::size_t size, std::map<std::string, OpTable> ops) : n_(size) {
  if (size == 0 || size > kMaxUniverse)
    throw Error(Errc::SizeOverflow, "universe size must be in 1.." + std::to_string(kMaxUniverse));
  for (auto& [name, t] : ops) {
    if (name.empty()) throw Error(Errc::InvalidArgument, "empty operation name");
    if (t.arity < 0) throw Error(Errc::ArityMismatch, name + ": negative arity");
    std::size_t len = ipow_capped(size, t.arity, 50'000'000);
    if (len == 0) throw Error(Errc::SizeOverflow, name + ": table too large");
    if (t.entries.size() != len)
      throw Error(Errc::ArityMismatch, name + ": table length " + std::to_string(t.entries.size()) +
                                           ", expected " + std::to_string(len));
    for (Elem e : t.entries)
      if (e >= size) throw Error(Errc::ElementOutOfRange, name + ": entry out of range");
    names_.push_back(name);
    tables_.push_back(std::move(t));
  }
}

int Algebra::op_index(std::string_view name) const {
  auto it = std::lower_bound(names_.begin(), names_.end(), name);
  if (it == names_.end() || *it != name) return -1;
  return static_cast<int>(it - names_.begin());
}

std::size_t Algebra::require_op(std::string_view name) const {
  int i = op_index(name);
  if (i < 0) throw Error(Errc::UnknownOperation, "unknown operation '" + std::string(name) + "'");
  return static_cast<std::size_t>(i);
}

Elem Algebra::apply(std::size_t i, std::span<const Elem> args) const {
  const OpTable& t = tables_[i];
  if (args.size() != static_cast<std::size_t>(t.arity))
    throw Error(Errc::ArityMismatch, names_[i] + ": wrong number of arguments");
  std::size_t idx = 0;
  for (Elem a : args) {
    if (a >= n_) throw Error(Errc::ElementOutOfRange, "argument out of range");
    idx = idx * n_ + a;
  }
  return t.entries[idx];
}

std::map<std::string, OpTable> Algebra::op_map() const {
  std::map<std::string, OpTable> m;
  for (std::size_t i = 0; i < names_.size(); ++i) m[names_[i]] = tables_[i];
  return m;
}

bool Algebra::same_signature(const Algebra& o) const {
  if (names_ != o.names_) return false;
  for (std::size_t i = 0; i < tables_.size(); ++i)
    if (tables_[i].arity != o.tables_[i].arity) return false;
  return true;
}

bool Algebra::operator==(const Algebra& o) const {
  if (n_ != o.n_ || !same_signature(o)) return false;
  for (std::size_t i = 0; i < tables_.size(); ++i)
    if (tables_[i].entries != o.tables_[i].entries) return false;
  return true;
}

// ---------------------------------------------------------------- circuits

std::size_t Circuit::input_arity() const {
  std::size_t n = 0;
  for (const Gate& g : gates)
    if (g.kind == Gate::Kind::Var) n = std::max<std::size_t>(n, g.value + 1);
  return n;
}

std::size_t Circuit::apply_count() const {
  std::size_t n = 0;
  for (const Gate& g : gates) n += g.kind == Gate::Kind::Apply;
  return n;
}

std::size_t Circuit::depth() const {
  std::vector<std::size_t> d(gates.size(), 0);
  for (std::size_t i = 0; i < gates.size(); ++i)
    for (auto j : gates[i].in) d[i] = std::max(d[i], d[j] + 1);
  return gates.empty() ? 0 : d[out];
}

static std::string gate_key(const Gate& g) {
  std::string k;
  k.push_back(static_cast<char>(g.kind));
  k += std::to_string(g.value);
  k.push_back('|');
  k += g.op;
  for (auto i : g.in) {
    k.push_back(',');
    k += std::to_string(i);
  }
  return k;
}

std::uint32_t CircuitBuilder::intern(Gate g) {
  std::string k = gate_key(g);
  auto it = index_.find(k);
  if (it != index_.end()) return it->second;
  auto id = static_cast<std::uint32_t>(gates_.size());
  gates_.push_back(std::move(g));
  index_.emplace(std::move(k), id);
  return id;
}

std::uint32_t CircuitBuilder::var(std::uint32_t i) { return intern(Gate::var(i)); }
std::uint32_t CircuitBuilder::constant(Elem e) { return intern(Gate::constant(e)); }
std::uint32_t CircuitBuilder::apply(const std::string& op, std::vector<std::uint32_t> in) {
  for (auto i : in)
    if (i >= gates_.size()) throw Error(Errc::InvalidArgument, "gate reference out of range");
  return intern(Gate::apply(op, std::move(in)));
}

std::uint32_t CircuitBuilder::splice(const Circuit& c, std::span<const std::uint32_t> inputs) {
  std::vector<std::uint32_t> map(c.gates.size());
  for (std::size_t i = 0; i < c.gates.size(); ++i) {
    const Gate& g = c.gates[i];
    switch (g.kind) {
      case Gate::Kind::Var:
        if (g.value >= inputs.size()) throw Error(Errc::InvalidArgument, "splice: missing input");
        map[i] = inputs[g.value];
        break;
      case Gate::Kind::Const:
        map[i] = constant(static_cast<Elem>(g.value));
        break;
      case Gate::Kind::Apply: {
        std::vector<std::uint32_t> in;
        in.reserve(g.in.size());
        for (auto j : g.in) in.push_back(map[j]);
        map[i] = apply(g.op, std::move(in));
        break;
      }
    }
  }
  return map[c.out];
}

Circuit CircuitBuilder::finish(std::uint32_t out) const {
  // keep only gates reachable from out, in order
  std::vector<char> live(gates_.size(), 0);
  if (gates_.empty()) throw Error(Errc::InvalidArgument, "empty circuit");
  live[out] = 1;
  for (std::size_t i = out + 1; i-- > 0;)
    if (live[i])
      for (auto j : gates_[i].in) live[j] = 1;
  std::vector<std::uint32_t> remap(gates_.size(), 0);
  Circuit c;
  for (std::size_t i = 0; i <= out; ++i) {
    if (!live[i]) continue;
    Gate g = gates_[i];
    for (auto& j : g.in) j = remap[j];
    remap[i] = static_cast<std::uint32_t>(c.gates.size());
    c.gates.push_back(std::move(g));
  }
  c.out = remap[out];
  return c;
}

Circuit var_circuit(std::uint32_t i) {
  Circuit c;
  c.gates.push_back(Gate::var(i));
  return c;
}

Circuit const_circuit(Elem e) {
  Circuit c;
  c.gates.push_back(Gate::constant(e));
  return c;
}

Circuit compose(const std::string& op, std::span<const Circuit> args) {
  CircuitBuilder b;
  std::size_t n = 0;
  for (const auto& a : args) n = std::max(n, a.input_arity());
  std::vector<std::uint32_t> vars;
  for (std::size_t j = 0; j < n; ++j) vars.push_back(b.var(static_cast<std::uint32_t>(j)));
  std::vector<std::uint32_t> in;
  for (const auto& a : args) in.push_back(b.splice(a, vars));
  return b.finish(b.apply(op, std::move(in)));
}

Circuit substitute(const Circuit& c, std::span<const Circuit> args) {
  CircuitBuilder b;
  std::size_t n = 0;
  for (const auto& a : args) n = std::max(n, a.input_arity());
  std::vector<std::uint32_t> vars;
  for (std::size_t j = 0; j < n; ++j) vars.push_back(b.var(static_cast<std::uint32_t>(j)));
  std::vector<std::uint32_t> in;
  for (const auto& a : args) in.push_back(b.splice(a, vars));
  return b.finish(b.splice(c, in));
}

void validate(const Algebra& alg, const Circuit& c) {
  if (c.gates.empty()) throw Error(Errc::InvalidArgument, "empty circuit");
  if (c.out >= c.gates.size()) throw Error(Errc::InvalidArgument, "output reference out of range");
  for (std::size_t i = 0; i < c.gates.size(); ++i) {
    const Gate& g = c.gates[i];
    if (g.kind == Gate::Kind::Const && g.value >= alg.size())
      throw Error(Errc::ElementOutOfRange, "constant out of range");
    if (g.kind != Gate::Kind::Apply) continue;
    std::size_t op = alg.require_op(g.op);
    if (g.in.size() != static_cast<std::size_t>(alg.arity(op)))
      throw Error(Errc::ArityMismatch, "gate " + std::to_string(i) + ": fan-in does not match arity of " + g.op);
    for (auto j : g.in)
      if (j >= i) throw Error(Errc::InvalidArgument, "gate " + std::to_string(i) + ": forward reference");
  }
}

Evaluator::Evaluator(const Algebra& alg, const Circuit& c) : n_(alg.size()) {
  validate(alg, c);
  arity_ = c.input_arity();
  prog_.reserve(c.gates.size());
  for (const Gate& g : c.gates) {
    Instr in{};
    switch (g.kind) {
      case Gate::Kind::Var: in.kind = 0; in.value = g.value; break;
      case Gate::Kind::Const: in.kind = 1; in.value = g.value; break;
      case Gate::Kind::Apply: {
        const OpTable& t = alg.op(alg.require_op(g.op));
        in.table = t.entries.data();
        switch (t.arity) {
          case 0: in.kind = 1; in.value = t.entries[0]; break;
          case 1: in.kind = 2; in.a = g.in[0]; break;
          case 2: in.kind = 3; in.a = g.in[0]; in.b = g.in[1]; break;
          case 3: in.kind = 4; in.a = g.in[0]; in.b = g.in[1]; in.c = g.in[2]; break;
          default:
            in.kind = 5;
            in.in_off = static_cast<std::uint32_t>(ins_.size());
            in.in_len = static_cast<std::uint32_t>(g.in.size());
            ins_.insert(ins_.end(), g.in.begin(), g.in.end());
        }
        break;
      }
    }
    prog_.push_back(in);
  }
  out_ = c.out;
  vals_.resize(prog_.size());
}

Elem Evaluator::operator()(std::span<const Elem> args) {
  if (args.size() < arity_) throw Error(Errc::InvalidArgument, "not enough arguments");
  for (Elem a : args)
    if (a >= n_) throw Error(Errc::ElementOutOfRange, "argument out of range");
  const std::size_t n = n_;
  Elem* v = vals_.data();
  for (std::size_t i = 0; i < prog_.size(); ++i) {
    const Instr& p = prog_[i];
    switch (p.kind) {
      case 0: v[i] = args[p.value]; break;
      case 1: v[i] = static_cast<Elem>(p.value); break;
      case 2: v[i] = p.table[v[p.a]]; break;
      case 3: v[i] = p.table[v[p.a] * n + v[p.b]]; break;
      case 4: v[i] = p.table[(v[p.a] * n + v[p.b]) * n + v[p.c]]; break;
      default: {
        std::size_t idx = 0;
        for (std::uint32_t j = 0; j < p.in_len; ++j) idx = idx * n + v[ins_[p.in_off + j]];
        v[i] = p.table[idx];
      }
    }
  }
  return v[out_];
}

void Evaluator::run_lanes(const Elem* vars, std::size_t lanes, Elem* out) {
  const std::size_t n = n_;
  lane_buf_.resize(prog_.size() * lanes);
  Elem* buf = lane_buf_.data();
  for (std::size_t i = 0; i < prog_.size(); ++i) {
    const Instr& p = prog_[i];
    Elem* dst = buf + i * lanes;
    switch (p.kind) {
      case 0: std::copy(vars + p.value * lanes, vars + (p.value + 1) * lanes, dst); break;
      case 1: std::fill(dst, dst + lanes, static_cast<Elem>(p.value)); break;
      case 2: {
        const Elem* a = buf + p.a * lanes;
        for (std::size_t t = 0; t < lanes; ++t) dst[t] = p.table[a[t]];
        break;
      }
      case 3: {
        const Elem* a = buf + p.a * lanes;
        const Elem* b = buf + p.b * lanes;
        for (std::size_t t = 0; t < lanes; ++t) dst[t] = p.table[a[t] * n + b[t]];
        break;
      }
      case 4: {
        const Elem* a = buf + p.a * lanes;
        const Elem* b = buf + p.b * lanes;
        const Elem* c = buf + p.c * lanes;
        for (std::size_t t = 0; t < lanes; ++t) dst[t] = p.table[(a[t] * n + b[t]) * n + c[t]];
        break;
      }
      default:
        for (std::size_t t = 0; t < lanes; ++t) {
          std::size_t idx = 0;
          for (std::uint32_t j = 0; j < p.in_len; ++j) idx = idx * n + buf[ins_[p.in_off + j] * lanes + t];
          dst[t] = p.table[idx];
        }
    }
  }
  std::copy(buf + out_ * lanes, buf + (out_ + 1) * lanes, out);
}

Elem eval_circuit(const Algebra& alg, const Circuit& c, std::span<const Elem> args) {
  Evaluator ev(alg, c);
  return ev(args);
}

KAryFunction circuit_to_function(const Algebra& alg, const Circuit& c, int n, std::size_t cap) {
  if (n < 0) throw Error(Errc::InvalidArgument, "negative arity");
  if (c.input_arity() > static_cast<std::size_t>(n))
    throw Error(Errc::InvalidArgument, "circuit uses variables beyond the requested arity");
  std::size_t len = ipow_capped(alg.size(), n, cap);
  if (len == 0) throw Error(Errc::SizeOverflow, "size^n exceeds cap");
  Evaluator ev(alg, c);
  KAryFunction f{n, std::vector<Elem>(len)};
  std::vector<Elem> args(n);
  for (std::size_t i = 0; i < len; ++i) {
    decode_tuple(i, alg.size(), args);
    f.table[i] = ev(args);
  }
  return f;
}

}  // namespace mw
