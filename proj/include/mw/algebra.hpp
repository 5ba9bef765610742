#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace mw {

// Elements are dense indices. Desk scale: at most 256 elements.
using Elem = std::uint8_t;
constexpr std::size_t kMaxUniverse = 256;

enum class Errc {
  UnknownOperation = 1,
  ArityMismatch,
  ElementOutOfRange,
  SizeOverflow,
  CapExceeded,
  NotFound,
  ParseError,
  InvalidArgument,
  NotMaltsev,
  NotCentral,
  NotCentralSeries,
  SectionFailure,
  SignatureMismatch,
  DivisionNotFound,
  NotSupernilpotent,
  ConstantInput,
  NormalizationFailed,
  ValueOutsideCyclicSubgroup,
  ConstructionFailed,
  PresentationMismatch,
  UnsupportedPrime,
  SearchSpaceOverflow,
  LatticeOverflow,
  UnknownSuite,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

// Mixed radix, row-major, first argument most significant.
struct OpTable {
  int arity = 0;
  std::vector<Elem> entries;
};

class Algebra {
 public:
  Algebra() = default;
  Algebra(std::size_t size, std::map<std::string, OpTable> ops);

  std::size_t size() const { return n_; }
  std::size_t op_count() const { return tables_.size(); }
  const std::string& op_name(std::size_t i) const { return names_[i]; }
  const OpTable& op(std::size_t i) const { return tables_[i]; }
  int arity(std::size_t i) const { return tables_[i].arity; }
  // -1 when absent
  int op_index(std::string_view name) const;
  std::size_t require_op(std::string_view name) const;

  Elem apply(std::size_t i, std::span<const Elem> args) const;
  Elem apply(std::size_t i, std::initializer_list<Elem> args) const {
    return apply(i, std::span<const Elem>(args.begin(), args.size()));
  }

  std::map<std::string, OpTable> op_map() const;
  bool same_signature(const Algebra& other) const;
  bool operator==(const Algebra& other) const;

 private:
  std::size_t n_ = 0;
  std::vector<std::string> names_;  // sorted
  std::vector<OpTable> tables_;
};

std::size_t ipow(std::size_t base, std::size_t exp);
// like ipow, but returns 0 if the result exceeds cap
std::size_t ipow_capped(std::size_t base, std::size_t exp, std::size_t cap);

struct Gate {
  enum class Kind : std::uint8_t { Var, Const, Apply };
  Kind kind = Kind::Var;
  std::uint32_t value = 0;  // variable index or constant element
  std::string op;
  std::vector<std::uint32_t> in;

  static Gate var(std::uint32_t i) { return Gate{Kind::Var, i, {}, {}}; }
  static Gate constant(Elem e) { return Gate{Kind::Const, e, {}, {}}; }
  static Gate apply(std::string op, std::vector<std::uint32_t> in) {
    return Gate{Kind::Apply, 0, std::move(op), std::move(in)};
  }
};

struct Circuit {
  std::vector<Gate> gates;
  std::uint32_t out = 0;

  // max variable index + 1 (0 for closed circuits)
  std::size_t input_arity() const;
  std::size_t apply_count() const;
  std::size_t depth() const;
};

// Structural hashing keeps shared subcircuits shared.
class CircuitBuilder {
 public:
  std::uint32_t var(std::uint32_t i);
  std::uint32_t constant(Elem e);
  std::uint32_t apply(const std::string& op, std::vector<std::uint32_t> in);
  // Copy c into this builder with its variable j wired to inputs[j].
  std::uint32_t splice(const Circuit& c, std::span<const std::uint32_t> inputs);
  Circuit finish(std::uint32_t out) const;
  std::size_t size() const { return gates_.size(); }

 private:
  std::uint32_t intern(Gate g);
  std::vector<Gate> gates_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

Circuit var_circuit(std::uint32_t i);
Circuit const_circuit(Elem e);
// f(c_1,...,c_r) with the c_i sharing variables
Circuit compose(const std::string& op, std::span<const Circuit> args);
// c with variable j replaced by args[j]
Circuit substitute(const Circuit& c, std::span<const Circuit> args);

void validate(const Algebra& alg, const Circuit& c);

// Compiled form for repeated evaluation.
class Evaluator {
 public:
  Evaluator(const Algebra& alg, const Circuit& c);
  Elem operator()(std::span<const Elem> args);
  std::size_t arity() const { return arity_; }

  // Evaluate lanes of assignments at once; vars[j*lanes + t] is variable j
  // in lane t, out receives one value per lane.
  void run_lanes(const Elem* vars, std::size_t lanes, Elem* out);

 private:
  struct Instr {
    std::uint8_t kind;  // 0 var, 1 const, 2 unary, 3 binary, 4 ternary, 5 general
    std::uint32_t value;
    const Elem* table;
    std::uint32_t a, b, c;
    std::uint32_t in_off, in_len;
  };
  std::size_t n_;
  std::size_t arity_;
  std::vector<Instr> prog_;
  std::vector<std::uint32_t> ins_;
  std::vector<Elem> vals_;
  std::vector<Elem> lane_buf_;
  std::uint32_t out_;
};

Elem eval_circuit(const Algebra& alg, const Circuit& c, std::span<const Elem> args);

struct KAryFunction {
  int arity = 0;
  std::vector<Elem> table;
  bool operator==(const KAryFunction&) const = default;
};

KAryFunction circuit_to_function(const Algebra& alg, const Circuit& c, int n,
                                 std::size_t cap = 1'000'000);

// Decode the mixed-radix index of a size^k table into its argument tuple.
void decode_tuple(std::size_t idx, std::size_t size, std::span<Elem> out);
std::size_t encode_tuple(std::span<const Elem> args, std::size_t size);

}  // namespace mw
