#pragma once

#include <optional>

#include "mw/closure.hpp"

namespace mw {

constexpr std::size_t kDefaultCloneCap = 200'000;

// Pol^k as a set of tables of length |A|^k with derivations.
class PolynomialClone {
 public:
  PolynomialClone(int arity, std::size_t universe);

  int arity() const { return k_; }
  std::size_t points() const { return rows_.width(); }
  std::size_t size() const { return rows_.size(); }
  std::span<const Elem> table(std::size_t i) const { return {rows_.row(i), rows_.width()}; }
  KAryFunction function(std::size_t i) const;
  // -1 if absent
  std::int64_t find(std::span<const Elem> table) const { return rows_.find(table.data()); }
  // Minimal-depth (among discovered) circuit for member i.
  Circuit witness(const Algebra& alg, std::size_t i) const;

  RowSet& rows() { return rows_; }
  std::vector<Origin>& origins() { return origins_; }

 private:
  std::uint32_t build(const Algebra& alg, CircuitBuilder& b, std::size_t i,
                      std::vector<std::int64_t>& memo) const;
  int k_;
  std::size_t n_;
  RowSet rows_;
  std::vector<Origin> origins_;
};

// Generators: the k projections (tag = variable) then the constants
// (tag = k + element). on_new may stop generation early.
PolynomialClone generate_polynomial_clone(const Algebra& alg, int k,
                                          std::size_t cap = kDefaultCloneCap,
                                          const std::function<bool(const PolynomialClone&, std::uint32_t)>& on_new = {});

bool verify_maltsev(const Algebra& alg, const Circuit& candidate);
bool is_maltsev_table(std::size_t n, std::span<const Elem> m);
// nullopt = NotFound; throws CapExceeded
std::optional<Circuit> find_maltsev(const Algebra& alg, std::size_t cap = kDefaultCloneCap);

}  // namespace mw
