#pragma once

#include <functional>
#include <utility>

#include "mw/algebra.hpp"

namespace mw {

// Deduplicated store of fixed-width rows (elements of a power A^W).
class RowSet {
 public:
  explicit RowSet(std::size_t width);

  std::size_t width() const { return w_; }
  std::size_t size() const { return hashes_.size(); }
  const Elem* row(std::size_t i) const { return arena_.data() + i * w_; }
  std::pair<std::uint32_t, bool> insert(const Elem* row);
  // -1 if absent
  std::int64_t find(const Elem* row) const;
  void reserve(std::size_t rows);

 private:
  std::uint64_t hash(const Elem* row) const;
  void grow();
  std::size_t w_;
  std::vector<Elem> arena_;
  std::vector<std::uint64_t> hashes_;
  std::vector<std::uint32_t> slots_;  // index + 1, 0 = empty
  std::size_t mask_ = 0;
};

// How a closure member arose: a generator, or a basic operation applied to
// earlier members.
struct Origin {
  static constexpr std::int32_t kGenerator = -1;
  std::int32_t op = kGenerator;
  std::uint32_t tag = 0;  // caller-defined for generators
  std::vector<std::uint32_t> args;
};

struct ClosureResult {
  bool stopped = false;  // on_new asked to stop
};

// Subuniverse of A^W generated by the rows already in `set`, closed breadth
// first by composition depth (semi-naive: each round combines at least one
// row of the previous round). on_new sees every row in insertion order,
// generators included; returning false stops the closure. Throws
// CapExceeded once more than `cap` rows exist.
ClosureResult close_subpower(const Algebra& alg, RowSet& set, std::size_t cap,
                             const std::function<bool(std::uint32_t)>& on_new = {},
                             std::vector<Origin>* origins = nullptr);

}  // namespace mw
