#include "mw/closure.hpp"

#include <cstring>

namespace mw {

RowSet::RowSet(std::size_t width) : w_(width) {
  if (w_ == 0) throw Error(Errc::InvalidArgument, "row width must be positive");
  slots_.assign(64, 0);
  mask_ = 63;
}

std::uint64_t RowSet::hash(const Elem* row) const {
  std::uint64_t h = 0x243F6A8885A308D3ull ^ w_;
  std::size_t i = 0;
  for (; i + 8 <= w_; i += 8) {
    std::uint64_t x;
    std::memcpy(&x, row + i, 8);
    h = (h ^ x) * 0x9E3779B97F4A7C15ull;
    h ^= h >> 29;
  }
  if (i < w_) {
    std::uint64_t x = 0;
    std::memcpy(&x, row + i, w_ - i);
    h = (h ^ x) * 0x9E3779B97F4A7C15ull;
    h ^= h >> 29;
  }
  h *= 0xBF58476D1CE4E5B9ull;
  return h ^ (h >> 31);
}

void RowSet::reserve(std::size_t rows) {
  arena_.reserve(rows * w_);
  hashes_.reserve(rows);
}

void RowSet::grow() {
  std::size_t cap = slots_.size() * 2;
  slots_.assign(cap, 0);
  mask_ = cap - 1;
  for (std::size_t i = 0; i < hashes_.size(); ++i) {
    std::size_t s = hashes_[i] & mask_;
    while (slots_[s]) s = (s + 1) & mask_;
    slots_[s] = static_cast<std::uint32_t>(i + 1);
  }
}

std::int64_t RowSet::find(const Elem* row) const {
  std::uint64_t h = hash(row);
  std::size_t s = h & mask_;
  while (std::uint32_t v = slots_[s]) {
    std::size_t i = v - 1;
    if (hashes_[i] == h && std::memcmp(arena_.data() + i * w_, row, w_) == 0)
      return static_cast<std::int64_t>(i);
    s = (s + 1) & mask_;
  }
  return -1;
}

std::pair<std::uint32_t, bool> RowSet::insert(const Elem* row) {
  std::uint64_t h = hash(row);
  std::size_t s = h & mask_;
  while (std::uint32_t v = slots_[s]) {
    std::size_t i = v - 1;
    if (hashes_[i] == h && std::memcmp(arena_.data() + i * w_, row, w_) == 0)
      return {static_cast<std::uint32_t>(i), false};
    s = (s + 1) & mask_;
  }
  auto idx = static_cast<std::uint32_t>(hashes_.size());
  arena_.insert(arena_.end(), row, row + w_);
  hashes_.push_back(h);
  slots_[s] = idx + 1;
  if (hashes_.size() * 2 > slots_.size()) grow();
  return {idx, true};
}

namespace {

struct Closer {
  const Algebra& alg;
  RowSet& set;
  std::size_t cap;
  const std::function<bool(std::uint32_t)>& on_new;
  std::vector<Origin>* origins;
  std::vector<Elem> scratch;
  bool stop = false;

  // returns false to stop
  bool emit(std::int32_t op, std::span<const std::uint32_t> args) {
    auto [idx, fresh] = set.insert(scratch.data());
    if (!fresh) return true;
    if (origins) origins->push_back(Origin{op, 0, {args.begin(), args.end()}});
    if (set.size() > cap)
      throw Error(Errc::CapExceeded, "closure exceeded cap of " + std::to_string(cap));
    if (on_new && !on_new(idx)) {
      stop = true;
      return false;
    }
    return true;
  }

  bool unary(std::int32_t op, std::size_t ls, std::size_t le) {
    const Elem* t = alg.op(op).entries.data();
    const std::size_t w = set.width();
    for (std::size_t i = ls; i < le; ++i) {
      const Elem* a = set.row(i);
      for (std::size_t j = 0; j < w; ++j) scratch[j] = t[a[j]];
      std::uint32_t args[1] = {static_cast<std::uint32_t>(i)};
      if (!emit(op, args)) return false;
    }
    return true;
  }

  bool binary_pair(std::int32_t op, std::size_t i, std::size_t k) {
    const Elem* t = alg.op(op).entries.data();
    const std::size_t n = alg.size();
    const std::size_t w = set.width();
    const Elem* a = set.row(i);
    const Elem* b = set.row(k);
    for (std::size_t j = 0; j < w; ++j) scratch[j] = t[a[j] * n + b[j]];
    std::uint32_t args[2] = {static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(k)};
    return emit(op, args);
  }

  bool binary(std::int32_t op, std::size_t ls, std::size_t le) {
    for (std::size_t i = ls; i < le; ++i)
      for (std::size_t k = 0; k < le; ++k)
        if (!binary_pair(op, i, k)) return false;
    for (std::size_t i = 0; i < ls; ++i)
      for (std::size_t k = ls; k < le; ++k)
        if (!binary_pair(op, i, k)) return false;
    return true;
  }

  bool general(std::int32_t op, std::size_t ls, std::size_t le) {
    const int r = alg.arity(op);
    const Elem* t = alg.op(op).entries.data();
    const std::size_t n = alg.size();
    const std::size_t w = set.width();
    std::vector<std::uint32_t> args(r);
    std::vector<std::size_t> lo(r), hi(r);
    for (int p = 0; p < r; ++p) {
      bool empty = false;
      for (int q = 0; q < r; ++q) {
        if (q < p) lo[q] = 0, hi[q] = ls;
        else if (q == p) lo[q] = ls, hi[q] = le;
        else lo[q] = 0, hi[q] = le;
        if (lo[q] >= hi[q]) empty = true;
      }
      if (empty) continue;
      for (int q = 0; q < r; ++q) args[q] = static_cast<std::uint32_t>(lo[q]);
      while (true) {
        for (std::size_t j = 0; j < w; ++j) {
          std::size_t idx = 0;
          for (int q = 0; q < r; ++q) idx = idx * n + set.row(args[q])[j];
          scratch[j] = t[idx];
        }
        if (!emit(op, args)) return false;
        int q = r - 1;
        while (q >= 0) {
          if (++args[q] < hi[q]) break;
          args[q] = static_cast<std::uint32_t>(lo[q]);
          --q;
        }
        if (q < 0) break;
      }
    }
    return true;
  }
};

}  // namespace

ClosureResult close_subpower(const Algebra& alg, RowSet& set, std::size_t cap,
                             const std::function<bool(std::uint32_t)>& on_new,
                             std::vector<Origin>* origins) {
  Closer c{alg, set, cap, on_new, origins, std::vector<Elem>(set.width()), false};
  ClosureResult res;
  if (set.size() > cap) throw Error(Errc::CapExceeded, "generators exceed cap");
  if (on_new)
    for (std::uint32_t i = 0; i < set.size(); ++i)
      if (!on_new(i)) return ClosureResult{true};

  // nullary operations join the generators
  for (std::size_t op = 0; op < alg.op_count(); ++op) {
    if (alg.arity(op) != 0) continue;
    std::fill(c.scratch.begin(), c.scratch.end(), alg.op(op).entries[0]);
    if (!c.emit(static_cast<std::int32_t>(op), {})) return ClosureResult{true};
  }
  std::size_t ls = 0, le = set.size();
  while (ls < le) {
    for (std::size_t op = 0; op < alg.op_count(); ++op) {
      bool ok = true;
      auto o = static_cast<std::int32_t>(op);
      switch (alg.arity(op)) {
        case 0: break;
        case 1: ok = c.unary(o, ls, le); break;
        case 2: ok = c.binary(o, ls, le); break;
        default: ok = c.general(o, ls, le);
      }
      if (!ok) return ClosureResult{true};
    }
    ls = le;
    le = set.size();
  }
  return res;
}

}  // namespace mw
