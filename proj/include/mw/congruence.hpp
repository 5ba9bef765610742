#pragma once

#include <utility>

#include "mw/algebra.hpp"

namespace mw {

using Pair = std::pair<Elem, Elem>;

struct Congruence {
  // element -> block id, ids in first-occurrence order
  std::vector<std::uint32_t> blocks;

  static Congruence zero(std::size_t n);
  static Congruence one(std::size_t n);
  static Congruence from_labels(std::span<const std::uint32_t> labels);

  std::size_t universe() const { return blocks.size(); }
  std::size_t block_count() const;
  bool related(Elem a, Elem b) const { return blocks[a] == blocks[b]; }
  bool is_zero() const { return block_count() == universe(); }
  bool is_one() const { return block_count() == 1; }
  // refinement order
  bool leq(const Congruence& o) const;
  std::vector<std::vector<Elem>> classes() const;
  std::vector<Elem> block_of(Elem a) const;
  // pairs (x, first element of its block) generating the relation
  std::vector<Pair> spanning_pairs() const;

  bool operator==(const Congruence&) const = default;
};

Congruence cg(const Algebra& alg, std::span<const Pair> pairs);
// least congruence above base containing pairs
Congruence cg_extend(const Algebra& alg, const Congruence& base, std::span<const Pair> pairs);
Congruence join(const Algebra& alg, const Congruence& a, const Congruence& b);
Congruence meet(const Congruence& a, const Congruence& b);
bool is_compatible(const Algebra& alg, const Congruence& c);
// relational composition a∘b equals target
bool composes_to(const Congruence& a, const Congruence& b, const Congruence& target);

struct CongruenceLattice {
  std::vector<Congruence> members;  // finest first
  std::size_t zero = 0, one = 0;
  std::vector<std::vector<char>> leq;

  std::size_t size() const { return members.size(); }
  // -1 if absent
  std::int64_t index_of(const Congruence& c) const;
  std::size_t require(const Congruence& c) const;
  std::size_t join_index(std::size_t a, std::size_t b) const;
  std::size_t meet_index(std::size_t a, std::size_t b) const;
  std::vector<std::pair<std::size_t, std::size_t>> hasse_edges() const;
  bool is_modular() const;
};

bool canonical_less(const Congruence& a, const Congruence& b);
CongruenceLattice congruence_lattice(const Algebra& alg, std::size_t cap = 10'000);

struct Quotient {
  Algebra algebra;
  std::vector<Elem> proj;  // element -> block
  std::vector<Elem> rep;   // block -> least element
};

Quotient quotient(const Algebra& alg, const Congruence& c);
// congruence of alg/base induced by c >= base
Congruence congruence_mod(const Quotient& q, const Congruence& c);
// preimage in alg of a congruence of the quotient
Congruence lift_congruence(const Quotient& q, const Congruence& c);

}  // namespace mw
