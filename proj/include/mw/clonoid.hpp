#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include <json.hpp>

#include "mw/algebra.hpp"

namespace mw {

// L = (Z_q^l,+), U = (Z_p^k,+), p ≠ q primes. Vectors are encoded as
// integers in base p (resp. q), first coordinate most significant.
struct ClonoidContext {
  std::uint32_t p = 2, q = 3, k = 1, l = 1;
  std::uint32_t p_inv = 0;  // p·p_inv ≡ 1 mod q

  ClonoidContext(std::uint32_t p, std::uint32_t q, std::uint32_t k = 1, std::uint32_t l = 1);
  std::uint32_t usize() const { return static_cast<std::uint32_t>(ipow(p, k)); }
  std::uint32_t lsize() const { return static_cast<std::uint32_t>(ipow(q, l)); }

  std::uint32_t uadd(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t uscale(std::uint32_t s, std::uint32_t a) const;
  std::uint32_t usub(std::uint32_t a, std::uint32_t b) const { return uadd(a, uscale(p - 1, b)); }
  std::uint32_t ladd(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t lscale(std::uint32_t s, std::uint32_t a) const;
  std::uint32_t lsub(std::uint32_t a, std::uint32_t b) const { return ladd(a, lscale(q - 1, b)); }
};

struct Hyperplane {
  std::vector<std::uint32_t> normal;  // first nonzero coordinate is 1
  bool contains(const ClonoidContext& ctx, std::uint32_t u) const;
};

std::vector<Hyperplane> hyperplanes(std::uint32_t p, std::uint32_t k);

// One step of the unary normalization, replayable as a polynomial.
struct NormStep {
  enum class Kind {
    SubConst,  // t(x) - c
    Shift,     // t(x + a) - c        (c = t(a))
    HSum,      // Σ_{h∈H} t(x + h)
    Scale,     // Σ_{i<p} t(i·x)
  };
  Kind kind;
  std::uint32_t value = 0;  // c for SubConst/Shift
  std::uint32_t shift = 0;  // a for Shift
  std::vector<std::uint32_t> members;  // H for HSum
};

struct ConjunctionFamily {
  ClonoidContext ctx;
  Hyperplane H;
  std::uint32_t lval = 0;          // l
  std::vector<std::uint32_t> t1;   // 0 on H, l off H
  std::uint32_t a = 0;             // transversal generator: cosets j·a + H
  std::vector<NormStep> trace;     // how t1 was obtained from the input
};

ConjunctionFamily normalize_unary(const ClonoidContext& ctx, const std::vector<std::uint32_t>& t);
// Apply the first `steps` trace steps to t (all of them by default).
std::vector<std::uint32_t> replay_trace(const ClonoidContext& ctx, std::vector<std::uint32_t> t,
                                        const std::vector<NormStep>& trace, std::size_t steps = SIZE_MAX);
// Family built directly from H and l.
ConjunctionFamily family_for(const ClonoidContext& ctx, const Hyperplane& H, std::uint32_t lval);

// Σ coeff · t1(Σ b_i u_i + c)
struct Atom {
  std::vector<std::uint32_t> b;
  std::uint32_t c = 0;
  auto operator<=>(const Atom&) const = default;
};

struct LinExpr {
  std::size_t arity = 0;
  std::map<Atom, std::uint32_t> terms;  // coefficient in Z_q, never 0

  void add(const Atom& a, std::uint32_t coeff, std::uint32_t q);
  std::size_t atom_count() const { return terms.size(); }
  std::uint32_t eval(const ConjunctionFamily& fam, std::span<const std::uint32_t> u) const;
  // full table over U^arity; throws SizeOverflow beyond cap
  std::vector<std::uint32_t> table(const ConjunctionFamily& fam, std::size_t cap = 1'000'000) const;
};

// l iff every argument lies in H, else 0.
LinExpr build_tn(const ConjunctionFamily& fam, std::size_t n);
// f over (U/H)^n, coset j meaning j·a + H, values multiples of l.
LinExpr interpolate(const ConjunctionFamily& fam, std::size_t n, const std::vector<std::uint32_t>& f);

nlohmann::json expr_to_json(const LinExpr& e);

}  // namespace mw
