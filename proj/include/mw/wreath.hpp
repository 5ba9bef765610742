#pragma once

#include <map>
#include <string>

#include "mw/commutator.hpp"

namespace mw {

// An affine level: the algebra L in the signature of A, plus its group.
struct AffineLevel {
  Algebra algebra;           // f^L tables
  std::vector<Elem> add;     // |L|^2, neutral element 0
  std::vector<Elem> neg;     // |L|
  std::vector<std::vector<Elem>> scalars;  // unary polynomials of L fixing 0
  std::size_t exponent = 1;

  std::size_t size() const { return neg.size(); }
  Elem plus(Elem a, Elem b) const { return add[a * size() + b]; }
  Elem minus(Elem a, Elem b) const { return plus(a, neg[b]); }
  bool elementary() const;
};

// Build the level from a group table (x+y) and the operations f^L.
AffineLevel make_level(Algebra ops, std::vector<Elem> add);
AffineLevel cyclic_level(std::size_t n, const Algebra& signature);

// Twist tables per operation: over (above)^arity -> L.
using TwistSet = std::map<std::string, std::vector<Elem>>;

// L ⊗^T U on L × U, element l*|U| + u.
Algebra build_wreath(const AffineLevel& L, const Algebra& U, const TwistSet& T);

struct WreathPresentation {
  std::vector<AffineLevel> levels;  // L_1 (bottom) … L_n
  Algebra top;                      // U
  std::vector<TwistSet> twists;     // per level, over (L_{i+1}×…×L_n×U)^arity
  std::vector<Elem> iso;            // A -> product index, L_1 most significant
  std::vector<Congruence> series;   // α_0 = 0 < … < α_n over A
  Elem zero = 0;

  std::size_t above_size(std::size_t i) const;  // |L_{i+1}|…|L_n|·|U|
  // coordinate of a product index on level i; levels.size() gives the U part
  std::size_t coordinate(std::size_t idx, std::size_t level) const;
  Algebra reconstruct() const;
};

// Exhaustive check that iso transports A onto reconstruct().
bool verify_presentation(const Algebra& alg, const WreathPresentation& w);

WreathPresentation decompose_central(Workbench& wb, const Congruence& zeta, Elem zero = 0);
WreathPresentation decompose_series(Workbench& wb, const std::vector<Congruence>& series, Elem zero = 0);
WreathPresentation elementary_refinement(Workbench& wb, const WreathPresentation& w);

struct LoopOps {
  Circuit add, ldiv, rdiv;  // x+y, x\y, x/y
  std::size_t order = 1;    // lcm of translation orders
};

LoopOps loop_ops(const Algebra& alg, const Circuit& m, Elem zero = 0);
// u_{q^l}: q-fold left-associated sum, composed l times
Circuit u_power(const Circuit& add, std::size_t q, std::size_t l);

// r_p on [0]_α for the presented α; verified exhaustively.
Circuit r_prime(Workbench& wb, const WreathPresentation& w, std::size_t p);

// D[i][j]: some unary polynomial's L_i coordinate depends on the L_j coordinate.
std::vector<std::vector<bool>> dependence_matrix(Workbench& wb, const WreathPresentation& w);
bool dependence_says_supernilpotent(const WreathPresentation& w, const std::vector<std::vector<bool>>& D);
// Keeping coordinates outside `dropped` is a homomorphism (induced relation is a congruence).
bool projection_is_homomorphism(const Algebra& alg, const WreathPresentation& w,
                                const std::vector<std::size_t>& dropped);

std::vector<std::size_t> prime_factors(std::size_t n);

}  // namespace mw
