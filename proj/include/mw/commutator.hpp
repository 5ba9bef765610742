#pragma once

#include <map>
#include <memory>
#include <optional>

#include "mw/clone.hpp"
#include "mw/congruence.hpp"

namespace mw {

struct Caps {
  std::size_t clone = kDefaultCloneCap;  // polynomial clone members
  std::size_t cube = 4'000'000;          // rows of one cube subpower
  int max_arity = 5;                     // commutator arity for Fitting/supernilpotence
  std::size_t lattice = 10'000;
};

enum class CommutatorMethod {
  Cube,   // absorbing pairs via cube subpowers, refined modulo the partial result
  Clone,  // absorbing members of the full Pol^k
};

// An algebra together with its Maltsev operation and cached derived data.
class Workbench {
 public:
  explicit Workbench(Algebra alg, Caps caps = {});
  Workbench(Algebra alg, Circuit maltsev, Caps caps = {});

  const Algebra& algebra() const { return alg_; }
  std::size_t size() const { return alg_.size(); }
  const Caps& caps() const { return caps_; }

  bool is_maltsev();
  // throws NotMaltsev when no Maltsev polynomial exists
  const Circuit& maltsev();
  std::span<const Elem> maltsev_table();
  Elem m(Elem x, Elem y, Elem z) {
    auto t = maltsev_table();
    return t[(static_cast<std::size_t>(x) * size() + y) * size() + z];
  }

  const CongruenceLattice& lattice();
  Congruence zero() const { return Congruence::zero(size()); }
  Congruence one() const { return Congruence::one(size()); }

  Congruence commutator(const std::vector<Congruence>& alphas,
                        CommutatorMethod method = CommutatorMethod::Cube);
  // Bijective unary polynomials; empty if Pol^1 exceeds the clone cap.
  const std::vector<std::vector<Elem>>& unary_permutations();

  // Workbench for alg/c, reusing the Maltsev circuit.
  std::unique_ptr<Workbench> quotient_bench(const Congruence& c, Quotient* q = nullptr);

 private:
  Algebra alg_;
  Caps caps_;
  std::optional<Circuit> maltsev_;
  bool searched_ = false;
  std::vector<Elem> mtable_;
  std::optional<CongruenceLattice> lattice_;
  std::optional<std::vector<std::vector<Elem>>> perms_;
  std::map<std::pair<int, std::vector<std::vector<std::uint32_t>>>, Congruence> memo_;
};

// Orbit representatives of the pairs of c under the given permutation group,
// optionally dropping the diagonal.
std::vector<Pair> pair_orbit_representatives(std::size_t n, const Congruence& c,
                                             const std::vector<std::vector<Elem>>& perms,
                                             bool include_diagonal);

struct AbsorbingWitness {
  KAryFunction function;
  Circuit circuit;
  std::vector<Elem> anchor;
  Elem value = 0;
};

bool is_absorbing_at(std::size_t n, int k, std::span<const Elem> table, std::span<const Elem> anchor);
std::vector<AbsorbingWitness> absorbing_at(const Algebra& alg, int k, std::span<const Elem> anchor,
                                           std::size_t cap = kDefaultCloneCap);
// First absorbing member (in clone BFS order) accepted by pred; streams the
// clone, so it works where the full Pol^k is beyond the cap.
std::optional<AbsorbingWitness> find_absorbing(const Algebra& alg, int k, std::span<const Elem> anchor,
                                               const std::function<bool(std::span<const Elem>)>& pred,
                                               std::size_t cap = kDefaultCloneCap);

Congruence higher_commutator(Workbench& wb, const std::vector<Congruence>& alphas,
                             CommutatorMethod method = CommutatorMethod::Cube);

struct CentralizerVerdict {
  bool holds = true;
  bool complete = true;  // false: some cube closure hit the cap ("true-under-cap")
  std::size_t cubes = 0;
};

// Term condition C(α_1,…,α_n; δ) for polynomials whose variables
// come in blocks of the given arities.
CentralizerVerdict check_centralizes(Workbench& wb, const std::vector<Congruence>& alphas,
                                     const Congruence& delta, std::vector<int> block_arities = {});

struct SeriesResult {
  std::optional<int> degree;  // nullopt: NotWithinCap
  std::vector<Congruence> terms;
};

SeriesResult derived_series(Workbench& wb, const Congruence& alpha);
SeriesResult central_series(Workbench& wb, const Congruence& alpha);
SeriesResult supernilpotent_series(Workbench& wb, const Congruence& alpha);

struct SupernilpotenceCertificate {
  bool holds = false;
  bool nilpotent = false;
  std::vector<Congruence> betas;
  std::vector<int> primes;  // 0 when every block count is 1
};

SupernilpotenceCertificate is_supernilpotent(Workbench& wb, const Congruence& alpha);

struct FittingData {
  std::vector<Congruence> lower;  // 1 = γ0 ≥ γ1 ≥ …
  std::vector<Congruence> upper;  // 0 = λ0 ≤ λ1 ≤ …
  Congruence fitting_congruence;
  std::optional<int> length;  // nullopt = infinite
  std::optional<int> lower_length, upper_length;
  bool lower_complete = true;  // stabilization detected before the arity cap
  bool agree = true;
};

FittingData fitting(Workbench& wb);

struct ClassDecomposition {
  std::vector<Circuit> generators;
  Congruence gamma;
  std::vector<Elem> block;  // [0]_γ
  std::vector<Elem> sum;    // the loop sum of images, equals block
};

ClassDecomposition commutator_class_generators(Workbench& wb, const std::vector<Congruence>& alphas,
                                               Elem zero = 0);

// Circuit with constants renamed through proj (for use over a quotient).
Circuit map_constants(const Circuit& c, std::span<const Elem> proj);

}  // namespace mw
