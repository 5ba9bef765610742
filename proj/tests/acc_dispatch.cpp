#include "acceptance.hpp"

namespace acc {

Outcome run_criterion(int c) {
  switch (c) {
    case 1: return commutator_laws();
    case 2: return hyperplane_counts();
    case 3: return conjunction_family();
    case 4: return wreath_roundtrip();
    case 5: return loop_lemmas();
    case 6: return coloring_reduction();
    case 7: return sat3_reduction();
    case 8: return fitting_consistency();
    case 9: return size_accounting();
    default: return {false, "unknown criterion"};
  }
}

}  // namespace acc
