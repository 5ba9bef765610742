#pragma once

#include <string>

namespace acc {

struct Outcome {
  bool pass = false;
  std::string detail;
};

Outcome run_criterion(int c);

Outcome commutator_laws();      // 1
Outcome hyperplane_counts();    // 2
Outcome conjunction_family();   // 3
Outcome wreath_roundtrip();     // 4
Outcome loop_lemmas();          // 5
Outcome coloring_reduction();   // 6
Outcome sat3_reduction();       // 7
Outcome fitting_consistency();  // 8
Outcome size_accounting();      // 9

}  // namespace acc
