#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mw/commutator.hpp"
#include "mw/csat.hpp"
#include "mw/io.hpp"

namespace mw {

constexpr const char* kVersion = "0.3.0";

struct RunCaps {
  std::size_t clone = kDefaultCloneCap;
  std::size_t search = kDefaultSearchCap;
  std::uint64_t seed = 1;
};

Caps to_caps(const RunCaps& c);
json caps_json(const RunCaps& c);

// Result sections only; they are deterministic for fixed inputs and caps.
json analyze_report(Workbench& wb);
json lattice_report(Workbench& wb);
// alphas empty: the binary commutator of every pair of lattice members
json commutator_report(Workbench& wb, const std::vector<Congruence>& alphas = {});
json fitting_report(Workbench& wb);
json supernilpotent_report(Workbench& wb);

json instance_to_json(const CsatInstance& inst);
CsatInstance instance_from_json(const json& j);
// mode "csat" or "ceqv"; a colored instance also gets the vertex colors
json solve_report(const CsatInstance& inst, const std::string& mode, std::size_t cap = kDefaultSearchCap);

struct PropertyTally {
  std::string name;
  std::size_t checks = 0, failures = 0;
  std::string first_failure;
  void check(bool ok, const std::string& what);
};

struct SuiteResult {
  std::string suite;
  std::vector<PropertyTally> properties;
  bool pass() const;
  PropertyTally& property(const std::string& name);
};

const std::vector<std::string>& suite_names();
// UnknownSuite for names outside suite_names()
SuiteResult run_suite(const std::string& name, const RunCaps& caps = {});
json suite_json(const SuiteResult& r);

// {"manifest": {...}, "result": result}; timings live only in the manifest
json wrap_report(const std::string& command, const json& input_hashes, const RunCaps& caps, json result,
                 double seconds);
json error_json(Errc code, const std::string& message);
// key: value lines for --format text
std::string text_summary(const json& report);

}  // namespace mw
