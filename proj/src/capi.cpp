#include "maltwork.h"

#include <cstdlib>
#include <cstring>
#include <functional>
#include <memory>

#include "mw/bundled.hpp"
#include "mw/report.hpp"

using namespace mw;

static_assert(static_cast<int>(Errc::UnknownSuite) == MW_UNKNOWN_SUITE);
static_assert(static_cast<int>(Errc::SearchSpaceOverflow) == MW_SEARCH_SPACE_OVERFLOW);

struct mw_algebra {
  std::unique_ptr<Workbench> wb;
};

namespace {

thread_local std::string last_error;

RunCaps run_caps(const mw_caps* c) {
  RunCaps r;
  if (!c) return r;
  if (c->clone) r.clone = c->clone;
  if (c->search) r.search = c->search;
  r.seed = c->seed;
  return r;
}

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

// runs f, translating exceptions into a status and last_error
template <class F>
mw_status guard(F&& f) {
  try {
    f();
    last_error.clear();
    return MW_OK;
  } catch (const Error& e) {
    last_error = e.what();
    return static_cast<mw_status>(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return MW_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return MW_INTERNAL;
  }
}

mw_status put(char** out, const json& j) {
  if (!out) {
    last_error = "null output pointer";
    return MW_INVALID_ARGUMENT;
  }
  *out = dup(j.dump());
  return MW_OK;
}

mw_status with_out(char** out, const std::function<json()>& f) {
  json j;
  mw_status s = guard([&] { j = f(); });
  return s == MW_OK ? put(out, j) : s;
}

mw_status make(Algebra alg, const mw_caps* caps, mw_algebra** out) {
  if (!out) {
    last_error = "null output pointer";
    return MW_INVALID_ARGUMENT;
  }
  *out = new mw_algebra{std::make_unique<Workbench>(std::move(alg), to_caps(run_caps(caps)))};
  return MW_OK;
}

mw_status need(const void* p) {
  if (p) return MW_OK;
  last_error = "null argument";
  return MW_INVALID_ARGUMENT;
}

json reduction_json(Reducer& r, const CsatInstance& inst) {
  return {{"instance", instance_to_json(inst)},
          {"companion", instance_to_json(Reducer::ceqv_companion(inst))},
          {"size_report", size_report_json(size_report(r, 4))}};
}

}  // namespace

extern "C" {

const char* mw_version(void) { return kVersion; }

const char* mw_status_name(mw_status s) {
  if (s == MW_OK) return "Ok";
  if (s == MW_INTERNAL) return "Internal";
  if (s < 1 || s > MW_UNKNOWN_SUITE) return "Unknown";
  return errc_name(static_cast<Errc>(s));
}

const char* mw_last_error(void) { return last_error.c_str(); }

void mw_string_free(char* s) { std::free(s); }

mw_status mw_algebra_from_json(const char* text, const mw_caps* caps, mw_algebra** out) {
  if (auto s = need(text)) return s;
  Algebra a;
  if (auto s = guard([&] { a = algebra_from_json(parse_json_text(text)); })) return s;
  return make(std::move(a), caps, out);
}

mw_status mw_algebra_load(const char* path, const mw_caps* caps, mw_algebra** out) {
  if (auto s = need(path)) return s;
  Algebra a;
  if (auto s = guard([&] { a = load_algebra_file(path); })) return s;
  return make(std::move(a), caps, out);
}

mw_status mw_algebra_bundled(const char* name, const mw_caps* caps, mw_algebra** out) {
  if (auto s = need(name)) return s;
  Algebra a;
  if (auto s = guard([&] { a = bundled(name); })) return s;
  return make(std::move(a), caps, out);
}

void mw_algebra_free(mw_algebra* a) { delete a; }

size_t mw_algebra_size(const mw_algebra* a) { return a ? a->wb->size() : 0; }

mw_status mw_algebra_to_json(const mw_algebra* a, char** out) {
  if (auto s = need(a)) return s;
  return with_out(out, [&] { return algebra_to_json(a->wb->algebra()); });
}

mw_status mw_algebra_hash(const mw_algebra* a, char** out) {
  if (auto s = need(a)) return s;
  return with_out(out, [&] { return json(algebra_hash(a->wb->algebra())); });
}

mw_status mw_analyze(mw_algebra* a, char** out) {
  if (auto s = need(a)) return s;
  return with_out(out, [&] { return analyze_report(*a->wb); });
}

mw_status mw_lattice(mw_algebra* a, char** out) {
  if (auto s = need(a)) return s;
  return with_out(out, [&] { return lattice_report(*a->wb); });
}

mw_status mw_commutator(mw_algebra* a, const char* alphas_json, char** out) {
  if (auto s = need(a)) return s;
  return with_out(out, [&] {
    std::vector<Congruence> alphas;
    if (alphas_json) {
      json j = parse_json_text(alphas_json);
      if (!j.is_array()) throw Error(Errc::ParseError, "alphas: expected an array of block lists");
      for (const auto& b : j) {
        Congruence c = congruence_from_json(b.is_object() ? b : json{{"blocks", b}}, a->wb->size());
        if (!is_compatible(a->wb->algebra(), c)) throw Error(Errc::InvalidArgument, "alphas: not a congruence");
        alphas.push_back(c);
      }
      if (alphas.size() < 2) throw Error(Errc::InvalidArgument, "alphas: need at least two congruences");
    }
    return commutator_report(*a->wb, alphas);
  });
}

mw_status mw_fitting(mw_algebra* a, char** out) {
  if (auto s = need(a)) return s;
  return with_out(out, [&] { return fitting_report(*a->wb); });
}

mw_status mw_supernilpotent(mw_algebra* a, char** out) {
  if (auto s = need(a)) return s;
  return with_out(out, [&] { return supernilpotent_report(*a->wb); });
}

mw_status mw_reduce_color(mw_algebra* a, const char* graph_text, int compact, char** out) {
  if (auto s = need(a)) return s;
  if (auto s = need(graph_text)) return s;
  return with_out(out, [&] {
    std::string t(graph_text);
    const auto first = t.find_first_not_of(" \t\r\n");
    Graph g = first != std::string::npos && t[first] == '{' ? graph_from_json(parse_json_text(t))
                                                            : parse_dimacs_graph(t);
    Reducer r(*a->wb);
    return reduction_json(r, r.color_to_csat(g, compact != 0));
  });
}

mw_status mw_reduce_sat3(mw_algebra* a, const char* cnf_text, int compact, char** out) {
  if (auto s = need(a)) return s;
  if (auto s = need(cnf_text)) return s;
  return with_out(out, [&] {
    Reducer r(*a->wb);
    return reduction_json(r, r.sat3_to_csat(parse_dimacs_cnf(cnf_text), compact != 0));
  });
}

mw_status mw_solve(const char* instance_json, const char* mode, const mw_caps* caps, char** out) {
  if (auto s = need(instance_json)) return s;
  return with_out(out, [&] {
    auto inst = instance_from_json(parse_json_text(instance_json));
    return solve_report(inst, mode ? mode : "csat", run_caps(caps).search);
  });
}

mw_status mw_verify(const char* suite, const mw_caps* caps, int* passed, char** out) {
  if (auto s = need(suite)) return s;
  return with_out(out, [&] {
    auto r = run_suite(suite, run_caps(caps));
    if (passed) *passed = r.pass() ? 1 : 0;
    return suite_json(r);
  });
}

mw_status mw_wrap_report(const char* command, const char* input_hashes_json, const mw_caps* caps,
                         const char* result_json, double seconds, char** out) {
  if (auto s = need(command)) return s;
  if (auto s = need(result_json)) return s;
  return with_out(out, [&] {
    json hashes = input_hashes_json ? parse_json_text(input_hashes_json) : json::object();
    return wrap_report(command, hashes, run_caps(caps), parse_json_text(result_json), seconds);
  });
}

mw_status mw_error_report(mw_status s, const char* message, char** out) {
  return with_out(out, [&] {
    return json{{"error", {{"code", mw_status_name(s)}, {"message", message ? message : ""}}}};
  });
}

mw_status mw_text_summary(const char* report_json, char** out) {
  if (auto s = need(report_json)) return s;
  return with_out(out, [&] { return json(text_summary(parse_json_text(report_json))); });
}

mw_status mw_bundled_json(const char* name, char** out) {
  if (auto s = need(name)) return s;
  return with_out(out, [&] {
    json j{{"name", name}};
    if (auto d = bundled_description(name); !d.empty()) j["description"] = d;
    j.update(algebra_to_json(bundled(name)));
    return j;
  });
}

mw_status mw_bundled_names(char** out) {
  return with_out(out, [] { return json(bundled_names()); });
}

mw_status mw_suite_names(char** out) {
  return with_out(out, [] { return json(suite_names()); });
}

}  // extern "C"
