#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <functional>
#include <string>

#include "maltwork.h"
#include "mw/report.hpp"

using nlohmann::json;

namespace {

struct Handle {
  mw_algebra* h = nullptr;
  explicit Handle(const char* name) { REQUIRE(mw_algebra_bundled(name, nullptr, &h) == MW_OK); }
  ~Handle() { mw_algebra_free(h); }
};

// the call has to run before out is read
json take(const std::function<mw_status(char**)>& f) {
  char* out = nullptr;
  const mw_status s = f(&out);
  REQUIRE_MESSAGE(s == MW_OK, mw_status_name(s), ": ", mw_last_error());
  json j = json::parse(out);
  mw_string_free(out);
  return j;
}

json analyze(const char* name) {
  Handle a(name);
  return take([&](char** o) { return mw_analyze(a.h, o); });
}

json solve(const json& inst, const char* mode, std::size_t cap = 0) {
  mw_caps caps{0, cap, 1};
  return take([&](char** o) { return mw_solve(inst.dump().c_str(), mode, &caps, o); });
}

json reduce(const char* alg, const std::string& graph) {
  Handle a(alg);
  return take([&](char** o) { return mw_reduce_color(a.h, graph.c_str(), 0, o); });
}

// Z2 instance C(x) vs C'(x)
json z2_instance(const json& lhs, const json& rhs) {
  return {{"algebra",
           {{"size", 2},
            {"ops", {{"add", {{"arity", 2}, {"table", {0, 1, 1, 0}}}}}}}},
          {"lhs", lhs},
          {"rhs", rhs},
          {"vars", 1}};
}

const json x_gate = {{"gates", {{{"var", 0}}}}, {"out", 0}};
const json x_plus_1 = {{"gates", {{{"var", 0}}, {{"const", 1}}, {{"op", "add"}, {"in", {0, 1}}}}}, {"out", 2}};

int run_cli(const std::string& args) {
  const std::string cmd = std::string(MW_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace

TEST_CASE("status names and version") {
  CHECK(std::string(mw_status_name(MW_OK)) == "Ok");
  CHECK(std::string(mw_status_name(MW_PARSE_ERROR)) == "ParseError");
  CHECK(std::string(mw_status_name(MW_UNKNOWN_SUITE)) == "UnknownSuite");
  CHECK(std::string(mw_status_name(999)) == "Unknown");
  CHECK(std::string(mw_version()) == mw::kVersion);
}

TEST_CASE("analyze reports") {
  auto z4 = analyze("z4");
  CHECK(z4["size"] == 4);
  CHECK(z4["con_size"] == 3);
  CHECK(z4["nilpotent_degree"] == 1);
  CHECK(z4["fitting_length"] == 1);
  CHECK(z4["maltsev"].is_object());

  auto one = analyze("one");
  for (auto key : {"nilpotent_degree", "solvable_degree", "supernilpotent_degree", "fitting_length"})
    CHECK_MESSAGE(one[key] == 0, key);

  CHECK(analyze("twist32")["fitting_length"] == 2);
  CHECK(analyze("s3")["nilpotent_degree"].is_null());

  // per-field errors on a non-Maltsev algebra
  auto p = analyze("proj2");
  CHECK(p["maltsev"].is_null());
  CHECK(p["con_size"] == 2);
  CHECK(p["fitting_length"]["error"]["code"] == "NotMaltsev");
}

TEST_CASE("handles and errors") {
  mw_algebra* a = nullptr;
  CHECK(mw_algebra_from_json("{\"size\": 2,\n \"ops\": [", nullptr, &a) == MW_PARSE_ERROR);
  CHECK(std::strstr(mw_last_error(), "line 2") != nullptr);
  CHECK(a == nullptr);
  CHECK(mw_algebra_bundled("nope", nullptr, &a) == MW_NOT_FOUND);
  CHECK(mw_algebra_load("/nonexistent/x.json", nullptr, &a) != MW_OK);
  CHECK(mw_analyze(nullptr, nullptr) == MW_INVALID_ARGUMENT);

  REQUIRE(mw_algebra_from_json(R"({"size": 3, "ops": {"add": {"arity": 2, "table": [0,1,2,1,2,0,2,0,1]}}})",
                               nullptr, &a) == MW_OK);
  CHECK(mw_algebra_size(a) == 3);
  auto back = take([&](char** o) { return mw_algebra_to_json(a, o); });
  CHECK(back["size"] == 3);
  CHECK(std::string(mw_last_error()).empty());
  mw_algebra_free(a);

  auto names = take([&](char** o) { return mw_bundled_names(o); });
  CHECK(names.size() == 12);
  auto tw = take([&](char** o) { return mw_bundled_json("twist32", o); });
  CHECK(tw["name"] == "twist32");
  CHECK(tw["size"] == 6);
}

TEST_CASE("lattice, commutator, fitting, supernilpotent") {
  Handle z4("z4");
  char* out = nullptr;
  auto lat = take([&](char** o) { return mw_lattice(z4.h, o); });
  CHECK(lat["size"] == 3);
  CHECK(lat["modular"] == true);
  CHECK(lat["hasse"].size() == 2);

  // Abelian: [1,1] = 0
  auto c = take([&](char** o) { return mw_commutator(z4.h, "[[0,0,0,0],[0,0,0,0]]", o); });
  CHECK(c["commutator"] == json({0, 1, 2, 3}));
  auto all = take([&](char** o) { return mw_commutator(z4.h, nullptr, o); });
  CHECK(all["binary"].size() == 6);
  CHECK(mw_commutator(z4.h, "[[0,1,0,1]]", &out) == MW_INVALID_ARGUMENT);
  CHECK(mw_commutator(z4.h, "[[0,1,1,0],[0,0,0,0]]", &out) == MW_INVALID_ARGUMENT);

  Handle s3("s3");
  auto f = take([&](char** o) { return mw_fitting(s3.h, o); });
  CHECK(f["length"] == 2);
  auto sn = take([&](char** o) { return mw_supernilpotent(s3.h, o); });
  CHECK(sn["supernilpotent"] == false);
  auto zn = take([&](char** o) { return mw_supernilpotent(z4.h, o); });
  CHECK(zn["supernilpotent"] == true);
  CHECK(zn["degree"] == 1);
}

TEST_CASE("solve examples") {
  auto same = z2_instance(x_plus_1, x_plus_1);
  CHECK(solve(same, "csat")["verdict"] == "satisfiable");
  CHECK(solve(same, "ceqv")["verdict"] == "equivalent");
  auto never = z2_instance(x_gate, x_plus_1);
  auto r = solve(never, "csat");
  CHECK(r["verdict"] == "unsatisfiable");
  CHECK(r["witness"].is_null());
  CHECK(solve(never, "ceqv")["counterexample"] == json({0}));

  char* out = nullptr;
  mw_caps tiny{0, 1, 1};
  auto wide = z2_instance(x_gate, x_gate);
  wide["vars"] = 5;
  CHECK(mw_solve(wide.dump().c_str(), "csat", &tiny, &out) == MW_SEARCH_SPACE_OVERFLOW);
  CHECK(mw_solve(same.dump().c_str(), "sat", nullptr, &out) == MW_INVALID_ARGUMENT);
  CHECK(mw_solve("{}", "csat", nullptr, &out) == MW_PARSE_ERROR);
}

TEST_CASE("reduce and solve") {
  auto tri = reduce("twist23", "p edge 3 3\ne 1 2\ne 2 3\ne 1 3\n");
  auto s = solve(tri["instance"], "csat");
  REQUIRE(s["verdict"] == "satisfiable");
  auto col = s["coloring"].get<std::vector<int>>();
  REQUIRE(col.size() == 3);
  CHECK(col[0] != col[1]);
  CHECK(col[1] != col[2]);
  CHECK(col[0] != col[2]);
  CHECK(solve(tri["companion"], "ceqv")["verdict"] == "not equivalent");
  CHECK(tri["size_report"]["rows"].size() == 4);

  auto edgeless = reduce("twist23", R"({"vertices": 2, "edges": []})");
  CHECK(solve(edgeless["instance"], "csat")["verdict"] == "satisfiable");

  auto k4 = reduce("twist23", "p edge 4 6\ne 1 2\ne 1 3\ne 1 4\ne 2 3\ne 2 4\ne 3 4\n");
  CHECK(solve(k4["instance"], "csat")["verdict"] == "unsatisfiable");
  CHECK(solve(k4["companion"], "ceqv")["verdict"] == "equivalent");

  Handle z4("z4"), tw("twist32");
  char* out = nullptr;
  CHECK(mw_reduce_color(z4.h, "p edge 1 0\n", 0, &out) == MW_PRESENTATION_MISMATCH);
  CHECK(mw_reduce_color(tw.h, "p edge 1 0\n", 0, &out) == MW_UNSUPPORTED_PRIME);
  CHECK(mw_reduce_color(tw.h, "e 1 2\n", 0, &out) == MW_PARSE_ERROR);

  auto f = take([&](char** o) { return mw_reduce_sat3(tw.h, "p cnf 1 2\n1 1 1 0\n-1 -1 -1 0\n", 1, o); });
  CHECK(solve(f["instance"], "csat")["verdict"] == "unsatisfiable");
}

TEST_CASE("instance json roundtrip") {
  auto tri = reduce("twist23", "p edge 2 1\ne 1 2\n");
  auto inst = mw::instance_from_json(tri["instance"]);
  CHECK(inst.vars == 2);
  CHECK(mw::instance_to_json(inst) == tri["instance"]);
}

TEST_CASE("suites") {
  char* out = nullptr;
  int passed = 0;
  auto e = take([&](char** o) { return mw_verify("empty", nullptr, &passed, o); });
  CHECK(passed == 1);
  CHECK(e["properties"].empty());
  CHECK(mw_verify("nope", nullptr, &passed, &out) == MW_UNKNOWN_SUITE);
  for (auto name : {"hc-laws", "loops", "clonoid", "reduction-oracle"}) {
    auto r = take([&](char** o) { return mw_verify(name, nullptr, &passed, o); });
    CHECK_MESSAGE(passed == 1, name, " ", r.dump());
  }
  auto names = take([&](char** o) { return mw_suite_names(o); });
  CHECK(names.size() == mw::suite_names().size());

  // the seed changes the sample but not the verdict
  mw::RunCaps c;
  c.seed = 7;
  auto a = mw::run_suite("sat3-oracle", c), b = mw::run_suite("sat3-oracle", c);
  CHECK(a.pass());
  CHECK(mw::suite_json(a) == mw::suite_json(b));
}

TEST_CASE("reports are deterministic") {
  CHECK(analyze("twist32") == analyze("twist32"));
  mw_caps caps{0, 0, 3};
  json r1 = take([&](char** o) { return mw_wrap_report("analyze", R"({"algebra": "x"})", &caps, "{\"k\": 1}", 0.5, o); });
  json r2 = take([&](char** o) { return mw_wrap_report("analyze", R"({"algebra": "x"})", &caps, "{\"k\": 1}", 2.0, o); });
  CHECK(r1["result"] == r2["result"]);
  CHECK(r1["manifest"]["caps"]["seed"] == 3);
  CHECK(r1["manifest"]["version"] == mw::kVersion);
  CHECK(r1["manifest"]["timings"]["wall_seconds"] == 0.5);

  auto err = take([&](char** o) { return mw_error_report(MW_CAP_EXCEEDED, "too big", o); });
  CHECK(err["error"]["code"] == "CapExceeded");
  auto text = take([&](char** o) { return mw_text_summary(err.dump().c_str(), o); });
  CHECK(text.get<std::string>() == "error CapExceeded: too big\n");
  auto t2 = mw::text_summary(json{{"result", {{"a", {1, 2}}, {"b", {{"c", "x"}}}}}});
  CHECK(t2 == "a: [1,2]\nb.c: x\n");
}

TEST_CASE("cli exit codes") {
  CHECK(run_cli("verify empty") == 0);
  CHECK(run_cli("verify nope") == 2);
  CHECK(run_cli("analyze z4 --format text") == 0);
  CHECK(run_cli("analyze no-such-algebra") == 2);
  CHECK(run_cli("frobnicate") == 2);
  const std::string dir = "cli_test_tmp";
  std::ofstream(dir + ".col") << "p edge 3 3\ne 1 2\ne 2 3\ne 1 3\n";
  CHECK(run_cli("reduce z4 " + dir + ".col") == 1);
  REQUIRE(run_cli("reduce twist23 " + dir + ".col --out-dir " + dir) == 0);
  CHECK(run_cli("solve " + dir + "/instance.json -o " + dir + "/solve.json") == 0);
  auto rep = json::parse(std::ifstream(dir + "/solve.json"));
  CHECK(rep["result"]["verdict"] == "satisfiable");
  CHECK(rep["manifest"]["command"] == "solve");
  CHECK(run_cli("solve " + dir + "/instance.json --cap-search 5") == 3);
  // equal inputs and caps: identical result sections
  REQUIRE(run_cli("analyze twist32 -o " + dir + "/a1.json") == 0);
  REQUIRE(run_cli("analyze twist32 -o " + dir + "/a2.json") == 0);
  CHECK(json::parse(std::ifstream(dir + "/a1.json"))["result"] ==
        json::parse(std::ifstream(dir + "/a2.json"))["result"]);
}
