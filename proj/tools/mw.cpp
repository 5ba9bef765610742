// mw: command-line front end over the maltwork C API
#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "maltwork.h"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

enum Exit { kOk = 0, kFailure = 1, kUsage = 2, kCap = 3 };

struct Failure {
  mw_status status;
  std::string message;
};

int exit_code(mw_status s) {
  switch (s) {
    case MW_OK: return kOk;
    case MW_PARSE_ERROR:
    case MW_NOT_FOUND:
    case MW_INVALID_ARGUMENT:
    case MW_UNKNOWN_SUITE:
    case MW_UNKNOWN_OPERATION:
    case MW_ARITY_MISMATCH:
    case MW_ELEMENT_OUT_OF_RANGE: return kUsage;
    case MW_CAP_EXCEEDED:
    case MW_SEARCH_SPACE_OVERFLOW:
    case MW_LATTICE_OVERFLOW:
    case MW_SIZE_OVERFLOW: return kCap;
    default: return kFailure;
  }
}

void check(mw_status s) {
  if (s != MW_OK) throw Failure{s, mw_last_error()};
}

// takes ownership of a string from the library
std::string take(char* p) {
  std::string s(p ? p : "");
  mw_string_free(p);
  return s;
}

json call(const std::function<mw_status(char**)>& f) {
  char* out = nullptr;
  check(f(&out));
  return json::parse(take(out));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{MW_NOT_FOUND, "cannot read " + path};
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// FNV-1a of the raw bytes
std::string file_hash(const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) h = (h ^ c) * 1099511628211ull;
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void write_atomic(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Failure{MW_INVALID_ARGUMENT, "cannot write " + tmp.string()};
    out << text;
    if (!out.flush()) throw Failure{MW_INVALID_ARGUMENT, "short write to " + tmp.string()};
  }
  fs::rename(tmp, path);
}

struct Options {
  std::size_t cap_clone = 0, cap_search = 0;
  std::uint64_t seed = 1;
  std::string format = "json";
  std::string output;

  mw_caps caps() const { return {cap_clone, cap_search, seed}; }
};

class Algebra {
 public:
  // a readable file, else a bundled name
  Algebra(const std::string& spec, const mw_caps& caps) {
    std::error_code ec;
    if (fs::is_regular_file(spec, ec)) {
      check(mw_algebra_load(spec.c_str(), &caps, &h_));
    } else {
      mw_status s = mw_algebra_bundled(spec.c_str(), &caps, &h_);
      if (s == MW_NOT_FOUND) throw Failure{s, "'" + spec + "' is neither a file nor a bundled algebra"};
      check(s);
    }
  }
  ~Algebra() { mw_algebra_free(h_); }
  Algebra(const Algebra&) = delete;
  Algebra& operator=(const Algebra&) = delete;

  mw_algebra* get() const { return h_; }
  std::string hash() const {
    return call([&](char** o) { return mw_algebra_hash(h_, o); }).get<std::string>();
  }

 private:
  mw_algebra* h_ = nullptr;
};

class Runner {
 public:
  explicit Runner(const Options& o) : opt_(o), start_(std::chrono::steady_clock::now()) {}

  void input(const std::string& key, const std::string& hash) { hashes_[key] = hash; }

  // wraps, renders and writes the report
  void emit(const std::string& command, const json& result) {
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    mw_caps c = opt_.caps();
    json report = call([&](char** o) {
      return mw_wrap_report(command.c_str(), hashes_.dump().c_str(), &c, result.dump().c_str(), secs, o);
    });
    out(report);
  }

  void out(const json& report) const {
    std::string text;
    if (opt_.format == "text")
      text = call([&](char** o) { return mw_text_summary(report.dump().c_str(), o); }).get<std::string>();
    else
      text = report.dump(2) + "\n";
    if (opt_.output.empty()) std::cout << text;
    else write_atomic(opt_.output, text);
  }

 private:
  const Options& opt_;
  std::chrono::steady_clock::time_point start_;
  json hashes_ = json::object();
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Workbench for finite Maltsev algebras"};
  app.set_version_flag("--version", std::string(mw_version()));
  app.require_subcommand(1);
  app.fallthrough();
  Options opt;
  app.add_option("--cap-clone", opt.cap_clone, "polynomial clone cap (0 = default)");
  app.add_option("--cap-search", opt.cap_search, "brute-force point cap (0 = default)");
  app.add_option("--seed", opt.seed, "seed for sampled suites");
  app.add_option("--format", opt.format, "report format")->check(CLI::IsMember({"json", "text"}));
  app.add_option("-o,--output", opt.output, "write the report here instead of stdout");

  std::string alg_spec, file, mode = "csat", alphas, out_dir;
  bool compact = false, literal = false;

  auto analysis = [&](const char* name, const char* help) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("algebra", alg_spec, "algebra file or bundled name")->required();
    return sub;
  };
  analysis("analyze", "size, signature, Maltsev witness, |Con|, degrees, Fitting length");
  analysis("lattice", "congruence lattice");
  analysis("commutator", "commutators (all binary ones by default)")
      ->add_option("--alphas", alphas, "JSON array of block lists");
  analysis("fitting", "lower and upper Fitting series");
  analysis("supernilpotent", "supernilpotence of 1 and of each congruence");

  auto* reduce = analysis("reduce", "graph 3-coloring to CSAT over the algebra");
  reduce->add_option("graph", file, "DIMACS edge file or {\"vertices\",\"edges\"} JSON")->required();
  reduce->add_option("--out-dir", out_dir, "write instance.json and companion.json here");
  reduce->add_flag("--compact", compact, "fold the slot forms into the atoms");
  auto* sat3 = analysis("sat3", "3-SAT to CSAT over the algebra");
  sat3->add_option("cnf", file, "DIMACS cnf file")->required();
  sat3->add_option("--out-dir", out_dir, "write instance.json and companion.json here");
  sat3->add_flag("--literal", literal, "splice the slot circuits literally");

  auto* solve = app.add_subcommand("solve", "brute-force CSAT or CEQV on an instance file");
  solve->add_option("instance", file, "instance JSON")->required();
  solve->add_option("--mode", mode, "csat or ceqv")->check(CLI::IsMember({"csat", "ceqv"}));

  std::string suite;
  auto* verify = app.add_subcommand("verify", "run a property suite");
  verify->add_option("suite", suite, "suite name")->required();

  auto* exp = app.add_subcommand("export-bundled", "write every bundled algebra as <dir>/<name>.json");
  exp->add_option("dir", out_dir, "target directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  Runner run(opt);
  const std::string cmd = app.get_subcommands().front()->get_name();
  try {
    const mw_caps caps = opt.caps();
    if (cmd == "analyze" || cmd == "lattice" || cmd == "commutator" || cmd == "fitting" ||
        cmd == "supernilpotent") {
      Algebra a(alg_spec, caps);
      run.input("algebra", a.hash());
      json r = call([&](char** o) {
        if (cmd == "analyze") return mw_analyze(a.get(), o);
        if (cmd == "lattice") return mw_lattice(a.get(), o);
        if (cmd == "fitting") return mw_fitting(a.get(), o);
        if (cmd == "supernilpotent") return mw_supernilpotent(a.get(), o);
        return mw_commutator(a.get(), alphas.empty() ? nullptr : alphas.c_str(), o);
      });
      r["algebra"] = alg_spec;
      run.emit(cmd, r);
      return kOk;
    }
    if (cmd == "reduce" || cmd == "sat3") {
      Algebra a(alg_spec, caps);
      const std::string text = read_file(file);
      run.input("algebra", a.hash());
      run.input(cmd == "reduce" ? "graph" : "cnf", file_hash(text));
      json r = call([&](char** o) {
        return cmd == "reduce" ? mw_reduce_color(a.get(), text.c_str(), compact, o)
                               : mw_reduce_sat3(a.get(), text.c_str(), !literal, o);
      });
      json result{{"manifest", r["instance"]["manifest"]}, {"vars", r["instance"]["vars"]},
                  {"size_report", r["size_report"]}};
      if (!out_dir.empty()) {
        write_atomic(fs::path(out_dir) / "instance.json", r["instance"].dump(1) + "\n");
        write_atomic(fs::path(out_dir) / "companion.json", r["companion"].dump(1) + "\n");
        result["files"] = {(fs::path(out_dir) / "instance.json").string(),
                           (fs::path(out_dir) / "companion.json").string()};
      } else {
        result["instance"] = r["instance"];
      }
      run.emit(cmd, result);
      return kOk;
    }
    if (cmd == "solve") {
      const std::string text = read_file(file);
      run.input("instance", file_hash(text));
      json r = call([&](char** o) { return mw_solve(text.c_str(), mode.c_str(), &caps, o); });
      run.emit(cmd, r);
      return kOk;
    }
    if (cmd == "verify") {
      int passed = 0;
      json r = call([&](char** o) { return mw_verify(suite.c_str(), &caps, &passed, o); });
      run.emit(cmd, r);
      return passed ? kOk : kFailure;
    }
    if (cmd == "export-bundled") {
      json names = call([](char** o) { return mw_bundled_names(o); });
      json written = json::array();
      for (const auto& n : names) {
        const auto name = n.get<std::string>();
        json j = call([&](char** o) { return mw_bundled_json(name.c_str(), o); });
        const fs::path p = fs::path(out_dir) / (name + ".json");
        write_atomic(p, j.dump() + "\n");
        written.push_back(p.string());
      }
      run.emit(cmd, {{"written", written}});
      return kOk;
    }
  } catch (const Failure& f) {
    char* err = nullptr;
    if (mw_error_report(f.status, f.message.c_str(), &err) == MW_OK) {
      json e = json::parse(take(err));
      try {
        run.out(e);
      } catch (const Failure&) {
        std::cout << e.dump(2) << "\n";
      }
    }
    std::cerr << "mw " << cmd << ": " << mw_status_name(f.status) << ": " << f.message << "\n";
    return exit_code(f.status);
  } catch (const std::exception& e) {
    std::cerr << "mw " << cmd << ": " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}
