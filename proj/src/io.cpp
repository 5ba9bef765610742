#include "mw/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace mw {

json algebra_to_json(const Algebra& alg) {
  json ops = json::object();
  for (std::size_t i = 0; i < alg.op_count(); ++i)
    ops[alg.op_name(i)] = {{"arity", alg.arity(i)}, {"table", alg.op(i).entries}};
  return {{"size", alg.size()}, {"ops", ops}};
}

Algebra algebra_from_json(const json& j) {
  try {
    if (!j.is_object() || !j.contains("size")) throw Error(Errc::ParseError, "algebra: missing size");
    std::size_t n = j.at("size").get<std::size_t>();
    std::map<std::string, OpTable> ops;
    if (j.contains("ops"))
      for (auto& [name, o] : j.at("ops").items()) {
        OpTable t;
        t.arity = o.at("arity").get<int>();
        for (auto& v : o.at("table")) {
          auto e = v.get<std::int64_t>();
          if (e < 0 || static_cast<std::size_t>(e) >= n)
            throw Error(Errc::ElementOutOfRange, "operation " + name + ": entry out of range");
          t.entries.push_back(static_cast<Elem>(e));
        }
        ops.emplace(name, std::move(t));
      }
    return Algebra(n, std::move(ops));
  } catch (const json::exception& e) {
    throw Error(Errc::ParseError, std::string("algebra: ") + e.what());
  }
}

json circuit_to_json(const Circuit& c) {
  json gates = json::array();
  for (const auto& g : c.gates) {
    switch (g.kind) {
      case Gate::Kind::Var: gates.push_back({{"var", g.value}}); break;
      case Gate::Kind::Const: gates.push_back({{"const", g.value}}); break;
      case Gate::Kind::Apply: gates.push_back({{"op", g.op}, {"in", g.in}}); break;
    }
  }
  return {{"gates", gates}, {"out", c.out}};
}

Circuit circuit_from_json(const json& j) {
  try {
    Circuit c;
    for (const auto& g : j.at("gates")) {
      if (g.contains("var")) c.gates.push_back(Gate::var(g["var"].get<std::uint32_t>()));
      else if (g.contains("const")) c.gates.push_back(Gate::constant(g["const"].get<Elem>()));
      else if (g.contains("op")) {
        auto in = g.at("in").get<std::vector<std::uint32_t>>();
        for (auto i : in)
          if (i >= c.gates.size()) throw Error(Errc::ParseError, "circuit: gate input must precede the gate");
        c.gates.push_back(Gate::apply(g["op"].get<std::string>(), std::move(in)));
      } else {
        throw Error(Errc::ParseError, "circuit: unknown gate kind");
      }
    }
    c.out = j.at("out").get<std::uint32_t>();
    if (c.out >= c.gates.size()) throw Error(Errc::ParseError, "circuit: out index out of range");
    return c;
  } catch (const json::exception& e) {
    throw Error(Errc::ParseError, std::string("circuit: ") + e.what());
  }
}

json congruence_to_json(const Congruence& c) { return {{"blocks", c.blocks}}; }

Congruence congruence_from_json(const json& j, std::size_t universe) {
  try {
    auto labels = (j.is_array() ? j : j.at("blocks")).get<std::vector<std::uint32_t>>();
    if (labels.size() != universe) throw Error(Errc::InvalidArgument, "congruence: wrong length");
    return Congruence::from_labels(labels);
  } catch (const json::exception& e) {
    throw Error(Errc::ParseError, std::string("congruence: ") + e.what());
  }
}

json parse_json_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw Error(Errc::ParseError, "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + e.what());
  }
}

json load_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::NotFound, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str());
}

Algebra load_algebra_file(const std::string& path) { return algebra_from_json(load_json_file(path)); }

std::string algebra_hash(const Algebra& alg) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : algebra_to_json(alg).dump()) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace mw
