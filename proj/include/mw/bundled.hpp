#pragma once

#include <functional>
#include <string>

#include "mw/algebra.hpp"

namespace mw {

struct OpSpec {
  std::string name;
  int arity;
  std::function<Elem(std::span<const Elem>)> fn;
};

// Tabulate operations given pointwise.
Algebra tabulate(std::size_t n, const std::vector<OpSpec>& ops);

Algebra cyclic_group(std::size_t n);  // add, neg

// z2, z3, z4, z6, z8, z2xz2, s3, twist32, twist23, tower, proj2, one
const std::vector<std::string>& bundled_names();
Algebra bundled(const std::string& name);
// "" when the name has no description
std::string bundled_description(const std::string& name);

}  // namespace mw
