#include "hyperfactor/presets.hpp"

#include "hyperfactor/error.hpp"

namespace hyperfactor {

namespace {

DiffOperator d() { return DiffOperator::taylor({Complex(0L), Complex(1L)}); }
DiffOperator two_plus_d() { return DiffOperator::taylor({Complex(2L), Complex(1L)}); }

}  // namespace

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"maclane", "birkhoff", "shifted-identity", "multi"};
  return names;
}

Preset preset(const std::string& name) {
  if (name == "maclane") return {name, "T = D", {d()}, 4};
  if (name == "birkhoff") {
    return {name, "T f(z) = f(z + 1)", {DiffOperator::translation(Complex(1L), Complex(1L))}, 3};
  }
  if (name == "shifted-identity") return {name, "T = 2I + D", {two_plus_d()}, 3};
  if (name == "multi") return {name, "T_1 = D, T_2 = 2I + D", {d(), two_plus_d()}, 3};
  throw PreconditionError("unknown preset '" + name + "'");
}

}  // namespace hyperfactor
