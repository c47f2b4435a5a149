#pragma once

#include <string>
#include <vector>

#include "hyperfactor/diff_operator.hpp"

namespace hyperfactor {

struct Preset {
  std::string name;
  std::string description;
  std::vector<DiffOperator> operators;
  std::size_t demo_stages = 3;
};

/// maclane (D), birkhoff (f(z) -> f(z+1)), shifted-identity (2I + D),
/// multi (D and 2I + D jointly).
const std::vector<std::string>& preset_names();
/// Throws PreconditionError for an unknown name.
Preset preset(const std::string& name);

}  // namespace hyperfactor
