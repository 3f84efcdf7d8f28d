#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "liegauge/lie_algebra.hpp"

namespace liegauge {

/// Built-in algebras: so3, su2 (the same eps-basis as so3), sl2r (H, E, F),
/// heisenberg3, abelianN / abelian(N), so4 = so3 + so3.
/// Throws SpecError for unknown names.
LieAlgebra named_algebra(std::string_view name);

/// Parses an algebra document
///   { "name": str, "dim": int, "constants": [{"i","j","k","v"}...], "sum": [names] }
/// Entries with i > j are accepted and stored as C^k_{ji} = -v; a pair that
/// disagrees after completion is an error. Accepted algebras satisfy Jacobi.
LieAlgebra load_algebra(const nlohmann::json& doc);
LieAlgebra load_algebra_file(const std::filesystem::path& path);

}  // namespace liegauge
