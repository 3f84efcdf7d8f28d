#include "liegauge/algebra_io.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <tuple>
#include <vector>

#include "liegauge/errors.hpp"

namespace liegauge {
namespace {

void set_pair(StructureConstants& c, int i, int j, int k, double v) {
  c(k, i, j) = v;
  c(k, j, i) = -v;
}

LieAlgebra eps_basis(std::string name) {
  StructureConstants c(3);
  set_pair(c, 0, 1, 2, 1.0);
  set_pair(c, 1, 2, 0, 1.0);
  set_pair(c, 2, 0, 1, 1.0);
  return LieAlgebra(std::move(name), std::move(c));
}

std::optional<int> abelian_dim(std::string_view name) {
  std::string_view rest;
  if (name.starts_with("abelian(") && name.ends_with(")"))
    rest = name.substr(8, name.size() - 9);
  else if (name.starts_with("abelian"))
    rest = name.substr(7);
  else
    return std::nullopt;
  int n = 0;
  auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), n);
  if (ec != std::errc{} || ptr != rest.data() + rest.size() || rest.empty()) return std::nullopt;
  return n;
}

double jacobi_tolerance(const StructureConstants& c) {
  const double s = c.max_abs();
  return kIdentityTol * std::max(1.0, s * s);
}

}  // namespace

LieAlgebra named_algebra(std::string_view name) {
  if (name == "so3" || name == "su2") return eps_basis(std::string(name));
  if (name == "sl2r") {
    // basis (H, E, F)
    StructureConstants c(3);
    set_pair(c, 0, 1, 1, 2.0);
    set_pair(c, 0, 2, 2, -2.0);
    set_pair(c, 1, 2, 0, 1.0);
    return LieAlgebra("sl2r", std::move(c));
  }
  if (name == "heisenberg3") {
    StructureConstants c(3);
    set_pair(c, 0, 1, 2, 1.0);
    return LieAlgebra("heisenberg3", std::move(c));
  }
  if (name == "so4") {
    const std::vector<LieAlgebra> parts{eps_basis("so3"), eps_basis("so3")};
    return direct_sum(parts, "so4");
  }
  if (auto n = abelian_dim(name)) {
    if (*n <= 0) throw SpecError("abelian algebra needs a positive dimension");
    return LieAlgebra(std::string(name), StructureConstants(*n));
  }
  throw SpecError("unknown algebra name '" + std::string(name) + "'");
}

LieAlgebra load_algebra(const nlohmann::json& doc) {
  if (!doc.is_object()) throw SpecError("algebra spec must be a JSON object");
  const std::string name = doc.value("name", std::string("custom"));

  try {
    if (doc.contains("sum")) {
      if (doc.contains("constants") && !doc.at("constants").empty())
        throw SpecError("algebra spec: 'sum' and 'constants' are mutually exclusive");
      std::vector<LieAlgebra> parts;
      for (const auto& part : doc.at("sum")) parts.push_back(named_algebra(part.get<std::string>()));
      if (parts.empty()) throw SpecError("algebra spec: 'sum' is empty");
      LieAlgebra alg = direct_sum(parts, name);
      if (doc.contains("dim") && doc.at("dim").get<int>() != alg.dim())
        throw SpecError("algebra spec: 'dim' does not match the direct sum");
      return alg;
    }

    const int n = doc.at("dim").get<int>();
    if (n <= 0) throw SpecError("algebra spec: 'dim' must be positive");

    // canonical key (i < j, k) -> value of C^k_{ij}
    std::map<std::tuple<int, int, int>, double> entries;
    for (const auto& e : doc.value("constants", nlohmann::json::array())) {
      const int i = e.at("i").get<int>();
      const int j = e.at("j").get<int>();
      const int k = e.at("k").get<int>();
      const double v = e.at("v").get<double>();
      if (i < 0 || j < 0 || k < 0 || i >= n || j >= n || k >= n)
        throw SpecError("algebra spec: constant index out of range");
      if (i == j) {
        if (v != 0.0) throw SpecError("algebra spec: [b_i, b_i] must vanish");
        continue;
      }
      const auto key = i < j ? std::make_tuple(i, j, k) : std::make_tuple(j, i, k);
      const double canonical = i < j ? v : -v;
      auto [it, inserted] = entries.emplace(key, canonical);
      if (!inserted && it->second != canonical)
        throw SpecError("algebra spec: conflicting constants violate antisymmetry");
    }

    StructureConstants c(n);
    for (const auto& [key, v] : entries) {
      const auto [i, j, k] = key;
      set_pair(c, i, j, k, v);
    }
    LieAlgebra alg(name, std::move(c));
    if (jacobi_residual(alg) > jacobi_tolerance(alg.constants()))
      throw SpecError("algebra spec: constants violate the Jacobi identity");
    return alg;
  } catch (const nlohmann::json::exception& ex) {
    throw SpecError(std::string("algebra spec: ") + ex.what());
  }
}

LieAlgebra load_algebra_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open algebra spec '" + path.string() + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& ex) {
    throw SpecError("cannot parse algebra spec '" + path.string() + "': " + ex.what());
  }
  return load_algebra(doc);
}

}  // namespace liegauge
