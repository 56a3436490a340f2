#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "minkowski/geometry.hpp"
#include "minkowski/ifs.hpp"
#include "minkowski/symbolic.hpp"

namespace minkowski {

/// A system the verifier can run on.
using System = std::variant<SpongeSystem, SimilarIFS, SymbolicSystem>;

/// Contents of a model file. See README.md for the JSON grammar.
struct Model {
  std::string name;
  std::variant<SpongeSystem, SimilarIFS, SymbolicSystem, PointCloud> content;
  /// Optional measure weights, one per digit/map.
  std::optional<std::vector<double>> weights;
  /// Optional exponent overriding the solved dimension.
  std::optional<double> beta;
  /// Sponges only: the axis permutation applied at load time (new axis i is
  /// old axis perm[i]); identity when no reordering was needed.
  std::vector<std::size_t> axis_permutation;

  const char* type_name() const;
  bool is_system() const { return !std::holds_alternative<PointCloud>(content); }
  /// Throws InvalidArgument for a point-set model.
  System system() const;
};

/// Parses a model from JSON text. Throws InvalidArgument on malformed input
/// and ValidationError when a sponge's coordinates cannot be ordered.
Model parse_model(const std::string& text);
Model load_model(const std::filesystem::path& path);

}  // namespace minkowski
