#include "minkowski/model.hpp"

#include <fstream>
#include <numeric>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "minkowski/errors.hpp"

namespace minkowski {

namespace {

using nlohmann::json;

// Depth used for the load-time non-overlapping check of half-symbolic models.
constexpr std::uint64_t kOverlapCheckWords = 200'000;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw InvalidArgument(fmt::format("model: {}: {}", where, what));
}

const json& field(const json& object, const char* key, const std::string& where) {
  if (!object.is_object()) fail(where, "expected an object");
  auto it = object.find(key);
  if (it == object.end()) fail(where, fmt::format("missing field '{}'", key));
  return *it;
}

Number parse_number(const json& value, const std::string& where) {
  if (value.is_number()) return Number(value.get<double>());
  if (value.is_array() && value.size() == 2 && value[0].is_number_integer() && value[1].is_number_integer()) {
    const auto q = value[1].get<std::int64_t>();
    if (q == 0) fail(where, "zero denominator");
    return Number(value[0].get<std::int64_t>(), q);
  }
  fail(where, "expected a number or a [numerator, denominator] pair");
}

double parse_real(const json& value, const std::string& where) { return parse_number(value, where).value(); }

std::vector<double> parse_reals(const json& value, const std::string& where) {
  if (!value.is_array()) fail(where, "expected an array");
  std::vector<double> out;
  for (std::size_t i = 0; i < value.size(); ++i) out.push_back(parse_real(value[i], fmt::format("{}[{}]", where, i)));
  return out;
}

int parse_orientation(const json& object, const std::string& where) {
  auto it = object.find("orientation");
  if (it == object.end()) return 1;
  if (!it->is_number_integer() || (it->get<int>() != 1 && it->get<int>() != -1)) fail(where, "orientation must be 1 or -1");
  return it->get<int>();
}

IntervalMap parse_interval_map(const json& object, const std::string& where) {
  IntervalMap map;
  map.ratio = parse_number(field(object, "ratio", where), where + ".ratio");
  map.offset = parse_number(field(object, "offset", where), where + ".offset");
  map.orientation = parse_orientation(object, where);
  try {
    validate_interval_map(map);
  } catch (const InvalidArgument& e) {
    fail(where, e.what());
  }
  return map;
}

SpongeSystem parse_sponge(const json& doc, Model& model) {
  const auto& d_value = field(doc, "d", "sponge");
  if (!d_value.is_number_unsigned() || d_value.get<std::size_t>() == 0) fail("sponge.d", "expected a positive integer");
  const auto d = d_value.get<std::size_t>();
  const auto& digits_value = field(doc, "digits", "sponge");
  if (!digits_value.is_array()) fail("sponge.digits", "expected an array");

  std::vector<DiagonalMap> digits;
  for (std::size_t i = 0; i < digits_value.size(); ++i) {
    const std::string where = fmt::format("sponge.digits[{}]", i);
    const auto& entry = digits_value[i];
    DiagonalMap digit;
    digit.digit = std::to_string(i);
    const json* maps = &entry;
    if (entry.is_object()) {
      if (auto id = entry.find("id"); id != entry.end()) {
        digit.digit = id->is_string() ? id->get<std::string>() : id->dump();
      }
      maps = &field(entry, "maps", where);
    }
    if (!maps->is_array() || maps->size() != d) fail(where, fmt::format("expected {} coordinate maps", d));
    for (std::size_t k = 0; k < d; ++k) {
      digit.components.push_back(parse_interval_map((*maps)[k], fmt::format("{}[{}]", where, k)));
    }
    digits.push_back(std::move(digit));
  }
  SpongeSystem sponge(d, std::move(digits));
  model.axis_permutation.resize(d);
  std::iota(model.axis_permutation.begin(), model.axis_permutation.end(), std::size_t{0});
  // When no single reordering works the sponge is kept as given; the
  // dimension solver reports the failed condition.
  if (auto perm = normalize_coordinate_order(sponge)) model.axis_permutation = *perm;
  return sponge;
}

SimilarIFS parse_similar(const json& doc) {
  const auto& d_value = field(doc, "d", "similar");
  if (!d_value.is_number_unsigned() || d_value.get<std::size_t>() == 0) fail("similar.d", "expected a positive integer");
  const auto d = d_value.get<std::size_t>();
  const auto& maps_value = field(doc, "maps", "similar");
  if (!maps_value.is_array() || maps_value.empty()) fail("similar.maps", "expected a nonempty array");

  std::vector<Similitude> maps;
  for (std::size_t i = 0; i < maps_value.size(); ++i) {
    const std::string where = fmt::format("similar.maps[{}]", i);
    const auto& entry = maps_value[i];
    if (entry.contains("offset")) {
      if (d != 1) fail(where, "the ratio/offset form is only for d = 1");
      const auto map = parse_interval_map(entry, where);
      maps.push_back({map.ratio.value(), {map.orientation > 0 ? 1.0 : -1.0}, {map.intercept()}});
      continue;
    }
    Similitude sim;
    sim.ratio = parse_real(field(entry, "ratio", where), where + ".ratio");
    if (entry.contains("linear")) sim.linear = parse_reals(entry["linear"], where + ".linear");
    sim.translation = parse_reals(field(entry, "translation", where), where + ".translation");
    maps.push_back(std::move(sim));
  }
  std::optional<Box> osc;
  if (auto it = doc.find("osc"); it != doc.end()) {
    Box box;
    box.lo = parse_reals(field(*it, "lo", "similar.osc"), "similar.osc.lo");
    box.hi = parse_reals(field(*it, "hi", "similar.osc"), "similar.osc.hi");
    if (box.lo.size() != d || box.hi.size() != d) fail("similar.osc", fmt::format("expected {} coordinates", d));
    osc = std::move(box);
  }
  try {
    return SimilarIFS(d, std::move(maps), std::move(osc));
  } catch (const InvalidArgument& e) {
    fail("similar", e.what());
  }
}

SymbolicSystem parse_symbolic(const json& doc) {
  const auto& n = field(doc, "n", "symbolic");
  const auto& m = field(doc, "m", "symbolic");
  if (!n.is_number_integer() || !m.is_number_integer()) fail("symbolic", "n and m must be integers");
  SymbolicFlavor flavor = SymbolicFlavor::Full;
  if (auto it = doc.find("flavor"); it != doc.end()) {
    if (*it == "full") {
      flavor = SymbolicFlavor::Full;
    } else if (*it == "half") {
      flavor = SymbolicFlavor::Half;
    } else {
      fail("symbolic.flavor", "expected \"full\" or \"half\"");
    }
  }
  const auto& digits_value = field(doc, "digits", "symbolic");
  if (!digits_value.is_array()) fail("symbolic.digits", "expected an array");
  std::vector<std::pair<int, int>> digits;
  for (std::size_t i = 0; i < digits_value.size(); ++i) {
    const auto& pair = digits_value[i];
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number_integer() || !pair[1].is_number_integer()) {
      fail(fmt::format("symbolic.digits[{}]", i), "expected an [x, y] integer pair");
    }
    digits.emplace_back(pair[0].get<int>(), pair[1].get<int>());
  }
  SymbolicSystem system = [&] {
    try {
      return SymbolicSystem(n.get<int>(), m.get<int>(), std::move(digits), flavor);
    } catch (const InvalidArgument& e) {
      fail("symbolic", e.what());
    }
  }();
  if (flavor == SymbolicFlavor::Half) {
    std::size_t depth = 1;
    std::uint64_t words = system.size();
    while (depth < 12 && words * system.size() <= kOverlapCheckWords) {
      words *= system.size();
      ++depth;
    }
    const auto check = check_nonoverlapping(system, depth);
    if (!check.non_overlapping) {
      const auto& [p, q] = *check.witness;
      auto show = [](const CylinderWord& w) {
        std::string s;
        for (auto letter : w.letters) s += std::to_string(letter);
        return s;
      };
      throw ValidationError(fmt::format(
          "model: non-overlapping condition fails at depth {}: words {} and {} (digit indices) are at rho-distance 0",
          depth, show(p), show(q)));
    }
  }
  return system;
}

PointCloud parse_points(const json& doc) {
  const auto& points_value = field(doc, "points", "points");
  if (!points_value.is_array() || points_value.empty()) fail("points.points", "expected a nonempty array");
  std::vector<Point> points;
  for (std::size_t i = 0; i < points_value.size(); ++i) {
    const auto& p = points_value[i];
    points.push_back(p.is_array() ? parse_reals(p, fmt::format("points[{}]", i))
                                  : Point{parse_real(p, fmt::format("points[{}]", i))});
  }
  try {
    return PointCloud::from_points(points);
  } catch (const InvalidArgument& e) {
    fail("points", e.what());
  }
}

}  // namespace

const char* Model::type_name() const {
  switch (content.index()) {
    case 0: return "sponge";
    case 1: return "similar";
    case 2: return "symbolic";
    default: return "points";
  }
}

System Model::system() const {
  return std::visit(
      [&](const auto& value) -> System {
        if constexpr (std::is_same_v<std::decay_t<decltype(value)>, PointCloud>) {
          throw InvalidArgument(fmt::format("model '{}': a point-set model has no digit system", name));
        } else {
          return value;
        }
      },
      content);
}

Model parse_model(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidArgument(fmt::format("model: JSON parse error: {}", e.what()));
  }
  const auto& type_value = field(doc, "type", "model");
  if (!type_value.is_string()) fail("model.type", "expected a string");
  const auto type = type_value.get<std::string>();

  Model model{.name = doc.value("name", type), .content = PointCloud{}, .weights = {}, .beta = {},
              .axis_permutation = {}};
  if (type == "sponge") {
    model.content = parse_sponge(doc, model);
  } else if (type == "similar") {
    model.content = parse_similar(doc);
  } else if (type == "symbolic") {
    model.content = parse_symbolic(doc);
  } else if (type == "points") {
    model.content = parse_points(doc);
  } else {
    fail("model.type", fmt::format("unknown type '{}' (expected sponge, similar, symbolic or points)", type));
  }
  if (auto it = doc.find("weights"); it != doc.end()) {
    if (!model.is_system()) fail("model.weights", "weights need a digit system");
    model.weights = parse_reals(*it, "model.weights");
  }
  if (auto it = doc.find("beta"); it != doc.end()) model.beta = parse_real(*it, "model.beta");
  return model;
}

Model load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument(fmt::format("model: cannot open '{}'", path.string()));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_model(buffer.str());
}

}  // namespace minkowski
