#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "minkowski/cli.hpp"

using namespace minkowski;

namespace {
struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Run r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string model(const char* name) { return std::string(MINKOWSKI_MODELS_DIR) + "/" + name + ".json"; }

std::size_t data_rows(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  std::size_t rows = 0;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#') ++rows;
  }
  return rows;
}

bool contains(const std::string& haystack, const std::string& needle) { return haystack.find(needle) != std::string::npos; }
}  // namespace

TEST_CASE("dim") {
  auto r = run({"dim", "--model", model("cantor")});
  CHECK(r.code == kExitOk);
  CHECK(contains(r.out, "similarity_dimension: 0.6309297535714574"));

  r = run({"dim", "--model", model("mcmullen")});
  CHECK(r.code == kExitOk);
  CHECK(contains(r.out, "beta_1: 1\n"));
  CHECK(contains(r.out, "beta_2: 0.36907024642854"));

  r = run({"dim", "--model", model("equal_ratios")});
  CHECK(r.code == kExitUsage);
  CHECK(contains(r.err, "coordinate ordering"));

  r = run({"dim", "--model", model("cantor"), "--fit", "--delta-range", "3..8"});
  CHECK(r.code == kExitOk);
  CHECK(contains(r.out, "fit_slope: 0.6"));
}

TEST_CASE("verify") {
  auto r = run({"verify", "--model", model("cantor"), "--epsilon", "0.2", "--delta-range", "3..7"});
  CHECK(r.code == kExitOk);
  CHECK(data_rows(r.out) == 10);
  CHECK(contains(r.out, "# divergent_flag: false"));

  r = run({"verify", "--model", model("kenyon"), "--epsilon", "0.2,0.05", "--delta-range", "3..10"});
  CHECK(r.code == kExitOk);
  CHECK(contains(r.out, "# divergent_flag: true"));

  r = run({"verify", "--model", model("cantor"), "--epsilon", "", "--delta-range", "3..7"});
  CHECK(r.code == kExitUsage);
  r = run({"verify", "--model", model("cantor"), "--delta-range", "3..7"});
  CHECK(r.code == kExitUsage);
}

TEST_CASE("pack, components, spectrum") {
  auto r = run({"pack", "--model", model("line3"), "--delta", "0.6"});
  CHECK(r.code == kExitOk);
  CHECK(contains(r.out, "0.6,0,2\n"));

  r = run({"components", "--model", model("cantor"), "--epsilon", "0.2"});
  CHECK(r.code == kExitOk);
  CHECK(contains(r.out, "0.2,"));
  CHECK(r.out.substr(r.out.rfind(',') + 1) == "2\n");

  r = run({"spectrum", "--model", model("symbolic_full"), "--weights", "0.3333333333333333,0.3333333333333333,0.3333333333333334",
           "--rank", "4"});
  CHECK(r.code == kExitOk);
  CHECK(contains(r.out, "# occupied_bins: 1"));
  CHECK(contains(r.out, "# total: 81"));
}

TEST_CASE("criterion, transport, doubling") {
  auto r = run({"criterion", "--model", model("cantor"), "--ranks", "1,2,3", "--delta-range", "3..7"});
  CHECK(r.code == kExitOk);
  r = run({"transport", "--model", model("symbolic_full"), "--permutation", "2,1,0", "--epsilon", "0.5",
           "--delta-base", "2", "--delta-range", "3..8"});
  CHECK(r.code == kExitOk);
  CHECK(contains(r.out, "lipschitz"));
  r = run({"transport", "--model", model("symbolic_full"), "--scale", "2", "--epsilon", "0.5", "--delta-range", "3..5"});
  CHECK(r.code == kExitUsage);
  CHECK(contains(r.err, "unsupported map class"));
  r = run({"doubling", "--model", model("cantor"), "--scales", "0.1,0.05"});
  CHECK(r.code == kExitOk);
}

TEST_CASE("exit codes and messages") {
  auto r = run({"dim", "--model", "/nonexistent/model.json"});
  CHECK(r.code == kExitUsage);
  CHECK(contains(r.err, "cannot open"));

  r = run({"frobnicate"});
  CHECK(r.code == kExitUsage);

  r = run({"verify", "--model", model("cantor"), "--epsilon", "0.2", "--delta-range", "3..12", "--depth-budget", "1000"});
  CHECK(r.code == kExitBudget);
  CHECK(contains(r.err, "budget"));

  r = run({"verify", "--model", model("cantor"), "--epsilon", "0.2", "--delta-range", "7..3"});
  CHECK(r.code == kExitUsage);

  r = run({"--help"});
  CHECK(r.code == kExitOk);
  CHECK(contains(r.out, "verify"));
}

TEST_CASE("outputs are deterministic and --out writes the report") {
  const std::vector<std::string> args{"verify", "--model", model("mcmullen"), "--epsilon", "0.2", "--delta-range", "4..8"};
  const auto a = run(args);
  const auto b = run(args);
  CHECK(a.code == kExitOk);
  CHECK(a.out == b.out);

  const auto path = std::filesystem::temp_directory_path() / "minkowski_cli_test.csv";
  auto with_out = args;
  with_out.insert(with_out.end(), {"--out", path.string()});
  const auto c = run(with_out);
  CHECK(c.code == kExitOk);
  CHECK(contains(c.out, "wrote "));
  std::ifstream in(path);
  std::stringstream file;
  file << in.rdbuf();
  CHECK(file.str() == a.out);
  std::filesystem::remove(path);
}
