#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "gen.hpp"
#include "hsys/cli.hpp"
#include "hsys/series.hpp"

using namespace hsys;
using namespace hsys::cli;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "hsys");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

RunConfig random_config(testing::Gen& gen) {
  RunConfig c;
  c.command = static_cast<Command>(gen.integer(0, 7));
  c.degree = static_cast<int>(gen.integer(1, 5));
  c.lambda = gen.integer(0, 1) ? std::to_string(gen.integer(-9, 9)) + "/" + std::to_string(gen.integer(2, 9) * 2 + 1)
                               : std::to_string(gen.integer(-30, 30)) + ".25";
  // p/q text is stored in lowest terms.
  if (c.lambda.find('/') != std::string::npos) c.lambda = series::rational_string(series::parse_rational(c.lambda));
  c.grids.clear();
  for (long k = gen.integer(1, 3); k > 0; --k) c.grids.push_back(static_cast<int>(gen.integer(16, 4000)));
  c.maps = gen.integer(0, 1) ? std::vector<spectral::GridMap>{spectral::GridMap::Stereographic}
                             : std::vector<spectral::GridMap>{spectral::GridMap::Rational, spectral::GridMap::Stereographic};
  const double lo = gen.uniform(-50, 0);
  c.window = {lo, lo + gen.uniform(0.1, 60)};
  c.cross_term = gen.integer(0, 1) == 1;
  c.seed = {"0", std::to_string(gen.integer(-5, 5)), "1/3", "0"};
  c.order = static_cast<int>(gen.integer(4, 60));
  c.g0 = gen.uniform(-2, 2);
  c.chart = gen.integer(0, 1) ? Chart::RChart : Chart::KelvinTChart;
  c.format = gen.integer(0, 1) ? Format::Json : Format::Csv;
  c.output = gen.integer(0, 1) ? "-" : "out.json";
  c.modes_dir = gen.integer(0, 1) ? "" : "modes";
  return c;
}

}  // namespace

TEST_CASE("config text round trips") {
  testing::Gen gen(2718);
  for (int k = 0; k < 200; ++k) {
    const RunConfig c = random_config(gen);
    const std::string text = serialize_config(c);
    const RunConfig back = parse_config_text(text);
    CHECK(back == c);
    CHECK(serialize_config(back) == text);
  }
}

TEST_CASE("lambda text keeps both exact and decimal views") {
  RunConfig c;
  c.lambda = "-7/3";
  CHECK(c.lambda_exact() == mpq_class(-7, 3));
  CHECK(c.lambda_value() == -7.0 / 3.0);
  c.lambda = "0.1";
  CHECK(c.lambda_value() == 0.1);
  CHECK(c.lambda_exact() == mpq_class(1, 10));
}

TEST_CASE("command-line flags override the config file") {
  const auto path = std::filesystem::temp_directory_path() / "hsys_cli_test.cfg";
  {
    std::ofstream f(path);
    f << "# comment\ncommand = energy\ndegree = 3\n";
  }
  RunConfig c;
  std::ostringstream help;
  const std::vector<std::string> args{"hsys", "--config", path.string(), "-m", "2"};
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  REQUIRE(parse_config(static_cast<int>(argv.size()), argv.data(), c, help));
  CHECK(c.command == Command::Energy);
  CHECK(c.degree == 2);
  std::filesystem::remove(path);
}

TEST_CASE("diagnostics are single lines with exit code 1") {
  const std::vector<std::pair<std::vector<std::string>, std::string>> cases{
      {{"bubble", "--bogus"}, "unknown flag"},
      {{"bubble", "--degree", "0"}, "degree must be >= 1"},
      {{"scan", "--window", "3:1"}, "empty window"},
      {{"scan", "--window", "1-2"}, "malformed window"},
      {{"series", "--lambda", "1/0"}, "zero denominator"},
      {{"series", "--lambda", "x"}, "malformed rational"},
      {{"spectrum", "--maps", "polar"}, "polar"},
      {{"spectrum", "--grids", "8"}, "grid sizes"},
      {{"series", "--seed", "1,2"}, "four rationals"},
      {{"fly"}, "unknown command"},
      {{}, "missing command"},
  };
  for (const auto& [args, needle] : cases) {
    const Result r = invoke(args);
    CHECK(r.code == 1);
    CHECK(r.out.empty());
    CHECK(r.err.rfind("error: ", 0) == 0);
    CHECK(r.err.find(needle) != std::string::npos);
    CHECK(std::count(r.err.begin(), r.err.end(), '\n') == 1);
  }
  CHECK_THROWS_WITH_AS(parse_config_text("command = bubble\ncolour = red\n"), doctest::Contains("unknown config key"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_text("command bubble\n"), doctest::Contains("key = value"), ConfigError);
}

TEST_CASE("numerical failures exit with code 2") {
  const Result r = invoke({"shoot", "-m", "2", "--lambda", "1e9"});
  CHECK(r.code == 2);
  CHECK(r.err.rfind("error: ", 0) == 0);
}

TEST_CASE("series defaults to CSV") {
  const Result r = invoke({"series", "--seed", "0,-2,0,0", "--order", "5"});
  CHECK(r.code == 0);
  CHECK(r.out == "n,a_n,b_n\n0,0,0\n1,-2,0\n2,0,4\n3,6,0\n4,0,-8\n5,-10,0\n");
  const Result j = invoke({"series", "--seed", "0,-2,0,0", "--order", "5", "--format", "json"});
  const auto doc = nlohmann::json::parse(j.out);
  CHECK(doc["result"]["a"][5] == "-10");
  CHECK(doc["result"]["matches_taylor"]["kelvin_zero_mode_f"] == true);
}

TEST_CASE("JSON reports echo the configuration") {
  const Result r = invoke({"energy", "-m", "3"});
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["command"] == "energy");
  CHECK(doc["config"]["degree"] == "3");
  const double e = doc["result"]["energy"];
  CHECK(e == doctest::Approx(24.0 * 3.14159265358979323846).epsilon(1e-9));
  CHECK(parse_config_text(serialize_config(parse_config_text("command = energy\ndegree = 3\n"))).degree == 3);
}

TEST_CASE("identical configurations give byte-identical reports") {
  const std::vector<std::string> args{"scan", "-m", "2", "--grids", "250,500,1000", "--window", "-1:1"};
  const Result a = invoke(args);
  const Result b = invoke(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  const auto doc = nlohmann::json::parse(a.out);
  CHECK(doc["result"]["summary"]["eigenvalue_count"].get<int>() >= 1);
}

TEST_CASE("mode dumps and plot script") {
  const auto dir = std::filesystem::temp_directory_path() / "hsys_cli_modes";
  std::filesystem::remove_all(dir);
  const auto out = dir / "report.json";
  std::filesystem::create_directories(dir);
  const Result r = invoke({"spectrum", "-m", "2", "--grids", "300", "--window", "-1:1", "--modes-dir", dir.string(),
                           "--output", out.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  CHECK(std::filesystem::exists(out));
  CHECK(std::filesystem::exists(dir / "plot.gp"));
  std::ifstream f(dir / "mode_000.csv");
  std::string header;
  std::getline(f, header);
  CHECK(header == "r,f,g");
  std::filesystem::remove_all(dir);
}

TEST_CASE("installed binary reports the same exit codes") {
  const std::string bin = HSYS_CLI_PATH;
  CHECK(std::system((bin + " energy > /dev/null").c_str()) == 0);
  const int bad = std::system((bin + " energy --bogus 2> /dev/null").c_str());
  CHECK(WEXITSTATUS(bad) == 1);
}
