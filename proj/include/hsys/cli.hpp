#pragma once

#include <gmpxx.h>

#include <iosfwd>
#include <string>
#include <vector>

#include "hsys/grid.hpp"
#include "hsys/spectral.hpp"
#include "hsys/types.hpp"

namespace hsys::cli {

enum class Command { Bubble, Energy, Zeromode, Reduce, Spectrum, Scan, Series, Shoot };
enum class Format { Json, Csv };

const char* command_name(Command c);

/// Everything a run depends on. lambda is kept as text: "p/q" is exact for
/// the series engine and converted to the nearest double elsewhere.
struct RunConfig {
  Command command = Command::Bubble;
  int degree = 1;
  std::string lambda = "0";
  std::vector<int> grids{2000};
  std::vector<spectral::GridMap> maps{spectral::GridMap::Rational};
  spectral::Window window{-30.0, 30.0};
  bool cross_term = true;
  std::vector<std::string> seed{"0", "0", "0", "0"};
  int order = 8;
  double g0 = 0.0;
  Chart chart = Chart::RChart;
  Format format = Format::Json;
  std::string output = "-";
  std::string modes_dir;

  mpq_class lambda_exact() const;
  double lambda_value() const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Parses command-line arguments (argv[0] is the program name). A
/// `--config FILE` holding `key = value` lines is applied first and
/// command-line flags override it. Throws ConfigError with a one-line message.
/// Returns false when only help was requested (text written to `help`).
bool parse_config(int argc, const char* const* argv, RunConfig& out, std::ostream& help);

/// Parses `key = value` lines (blank lines and '#' comments allowed).
RunConfig parse_config_text(const std::string& text);

/// Inverse of parse_config_text.
std::string serialize_config(const RunConfig& config);

/// Executes the command and returns the output text.
std::string execute(const RunConfig& config);

/// Full program: parse, execute, write. Exit codes: 0 success, 1 invalid
/// configuration, 2 numerical failure.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hsys::cli
