#include "hsys/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "hsys/bubbles.hpp"
#include "hsys/corotational.hpp"
#include "hsys/format.hpp"
#include "hsys/linearized.hpp"
#include "hsys/report.hpp"
#include "hsys/series.hpp"
#include "hsys/shooting.hpp"

namespace hsys::cli {

using nlohmann::ordered_json;
using spectral::json_number;

namespace {

constexpr std::array<std::pair<Command, const char*>, 8> kCommands{{{Command::Bubble, "bubble"},
                                                                     {Command::Energy, "energy"},
                                                                     {Command::Zeromode, "zeromode"},
                                                                     {Command::Reduce, "reduce"},
                                                                     {Command::Spectrum, "spectrum"},
                                                                     {Command::Scan, "scan"},
                                                                     {Command::Series, "series"},
                                                                     {Command::Shoot, "shoot"}}};

const std::vector<std::string> kKeys{"command", "degree", "lambda", "grids", "maps",   "window",    "cross-term",
                                     "seed",    "order",  "g0",     "chart", "format", "output", "modes-dir"};

Command parse_command(const std::string& s) {
  for (const auto& [c, name] : kCommands) {
    if (s == name) return c;
  }
  throw ConfigError("unknown command '" + s + "'");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

int parse_int(const std::string& key, const std::string& s) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("malformed integer for " + key + ": '" + s + "'");
  }
}

double parse_real(const std::string& key, const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument("bad");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("malformed number for " + key + ": '" + s + "'");
  }
}

// Exact rationals keep canonical p/q text; decimals keep their spelling so the
// double view is the correctly rounded value of what the user wrote.
std::string normalize_rational(const std::string& s) {
  const mpq_class q = series::parse_rational(s);
  if (s.find('/') != std::string::npos) return series::rational_string(q);
  return s;
}

bool parse_bool(const std::string& key, const std::string& s) {
  if (s == "true" || s == "1" || s == "on") return true;
  if (s == "false" || s == "0" || s == "off") return false;
  throw ConfigError("malformed boolean for " + key + ": '" + s + "'");
}

std::string join_ints(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

std::vector<std::pair<std::string, std::string>> config_pairs(const RunConfig& c) {
  std::string maps;
  for (std::size_t i = 0; i < c.maps.size(); ++i) maps += std::string(i ? "," : "") + spectral::grid_map_name(c.maps[i]);
  std::string seed;
  for (std::size_t i = 0; i < c.seed.size(); ++i) seed += (i ? "," : "") + c.seed[i];
  return {{"command", command_name(c.command)},
          {"degree", std::to_string(c.degree)},
          {"lambda", c.lambda},
          {"grids", join_ints(c.grids)},
          {"maps", maps},
          {"window", format_double(c.window.lo) + ":" + format_double(c.window.hi)},
          {"cross-term", c.cross_term ? "true" : "false"},
          {"seed", seed},
          {"order", std::to_string(c.order)},
          {"g0", format_double(c.g0)},
          {"chart", c.chart == Chart::RChart ? "r" : "kelvin"},
          {"format", c.format == Format::Json ? "json" : "csv"},
          {"output", c.output},
          {"modes-dir", c.modes_dir}};
}

// Raw option text gathered by CLI11 before validation.
struct RawOptions {
  std::string command;
  std::map<std::string, std::string> values;
  bool no_cross_term = false;
  std::string config_file;
};

void apply(RunConfig& c, const RawOptions& raw, bool& command_seen) {
  if (!raw.command.empty()) {
    c.command = parse_command(raw.command);
    command_seen = true;
  }
  bool format_given = false;
  for (const auto& [key, v] : raw.values) {
    if (key == "command") {
      c.command = parse_command(v);
      command_seen = true;
    } else if (key == "degree") {
      c.degree = parse_int(key, v);
      if (c.degree < 1) throw ConfigError("degree must be >= 1, got " + v);
    } else if (key == "lambda") {
      c.lambda = normalize_rational(v);
    } else if (key == "grids") {
      c.grids.clear();
      for (const auto& t : split(v, ',')) {
        const int n = parse_int(key, t);
        if (n < 16) throw ConfigError("grid sizes must be >= 16, got " + t);
        c.grids.push_back(n);
      }
      if (c.grids.empty()) throw ConfigError("grids list is empty");
    } else if (key == "maps") {
      c.maps.clear();
      for (const auto& t : split(v, ',')) c.maps.push_back(spectral::parse_grid_map(t));
      if (c.maps.empty()) throw ConfigError("maps list is empty");
    } else if (key == "window") {
      c.window = spectral::parse_window(v);
    } else if (key == "cross-term") {
      c.cross_term = parse_bool(key, v);
    } else if (key == "seed") {
      const auto parts = split(v, ',');
      if (parts.size() != 4) throw ConfigError("seed needs four rationals a0,a1,b0,b1, got '" + v + "'");
      c.seed.clear();
      for (const auto& t : parts) c.seed.push_back(normalize_rational(t));
    } else if (key == "order") {
      c.order = parse_int(key, v);
      if (c.order < 4) throw ConfigError("order must be >= 4, got " + v);
    } else if (key == "g0") {
      c.g0 = parse_real(key, v);
    } else if (key == "chart") {
      if (v == "r") {
        c.chart = Chart::RChart;
      } else if (v == "kelvin") {
        c.chart = Chart::KelvinTChart;
      } else {
        throw ConfigError("unknown chart '" + v + "' (expected r or kelvin)");
      }
    } else if (key == "format") {
      if (v == "json") {
        c.format = Format::Json;
      } else if (v == "csv") {
        c.format = Format::Csv;
      } else {
        throw ConfigError("unknown format '" + v + "' (expected json or csv)");
      }
      format_given = true;
    } else if (key == "output") {
      if (v.empty()) throw ConfigError("output path is empty");
      c.output = v;
    } else if (key == "modes-dir") {
      c.modes_dir = v;
    }
  }
  if (raw.no_cross_term) c.cross_term = false;
  if (!format_given && !raw.command.empty() && c.command == Command::Series) c.format = Format::Csv;
}

// Parses already-split arguments (without the program name).
RawOptions parse_args(std::vector<std::string> args, std::ostream* help, bool& help_only) {
  CLI::App app{"Bubbles of the H-system: linearization and co-rotational spectrum", "hsys"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  RawOptions raw;
  app.add_option("command", raw.command, "bubble|energy|zeromode|reduce|spectrum|scan|series|shoot");
  std::map<std::string, std::string> tmp;
  std::map<std::string, CLI::Option*> opts;
  const std::map<std::string, std::string> descriptions{
      {"degree", "bubble degree m >= 1"},
      {"lambda", "spectral parameter, p/q or decimal"},
      {"grids", "comma-separated node counts"},
      {"maps", "comma-separated grid maps (rational, stereographic)"},
      {"window", "lambda window lo:hi"},
      {"cross-term", "include the coupling to the bubble (true/false)"},
      {"seed", "series seed a0,a1,b0,b1"},
      {"order", "series order"},
      {"g0", "g(0) for shooting"},
      {"chart", "r or kelvin"},
      {"format", "json or csv"},
      {"output", "output file, - for stdout"},
      {"modes-dir", "directory for mode CSV dumps"}};
  for (const auto& [key, desc] : descriptions) {
    tmp[key];
    std::string names = "--" + key;
    if (key == "degree") names = "-m,--degree";
    opts[key] = app.add_option(names, tmp[key], desc);
  }
  app.add_flag("--no-cross-term", raw.no_cross_term, "disable the coupling terms");
  app.add_option("--config", raw.config_file, "file of key = value lines");
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    if (help != nullptr) *help << app.help();
    help_only = true;
    return raw;
  } catch (const CLI::ExtrasError& e) {
    throw ConfigError(std::string("unknown flag or argument: ") + e.what());
  } catch (const CLI::ParseError& e) {
    throw ConfigError(std::string("invalid arguments: ") + e.what());
  }
  for (const auto& [key, opt] : opts) {
    if (opt->count() > 0) raw.values[key] = tmp[key];
  }
  return raw;
}

std::vector<std::string> text_to_args(const std::string& text) {
  std::vector<std::string> args;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + " is not 'key = value'");
    }
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end()) {
      throw ConfigError("unknown config key '" + key + "' on line " + std::to_string(lineno));
    }
    args.push_back("--" + key + "=" + value);
  }
  return args;
}

// `command` is a positional argument on the command line but a key in files.
RawOptions parse_text_options(const std::string& text) {
  std::vector<std::string> args = text_to_args(text);
  std::string command;
  std::vector<std::string> rest;
  for (const auto& a : args) {
    if (a.rfind("--command=", 0) == 0) {
      command = a.substr(10);
    } else if (a.rfind("--modes-dir=", 0) == 0 && a.size() == 12) {
      continue;  // empty value means "none"
    } else {
      rest.push_back(a);
    }
  }
  bool help_only = false;
  RawOptions raw = parse_args(rest, nullptr, help_only);
  if (!command.empty()) raw.values["command"] = command;
  return raw;
}

}  // namespace

const char* command_name(Command c) {
  for (const auto& [cmd, name] : kCommands) {
    if (cmd == c) return name;
  }
  return "?";
}

mpq_class RunConfig::lambda_exact() const { return series::parse_rational(lambda); }

double RunConfig::lambda_value() const {
  if (lambda.find('/') == std::string::npos) return parse_real("lambda", lambda);
  const mpq_class q = lambda_exact();
  // Both parts exact in double make the quotient correctly rounded.
  if (abs(q.get_num()) < mpz_class(1) << 53 && q.get_den() < mpz_class(1) << 53) {
    return q.get_num().get_d() / q.get_den().get_d();
  }
  return q.get_d();
}

RunConfig parse_config_text(const std::string& text) {
  RunConfig c;
  bool seen = false;
  const RawOptions raw = parse_text_options(text);
  apply(c, raw, seen);
  if (!seen) throw ConfigError("config does not name a command");
  return c;
}

std::string serialize_config(const RunConfig& config) {
  std::string s;
  for (const auto& [k, v] : config_pairs(config)) s += k + " = " + v + "\n";
  return s;
}

bool parse_config(int argc, const char* const* argv, RunConfig& out, std::ostream& help) {
  std::vector<std::string> args(argv + 1, argv + argc);
  bool help_only = false;
  const RawOptions cli = parse_args(args, &help, help_only);
  if (help_only) return false;
  RunConfig c;
  bool seen = false;
  if (!cli.config_file.empty()) {
    std::ifstream in(cli.config_file);
    if (!in) throw ConfigError("cannot read config file '" + cli.config_file + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    apply(c, parse_text_options(buf.str()), seen);
  }
  apply(c, cli, seen);
  if (!seen) throw ConfigError("missing command (expected one of bubble, energy, zeromode, reduce, spectrum, scan, series, shoot)");
  out = c;
  return true;
}

namespace {

ordered_json echo(const RunConfig& c) {
  ordered_json j;
  for (const auto& [k, v] : config_pairs(c)) j[k] = v;
  return j;
}

std::vector<PlanarPoint> sample_points() { return bubbles::random_disc_points(200, 10.0, 20240611u); }

std::string csv_of_mode(const RadialMode& mode) {
  std::ostringstream os;
  corotational::write_mode_csv(os, mode);
  return os.str();
}

struct Output {
  ordered_json result;
  std::string csv;  // used when format == csv
  std::vector<std::pair<std::string, std::string>> files;  // modes-dir dumps
};

Output run_bubble(const RunConfig& c) {
  Output o;
  const auto pts = sample_points();
  double norm_defect = 0.0;
  for (const auto& p : pts) norm_defect = std::max(norm_defect, std::abs(norm(bubbles::bubble_eval(c.degree, p)) - 1.0));
  o.result["hsystem_residual"] = bubbles::hsystem_residual(c.degree, pts);
  o.result["unit_norm_defect"] = norm_defect;
  o.result["samples"] = pts.size();
  const Vec3 at1 = bubbles::bubble_eval(c.degree, PlanarPoint(1.0, 0.0));
  o.result["u_at_1"] = {at1[0], at1[1], at1[2]};
  const auto nodes = linearized::geometric_nodes(1e-3, 1e3, 20);
  std::ostringstream os;
  os << "r,F,G\n";
  const bubbles::BubbleProfile prof(c.degree, c.chart);
  for (double r : nodes) os << format_double(r) << ',' << format_double(prof.F(r)) << ',' << format_double(prof.G(r)) << '\n';
  o.csv = os.str();
  return o;
}

Output run_energy(const RunConfig& c) {
  Output o;
  const auto e = bubbles::bubble_energy(c.degree);
  const double expected = 8.0 * kPi * c.degree;
  o.result["energy"] = e.value;
  o.result["error_estimate"] = e.error_estimate;
  o.result["expected"] = expected;
  o.result["relative_error"] = std::abs(e.value - expected) / expected;
  o.csv = "m,energy,expected\n" + std::to_string(c.degree) + "," + format_double(e.value) + "," + format_double(expected) + "\n";
  return o;
}

Output run_zeromode(const RunConfig& c) {
  Output o;
  const auto pts = sample_points();
  const double lam = c.lambda_value();
  o.result["linearized_residual"] =
      linearized::linearized_residual(c.degree, lam, linearized::zero_mode_field(c.degree), pts);
  o.result["linearized_residual_as_printed"] = linearized::linearized_residual(
      c.degree, lam, linearized::zero_mode_field(c.degree, linearized::ZeroModeVariant::AsPrinted), pts);
  const auto dc = linearized::fit_decay_constants(c.degree);
  o.result["decay"] = {{"c1", dc.c1},
                       {"c2", dc.c2},
                       {"log_fit_residual", dc.log_fit_residual},
                       {"sandwich_holds", linearized::decay_sandwich_holds(c.degree, dc, 10.0, 1e4)}};
  const auto mode = linearized::zero_mode_radial(c.degree, linearized::geometric_nodes(1e-4, 1e6, 200));
  ordered_json l2 = ordered_json::array();
  std::vector<double> x, y;
  for (double R : {1e2, 1e3, 1e4, 1e5}) {
    const double v = linearized::truncated_l2(mode, R);
    l2.push_back({{"R", R}, {"norm2", v}});
    x.push_back(std::log(R));
    y.push_back(v);
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i] / x.size();
    my += y[i] / y.size();
  }
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  o.result["truncated_l2"] = l2;
  o.result["l2_log_slope"] = sxy / sxx;
  o.csv = csv_of_mode(linearized::zero_mode_radial(c.degree, linearized::geometric_nodes(1e-3, 1e3, 20)));
  return o;
}

Output run_reduce(const RunConfig& c) {
  Output o;
  const auto sys = corotational::reduce_to_radial(c.degree, c.lambda_value(), c.chart);
  const auto zm = corotational::zero_mode_analytic(c.degree, c.chart);
  const auto nodes = linearized::geometric_nodes(1e-3, 1e3, 50);
  o.result["chart"] = chart_name(c.chart);
  o.result["zero_mode_residual"] = corotational::radial_residual(zm, sys, nodes);
  ordered_json coeffs = ordered_json::array();
  for (double x : {0.0, 0.5, 1.0, 2.0}) {
    const auto k = sys.coefficients(x);
    coeffs.push_back({{"x", x},
                      {"p1", json_number(k.p1)},
                      {"p2", json_number(k.p2)},
                      {"q1", json_number(k.q1)},
                      {"q2", json_number(k.q2)},
                      {"weight", k.weight}});
  }
  o.result["coefficients"] = coeffs;
  std::vector<double> f, g;
  for (double x : nodes) {
    f.push_back(zm.f(x).v);
    g.push_back(zm.g(x).v);
  }
  const RadialMode mode(c.degree, c.chart, nodes, f, g);
  o.csv = csv_of_mode(mode);
  return o;
}

void dump_modes(Output& o, const std::vector<std::pair<double, RadialMode>>& modes) {
  std::ostringstream plot;
  plot << "set logscale x\nset xlabel 'r'\nplot \\\n";
  for (std::size_t k = 0; k < modes.size(); ++k) {
    char name[32];
    std::snprintf(name, sizeof(name), "mode_%03zu.csv", k);
    o.files.emplace_back(name, csv_of_mode(modes[k].second));
    plot << "  '" << name << "' using 1:2 every ::1 with lines title 'f " << format_double(modes[k].first)
         << "', '' using 1:3 every ::1 with lines title 'g'" << (k + 1 < modes.size() ? ", \\\n" : "\n");
  }
  if (!modes.empty()) o.files.emplace_back("plot.gp", plot.str());
}

Output run_spectrum(const RunConfig& c) {
  Output o;
  const auto grid = spectral::build_grid(c.grids.front(), c.maps.front());
  const auto prob = spectral::assemble_pencil(c.degree, grid, c.cross_term);
  const auto modes = spectral::cluster_align(prob, spectral::solve_pencil(prob, c.window));
  const auto zm = linearized::zero_mode_radial(c.degree, grid.r);
  o.result["N"] = grid.N;
  o.result["map"] = spectral::grid_map_name(grid.map);
  o.result["cross_term"] = c.cross_term;
  o.result["A_symmetric"] = prob.A.is_symmetric();
  o.result["B_orthonormality_defect"] = spectral::b_orthonormality_defect(prob, modes);
  ordered_json list = ordered_json::array();
  std::ostringstream csv;
  csv << "lambda,alpha,zero_mode_cosine\n";
  std::vector<std::pair<double, RadialMode>> dumps;
  for (const auto& m : modes) {
    ordered_json mj;
    mj["lambda"] = m.lambda;
    double alpha = std::numeric_limits<double>::quiet_NaN();
    try {
      alpha = spectral::decay_exponent(m.mode).alpha;
    } catch (const ConfigError&) {
    }
    mj["alpha"] = json_number(alpha);
    const double cosv = spectral::rho_cosine(grid, m.mode, zm);
    mj["zero_mode_cosine"] = cosv;
    list.push_back(mj);
    csv << format_double(m.lambda) << ',' << format_double(alpha) << ',' << format_double(cosv) << '\n';
    dumps.emplace_back(m.lambda, m.mode);
  }
  o.result["modes"] = list;
  o.csv = csv.str();
  if (!c.modes_dir.empty()) dump_modes(o, dumps);
  return o;
}

Output run_scan(const RunConfig& c) {
  Output o;
  spectral::ScanConfig sc;
  sc.m = c.degree;
  sc.window = c.window;
  sc.grids = c.grids;
  sc.maps = c.maps;
  const auto report = spectral::scan_spectrum(sc);
  o.result = spectral::report_to_json(report);
  std::ostringstream csv;
  csv << "lambda,alpha,drift,classification\n";
  std::vector<std::pair<double, RadialMode>> dumps;
  for (const auto& r : report.modes) {
    csv << format_double(r.lambda) << ',' << format_double(r.decay.alpha) << ',' << format_double(r.drift) << ','
        << spectral::classification_name(r.classification) << '\n';
    dumps.emplace_back(r.lambda, r.mode);
  }
  o.csv = csv.str();
  if (!c.modes_dir.empty()) dump_modes(o, dumps);
  return o;
}

Output run_series(const RunConfig& c) {
  Output o;
  series::Seed seed{series::parse_rational(c.seed[0]), series::parse_rational(c.seed[1]),
                    series::parse_rational(c.seed[2]), series::parse_rational(c.seed[3])};
  const auto st = series::series_run(seed, c.lambda_exact(), c.order);
  std::ostringstream os;
  series::write_series_csv(os, st);
  o.csv = os.str();
  ordered_json a = ordered_json::array();
  ordered_json b = ordered_json::array();
  for (int n = 0; n <= st.order; ++n) {
    a.push_back(series::rational_string(st.a[static_cast<std::size_t>(n)]));
    b.push_back(series::rational_string(st.b[static_cast<std::size_t>(n)]));
  }
  o.result["lambda"] = series::rational_string(st.lambda);
  o.result["order"] = st.order;
  o.result["a"] = a;
  o.result["b"] = b;
  ordered_json defects;
  for (const auto& [k, v] : st.seed_defect_f) defects["f_" + std::to_string(k)] = series::rational_string(v);
  for (const auto& [k, v] : st.seed_defect_g) defects["g_" + std::to_string(k)] = series::rational_string(v);
  o.result["seed_defects"] = defects;
  ordered_json taylor;
  for (const char* name : {"kelvin_zero_mode_f", "kelvin_zero_mode_g"}) taylor[name] = series::series_compare_taylor(name, st);
  o.result["matches_taylor"] = taylor;
  return o;
}

Output run_shoot(const RunConfig& c) {
  Output o;
  const double lam = c.lambda_value();
  const auto mis = spectral::shoot_mismatch(c.degree, lam, c.g0);
  double g0 = 0.0;
  const double defect = spectral::shoot_defect(c.degree, lam, &g0);
  const auto ref = spectral::shoot_refine(c.degree, lam);
  o.result["mismatch"] = {mis[0], mis[1]};
  o.result["mismatch_norm"] = std::hypot(mis[0], mis[1]);
  o.result["defect"] = defect;
  o.result["matching_g0"] = json_number(g0);
  o.result["refined"] = {{"branch_exists", ref.branch_exists},
                         {"lambda", ref.lambda},
                         {"g0", json_number(ref.g0)},
                         {"defect", ref.defect}};
  o.csv = "lambda,g0,mismatch_f,mismatch_g\n" + format_double(lam) + "," + format_double(c.g0) + "," +
          format_double(mis[0]) + "," + format_double(mis[1]) + "\n";
  return o;
}

Output dispatch(const RunConfig& c) {
  switch (c.command) {
    case Command::Bubble:
      return run_bubble(c);
    case Command::Energy:
      return run_energy(c);
    case Command::Zeromode:
      return run_zeromode(c);
    case Command::Reduce:
      return run_reduce(c);
    case Command::Spectrum:
      return run_spectrum(c);
    case Command::Scan:
      return run_scan(c);
    case Command::Series:
      return run_series(c);
    case Command::Shoot:
      return run_shoot(c);
  }
  throw ConfigError("unknown command");
}

Output last_output;

}  // namespace

std::string execute(const RunConfig& config) {
  last_output = dispatch(config);
  if (config.format == Format::Csv) return last_output.csv;
  ordered_json j;
  j["version"] = HSYS_VERSION;
  j["command"] = command_name(config.command);
  j["config"] = echo(config);
  j["result"] = last_output.result;
  return j.dump(2) + "\n";
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig config;
  try {
    if (!parse_config(argc, argv, config, out)) return 0;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  try {
    const std::string text = execute(config);
    // Single writer at the end: profile dumps first, then the main output.
    if (!config.modes_dir.empty()) {
      std::filesystem::create_directories(config.modes_dir);
      for (const auto& [name, body] : last_output.files) {
        std::ofstream f(std::filesystem::path(config.modes_dir) / name);
        if (!f) throw ConfigError("cannot write '" + name + "' in " + config.modes_dir);
        f << body;
      }
    }
    if (config.output == "-") {
      out << text;
    } else {
      std::ofstream f(config.output);
      if (!f) throw ConfigError("cannot write output file '" + config.output + "'");
      f << text;
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const NumericalError& e) {
    err << "error: numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: numerical failure: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace hsys::cli
