#include "hsys/report.hpp"

#include <cmath>

#include "hsys/format.hpp"

namespace hsys::spectral {

using nlohmann::ordered_json;

ordered_json json_number(double x) {
  if (std::isfinite(x)) return x;
  return format_double(x);
}

ordered_json report_to_json(const SpectrumReport& report) {
  ordered_json j;
  j["version"] = report.version;
  ordered_json cfg;
  cfg["degree"] = report.config.m;
  cfg["window"] = {report.config.window.lo, report.config.window.hi};
  cfg["grids"] = report.config.grids;
  ordered_json maps = ordered_json::array();
  for (GridMap m : report.config.maps) maps.push_back(grid_map_name(m));
  cfg["maps"] = maps;
  cfg["shoot_check"] = report.config.shoot_check;
  j["config"] = cfg;

  ordered_json modes = ordered_json::array();
  std::size_t eigen_count = 0;
  std::size_t spurious_count = 0;
  std::size_t shoot_failures = 0;
  double min_abs = std::numeric_limits<double>::infinity();
  for (const ModeRecord& r : report.modes) {
    ordered_json mj;
    mj["lambda"] = json_number(r.lambda);
    mj["lambda_richardson"] = json_number(r.lambda_richardson);
    mj["convergence_ratio"] = json_number(r.convergence_ratio);
    mj["drift"] = json_number(r.drift);
    mj["alpha"] = json_number(r.decay.alpha);
    mj["alpha_fit_residual"] = json_number(r.decay.fit_residual);
    mj["alpha_fit_nodes"] = r.decay.nodes;
    mj["classification"] = classification_name(r.classification);
    ordered_json per = ordered_json::array();
    for (const ConfigLambda& c : r.per_config) {
      ordered_json cj;
      cj["map"] = grid_map_name(c.map);
      cj["N"] = c.N;
      cj["lambda"] = c.lambda ? json_number(*c.lambda) : ordered_json(nullptr);
      cj["overlap"] = json_number(c.overlap);
      per.push_back(cj);
    }
    mj["refinements"] = per;
    if (r.shoot_checked) {
      ordered_json sj;
      sj["branch_exists"] = r.shoot_branch_exists;
      sj["lambda"] = json_number(r.shoot_lambda);
      sj["defect"] = json_number(r.shoot_defect);
      sj["agrees"] = r.shoot_agrees;
      mj["shooting"] = sj;
      if (!r.shoot_agrees) ++shoot_failures;
    }
    modes.push_back(mj);
    if (r.classification == Classification::Eigenvalue) ++eigen_count;
    if (r.classification == Classification::Spurious) ++spurious_count;
    if (r.classification != Classification::Spurious) min_abs = std::min(min_abs, std::abs(r.lambda));
  }
  j["modes"] = modes;
  ordered_json summary;
  summary["mode_count"] = report.modes.size();
  summary["eigenvalue_count"] = eigen_count;
  summary["spurious_count"] = spurious_count;
  summary["min_abs_lambda"] = json_number(min_abs);
  summary["shooting_disagreements"] = shoot_failures;
  j["summary"] = summary;
  return j;
}

std::string report_json(const SpectrumReport& report) { return report_to_json(report).dump(2) + "\n"; }

}  // namespace hsys::spectral
