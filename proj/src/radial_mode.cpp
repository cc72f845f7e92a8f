#include "hsys/radial_mode.hpp"

#include <algorithm>
#include <string>

namespace hsys {

RadialMode::RadialMode(int m, Chart chart, std::vector<double> coord, std::vector<double> f,
                       std::vector<double> g)
    : m_(m), chart_(chart), coord_(std::move(coord)), f_(std::move(f)), g_(std::move(g)) {
  if (m_ < 1) throw ConfigError("mode degree must be >= 1");
  if (f_.size() != coord_.size() || g_.size() != coord_.size()) {
    throw ConfigError("mode profiles and nodes differ in length");
  }
  for (std::size_t i = 0; i < coord_.size(); ++i) {
    if (!(coord_[i] >= 0.0)) throw ConfigError("mode node " + std::to_string(i) + " is negative or NaN");
    if (i > 0 && !(coord_[i] > coord_[i - 1])) throw ConfigError("mode nodes must be strictly increasing");
    if (!std::isfinite(f_[i]) || !std::isfinite(g_[i])) {
      throw ConfigError("mode value at node " + std::to_string(i) + " is not finite");
    }
  }
  if (chart_ == Chart::RChart && !coord_.empty() && coord_.front() == 0.0 && f_.front() != 0.0) {
    throw ConfigError("co-rotational f must vanish at the chart origin");
  }
  dual_.resize(coord_.size());
  std::transform(coord_.begin(), coord_.end(), dual_.begin(), [](double x) { return 1.0 / x; });
}

RadialMode RadialMode::kelvin() const {
  RadialMode out(*this);
  out.chart_ = chart_ == Chart::RChart ? Chart::KelvinTChart : Chart::RChart;
  std::swap(out.coord_, out.dual_);
  std::reverse(out.coord_.begin(), out.coord_.end());
  std::reverse(out.dual_.begin(), out.dual_.end());
  std::reverse(out.f_.begin(), out.f_.end());
  std::reverse(out.g_.begin(), out.g_.end());
  return out;
}

std::pair<double, double> RadialMode::interpolate(double r) const {
  auto sigma = [](double x) { return std::isinf(x) ? 1.0 : x / (1.0 + x); };
  const std::size_t n = size();
  if (n == 0) throw ConfigError("cannot interpolate an empty mode");
  // Nodes ordered by increasing radius.
  const bool ascending = chart_ == Chart::RChart;
  auto rad = [&](std::size_t k) { return radius(ascending ? k : n - 1 - k); };
  auto fv = [&](std::size_t k) { return f_[ascending ? k : n - 1 - k]; };
  auto gv = [&](std::size_t k) { return g_[ascending ? k : n - 1 - k]; };
  const double s = sigma(r);
  if (s <= sigma(rad(0))) return {fv(0), gv(0)};
  if (s >= sigma(rad(n - 1))) return {fv(n - 1), gv(n - 1)};
  std::size_t lo = 0;
  std::size_t hi = n - 1;
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    (sigma(rad(mid)) <= s ? lo : hi) = mid;
  }
  const double s0 = sigma(rad(lo));
  const double s1 = sigma(rad(hi));
  const double w = (s - s0) / (s1 - s0);
  return {(1.0 - w) * fv(lo) + w * fv(hi), (1.0 - w) * gv(lo) + w * gv(hi)};
}

}  // namespace hsys
