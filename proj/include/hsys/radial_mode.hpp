#pragma once

#include <vector>

#include "hsys/types.hpp"

namespace hsys {

/// A co-rotational pair w = (f cos m theta, f sin m theta, g) sampled on
/// strictly increasing nodes of a chart variable (r, or t = 1/r).
///
/// `dual` holds 1/coord for every node so that the Kelvin transform is an
/// exact involution: it swaps the two arrays instead of recomputing 1/x.
class RadialMode {
 public:
  RadialMode() = default;
  RadialMode(int m, Chart chart, std::vector<double> coord, std::vector<double> f, std::vector<double> g);

  int degree() const { return m_; }
  Chart chart() const { return chart_; }
  std::size_t size() const { return coord_.size(); }

  const std::vector<double>& coord() const { return coord_; }
  const std::vector<double>& dual() const { return dual_; }
  const std::vector<double>& f() const { return f_; }
  const std::vector<double>& g() const { return g_; }
  std::vector<double>& f() { return f_; }
  std::vector<double>& g() { return g_; }

  /// Radius |z| of node i regardless of chart.
  double radius(std::size_t i) const { return chart_ == Chart::RChart ? coord_[i] : dual_[i]; }

  /// Same mode described in the other chart: f~(t) = f(1/t), g~(t) = g(1/t).
  RadialMode kelvin() const;

  /// The mode re-expressed in the r-chart (identity if already there).
  RadialMode in_r_chart() const { return chart_ == Chart::RChart ? *this : kelvin(); }

  /// Piecewise-linear interpolation in s = r/(1+r) at radius r (r may be +inf).
  std::pair<double, double> interpolate(double r) const;

  friend bool operator==(const RadialMode&, const RadialMode&) = default;

 private:
  int m_ = 1;
  Chart chart_ = Chart::RChart;
  std::vector<double> coord_;
  std::vector<double> dual_;
  std::vector<double> f_;
  std::vector<double> g_;
};

}  // namespace hsys
