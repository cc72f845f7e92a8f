#pragma once

// Data-parallel arithmetic kernels. Every kernel has a scalar reference
// implementation; an AVX2 variant is selected at runtime when the CPU supports
// it. Set HSYS_ISA=scalar in the environment to force the reference path.

#include <span>
#include <string_view>

namespace hsys::kernels {

enum class Isa { Scalar, Avx2 };

std::string_view isa_name(Isa isa);

/// Bubble radial profiles F, G, F', G' of degree m at radii r (r may be 0 or +inf).
using ProfileFn = void (*)(int m, std::span<const double> r, std::span<double> F, std::span<double> G,
                           std::span<double> dF, std::span<double> dG);
/// sum_i w_i x_i y_i
using WeightedDotFn = double (*)(std::span<const double> w, std::span<const double> x,
                                 std::span<const double> y);
/// sum_i x_i y_i
using DotFn = double (*)(std::span<const double> x, std::span<const double> y);
/// y += a x
using AxpyFn = void (*)(double a, std::span<const double> x, std::span<double> y);
/// max_i |x_i|
using MaxAbsFn = double (*)(std::span<const double> x);

struct KernelTable {
  Isa isa;
  ProfileFn bubble_profiles;
  WeightedDotFn weighted_dot;
  DotFn dot;
  AxpyFn axpy;
  MaxAbsFn max_abs;
};

bool isa_available(Isa isa);

/// Table for a specific instruction set; throws if unavailable on this CPU.
const KernelTable& table_for(Isa isa);

/// Table chosen once per process (best available unless HSYS_ISA overrides).
const KernelTable& active();

// Convenience forwarding to the active table.
inline void bubble_profiles(int m, std::span<const double> r, std::span<double> F, std::span<double> G,
                            std::span<double> dF, std::span<double> dG) {
  active().bubble_profiles(m, r, F, G, dF, dG);
}
inline double weighted_dot(std::span<const double> w, std::span<const double> x, std::span<const double> y) {
  return active().weighted_dot(w, x, y);
}
inline double dot(std::span<const double> x, std::span<const double> y) { return active().dot(x, y); }
inline void axpy(double a, std::span<const double> x, std::span<double> y) { active().axpy(a, x, y); }
inline double max_abs(std::span<const double> x) { return active().max_abs(x); }

namespace detail {
extern const KernelTable kScalarTable;
extern const KernelTable kAvx2Table;
}  // namespace detail

}  // namespace hsys::kernels
