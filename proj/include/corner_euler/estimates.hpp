#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "corner_euler/conformal.hpp"
#include "corner_euler/flow.hpp"
#include "corner_euler/report.hpp"
#include "corner_euler/vorticity.hpp"

namespace corner_euler {

// Kernel identities. Each samples `n` configurations from `seed`.

/// max |K_D(y, z) . y| over |y| = 1, z in D. Threshold 1e-13.
FitReport check_tangency(std::size_t n, std::uint64_t seed);

/// max relative error of | a/|a|^2 - b/|b|^2 | = |a - b| / (|a||b|). Threshold 1e-12.
FitReport check_algebraic_identity(std::size_t n, std::uint64_t seed);

/// max |y - z| / |y - z*| over y in the closed disk, z in D. Threshold 3.
FitReport check_image_inequality(std::size_t n, std::uint64_t seed);

/// K1: max |K_D(y,z)| |y - z| against 2/pi + 1e-9.
/// K2: max |K_D(y1,z) - K_D(y2,z)| |y1 - z| |y2 - z| / |y1 - y2| against 10.
/// Throws std::invalid_argument for n < 1e4.
std::array<FitReport, 2> check_kernel_bounds(std::size_t n, std::uint64_t seed);

/// Ratios of the two disk integrals of kernel differences to h(|y1 - y2|)
/// for `pairs` random pairs with |y1 - y2| log-uniform in [1e-4, 0.5]
/// (both endpoints always included). Threshold 10 on the ratio.
/// Throws for resolution < 256.
std::array<FitReport, 2> check_k3_integrals(std::size_t pairs, std::size_t resolution,
                                            std::uint64_t seed);

/// Compares fitted constants of the same check at two resolutions; passes
/// when they agree within `tolerance` relative and both inputs passed.
FitReport compare_constants(const std::string& name, const FitReport& coarse,
                            const FitReport& fine, double tolerance);

/// Log-log slopes at corner `corner` over points x at distances
/// 1e-1 ... 1e-5 on the corner bisector: |T(x) - T(x_k)|, |T'(x)|, |T''(x)|
/// against |x - x_k|, and |T^{-1}(y) - x_k| against |y - T(x_k)| at
/// y = T(x). Relative slope tolerances 1%, 2%, 5%, 1% (absolute when the
/// expected slope is 0).
/// Throws std::invalid_argument for a domain without corners.
std::array<FitReport, 4> check_map_exponents(const ConformalMap& map, std::size_t corner);

/// Report 1: max |u(x)| / |omega|_inf over physical samples, half of them
/// within delta of a corner (down to distance 1e-4).
/// Report 2: max |U(y1) - U(y2)| / (|omega|_inf h(|y1 - y2|)) over disk
/// pairs, including pairs straddling corner images and |y1 - y2| down to
/// 1e-6. Threshold 10 on both. Needs vort.sup_norm_physical.
std::array<FitReport, 2> check_velocity_bounds(const ConformalMap& map, const DiskVorticity& vort,
                                               std::size_t n, std::uint64_t seed);

/// |grad u|_{L^p} / |omega|_inf for each p on a grid x grid cell-centred
/// physical grid (centres half a cell from the box corners). grad u is
/// the Frobenius norm of finite differences, one-sided next to the
/// boundary. Details carry the raw norm and ratio per p. Passes when all
/// values are finite.
FitReport check_w1p_growth(const ConformalMap& map, const DiskVorticity& vort,
                           std::span<const double> p_list, std::size_t grid);

/// f0^{exp(-C t)} e^{1 - exp(-C t)}.
double gronwall_envelope(double f0, double c, double t);
/// e^{1 - exp(C t)} m0^{exp(C t)}.
double margin_envelope(double m0, double c, double t);
/// Smallest C >= 0 with f <= gronwall_envelope(f0, C, t); infinite if none.
double required_gronwall_constant(double f0, double f, double t);
/// Smallest C >= 0 with m >= margin_envelope(m0, C, t); infinite if none.
double required_margin_constant(double m0, double m, double t);

struct GronwallResult {
  FitReport report;
  std::vector<double> d0;
  std::vector<double> times;
  std::vector<std::vector<double>> f;  // f[k][j] for d0[k] at times[j]
};

/// Twin simulations: the reference run and, for each d0, a run with every
/// particle displaced by d0 in a seeded random direction (inward radial if
/// that would leave the disk). f(t) is the particle mean of |Y1 - Y2|.
/// One C is fitted over all d0. Passes when C is finite and, for each
/// smaller d0, f(t) <= 1.05 f_larger(t) at every record and
/// f(t_end) < f_larger(t_end). Requires the rk4 stepper so records align.
GronwallResult gronwall_experiment(const ConformalMap& map, const DiskVorticity& vort,
                                   std::span<const double> d0, const FlowConfig& cfg,
                                   std::uint64_t seed);

struct BoundaryResult {
  FitReport report;
  std::vector<double> initial_margins;  // per tracer
  std::vector<Trajectory> tracers;
};

/// Tracers at 1 - |y| = m for each margin m, on `per_margin` evenly spaced
/// angles. One C is fitted over all tracers; passes when every recorded
/// margin stays positive and C is finite.
BoundaryResult boundary_attainment_experiment(const ConformalMap& map, const DiskVorticity& vort,
                                              std::span<const double> margins,
                                              const FlowConfig& cfg, std::size_t per_margin = 8);

}  // namespace corner_euler
