#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qfc {

struct CurvePoint {
  double x = 0.0;
  double y = 0.0;
};

struct FitParameter {
  std::string name;
  double value = 0.0;
  double error = 0.0;
  bool fixed = false;
};

struct FitResult {
  std::vector<FitParameter> parameters;
  double chi2 = 0.0;
  double reduced_chi2 = 0.0;
  std::size_t dof = 0;
  int iterations = 0;
  bool converged = false;
  bool singular = false;
  std::vector<std::string> warnings;

  bool has(std::string_view name) const;
  /// Throws std::out_of_range for an unknown parameter name.
  double value(std::string_view name) const;
  double error(std::string_view name) const;
};

using ModelFn = std::function<double(double x, std::span<const double> params)>;

/// Weighted nonlinear least squares: minimize sum w_i (y_i - model(x_i, p))^2.
struct LeastSquaresProblem {
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> weights;  ///< empty = unit weights
  ModelFn model;
  std::vector<std::string> names;
  std::vector<double> initial;
  std::vector<bool> fixed;      ///< empty = all free
  std::vector<double> scale;    ///< typical magnitude per parameter, sets the derivative step
};

struct FitOptions {
  int max_iterations = 200;
  double relative_tolerance = 1e-8;
  /// Central-difference step relative to max(|p|, scale).
  double derivative_step = 1e-6;
};

/// Damped Gauss-Newton (Levenberg-Marquardt) with numerical Jacobians. Standard errors come
/// from the covariance (J^T W J)^-1 scaled by the reduced chi^2. Failure to converge and a
/// singular normal matrix are reported in the result, not thrown.
FitResult fit_least_squares(const LeastSquaresProblem& problem, const FitOptions& options = {});

struct BiexponentialOptions {
  bool fix_weight_zero = false;  ///< single exponential
  bool fit_offset = false;       ///< flat floor (dark counts, pile-up of earlier pulses)
};

/// Fits A [(1-w) exp(-t/tau_fast) + w exp(-t/tau_slow)] + offset to histogram counts with
/// Poisson weights 1/max(count, 1). Parameters: amplitude, tau_fast, tau_slow, weight, offset.
/// Needs at least 10 nonzero bins.
FitResult fit_biexponential(std::span<const CurvePoint> histogram, const BiexponentialOptions& options = {});

/// Least-squares fit of V0 exp(-|tau|/T2); parameters v0, t2. Needs at least 4 points.
FitResult fit_visibility_decay(std::span<const CurvePoint> points);

/// Fits A sinc^2(a (x - x0)) and reports amplitude, center, fwhm. Needs at least 6 points.
FitResult fit_sinc2(std::span<const CurvePoint> points);

/// Fits A sin^2(sqrt(eta P) L) with L fixed; parameters amplitude, normalized_efficiency.
/// x in W, y as efficiency; optional per-point weights.
FitResult fit_conversion_curve(std::span<const CurvePoint> points, double length_cm,
                               std::span<const double> weights = {});

struct FringeResult {
  double offset = 0.0;
  double amplitude = 0.0;
  double phase = 0.0;
  double i_max = 0.0;
  double i_min = 0.0;
  double visibility = 0.0;
  bool clamped = false;         ///< |amplitude| exceeded the offset (noise); V clamped to 1
  bool zero_amplitude = false;  ///< flat scan
};

/// Sine fit offset + amp cos(phi - phase) to count rates taken at the given phases (radians),
/// then V = (I_max - I_min) / (I_max + I_min). Needs >= 8 samples spanning one period.
FringeResult fringe_scan(std::span<const double> phases, std::span<const double> rates);

/// Rates sampled at phases 2 pi k / n, k = 0..n-1.
FringeResult fringe_scan(std::span<const double> rates);

/// Two-sided p-value of the Wald-Wolfowitz runs test on the residual signs.
double runs_test_p_value(std::span<const double> residuals);

}  // namespace qfc
