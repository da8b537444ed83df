#include "qfc/fitting.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "qfc/error.hpp"
#include "qfc/optics.hpp"
#include "qfc/units.hpp"

namespace qfc {

bool FitResult::has(std::string_view name) const {
  return std::any_of(parameters.begin(), parameters.end(), [&](const FitParameter& p) { return p.name == name; });
}

double FitResult::value(std::string_view name) const {
  for (const auto& p : parameters)
    if (p.name == name) return p.value;
  throw std::out_of_range("FitResult: no parameter named " + std::string(name));
}

double FitResult::error(std::string_view name) const {
  for (const auto& p : parameters)
    if (p.name == name) return p.error;
  throw std::out_of_range("FitResult: no parameter named " + std::string(name));
}

namespace {

struct Evaluation {
  Eigen::VectorXd residual;  // sqrt(w) (y - f)
  double chi2 = std::numeric_limits<double>::infinity();
  bool finite = false;
};

Evaluation evaluate(const LeastSquaresProblem& pb, const std::vector<double>& p) {
  const auto n = pb.x.size();
  Evaluation ev;
  ev.residual.resize(static_cast<Eigen::Index>(n));
  double chi2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = pb.weights.empty() ? 1.0 : pb.weights[i];
    const double r = std::sqrt(w) * (pb.y[i] - pb.model(pb.x[i], p));
    ev.residual[static_cast<Eigen::Index>(i)] = r;
    chi2 += r * r;
  }
  ev.finite = std::isfinite(chi2);
  ev.chi2 = chi2;
  return ev;
}

}  // namespace

FitResult fit_least_squares(const LeastSquaresProblem& pb, const FitOptions& opt) {
  const std::size_t n = pb.x.size();
  const std::size_t m = pb.initial.size();
  if (pb.y.size() != n || (!pb.weights.empty() && pb.weights.size() != n)) {
    throw ContractError("fit_least_squares: x, y and weights must have equal length");
  }
  if (pb.names.size() != m || (!pb.fixed.empty() && pb.fixed.size() != m) ||
      (!pb.scale.empty() && pb.scale.size() != m)) {
    throw ContractError("fit_least_squares: parameter metadata size mismatch");
  }

  std::vector<std::size_t> free;
  for (std::size_t k = 0; k < m; ++k)
    if (pb.fixed.empty() || !pb.fixed[k]) free.push_back(k);
  const std::size_t nf = free.size();
  if (n < nf) throw FitError("fit_least_squares: fewer points than free parameters");

  std::vector<double> p = pb.initial;
  Evaluation cur = evaluate(pb, p);
  if (!cur.finite) throw FitError("fit_least_squares: model is not finite at the initial guess");

  auto step_for = [&](std::size_t k) {
    const double s = pb.scale.empty() ? 0.0 : std::abs(pb.scale[k]);
    return opt.derivative_step * std::max({std::abs(p[k]), s, 1e-300});
  };

  auto jacobian = [&]() {
    Eigen::MatrixXd jac(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(nf));
    for (std::size_t c = 0; c < nf; ++c) {
      const std::size_t k = free[c];
      const double h = step_for(k);
      std::vector<double> hi = p;
      std::vector<double> lo = p;
      hi[k] += h;
      lo[k] -= h;
      for (std::size_t i = 0; i < n; ++i) {
        const double w = pb.weights.empty() ? 1.0 : pb.weights[i];
        // Derivative of the model, scaled like the residual.
        jac(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) =
            std::sqrt(w) * (pb.model(pb.x[i], hi) - pb.model(pb.x[i], lo)) / (2.0 * h);
      }
    }
    return jac;
  };

  FitResult result;
  double lambda = 1e-3;
  Eigen::MatrixXd jac = jacobian();
  for (result.iterations = 0; result.iterations < opt.max_iterations; ++result.iterations) {
    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    const Eigen::VectorXd grad = jac.transpose() * cur.residual;

    bool accepted = false;
    bool small_step = false;
    while (lambda < 1e16) {
      Eigen::MatrixXd damped = jtj;
      for (Eigen::Index d = 0; d < damped.rows(); ++d) damped(d, d) += lambda * std::max(jtj(d, d), 1e-300);
      const Eigen::VectorXd delta = damped.ldlt().solve(grad);
      if (!delta.allFinite()) {
        lambda *= 10.0;
        continue;
      }
      std::vector<double> trial = p;
      double rel = 0.0;
      for (std::size_t c = 0; c < nf; ++c) {
        const std::size_t k = free[c];
        trial[k] += delta[static_cast<Eigen::Index>(c)];
        const double s = pb.scale.empty() ? 0.0 : std::abs(pb.scale[k]);
        rel = std::max(rel, std::abs(delta[static_cast<Eigen::Index>(c)]) / std::max({std::abs(p[k]), s, 1e-300}));
      }
      const Evaluation ev = evaluate(pb, trial);
      if (ev.finite && ev.chi2 <= cur.chi2) {
        p = std::move(trial);
        cur = ev;
        lambda = std::max(lambda / 10.0, 1e-12);
        accepted = true;
        small_step = rel < opt.relative_tolerance;
        break;
      }
      if (rel < opt.relative_tolerance * 1e-3) {
        // Steps no longer change the parameters; the minimum is reached to working precision.
        small_step = true;
        break;
      }
      lambda *= 10.0;
    }
    if (small_step || (!accepted && cur.chi2 == 0.0)) {
      result.converged = true;
      break;
    }
    if (!accepted) break;
    if (cur.chi2 == 0.0) {
      result.converged = true;
      break;
    }
    jac = jacobian();
  }
  if (!result.converged) result.warnings.push_back("did not converge");

  result.chi2 = cur.chi2;
  result.dof = n > nf ? n - nf : 0;
  result.reduced_chi2 = result.dof > 0 ? cur.chi2 / static_cast<double>(result.dof) : 0.0;

  jac = jacobian();
  // Invert the normal matrix in correlation form so that parameters of very different
  // magnitude do not masquerade as a rank deficiency.
  const Eigen::MatrixXd jtj = jac.transpose() * jac;
  const Eigen::VectorXd diag = jtj.diagonal();
  Eigen::VectorXd errs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(nf));
  bool singular = (diag.array() <= 0.0).any() || !jtj.allFinite();
  if (nf > 0 && !singular) {
    const Eigen::VectorXd inv_sqrt = diag.array().sqrt().inverse();
    const Eigen::MatrixXd corr = inv_sqrt.asDiagonal() * jtj * inv_sqrt.asDiagonal();
    Eigen::FullPivLU<Eigen::MatrixXd> lu(corr);
    lu.setThreshold(1e-12);
    if (!lu.isInvertible()) {
      singular = true;
    } else {
      const Eigen::MatrixXd cov =
          inv_sqrt.asDiagonal() * lu.inverse() * inv_sqrt.asDiagonal() * result.reduced_chi2;
      for (std::size_t c = 0; c < nf; ++c) {
        errs[static_cast<Eigen::Index>(c)] =
            std::sqrt(std::max(0.0, cov(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(c))));
      }
    }
  }
  if (nf > 0 && singular) {
    result.singular = true;
    result.warnings.push_back("singular normal matrix");
  }

  for (std::size_t k = 0; k < m; ++k) {
    FitParameter fp{pb.names[k], p[k], 0.0, !(pb.fixed.empty() || !pb.fixed[k])};
    for (std::size_t c = 0; c < nf; ++c)
      if (free[c] == k) fp.error = errs[static_cast<Eigen::Index>(c)];
    result.parameters.push_back(std::move(fp));
  }
  return result;
}

namespace {

// Log-linear regression of y = c exp(slope x) over points with y > 0.
bool log_linear(std::span<const CurvePoint> pts, double& slope, double& intercept) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (const auto& q : pts) {
    if (q.y <= 0.0) continue;
    const double ly = std::log(q.y);
    sx += q.x;
    sy += ly;
    sxx += q.x * q.x;
    sxy += q.x * ly;
    ++cnt;
  }
  if (cnt < 2) return false;
  const double den = cnt * sxx - sx * sx;
  if (den == 0.0) return false;
  slope = (cnt * sxy - sx * sy) / den;
  intercept = (sy - slope * sx) / cnt;
  return true;
}

}  // namespace

FitResult fit_biexponential(std::span<const CurvePoint> hist, const BiexponentialOptions& options) {
  const auto nonzero = std::count_if(hist.begin(), hist.end(), [](const CurvePoint& q) { return q.y > 0.0; });
  if (nonzero < 10) throw FitError("fit_biexponential: need at least 10 nonzero bins");

  const double range = hist.back().x - hist.front().x;
  double offset0 = 0.0;
  if (options.fit_offset) {
    const std::size_t tail = std::max<std::size_t>(hist.size() / 10, 1);
    offset0 = std::numeric_limits<double>::infinity();
    for (std::size_t i = hist.size() - tail; i < hist.size(); ++i) offset0 = std::min(offset0, hist[i].y);
  }

  std::size_t peak = 0;
  for (std::size_t i = 1; i < hist.size(); ++i)
    if (hist[i].y > hist[peak].y) peak = i;
  const double top = hist[peak].y - offset0;
  double tau_fast0 = range / 5.0;
  for (std::size_t i = peak; i < hist.size(); ++i) {
    if (hist[i].y - offset0 <= top / std::exp(1.0)) {
      tau_fast0 = std::max(hist[i].x - hist[peak].x, (hist[1].x - hist[0].x));
      break;
    }
  }

  double tau_slow0 = 10.0 * range;
  double weight0 = 0.0;
  if (!options.fix_weight_zero) {
    std::vector<CurvePoint> tail;
    for (std::size_t i = hist.size() / 2; i < hist.size(); ++i) tail.push_back({hist[i].x, hist[i].y - offset0});
    double slope = 0.0;
    double intercept = 0.0;
    if (log_linear(tail, slope, intercept) && slope < 0.0) tau_slow0 = std::max(-1.0 / slope, 3.0 * tau_fast0);
    const double amp0 = top * std::exp(hist[peak].x / tau_fast0);
    weight0 = std::clamp(std::exp(intercept) / std::max(amp0, 1e-300), 1e-3, 0.5);
  }
  const double amp0 = std::max(top, 1.0) * std::exp(hist[peak].x / tau_fast0);

  LeastSquaresProblem pb;
  for (const auto& q : hist) {
    pb.x.push_back(q.x);
    pb.y.push_back(q.y);
    pb.weights.push_back(1.0 / std::max(q.y, 1.0));
  }
  pb.model = [](double t, std::span<const double> p) {
    return p[0] * ((1.0 - p[3]) * std::exp(-t / p[1]) + p[3] * std::exp(-t / p[2])) + p[4];
  };
  pb.names = {"amplitude", "tau_fast", "tau_slow", "weight", "offset"};
  pb.initial = {amp0, tau_fast0, tau_slow0, weight0, offset0};
  pb.fixed = {false, false, options.fix_weight_zero, options.fix_weight_zero, !options.fit_offset};
  pb.scale = {amp0, tau_fast0, tau_slow0, 1e-2, std::max(offset0, 1.0)};
  auto result = fit_least_squares(pb);
  if (result.value("tau_fast") <= 0.0 || (!options.fix_weight_zero && result.value("tau_slow") <= 0.0)) {
    result.warnings.push_back("non-physical lifetime");
  }
  return result;
}

FitResult fit_visibility_decay(std::span<const CurvePoint> points) {
  if (points.size() < 4) throw FitError("fit_visibility_decay: need at least 4 delay points");
  if (std::all_of(points.begin(), points.end(), [](const CurvePoint& q) { return q.y == 0.0; })) {
    throw FitError("fit_visibility_decay: all visibilities are zero");
  }
  std::vector<CurvePoint> folded;
  double vmax = 0.0;
  double tmax = 0.0;
  for (const auto& q : points) {
    folded.push_back({std::abs(q.x), q.y});
    vmax = std::max(vmax, q.y);
    tmax = std::max(tmax, std::abs(q.x));
  }
  double slope = 0.0;
  double intercept = 0.0;
  double t20 = tmax > 0.0 ? tmax / 2.0 : 1.0;
  double v00 = vmax;
  if (log_linear(folded, slope, intercept) && slope < 0.0) {
    t20 = -1.0 / slope;
    v00 = std::exp(intercept);
  }

  LeastSquaresProblem pb;
  for (const auto& q : points) {
    pb.x.push_back(q.x);
    pb.y.push_back(q.y);
  }
  pb.model = [](double tau, std::span<const double> p) { return p[0] * std::exp(-std::abs(tau) / p[1]); };
  pb.names = {"v0", "t2"};
  pb.initial = {v00, t20};
  pb.scale = {1.0, t20};
  return fit_least_squares(pb);
}

FitResult fit_sinc2(std::span<const CurvePoint> points) {
  if (points.size() < 6) throw FitError("fit_sinc2: need at least 6 points");
  std::size_t peak = 0;
  for (std::size_t i = 1; i < points.size(); ++i)
    if (points[i].y > points[peak].y) peak = i;
  if (peak == 0 || peak + 1 == points.size()) throw FitError("fit_sinc2: points do not bracket the peak");
  const double a0 = points[peak].y;
  const double x00 = points[peak].x;
  // Half-maximum crossings on either side.
  double left = points.front().x;
  double right = points.back().x;
  for (std::size_t i = peak; i-- > 0;) {
    if (points[i].y <= a0 / 2.0) {
      left = points[i].x;
      break;
    }
  }
  for (std::size_t i = peak; i < points.size(); ++i) {
    if (points[i].y <= a0 / 2.0) {
      right = points[i].x;
      break;
    }
  }
  const double fwhm0 = std::max(right - left, 1e-12);

  LeastSquaresProblem pb;
  for (const auto& q : points) {
    pb.x.push_back(q.x);
    pb.y.push_back(q.y);
  }
  pb.model = [](double x, std::span<const double> p) {
    return p[0] * sinc2(2.0 * kSinc2HalfMaxArg * (x - p[1]) / p[2]);
  };
  pb.names = {"amplitude", "center", "fwhm"};
  pb.initial = {a0, x00, fwhm0};
  pb.scale = {std::abs(a0), fwhm0, fwhm0};
  return fit_least_squares(pb);
}

FitResult fit_conversion_curve(std::span<const CurvePoint> points, double length_cm, std::span<const double> weights) {
  if (points.size() < 3) throw FitError("fit_conversion_curve: need at least 3 points");
  if (!weights.empty() && weights.size() != points.size()) throw ContractError("fit_conversion_curve: weight count");
  std::size_t peak = 0;
  for (std::size_t i = 1; i < points.size(); ++i)
    if (points[i].y > points[peak].y) peak = i;
  if (points[peak].x <= 0.0) throw FitError("fit_conversion_curve: no conversion at positive power");
  const double half_pi = kPi / 2.0;
  const double eta0 = half_pi * half_pi / (points[peak].x * length_cm * length_cm);

  LeastSquaresProblem pb;
  for (const auto& q : points) {
    pb.x.push_back(q.x);
    pb.y.push_back(q.y);
  }
  pb.weights.assign(weights.begin(), weights.end());
  pb.model = [length_cm](double power, std::span<const double> p) {
    const double s = std::sin(std::sqrt(std::max(p[1] * power, 0.0)) * length_cm);
    return p[0] * s * s;
  };
  pb.names = {"amplitude", "normalized_efficiency"};
  pb.initial = {points[peak].y, eta0};
  pb.scale = {1.0, eta0};
  return fit_least_squares(pb);
}

FringeResult fringe_scan(std::span<const double> phases, std::span<const double> rates) {
  if (phases.size() != rates.size()) throw ContractError("fringe_scan: phases and rates differ in length");
  const std::size_t n = rates.size();
  if (n < 8) throw ContractError("fringe_scan: need at least 8 phase samples");
  const auto [lo, hi] = std::minmax_element(phases.begin(), phases.end());
  if (*hi - *lo < 2.0 * kPi * (1.0 - 1.0 / static_cast<double>(n)) - 1e-9) {
    throw ContractError("fringe_scan: phase samples must span one period");
  }

  Eigen::MatrixXd design(static_cast<Eigen::Index>(n), 3);
  Eigen::VectorXd y(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    design(r, 0) = 1.0;
    design(r, 1) = std::cos(phases[i]);
    design(r, 2) = std::sin(phases[i]);
    y[r] = rates[i];
  }
  const Eigen::Vector3d coef = design.colPivHouseholderQr().solve(y);

  FringeResult out;
  out.offset = coef[0];
  out.amplitude = std::hypot(coef[1], coef[2]);
  out.phase = std::atan2(coef[2], coef[1]);
  const double scale = std::max(std::abs(out.offset), 1e-300);
  if (out.amplitude <= 1e-12 * scale || out.offset <= 0.0) {
    out.zero_amplitude = out.amplitude <= 1e-12 * scale;
    out.i_max = out.i_min = out.offset;
    out.visibility = 0.0;
    return out;
  }
  out.i_max = out.offset + out.amplitude;
  out.i_min = out.offset - out.amplitude;
  out.visibility = (out.i_max - out.i_min) / (out.i_max + out.i_min);
  if (out.visibility > 1.0) {
    out.visibility = 1.0;
    out.clamped = true;
  }
  return out;
}

FringeResult fringe_scan(std::span<const double> rates) {
  std::vector<double> phases(rates.size());
  for (std::size_t k = 0; k < rates.size(); ++k)
    phases[k] = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(rates.size());
  return fringe_scan(phases, rates);
}

double runs_test_p_value(std::span<const double> residuals) {
  double n1 = 0, n2 = 0, runs = 0;
  int last = 0;
  for (double r : residuals) {
    if (r == 0.0) continue;
    const int s = r > 0.0 ? 1 : -1;
    (s > 0 ? n1 : n2) += 1.0;
    if (s != last) runs += 1.0;
    last = s;
  }
  const double n = n1 + n2;
  if (n1 == 0.0 || n2 == 0.0) return 0.0;
  const double mu = 2.0 * n1 * n2 / n + 1.0;
  const double var = (mu - 1.0) * (mu - 2.0) / (n - 1.0);
  if (var <= 0.0) return 1.0;
  const double z = (runs - mu) / std::sqrt(var);
  return std::erfc(std::abs(z) / std::sqrt(2.0));
}

}  // namespace qfc
