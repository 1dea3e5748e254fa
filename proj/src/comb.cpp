#include "afc/comb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Dense>
#include <unsupported/Eigen/LevenbergMarquardt>
#include <unsupported/Eigen/NumericalDiff>

#include "afc/constants.hpp"
#include "afc/error.hpp"

namespace afc {

namespace {

constexpr double kFourLn2 = 2.772588722239781;  // 4 ln 2

// Gaussian A exp(-(x-μ)²/2Γ²) through the peak maxima. Seeded by a weighted
// quadratic fit to log(h), refined by LM in coordinates scaled to `scale`.
EnvelopeFit fit_envelope(std::span<const double> x, std::span<const double> h) {
  const std::size_t n = x.size();
  EnvelopeFit fit;
  const auto top = std::max_element(h.begin(), h.end()) - h.begin();
  fit.amplitude = h[static_cast<std::size_t>(top)];
  fit.center = x[static_cast<std::size_t>(top)];
  if (n < 3) {
    fit.gamma = n == 2 ? std::abs(x[1] - x[0]) : 0.0;
    return fit;
  }
  const double scale = std::max(x.back() - x.front(), 1e-300);
  const double x0 = fit.center;

  Eigen::MatrixXd a(static_cast<Eigen::Index>(n), 3);
  Eigen::VectorXd b(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const double u = (x[i] - x0) / scale;
    const double w = h[i];  // de-emphasize the noisy low teeth
    a(static_cast<Eigen::Index>(i), 0) = w;
    a(static_cast<Eigen::Index>(i), 1) = w * u;
    a(static_cast<Eigen::Index>(i), 2) = w * u * u;
    b(static_cast<Eigen::Index>(i)) = w * std::log(std::max(h[i], 1e-300));
  }
  const Eigen::Vector3d q = a.colPivHouseholderQr().solve(b);
  double mu_u = 0.0;
  double gamma_u = 0.5;
  double amp = fit.amplitude;
  if (q(2) < 0.0) {
    gamma_u = std::sqrt(-0.5 / q(2));
    mu_u = -q(1) / (2.0 * q(2));
    amp = std::exp(q(0) - q(1) * q(1) / (4.0 * q(2)));
  }

  struct Residual : Eigen::DenseFunctor<double> {
    std::vector<double> u, y;
    Residual(std::vector<double> uu, std::vector<double> yy)
        : DenseFunctor(3, static_cast<int>(uu.size())), u(std::move(uu)), y(std::move(yy)) {}
    int operator()(const InputType& p, ValueType& r) const {
      for (std::size_t i = 0; i < u.size(); ++i) {
        const double d = (u[i] - p(1)) / p(2);
        r(static_cast<Eigen::Index>(i)) = p(0) * std::exp(-0.5 * d * d) - y[i];
      }
      return 0;
    }
  };
  std::vector<double> u(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = (x[i] - x0) / scale;
  Residual f(u, std::vector<double>(h.begin(), h.end()));
  Eigen::NumericalDiff<Residual> df(f);
  Eigen::LevenbergMarquardt<Eigen::NumericalDiff<Residual>> lm(df);
  lm.setMaxfev(2000);
  Eigen::VectorXd p(3);
  p << amp, mu_u, gamma_u;
  lm.minimize(p);
  if (!std::isfinite(p(2)) || p(2) == 0.0) {
    throw NumericalError("envelope fit of peak heights did not converge");
  }
  fit.amplitude = p(0);
  fit.center = x0 + p(1) * scale;
  fit.gamma = std::abs(p(2)) * scale;
  return fit;
}

// x at which the straight line through (x0,y0),(x1,y1) crosses `level`.
double cross(double x0, double y0, double x1, double y1, double level) {
  if (y1 == y0) return 0.5 * (x0 + x1);
  return x0 + (level - y0) * (x1 - x0) / (y1 - y0);
}

}  // namespace

AfcProfile vc_to_afc(std::span<const double> v, std::span<const double> rho33, double omega_map) {
  if (!(omega_map > 0.0)) throw DomainError("mapping frequency must be positive");
  if (v.size() != rho33.size()) throw DomainError("velocity and rho33 sizes differ");
  AfcProfile out;
  out.omega_map = omega_map;
  out.delta.resize(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out.delta[i] = omega_map * v[i] / constants::c;
  out.rho33.assign(rho33.begin(), rho33.end());
  return out;
}

AfcProfile vc_to_afc(const VelocityComb& comb, double omega_map, bool weighted) {
  return vc_to_afc(comb.grid.values(), weighted ? comb.weighted : comb.rho33, omega_map);
}

std::vector<double> afc_to_velocity(std::span<const double> delta, double omega_map) {
  if (!(omega_map > 0.0)) throw DomainError("mapping frequency must be positive");
  std::vector<double> v(delta.size());
  for (std::size_t i = 0; i < delta.size(); ++i) v[i] = constants::c * delta[i] / omega_map;
  return v;
}

PeakSet detect_peaks(const AfcProfile& profile, double min_prominence) {
  const auto& x = profile.delta;
  const auto& y = profile.rho33;
  const std::size_t n = y.size();
  PeakSet out;
  if (n < 3) throw NumericalError("no peaks found: profile shorter than 3 samples");
  const double ymax = *std::max_element(y.begin(), y.end());
  if (!(ymax > 0.0)) throw NumericalError("no peaks found: profile is flat");
  const double threshold = min_prominence * ymax;

  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (!(y[i] > y[i - 1] && y[i] >= y[i + 1])) continue;
    // Prominence: lowest point on each side before a higher sample.
    std::size_t l = i;
    double left_min = y[i];
    std::size_t left_base = i;
    while (l > 0 && y[l - 1] <= y[i]) {
      --l;
      if (y[l] < left_min) {
        left_min = y[l];
        left_base = l;
      }
    }
    std::size_t r = i;
    double right_min = y[i];
    std::size_t right_base = i;
    while (r + 1 < n && y[r + 1] <= y[i]) {
      ++r;
      if (y[r] < right_min) {
        right_min = y[r];
        right_base = r;
      }
    }
    const double prom = y[i] - std::max(left_min, right_min);
    if (prom < threshold || prom <= 0.0) continue;

    const double level = y[i] - 0.5 * prom;
    std::size_t a = i;
    while (a > left_base && y[a] > level) --a;
    std::size_t b = i;
    while (b < right_base && y[b] > level) ++b;
    const double xl = y[a] <= level ? cross(x[a], y[a], x[a + 1], y[a + 1], level) : x[a];
    const double xr = y[b] <= level ? cross(x[b - 1], y[b - 1], x[b], y[b], level) : x[b];

    // Parabola through the three samples around the maximum.
    const double denom = y[i - 1] - 2.0 * y[i] + y[i + 1];
    double c = x[i];
    if (denom < 0.0) {
      const double off = 0.5 * (y[i - 1] - y[i + 1]) / denom;
      c = x[i] + off * 0.5 * (x[i + 1] - x[i - 1]);
    }
    out.centers.push_back(c);
    out.heights.push_back(y[i]);
    out.prominences.push_back(prom);
    out.fwhms.push_back(xr - xl);
  }
  if (out.centers.empty()) throw NumericalError("no peaks found above the prominence threshold");
  out.envelope = fit_envelope(out.centers, out.heights);
  return out;
}

MeasuredAfc measure_afc(const PeakSet& peaks) {
  const std::size_t n = peaks.centers.size();
  if (n < 2) throw NumericalError("tooth spacing unidentifiable: fewer than 2 teeth");
  std::vector<double> gaps(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) gaps[i] = peaks.centers[i + 1] - peaks.centers[i];
  std::vector<double> sorted = gaps;
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<long>(sorted.size() / 2), sorted.end());
  const double typical = sorted[sorted.size() / 2];

  // Least-squares line through (index, centre).
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double k = std::round((peaks.centers[i] - peaks.centers[0]) / typical);
    sx += k;
    sy += peaks.centers[i];
    sxx += k * k;
    sxy += k * peaks.centers[i];
  }
  const double nn = static_cast<double>(n);
  const double slope = (nn * sxy - sx * sy) / (nn * sxx - sx * sx);

  MeasuredAfc out;
  out.n_peaks_raw = n;
  const EnvelopeFit& env = peaks.envelope;
  double width_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double off = std::abs(peaks.centers[i] - env.center);
    if (off <= env.gamma) {
      width_sum += peaks.fwhms[i];
      ++out.n_core;
    }
    if (off <= std::sqrt(constants::two_pi) * env.gamma) ++out.n_peaks_base;
  }
  if (out.n_core == 0) throw NumericalError("no teeth within one envelope width of the centre");

  AfcMetrics& m = out.metrics;
  m.gamma = env.gamma;
  m.delta_sep = slope;
  m.peak_fwhm = width_sum / static_cast<double>(out.n_core);
  m.finesse = m.delta_sep / m.peak_fwhm;
  m.n_peaks = static_cast<double>(out.n_peaks_base);
  m.retrieval_time = constants::two_pi / m.delta_sep;
  return out;
}

double comb_model(double delta, double amplitude, double center, double gamma, double delta_sep,
                  double fwhm, double tooth_offset) {
  const double e0 = delta - center;
  const double env = amplitude * std::exp(-0.5 * e0 * e0 / (gamma * gamma));
  const double d = delta - tooth_offset;
  // Only teeth within ~6 widths contribute above double precision.
  const double reach = 6.0 * fwhm;
  const auto j_lo = static_cast<long>(std::floor((d - reach) / delta_sep));
  const auto j_hi = static_cast<long>(std::ceil((d + reach) / delta_sep));
  double sum = 0.0;
  for (long j = j_lo; j <= j_hi; ++j) {
    const double e = d - static_cast<double>(j) * delta_sep;
    sum += std::exp(-kFourLn2 * e * e / (fwhm * fwhm));
  }
  return env * sum;
}

CombFit fit_comb_model(const AfcProfile& profile, const PeakSet& peaks) {
  if (peaks.centers.size() < 2) {
    throw NumericalError("comb fit needs at least 2 teeth: spacing unidentifiable");
  }
  const MeasuredAfc seed = measure_afc(peaks);
  const double s = seed.metrics.delta_sep;

  struct Residual : Eigen::DenseFunctor<double> {
    const AfcProfile* p;
    double s;
    Residual(const AfcProfile* prof, double scale)
        : DenseFunctor(6, static_cast<int>(prof->delta.size())), p(prof), s(scale) {}
    int operator()(const InputType& q, ValueType& r) const {
      for (std::size_t i = 0; i < p->delta.size(); ++i) {
        r(static_cast<Eigen::Index>(i)) =
            comb_model(p->delta[i] / s, q(0), q(1), q(2), q(3), q(4), q(5)) - p->rho33[i];
      }
      return 0;
    }
  };
  Residual f(&profile, s);
  Eigen::NumericalDiff<Residual> df(f);
  Eigen::LevenbergMarquardt<Eigen::NumericalDiff<Residual>> lm(df);
  lm.setMaxfev(4000);
  lm.setXtol(1e-14);
  lm.setFtol(1e-14);
  const auto tallest = std::max_element(peaks.heights.begin(), peaks.heights.end()) -
                       peaks.heights.begin();
  Eigen::VectorXd q(6);
  q << peaks.envelope.amplitude, peaks.envelope.center / s, peaks.envelope.gamma / s, 1.0,
      seed.metrics.peak_fwhm / s, peaks.centers[static_cast<std::size_t>(tallest)] / s;
  const auto status = lm.minimize(q);
  if (status == Eigen::LevenbergMarquardtSpace::TooManyFunctionEvaluation ||
      !q.allFinite() || q(3) <= 0.0) {
    throw NumericalError("comb model fit did not converge");
  }
  CombFit out;
  out.amplitude = q(0);
  out.center = q(1) * s;
  out.gamma = std::abs(q(2)) * s;
  out.delta_sep = q(3) * s;
  out.fwhm = std::abs(q(4)) * s;
  out.tooth_offset = q(5) * s;
  out.residual = std::sqrt(lm.fvec().squaredNorm() / static_cast<double>(profile.delta.size()));
  out.iterations = static_cast<int>(lm.iterations());
  return out;
}

}  // namespace afc

namespace afc {

double inter_tooth_background(const AfcProfile& profile, const PeakSet& peaks) {
  const std::size_t n = peaks.centers.size();
  if (n < 2) throw NumericalError("background needs at least two teeth");
  const auto& x = profile.delta;
  const auto& y = profile.rho33;
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t p = 0; p + 1 < n; ++p) {
    const double lo = peaks.centers[p] + peaks.fwhms[p];
    const double hi = peaks.centers[p + 1] - peaks.fwhms[p + 1];
    double gap_min = std::numeric_limits<double>::infinity();
    std::size_t in_window = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] > peaks.centers[p] && x[i] < peaks.centers[p + 1]) gap_min = std::min(gap_min, y[i]);
      if (x[i] >= lo && x[i] <= hi) {
        sum += y[i];
        ++in_window;
      }
    }
    if (in_window == 0 && std::isfinite(gap_min)) {
      sum += gap_min;
      in_window = 1;
    }
    count += in_window;
  }
  if (count == 0) throw NumericalError("no samples between teeth");
  return sum / static_cast<double>(count);
}

}  // namespace afc
