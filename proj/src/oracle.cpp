#include "belllab/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace belllab::oracle {

int chsh_combination(const CounterfactualQuadruple& q, const SignPattern& p) {
  return p.s[0] * q.x1 * q.y1 + p.s[1] * q.x1 * q.y2 + p.s[2] * q.x2 * q.y1 +
         p.s[3] * q.x2 * q.y2;
}

EnumerationReport enumerate_quadruples(OutcomeDomain domain) {
  const std::vector<int> values = domain == OutcomeDomain::PlusMinusOne
                                      ? std::vector<int>{-1, +1}
                                      : std::vector<int>{-1, 0, +1};
  EnumerationReport report;
  report.domain = domain;
  const auto patterns = odd_sign_patterns();
  for (std::size_t i = 0; i < 8; ++i) {
    report.patterns[i].pattern = patterns[i];
    report.patterns[i].max_value = std::numeric_limits<int>::min();
  }
  for (int x1 : values) {
    for (int x2 : values) {
      for (int y1 : values) {
        for (int y2 : values) {
          const CounterfactualQuadruple q{x1, x2, y1, y2};
          report.n_assignments += 1;
          for (std::size_t i = 0; i < 8; ++i) {
            const int z = chsh_combination(q, patterns[i]);
            if (z > report.patterns[i].max_value) {
              report.patterns[i].max_value = z;
              report.patterns[i].argmax = q;
            }
          }
        }
      }
    }
  }
  report.overall_max = std::numeric_limits<int>::min();
  for (const auto& p : report.patterns) {
    report.overall_max = std::max(report.overall_max, p.max_value);
  }
  return report;
}

namespace {

constexpr double kInnerTol = 1e-10;
constexpr double kOuterTol = 5e-8;
constexpr int kMaxDepth = 48;
constexpr double kDegenerateProbability = 1e-12;

// Length of {beta in [0, pi] : cos(beta) >= d}.
double arc_cos_ge(double d) {
  if (d >= 1.0) return 0.0;
  if (d <= -1.0) return kPi;
  return std::acos(d);
}

// Length of {beta in [0, pi] : cos(beta) <= d}.
double arc_cos_le(double d) {
  if (d >= 1.0) return kPi;
  if (d <= -1.0) return 0.0;
  return kPi - std::acos(d);
}

template <std::size_t N>
using Vec = std::array<double, N>;

template <std::size_t N>
Vec<N> simpson_slice(double a, double b, const Vec<N>& fa, const Vec<N>& fm,
                     const Vec<N>& fb) {
  Vec<N> out;
  const double h = (b - a) / 6.0;
  for (std::size_t i = 0; i < N; ++i) out[i] = h * (fa[i] + 4.0 * fm[i] + fb[i]);
  return out;
}

// Vector-valued adaptive Simpson with Richardson correction. Deterministic:
// refinement depends only on the integrand values, never on timing or
// iteration order.
template <std::size_t N, class F>
struct AdaptiveSimpson {
  const F& f;
  int max_depth;

  Vec<N> refine(double a, double b, const Vec<N>& fa, const Vec<N>& fm, const Vec<N>& fb,
                const Vec<N>& whole, double tol, int depth) const {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const Vec<N> flm = f(lm);
    const Vec<N> frm = f(rm);
    const Vec<N> left = simpson_slice(a, m, fa, flm, fm);
    const Vec<N> right = simpson_slice(m, b, fm, frm, fb);
    Vec<N> corrected;
    bool converged = true;
    for (std::size_t i = 0; i < N; ++i) {
      const double err = left[i] + right[i] - whole[i];
      corrected[i] = left[i] + right[i] + err / 15.0;
      if (std::abs(err) > 15.0 * tol) converged = false;
    }
    if (converged || depth >= max_depth) return corrected;
    const Vec<N> lo = refine(a, m, fa, flm, fm, left, 0.5 * tol, depth + 1);
    const Vec<N> hi = refine(m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
    Vec<N> out;
    for (std::size_t i = 0; i < N; ++i) out[i] = lo[i] + hi[i];
    return out;
  }

  Vec<N> integrate(double a, double b, double tol) const {
    if (!(b > a)) return Vec<N>{};
    const Vec<N> fa = f(a);
    const Vec<N> fb = f(b);
    const Vec<N> fm = f(0.5 * (a + b));
    const Vec<N> whole = simpson_slice(a, b, fa, fm, fb);
    return refine(a, b, fa, fm, fb, whole, tol, 0);
  }
};

template <std::size_t N, class F>
Vec<N> adaptive_simpson(const F& f, double a, double b, double tol, int max_depth = kMaxDepth) {
  return AdaptiveSimpson<N, F>{f, max_depth}.integrate(a, b, tol);
}

struct BandIntegrals {
  double n_pp = 0.0;  // P(e.a >= t and e.b >= t)
  double n_pm = 0.0;  // P(e.a >= t and e.b <= -t)
};

// Sphere-band geometry for a fixed threshold t: with a on the polar axis and
// b at angle theta, e.a = x and e.b = A(x) cos(beta) + B(x). The beta extent
// of each detection quadrant is an arccos, so one x-integral remains.
BandIntegrals band_integrals(double t, double theta, double tol) {
  if (t >= 1.0) return {};
  const double sin_theta = std::sin(theta);
  const double cos_theta = std::cos(theta);
  const auto integrand = [&](double x) -> Vec<2> {
    const double a = sin_theta * std::sqrt(std::max(0.0, 1.0 - x * x));
    const double b = cos_theta * x;
    if (a <= 1e-14) {
      return Vec<2>{b >= t ? kPi : 0.0, b <= -t ? kPi : 0.0};
    }
    return Vec<2>{arc_cos_ge((t - b) / a), arc_cos_le((-t - b) / a)};
  };
  const Vec<2> raw = adaptive_simpson<2>(integrand, t, 1.0, tol);
  return BandIntegrals{raw[0] / (2.0 * kPi), raw[1] / (2.0 * kPi)};
}

double validated_threshold(const ThresholdFn& tau, double s) {
  const double t = tau(s);
  if (!std::isfinite(t) || t < -1e-9 || t > 1.0 + 1e-9) {
    std::ostringstream msg;
    msg << "pearle_quadrature: threshold value " << t << " at s=" << s
        << " is outside [0, 1]";
    throw std::domain_error(msg.str());
  }
  return std::clamp(t, 0.0, 1.0);
}

double validated_density(const DensityFn& density, double s) {
  const double w = density(s);
  if (!std::isfinite(w) || w < 0.0) {
    std::ostringstream msg;
    msg << "pearle_quadrature: density value " << w << " at s=" << s << " is invalid";
    throw std::domain_error(msg.str());
  }
  return w;
}

}  // namespace

QuadratureResult pearle_quadrature(double theta, const ThresholdFn& tau,
                                   const DensityFn& s_density) {
  const auto integrand = [&](double s) -> Vec<3> {
    const double w = validated_density(s_density, s);
    if (w == 0.0) return Vec<3>{0.0, 0.0, 0.0};
    const double t = validated_threshold(tau, s);
    const BandIntegrals bands = band_integrals(t, theta, kInnerTol);
    const double joint = 2.0 * (bands.n_pp + bands.n_pm);
    const double signed_sum = 2.0 * (bands.n_pm - bands.n_pp);
    return Vec<3>{w, w * joint, w * signed_sum};
  };
  const Vec<3> sums = adaptive_simpson<3>(integrand, 0.0, 1.0, kOuterTol);
  if (std::abs(sums[0] - 1.0) > 1e-6) {
    std::ostringstream msg;
    msg << "pearle_quadrature: s-density integrates to " << sums[0] << ", expected 1";
    throw std::domain_error(msg.str());
  }
  QuadratureResult out;
  out.detection_probability = std::max(0.0, sums[1]);
  if (out.detection_probability > kDegenerateProbability) {
    out.correlation = std::clamp(sums[2] / out.detection_probability, -1.0, 1.0);
  }
  return out;
}

ThresholdCertificate verify_threshold(const ThresholdFn& tau, const DensityFn& s_density,
                                      std::span<const double> grid, double tol) {
  ThresholdCertificate cert;
  cert.tolerance = tol;
  cert.pass = true;
  cert.samples.reserve(grid.size());
  for (const double theta : grid) {
    AngleSample sample;
    sample.theta = theta;
    const QuadratureResult q = pearle_quadrature(theta, tau, s_density);
    sample.detection_probability = q.detection_probability;
    sample.correlation = q.correlation;
    if (!q.correlation.has_value()) {
      sample.deviation = std::numeric_limits<double>::infinity();
      if (cert.pass) {
        cert.pass = false;
        cert.failing_angle = theta;
        cert.failure_reason = "empty detection set";
      }
    } else {
      sample.deviation = std::abs(*q.correlation + std::cos(theta));
      if (sample.deviation > cert.max_abs_deviation) {
        cert.max_abs_deviation = sample.deviation;
        cert.max_deviation_angle = theta;
      }
      if (sample.deviation > tol && cert.pass) {
        cert.pass = false;
        cert.failing_angle = theta;
        cert.failure_reason = "deviation";
      }
    }
    cert.samples.push_back(sample);
  }
  return cert;
}

namespace {

// Euclidean projection onto the probability simplex (Duchi et al. style).
void project_to_simplex(std::vector<double>& w) {
  std::vector<double> u = w;
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumulative = 0.0;
  double threshold = 0.0;
  int support = 0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    cumulative += u[j];
    const double candidate = (cumulative - 1.0) / static_cast<double>(j + 1);
    if (u[j] - candidate > 0.0) {
      support = static_cast<int>(j + 1);
      threshold = candidate;
    }
  }
  (void)support;
  for (double& x : w) x = std::max(0.0, x - threshold);
}

}  // namespace

double SolvedThreshold::operator()(double s) const {
  if (!(s >= 0.0 && s <= 1.0)) {
    throw std::domain_error("solved threshold: s must lie in [0, 1]");
  }
  // tau(s) = F^{-1}(1 - s): smallest tabulated t with CDF >= 1 - s.
  const double q = 1.0 - s;
  const auto it = std::lower_bound(cdf_.begin(), cdf_.end(), q);
  if (it == cdf_.begin()) return t_grid_.front();
  if (it == cdf_.end()) return t_grid_.back();
  const std::size_t j = static_cast<std::size_t>(it - cdf_.begin());
  const double c0 = cdf_[j - 1];
  const double c1 = cdf_[j];
  if (c1 <= c0) return t_grid_[j];
  const double frac = (q - c0) / (c1 - c0);
  return t_grid_[j - 1] + frac * (t_grid_[j] - t_grid_[j - 1]);
}

SolvedThreshold solve_threshold(std::span<const double> grid, double tol) {
  constexpr std::size_t kBins = 160;
  constexpr int kMaxIterations = 60000;
  const std::size_t n_angles = grid.size();
  if (n_angles == 0) throw std::invalid_argument("solve_threshold: empty angle grid");

  // Forward map on the bin basis: row i is the linear functional whose zero
  // expresses c(theta_i) = -cos(theta_i) for a threshold distribution given
  // by bin masses w.
  std::vector<double> joint(n_angles * kBins);     // Q(t_k, theta_i)
  std::vector<double> residual_op(n_angles * kBins);  // R + cos(theta) Q
  for (std::size_t i = 0; i < n_angles; ++i) {
    const double theta = grid[i];
    const double c = std::cos(theta);
    for (std::size_t k = 0; k < kBins; ++k) {
      const double t = (static_cast<double>(k) + 0.5) / static_cast<double>(kBins);
      const BandIntegrals bands = band_integrals(t, theta, 1e-9);
      const double q = 2.0 * (bands.n_pp + bands.n_pm);
      const double r = 2.0 * (bands.n_pm - bands.n_pp);
      joint[i * kBins + k] = q;
      residual_op[i * kBins + k] = r + c * q;
    }
  }

  const auto apply = [&](const std::vector<double>& w, std::vector<double>& out) {
    for (std::size_t i = 0; i < n_angles; ++i) {
      double acc = 0.0;
      const double* row = &residual_op[i * kBins];
      for (std::size_t k = 0; k < kBins; ++k) acc += row[k] * w[k];
      out[i] = acc;
    }
  };
  const auto apply_transpose = [&](const std::vector<double>& r, std::vector<double>& out) {
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t i = 0; i < n_angles; ++i) {
      const double* row = &residual_op[i * kBins];
      for (std::size_t k = 0; k < kBins; ++k) out[k] += row[k] * r[i];
    }
  };

  // Lipschitz constant of the least-squares gradient by power iteration.
  std::vector<double> v(kBins, 1.0 / std::sqrt(static_cast<double>(kBins)));
  std::vector<double> mv(n_angles), mtv(kBins);
  double lipschitz = 1.0;
  for (int it = 0; it < 100; ++it) {
    apply(v, mv);
    apply_transpose(mv, mtv);
    double norm = 0.0;
    for (double x : mtv) norm += x * x;
    norm = std::sqrt(norm);
    if (norm == 0.0) break;
    lipschitz = norm;
    for (std::size_t k = 0; k < kBins; ++k) v[k] = mtv[k] / norm;
  }
  const double step = 1.0 / std::max(lipschitz, 1e-12);

  // FISTA on the simplex, deterministic, monitored by the worst per-angle
  // correlation deviation.
  std::vector<double> w(kBins, 1.0 / static_cast<double>(kBins));
  std::vector<double> y = w;
  std::vector<double> w_prev = w;
  std::vector<double> rvec(n_angles), grad(kBins);
  double momentum = 1.0;
  double worst = std::numeric_limits<double>::infinity();
  int iterations = 0;

  const auto measure_worst = [&](const std::vector<double>& weights) {
    apply(weights, rvec);
    double m = 0.0;
    for (std::size_t i = 0; i < n_angles; ++i) {
      double p = 0.0;
      const double* row = &joint[i * kBins];
      for (std::size_t k = 0; k < kBins; ++k) p += row[k] * weights[k];
      if (p <= kDegenerateProbability) return std::numeric_limits<double>::infinity();
      m = std::max(m, std::abs(rvec[i]) / p);
    }
    return m;
  };

  for (int it = 1; it <= kMaxIterations; ++it) {
    iterations = it;
    apply(y, rvec);
    apply_transpose(rvec, grad);
    for (std::size_t k = 0; k < kBins; ++k) w[k] = y[k] - step * grad[k];
    project_to_simplex(w);
    const double next_momentum = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
    const double mix = (momentum - 1.0) / next_momentum;
    for (std::size_t k = 0; k < kBins; ++k) y[k] = w[k] + mix * (w[k] - w_prev[k]);
    momentum = next_momentum;
    w_prev = w;
    if (it % 500 == 0 || it == kMaxIterations) {
      worst = measure_worst(w);
      if (worst <= 0.5 * tol) break;
    }
  }
  if (!(worst <= tol)) {
    std::ostringstream msg;
    msg << "solve_threshold: no convergence after " << iterations
        << " iterations, max residual " << worst;
    throw SolverFailure(msg.str(), worst);
  }

  std::vector<double> t_edges(kBins + 1);
  std::vector<double> cdf(kBins + 1);
  cdf[0] = 0.0;
  for (std::size_t k = 0; k <= kBins; ++k) {
    t_edges[k] = static_cast<double>(k) / static_cast<double>(kBins);
  }
  for (std::size_t k = 0; k < kBins; ++k) cdf[k + 1] = cdf[k] + w[k];
  // Normalize away floating-point drift; the simplex projection keeps the
  // total within machine epsilon of 1.
  const double total = cdf.back();
  if (total > 0.0) {
    for (double& c : cdf) c /= total;
  }
  cdf.back() = 1.0;
  return SolvedThreshold(std::move(t_edges), std::move(cdf), worst, iterations);
}

std::vector<double> angle_grid(std::size_t count) {
  if (count < 2) throw std::invalid_argument("angle_grid: need at least 2 angles");
  std::vector<double> grid(count);
  for (std::size_t i = 0; i < count; ++i) {
    grid[i] = kPi * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  return grid;
}

}  // namespace belllab::oracle
