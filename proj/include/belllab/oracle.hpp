#ifndef BELLLAB_ORACLE_HPP
#define BELLLAB_ORACLE_HPP

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "belllab/core.hpp"
#include "belllab/models.hpp"

namespace belllab::oracle {

enum class OutcomeDomain { PlusMinusOne, WithZero };

struct PatternMaximum {
  SignPattern pattern;
  int max_value = 0;
  CounterfactualQuadruple argmax;
};

struct EnumerationReport {
  OutcomeDomain domain = OutcomeDomain::PlusMinusOne;
  std::size_t n_assignments = 0;  // 16 or 81
  std::array<PatternMaximum, 8> patterns;
  int overall_max = 0;
};

// Exhausts every assignment of the counterfactual quadruple over the chosen
// outcome domain and records the exact maximum of each of the 8 one-sided
// four-correlation expressions. No tolerances: the bound is an integer fact.
EnumerationReport enumerate_quadruples(OutcomeDomain domain);

// Z = s1 x1 y1 + s2 x1 y2 + s3 x2 y1 + s4 x2 y2 for one assignment.
int chsh_combination(const CounterfactualQuadruple& q, const SignPattern& p);

using DensityFn = std::function<double(double)>;

inline DensityFn uniform_density() {
  return [](double) { return 1.0; };
}

struct QuadratureResult {
  double detection_probability = 0.0;      // P(both stations detect)
  std::optional<double> correlation;       // E[XY | both detect]; empty when p = 0
};

// Deterministic integration over (e uniform on the sphere, s ~ density) of
// the joint detection probability and the detected-pair correlation of the
// threshold model at angle theta between the two settings. Independent of
// the Monte Carlo path; absolute error <= 1e-6.
QuadratureResult pearle_quadrature(double theta, const ThresholdFn& tau,
                                   const DensityFn& s_density);

struct AngleSample {
  double theta = 0.0;
  double detection_probability = 0.0;
  std::optional<double> correlation;
  double deviation = 0.0;  // |correlation + cos(theta)|
};

struct ThresholdCertificate {
  bool pass = false;
  double tolerance = 0.0;
  double max_abs_deviation = 0.0;
  double max_deviation_angle = 0.0;
  std::vector<AngleSample> samples;
  // First grid angle that failed, with the reason ("deviation" or
  // "empty detection set"). Empty when the certificate passes.
  std::optional<double> failing_angle;
  std::string failure_reason;
};

// Checks |c(theta) + cos(theta)| <= tol at every grid angle. This is the
// release gate for any shipped threshold function.
ThresholdCertificate verify_threshold(const ThresholdFn& tau, const DensityFn& s_density,
                                      std::span<const double> grid, double tol);

struct SolverFailure : std::runtime_error {
  SolverFailure(const std::string& what, double residual)
      : std::runtime_error(what), max_residual(residual) {}
  double max_residual = 0.0;
};

// Numerical fallback for when no closed-form threshold certifies: solves
// c(theta) = -cos(theta) for the distribution of the threshold value,
// represented by its CDF on a grid, by nonnegative least squares with the
// quadrature as forward map.
class SolvedThreshold {
 public:
  SolvedThreshold(std::vector<double> t_grid, std::vector<double> cdf, double residual,
                  int iterations)
      : t_grid_(std::move(t_grid)),
        cdf_(std::move(cdf)),
        max_residual_(residual),
        iterations_(iterations) {}

  // Tabulated tau(s) = F^{-1}(1 - s) for s uniform on [0, 1]; monotone
  // non-increasing by construction.
  double operator()(double s) const;

  ThresholdFn threshold_fn() const {
    return [self = *this](double s) { return self(s); };
  }
  DensityFn density_fn() const { return uniform_density(); }

  const std::vector<double>& t_grid() const { return t_grid_; }
  const std::vector<double>& cdf() const { return cdf_; }
  double max_residual() const { return max_residual_; }
  int iterations() const { return iterations_; }

 private:
  std::vector<double> t_grid_;  // threshold values, increasing
  std::vector<double> cdf_;     // CDF at t_grid, monotone 0 -> 1
  double max_residual_ = 0.0;
  int iterations_ = 0;
};

SolvedThreshold solve_threshold(std::span<const double> grid, double tol);

// Uniformly spaced angles over [0, pi], endpoints included.
std::vector<double> angle_grid(std::size_t count);

}  // namespace belllab::oracle

#endif  // BELLLAB_ORACLE_HPP
