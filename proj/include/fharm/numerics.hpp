#pragma once

#include <functional>
#include <optional>
#include <vector>

namespace fharm::num {

using Fn = std::function<double(double)>;

struct QuadratureOpts {
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  int max_depth = 18;
};

/// Adaptive Gauss-Kronrod integral of f over [a, b]. Throws
/// ErrorKind::numeric when the achieved error estimate misses both
/// tolerances.
double integrate(const Fn& f, double a, double b, QuadratureOpts opts = {});

/// Integral of f over [a, b] with an integrable inverse-square-root
/// singularity at the lower endpoint, via the substitution r = a + v^2.
double integrate_sqrt_lower(const Fn& f, double a, double b,
                            QuadratureOpts opts = {});

/// Integral of a decaying f over [a, infinity).
double integrate_to_inf(const Fn& f, double a, double tol = 1e-12);

/// Least-squares line fit y = slope*x + intercept.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // RMS of fit residuals
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// Root of a continuous increasing g with g(0) <= target on [0, cap].
/// Returns nullopt when g stays below target on the whole interval
/// (plateau detection for bounded g). Handles overflow of g at large
/// arguments by shrinking the bracket.
std::optional<double> root_of_increasing(const Fn& g, double target,
                                         double cap = 1e100);

/// Log-spaced grid of n points over [lo, hi], endpoints included.
std::vector<double> log_grid(double lo, double hi, int n);

/// Linearly spaced grid of n points over [lo, hi], endpoints included.
std::vector<double> linear_grid(double lo, double hi, int n);

}  // namespace fharm::num
