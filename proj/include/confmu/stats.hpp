#pragma once

#include <span>
#include <string>

namespace confmu {

struct MeanStd {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation (n-1)
};

MeanStd aggregate(std::span<const double> values);  // throws on fewer than 2 values

struct WelchResult {
  double t = 0.0;
  double p = 1.0;  // two-sided
  double df = 0.0;
};

// Welch's unequal-variance t-test with Welch-Satterthwaite degrees of
// freedom. Degenerate inputs (both variances zero) resolve to p=1 when the
// means agree and p=0 when they differ.
WelchResult welch_t_test(std::span<const double> a, std::span<const double> b);

// ns / * / ** / *** / ****, thresholds 0.05, 0.01, 0.001, 0.0001,
// boundaries inclusive toward more stars.
std::string significance_stars(double p);

// I_x(a, b) via the continued-fraction expansion.
double regularized_incomplete_beta(double a, double b, double x);

double student_t_two_sided_p(double t, double df);

// Quantile with linear interpolation between order statistics
// (q in [0,1]; the [1,2,3,4] quartiles come out 1.75 / 2.5 / 3.25).
double quantile(std::span<const double> sorted_values, double q);

}  // namespace confmu
