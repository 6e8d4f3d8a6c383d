#include "confmu/stats.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace confmu {

namespace {

// Lentz's algorithm for the incomplete beta continued fraction.
double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIterations = 300;
  constexpr double kEps = 3e-16;
  constexpr double kTiny = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

MeanStd aggregate(std::span<const double> values) {
  if (values.size() < 2) throw std::invalid_argument("aggregate: need at least 2 values");
  MeanStd out;
  for (double v : values) out.mean += v;
  out.mean /= static_cast<double>(values.size());
  double acc = 0.0;
  for (double v : values) acc += (v - out.mean) * (v - out.mean);
  out.stddev = std::sqrt(acc / static_cast<double>(values.size() - 1));
  return out;
}

double regularized_incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                          a * std::log(x) + b * std::log(1.0 - x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_continued_fraction(a, b, x) / a;
  }
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_two_sided_p(double t, double df) {
  if (df <= 0.0) return 1.0;
  if (std::isinf(t)) return 0.0;
  const double x = df / (df + t * t);
  return regularized_incomplete_beta(0.5 * df, 0.5, x);
}

WelchResult welch_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2)
    throw std::invalid_argument("welch_t_test: need at least 2 values per sample");
  const MeanStd sa = aggregate(a);
  const MeanStd sb = aggregate(b);
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double va = sa.stddev * sa.stddev;
  const double vb = sb.stddev * sb.stddev;

  WelchResult out;
  if (va == 0.0 && vb == 0.0) {
    if (sa.mean == sb.mean) {
      out.t = 0.0;
      out.p = 1.0;
    } else {
      out.t = sa.mean > sb.mean ? std::numeric_limits<double>::infinity()
                                : -std::numeric_limits<double>::infinity();
      out.p = 0.0;
    }
    return out;
  }

  const double sea = va / na;
  const double seb = vb / nb;
  out.t = (sa.mean - sb.mean) / std::sqrt(sea + seb);
  out.df = (sea + seb) * (sea + seb) /
           (sea * sea / (na - 1.0) + seb * seb / (nb - 1.0));
  out.p = student_t_two_sided_p(out.t, out.df);
  return out;
}

std::string significance_stars(double p) {
  if (p <= 0.0001) return "****";
  if (p <= 0.001) return "***";
  if (p <= 0.01) return "**";
  if (p <= 0.05) return "*";
  return "ns";
}

double quantile(std::span<const double> sorted_values, double q) {
  if (sorted_values.empty()) throw std::invalid_argument("quantile: empty input");
  if (sorted_values.size() == 1) return sorted_values[0];
  const double pos = q * static_cast<double>(sorted_values.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, sorted_values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted_values[lo] + frac * (sorted_values[hi] - sorted_values[lo]);
}

}  // namespace confmu
