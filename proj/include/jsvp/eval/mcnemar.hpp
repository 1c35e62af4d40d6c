#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "jsvp/common/error.hpp"

namespace jsvp::eval {

// ct[0][0] both correct, ct[0][1] A correct and B wrong, ct[1][0] A wrong
// and B correct, ct[1][1] both wrong.
struct Contingency {
  long long ct[2][2] = {{0, 0}, {0, 0}};

  long long total() const { return ct[0][0] + ct[0][1] + ct[1][0] + ct[1][1]; }
};

inline Contingency build_contingency(const std::vector<int>& truth, const std::vector<int>& a, const std::vector<int>& b) {
  if (truth.size() != a.size() || truth.size() != b.size()) {
    throw Error(ErrorCode::LengthMismatch, "truth and prediction files differ in length");
  }
  Contingency t;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const int wrong_a = a[i] != truth[i], wrong_b = b[i] != truth[i];
    ++t.ct[wrong_a][wrong_b];
  }
  return t;
}

// Regularised upper incomplete gamma Q(s, x): series below s + 1,
// Lentz continued fraction above.
inline double gamma_q(double s, double x) {
  if (x <= 0) return 1.0;
  const double log_prefix = s * std::log(x) - x - std::lgamma(s);
  constexpr double eps = 1e-16;
  if (x < s + 1) {
    double term = 1.0 / s, sum = term;
    for (int n = 1; n < 10000; ++n) {
      term *= x / (s + n);
      sum += term;
      if (std::abs(term) < std::abs(sum) * eps) break;
    }
    return 1.0 - sum * std::exp(log_prefix);
  }
  constexpr double tiny = 1e-300;
  double b = x + 1 - s, c = 1 / tiny, d = 1 / b, h = d;
  for (int n = 1; n < 10000; ++n) {
    const double an = -n * (n - s);
    b += 2;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1) < eps) break;
  }
  return std::exp(log_prefix) * h;
}

// Survival function of chi-square with one degree of freedom.
inline double chi2_1_sf(double x) { return gamma_q(0.5, x / 2); }

// Two-sided exact binomial test on the discordant counts, p = 0.5.
inline double exact_binomial_p(long long b, long long c) {
  const long long n = b + c;
  if (n == 0) return 1.0;
  const long long k = std::min(b, c);
  double tail = 0;
  for (long long i = 0; i <= k; ++i) {
    tail += std::exp(std::lgamma(n + 1.0) - std::lgamma(i + 1.0) - std::lgamma(n - i + 1.0) - n * std::log(2.0));
  }
  return std::min(1.0, 2 * tail);
}

enum class McNemarMethod { ChiSquare, Exact };

struct McNemarResult {
  double statistic = 0;
  double p_value = 1;
  double alpha = 0.05;
  bool rejected = false;
  McNemarMethod method = McNemarMethod::ChiSquare;
};

// Statistic (b - c)^2 / (b + c) without continuity correction; 0 with p = 1
// when the classifiers never disagree.
inline McNemarResult mcnemar(const Contingency& t, double alpha = 0.05, McNemarMethod method = McNemarMethod::ChiSquare) {
  McNemarResult r;
  r.alpha = alpha;
  r.method = method;
  const double b = static_cast<double>(t.ct[0][1]), c = static_cast<double>(t.ct[1][0]);
  if (b + c > 0) {
    if (method == McNemarMethod::Exact) {
      // The binomial test statistic is the smaller discordant count.
      r.statistic = std::min(b, c);
      r.p_value = exact_binomial_p(t.ct[0][1], t.ct[1][0]);
    } else {
      r.statistic = (b - c) * (b - c) / (b + c);
      r.p_value = chi2_1_sf(r.statistic);
    }
  }
  r.rejected = r.p_value <= alpha;
  return r;
}

}  // namespace jsvp::eval
