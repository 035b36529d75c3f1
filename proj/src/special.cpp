#include "sndeco/special.hpp"

#include <cmath>

namespace sndeco {

double erf_deficit(double x) {
  x = std::fabs(x);
  if (x < 0.5) {
    // h(x) = sum_{n>=1} (-1)^{n+1} x^{2n} / (n! (2n+1))
    const double x2 = x * x;
    double term = 1.0;
    double sum = 0.0;
    for (int n = 1; n < 40; ++n) {
      term *= -x2 / n;
      const double contrib = -term / (2 * n + 1);
      sum += contrib;
      if (std::fabs(contrib) <= 1e-18 * sum) break;
    }
    return sum;
  }
  return 1.0 - kSqrtPi * std::erf(x) / (2.0 * x);
}

double gaussian_integral(double b) { return 0.5 * kSqrtPi * std::erf(b); }

}  // namespace sndeco
