#pragma once

namespace sndeco {

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kSqrtPi = 1.772453850905516027298167483341145182;
/// sqrt(2/pi)
inline constexpr double kSqrt2OverPi = 0.797884560802865355879892119868763737;

/// h(x) = 1 - sqrt(pi) erf(x) / (2x), with h(0) = 0.
///
/// Relative deficit of erf(x) against its linear term 2x/sqrt(pi). Lies in
/// [0, 1) and is increasing in |x|. Evaluated from the Maclaurin series
/// x^2/3 - x^4/10 + ... for |x| < 0.5 so that small arguments keep full
/// relative precision.
double erf_deficit(double x);

/// int_0^b exp(-x^2) dx = sqrt(pi)/2 erf(b).
double gaussian_integral(double b);

}  // namespace sndeco
