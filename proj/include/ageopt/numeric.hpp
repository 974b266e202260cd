#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>

namespace ageopt {

// Raised when an iteration fails to converge or an expectation is not finite.
// The CLI maps it to exit code 3.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Compensated accumulator; keeps pool averages deterministic and tight.
class KahanSum {
 public:
  void add(double x) {
    double y = x - c_;
    double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  double value() const { return s_; }

 private:
  double s_ = 0.0;
  double c_ = 0.0;
};

namespace detail {

inline double simpson(double a, double fa, double b, double fb, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adaptive_step(const std::function<double(double)>& f, double a, double fa,
                            double b, double fb, double m, double fm, double whole,
                            double tol, int depth) {
  double lm = 0.5 * (a + m);
  double rm = 0.5 * (m + b);
  double flm = f(lm);
  double frm = f(rm);
  double left = simpson(a, fa, m, fm, flm);
  double right = simpson(m, fm, b, fb, frm);
  double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return adaptive_step(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         adaptive_step(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

// Adaptive Simpson quadrature, absolute tolerance, at most 2^20 subdivisions.
inline double adaptive_simpson(const std::function<double(double)>& f, double a,
                               double b, double tol = 1e-9) {
  if (!(b > a)) return 0.0;
  double fa = f(a);
  double fb = f(b);
  double m = 0.5 * (a + b);
  double fm = f(m);
  double whole = detail::simpson(a, fa, b, fb, fm);
  return detail::adaptive_step(f, a, fa, b, fb, m, fm, whole, tol, 20);
}

inline bool is_integral_value(double x) {
  return std::isfinite(x) && x == std::floor(x);
}

}  // namespace ageopt
