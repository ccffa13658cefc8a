#include "pdem/roots.hpp"

#include <cmath>
#include <utility>

#include "pdem/error.hpp"

namespace pdem::roots {

MullerResult muller(const std::function<cplx(cplx)>& f, cplx x0, cplx x1, cplx x2,
                    double f_tol, double x_tol, std::size_t max_iter) {
  cplx f0 = f(x0);
  cplx f1 = f(x1);
  cplx f2 = f(x2);

  MullerResult out{x2, f2, 0, false};
  for (std::size_t it = 1; it <= max_iter; ++it) {
    out.iterations = it;
    if (f2 == cplx{}) {
      out = {x2, f2, it, true};
      return out;
    }
    const cplx h1 = x1 - x0;
    const cplx h2 = x2 - x1;
    const cplx d1 = (f1 - f0) / h1;
    const cplx d2 = (f2 - f1) / h2;
    const cplx a = (d2 - d1) / (h2 + h1);
    const cplx b = a * h2 + d2;
    const cplx disc = std::sqrt(b * b - 4.0 * f2 * a);
    const cplx den = std::abs(b + disc) >= std::abs(b - disc) ? b + disc : b - disc;

    cplx step;
    if (den == cplx{}) {
      step = cplx(1.0 + std::abs(x2), 0.0) * 1e-3;  // flat spot: nudge
    } else {
      step = -2.0 * f2 / den;
    }
    const cplx x3 = x2 + step;
    const cplx f3 = f(x3);

    x0 = x1; f0 = f1;
    x1 = x2; f1 = f2;
    x2 = x3; f2 = f3;
    out = {x2, f2, it, false};

    if (!std::isfinite(std::abs(f2)) || !std::isfinite(std::abs(x2))) return out;
    if (std::abs(step) <= x_tol * (1.0 + std::abs(x2))) {
      out.converged = std::abs(f2) <= f_tol;
      return out;
    }
  }
  out.converged = std::abs(f2) <= f_tol;
  return out;
}

BracketResult bisect_secant(const std::function<double(double)>& f, double lo, double hi,
                            double x_tol, std::size_t max_iter) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return {lo, 0.0, 0};
  if (fhi == 0.0) return {hi, 0.0, 0};
  if ((flo > 0.0) == (fhi > 0.0)) {
    throw NumericalError(ErrorKind::NoSignChange, "bracket does not straddle a root");
  }

  double last_width = hi - lo;
  for (std::size_t it = 1; it <= max_iter; ++it) {
    double x = hi - fhi * (hi - lo) / (fhi - flo);
    const double mid = 0.5 * (lo + hi);
    if (!(x > lo && x < hi) || (hi - lo) > 0.5 * last_width) x = mid;
    last_width = hi - lo;

    const double fx = f(x);
    if (fx == 0.0) return {x, 0.0, it};
    if ((fx > 0.0) == (flo > 0.0)) {
      lo = x;
      flo = fx;
    } else {
      hi = x;
      fhi = fx;
    }
    if (hi - lo <= x_tol) {
      const bool take_lo = std::abs(flo) < std::abs(fhi);
      return {take_lo ? lo : hi, take_lo ? flo : fhi, it};
    }
  }
  throw NumericalError(ErrorKind::NoConvergence, "bracketed root refinement did not converge");
}

}  // namespace pdem::roots
