#pragma once

// Real-argument special functions and Jacobi polynomial evaluation on [0,1].
// Everything here is a pure function of its arguments and safe to call
// concurrently.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace fracdiff::specfun {

namespace detail {

// Lanczos coefficients, g = 7, 9 terms. Relative error below 1e-14 on the
// positive real axis away from the poles.
inline constexpr double lanczos_g = 7.0;
inline constexpr double lanczos_coeff[9] = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
};

inline constexpr double sqrt_two_pi = 2.5066282746310005024157652848110;
inline constexpr double ln_sqrt_two_pi = 0.91893853320467274178032973640562;

// Gamma overflows double above this argument.
inline constexpr double gamma_overflow_threshold = 171.624376956302725;

inline bool is_integer(double x) noexcept { return std::isfinite(x) && x == std::rint(x); }

inline bool is_nonpositive_integer(double x) noexcept { return x <= 0.0 && is_integer(x); }

// sin(pi*x) with argument reduction so large |x| stays accurate.
inline double sin_pi(double x) noexcept {
  const double r = x - std::rint(x);  // r in [-0.5, 0.5]
  const double s = std::sin(3.141592653589793238462643383279502884 * r);
  const bool odd = std::fmod(std::fabs(std::rint(x)), 2.0) == 1.0;
  return odd ? -s : s;
}

// Lanczos rational part; valid for x >= 0.5.
inline double lanczos_sum(double x) noexcept {
  double a = lanczos_coeff[0];
  for (int i = 1; i < 9; ++i) a += lanczos_coeff[i] / (x - 1.0 + i);
  return a;
}

// x^e for small non-negative integer e, without libm rounding surprises.
inline double pow_int(double x, int e) noexcept {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

}  // namespace detail

/// Natural log of Gamma(x) for x > 0.
inline double ln_gamma(double x) {
  if (!(x > 0.0))
    throw std::domain_error("ln_gamma: argument must be positive, got " + std::to_string(x));
  if (x < 0.5) return ln_gamma(x + 1.0) - std::log(x);
  const double t = x + detail::lanczos_g - 0.5;
  return detail::ln_sqrt_two_pi + std::log(detail::lanczos_sum(x)) + (x - 0.5) * std::log(t) - t;
}

/// Gamma(x) for real x away from the poles at 0, -1, -2, ...
///
/// Throws std::domain_error at a pole and std::overflow_error when the result
/// exceeds double range (x > ~171.62).
inline double gamma(double x) {
  if (detail::is_nonpositive_integer(x))
    throw std::domain_error("gamma: pole at non-positive integer " + std::to_string(x));
  if (x > detail::gamma_overflow_threshold)
    throw std::overflow_error("gamma: overflow for x = " + std::to_string(x) +
                              " (threshold 171.624)");
  if (x < 0.5) {
    // Reflection through sin(pi x); 1 - x > 0.5 here.
    return 3.141592653589793238462643383279502884 / (detail::sin_pi(x) * gamma(1.0 - x));
  }
  if (x > 140.0) return std::exp(ln_gamma(x));  // direct t^(x-1/2) would overflow first
  const double t = x + detail::lanczos_g - 0.5;
  return detail::sqrt_two_pi * detail::lanczos_sum(x) * std::pow(t, x - 0.5) * std::exp(-t);
}

/// ln|Gamma(x)| together with the sign of Gamma(x); defined for all non-pole x.
struct SignedLnGamma {
  double ln_abs;
  int sign;  // +1 or -1
};

inline SignedLnGamma ln_gamma_signed(double x) {
  if (x > 0.0) return {ln_gamma(x), +1};
  if (detail::is_nonpositive_integer(x))
    throw std::domain_error("ln_gamma_signed: pole at " + std::to_string(x));
  // Gamma(x) = pi / (sin(pi x) * Gamma(1-x)) for x < 0.
  const double s = detail::sin_pi(x);
  const double ln_abs =
      std::log(3.141592653589793238462643383279502884) - std::log(std::fabs(s)) - ln_gamma(1.0 - x);
  return {ln_abs, s > 0.0 ? +1 : -1};
}

/// Classical beta function B(a,b) = Gamma(a)Gamma(b)/Gamma(a+b), a,b > 0.
inline double beta(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0))
    throw std::domain_error("beta: arguments must be positive, got (" + std::to_string(a) + ", " +
                            std::to_string(b) + ")");
  return std::exp(ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b));
}

/// Generalized binomial coefficient with real upper argument:
/// Gamma(a+1) / (Gamma(j+1) Gamma(a-j+1)).
///
/// Pole cases resolved by their finite limits:
///  - integer a >= 0 with j > a: the denominator pole wins, coefficient is 0;
///  - negative integer a: both Gamma factors blow up, the falling-factorial
///    limit a(a-1)...(a-j+1)/j! applies (e.g. a=-1 gives (-1)^j).
inline double gen_binomial(double a, int j) {
  if (j < 0) throw std::domain_error("gen_binomial: j must be non-negative");
  if (j == 0) return 1.0;
  if (detail::is_integer(a) && std::fabs(a) < 9.007199254740992e15) {
    if (a >= 0.0 && j > a) return 0.0;
    // Exact for integer arguments (products stay integral and below 2^53 in
    // every case the library exercises).
    double out = 1.0;
    for (int i = 0; i < j; ++i) out = out * (a - i) / (i + 1);
    return out;
  }
  // Real upper argument: sign-tracked log-gamma ratio. Gamma(a-j+1) (and
  // Gamma(a+1) for a < -1) may sit at negative non-integer arguments.
  const SignedLnGamma num = ln_gamma_signed(a + 1.0);
  const SignedLnGamma den = ln_gamma_signed(a - j + 1.0);
  const double ln_r = num.ln_abs - ln_gamma(static_cast<double>(j) + 1.0) - den.ln_abs;
  return num.sign * den.sign * std::exp(ln_r);
}

/// Parameter triple (n, mu, k) of one Jacobi polynomial on [0,1].
struct JacobiParams {
  int n;
  double mu;
  double k;

  JacobiParams(int n_, double mu_, double k_) : n(n_), mu(mu_), k(k_) {
    if (n < 0) throw std::domain_error("JacobiParams: degree must be non-negative");
    if (!(mu > -1.0) || !(k > -1.0))
      throw std::domain_error("JacobiParams: exponents must exceed -1, got mu=" +
                              std::to_string(mu_) + " k=" + std::to_string(k_));
  }
};

/// Coefficients c_j = binom(n+mu, j) * binom(n+k, n-j) of the expansion
/// P(tau) = sum_j c_j (tau-1)^(n-j) tau^j.
inline std::vector<double> jacobi_coefficients(const JacobiParams& p) {
  std::vector<double> c(static_cast<size_t>(p.n) + 1);
  for (int j = 0; j <= p.n; ++j)
    c[static_cast<size_t>(j)] = gen_binomial(p.n + p.mu, j) * gen_binomial(p.n + p.k, p.n - j);
  return c;
}

namespace detail {

inline double jacobi_eval_coeffs(const std::vector<double>& c, int n, double tau) noexcept {
  const double u = tau - 1.0;
  double s = 0.0;
  for (int j = 0; j <= n; ++j) s += c[static_cast<size_t>(j)] * pow_int(u, n - j) * pow_int(tau, j);
  return s;
}

}  // namespace detail

/// Value of the degree-n Jacobi polynomial on [0,1], evaluated as the
/// explicit binomial sum (degrees stay tiny here, so no recurrence).
inline double jacobi_eval(const JacobiParams& p, double tau) {
  if (!(tau >= 0.0 && tau <= 1.0))
    throw std::domain_error("jacobi_eval: tau must lie in [0,1], got " + std::to_string(tau));
  const std::vector<double> c = jacobi_coefficients(p);
  return detail::jacobi_eval_coeffs(c, p.n, tau);
}

/// Weight w(tau) = (1-tau)^mu * tau^k associated with the polynomial family.
///
/// Endpoints: the factor is 1 when its exponent is 0, 0 when the exponent is
/// positive, and the evaluation is rejected when the exponent is negative
/// (the weight is singular there).
inline double jacobi_weight(const JacobiParams& p, double tau) {
  if (!(tau >= 0.0 && tau <= 1.0))
    throw std::domain_error("jacobi_weight: tau must lie in [0,1], got " + std::to_string(tau));
  double left = 1.0;  // (1-tau)^mu
  if (tau == 1.0) {
    if (p.mu < 0.0) throw std::domain_error("jacobi_weight: singular at tau=1 for mu < 0");
    left = p.mu == 0.0 ? 1.0 : 0.0;
  } else {
    left = std::pow(1.0 - tau, p.mu);
  }
  double right = 1.0;  // tau^k
  if (tau == 0.0) {
    if (p.k < 0.0) throw std::domain_error("jacobi_weight: singular at tau=0 for k < 0");
    right = p.k == 0.0 ? 1.0 : 0.0;
  } else {
    right = std::pow(tau, p.k);
  }
  return left * right;
}

}  // namespace fracdiff::specfun
