#pragma once

// Ground-truth fractional calculus used to validate the estimators: the
// modified Riemann-Liouville (Jumarie) derivative through analytic monomial
// rules, a Grunwald-Letnikov brute-force oracle, and exact truncated
// fractional-Taylor test signals.

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fracdiff/errors.hpp"
#include "fracdiff/specfun.hpp"

namespace fracdiff::fraccalc {

/// Fractional derivative order alpha > 0 split as alpha = n + gamma with
/// integer n >= 0 and gamma in (0,1]. n is an integer exactly when alpha is.
struct FracOrder {
  double alpha;
  int n;

  static FracOrder from_alpha(double alpha) {
    if (!(alpha > 0.0)) throw std::domain_error("FracOrder: alpha must be positive");
    const int n = static_cast<int>(std::ceil(alpha)) - 1;
    return FracOrder{alpha, n};
  }

  double frac_part() const noexcept { return alpha - n; }  // gamma in (0,1]
};

/// Exact truncated fractional Taylor signal anchored at t0: the integer-power
/// head c[j] t^j / j!, the t^alpha term with coefficient c_alpha, and an
/// optional next fractional term t^(2*alpha-n) with coefficient c_2an.
struct FracTaylorSignal {
  double t0 = 0.0;
  FracOrder order{1.0, 0};
  std::vector<double> c;  // c[j] = j-th classical derivative at t0, size n+1
  double c_alpha = 0.0;
  std::optional<double> c_2an;
};

/// Evaluate the signal at offset t >= 0 from its anchor.
inline double frac_taylor_eval(const FracTaylorSignal& sig, double t) {
  if (!(t >= 0.0)) throw std::domain_error("frac_taylor_eval: offset must be non-negative");
  if (sig.c.size() != static_cast<size_t>(sig.order.n) + 1)
    throw std::invalid_argument("frac_taylor_eval: need n+1 integer-derivative coefficients");
  double v = 0.0;
  double tj_over_fact = 1.0;  // t^j / j!
  for (int j = 0; j <= sig.order.n; ++j) {
    v += sig.c[static_cast<size_t>(j)] * tj_over_fact;
    tj_over_fact *= t / (j + 1);
  }
  const double a = sig.order.alpha;
  v += sig.c_alpha * std::pow(t, a) / specfun::gamma(a + 1.0);
  if (sig.c_2an) {
    const double e = 2.0 * a - sig.order.n;
    v += *sig.c_2an * std::pow(t, e) / specfun::gamma(e + 1.0);
  }
  return v;
}

/// Riemann-Liouville derivative of t^p (lower terminal 0) of order alpha:
/// Gamma(p+1)/Gamma(p+1-alpha) * t^(p-alpha). When p+1-alpha hits a pole of
/// Gamma the ratio's limit is 0 and that is what is returned.
inline double rl_monomial(double p, double alpha, double t) {
  if (!(t > 0.0)) throw std::domain_error("rl_monomial: t must be positive");
  if (!(p >= 0.0)) throw std::domain_error("rl_monomial: exponent must be non-negative");
  if (!(alpha > 0.0)) throw std::domain_error("rl_monomial: alpha must be positive");
  const double denom_arg = p + 1.0 - alpha;
  // Pole detection with a small tolerance: callers reach this with computed
  // p and alpha, not exact literals.
  if (denom_arg < 0.5 &&
      std::fabs(denom_arg - std::rint(denom_arg)) <= 1e-12 * std::max(1.0, std::fabs(denom_arg)) &&
      std::rint(denom_arg) <= 0.0)
    return 0.0;
  const specfun::SignedLnGamma den = specfun::ln_gamma_signed(denom_arg);
  const double ln_ratio = specfun::ln_gamma(p + 1.0) - den.ln_abs;
  return den.sign * std::exp(ln_ratio) * std::pow(t, p - alpha);
}

/// Default truncation depth for the Grunwald-Letnikov series: reach the lower
/// terminal at 0 plus a safety tail.
inline int suggested_gl_terms(double t, double h) {
  if (!(h > 0.0)) throw std::domain_error("suggested_gl_terms: h must be positive");
  return static_cast<int>(std::ceil(std::max(t, 0.0) / h)) + 64;
}

struct GlResult {
  double value;
  double tail_bound;  // magnitude of the last retained term, scaled by h^-alpha
};

/// Grunwald-Letnikov fractional difference of order alpha at t with step h:
///
///   h^-alpha * sum_{i=0}^{terms} (-1)^i binom(alpha, i) g(t + (alpha-i)h),
///
/// where g = f - f(0) and g is taken to vanish at negative arguments (the
/// lower terminal sits at 0). With g in place of f this is the brute-force
/// oracle for the modified Riemann-Liouville derivative: it annihilates
/// constants by construction. The weights follow the exact recurrence
/// w_0 = 1, w_i = w_{i-1} (i-1-alpha)/i, which equals (-1)^i gen_binomial.
template <class F>
GlResult gl_fractional_difference_ex(F&& f, double alpha, double t, double h, int terms) {
  if (!(alpha > 0.0)) throw std::domain_error("gl_fractional_difference: alpha must be positive");
  if (!(h > 0.0)) throw std::domain_error("gl_fractional_difference: h must be positive");
  if (terms < 0) throw std::domain_error("gl_fractional_difference: terms must be non-negative");
  const double f0 = f(0.0);
  double w = 1.0;
  double sum = 0.0;
  double last = 0.0;
  for (int i = 0; i <= terms; ++i) {
    const double node = t + (alpha - i) * h;
    if (node >= 0.0) {
      last = w * (f(node) - f0);
      sum += last;
    }
    w *= (i - alpha) / (i + 1);
  }
  const double inv_ha = std::pow(h, -alpha);
  return {sum * inv_ha, std::fabs(last) * inv_ha};
}

template <class F>
double gl_fractional_difference(F&& f, double alpha, double t, double h, int terms) {
  return gl_fractional_difference_ex(std::forward<F>(f), alpha, t, h, terms).value;
}

/// Modified Riemann-Liouville value from a classical RL value, first-order
/// strip only (0 < alpha < 1): rl - t^-alpha / Gamma(1-alpha) * f(0).
inline double jumarie_from_rl(double rl_value, double f0, double alpha, double t) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::domain_error("jumarie_from_rl: alpha must lie in (0,1); higher orders go through "
                            "the integer-derivative composition");
  if (!(t > 0.0)) throw std::domain_error("jumarie_from_rl: t must be positive");
  return rl_value - std::pow(t, -alpha) / specfun::gamma(1.0 - alpha) * f0;
}

/// Reference derivative curve with its own convergence certificate.
struct ReferenceCurve {
  std::vector<double> values;       // GL value at step h/2
  std::vector<double> discrepancy;  // |v_h - v_{h/2}| / max(1, |v_{h/2}|)
  std::vector<std::uint8_t> converged;
  double tolerance = 0.0;

  bool all_converged() const noexcept {
    for (const auto c : converged)
      if (!c) return false;
    return true;
  }
};

namespace detail {

// GL sums for every grid point at a fixed step. Fast path when all grid
// points and the step share one lattice (grid[i] = (base + i*M) * h): the
// shifted nodes (l + gamma)h are then common to all points and each sum is a
// plain dot product against one precomputed node table.
template <class F>
std::vector<double> gl_on_grid(F&& f, double gamma, const std::vector<double>& grid, double h) {
  std::vector<double> out(grid.size());
  // Lattice detection.
  bool lattice = !grid.empty();
  std::vector<long long> idx(grid.size());
  for (size_t i = 0; i < grid.size() && lattice; ++i) {
    const double q = grid[i] / h;
    const double r = std::rint(q);
    if (!(std::fabs(q - r) <= 1e-6) || r < 0) lattice = false;
    else idx[i] = static_cast<long long>(r);
  }
  if (lattice) {
    long long lmax = 0;
    for (const auto v : idx) lmax = std::max(lmax, v);
    const double f0 = f(0.0);
    std::vector<double> weights(static_cast<size_t>(lmax) + 1);
    std::vector<double> gvals(static_cast<size_t>(lmax) + 1);
    double w = 1.0;
    for (long long i = 0; i <= lmax; ++i) {
      weights[static_cast<size_t>(i)] = w;
      w *= (i - gamma) / (i + 1);
      gvals[static_cast<size_t>(i)] = f((i + gamma) * h) - f0;
    }
    const double inv_ha = std::pow(h, -gamma);
    for (size_t p = 0; p < grid.size(); ++p) {
      const long long L = idx[p];
      double sum = 0.0;
      // i runs over weight index; node index l = L - i stays >= 0, nodes
      // below the lower terminal contribute nothing.
      for (long long i = 0; i <= L; ++i)
        sum += weights[static_cast<size_t>(i)] * gvals[static_cast<size_t>(L - i)];
      out[p] = sum * inv_ha;
    }
    return out;
  }
  for (size_t p = 0; p < grid.size(); ++p)
    out[p] = gl_fractional_difference(f, gamma, grid[p], h, suggested_gl_terms(grid[p], h));
  return out;
}

}  // namespace detail

/// Jumarie derivative of order `order` along `grid`, computed as the
/// gamma-order GL difference of the exact n-th classical derivative
/// (the composition reading of the mixed-order term). `fn_deriv` must be
/// x's n-th classical derivative. Each point carries an h-versus-h/2
/// agreement certificate at `rel_tol`; the returned values are the h/2 ones.
template <class F>
ReferenceCurve jumarie_reference(F&& fn_deriv, FracOrder order, const std::vector<double>& grid,
                                 double h, double rel_tol) {
  if (!(h > 0.0)) throw std::domain_error("jumarie_reference: h must be positive");
  for (const double t : grid)
    if (!(t > 0.0)) throw std::domain_error("jumarie_reference: grid times must be positive");
  const double g = order.frac_part();
  const std::vector<double> coarse = detail::gl_on_grid(fn_deriv, g, grid, h);
  const std::vector<double> fine = detail::gl_on_grid(fn_deriv, g, grid, h / 2.0);
  ReferenceCurve out;
  out.values = fine;
  out.tolerance = rel_tol;
  out.discrepancy.resize(grid.size());
  out.converged.resize(grid.size());
  for (size_t i = 0; i < grid.size(); ++i) {
    const double d = std::fabs(coarse[i] - fine[i]) / std::max(1.0, std::fabs(fine[i]));
    out.discrepancy[i] = d;
    out.converged[i] = d <= rel_tol ? 1 : 0;
  }
  return out;
}

}  // namespace fracdiff::fraccalc
