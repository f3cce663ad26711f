#pragma once

// Sliding-window differentiators built from Jacobi polynomial kernels: the
// minimal integer estimator, the minimal fractional estimator, and the affine
// fractional estimator that cancels the next fractional Taylor term.

#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fracdiff/errors.hpp"
#include "fracdiff/fraccalc.hpp"
#include "fracdiff/signals.hpp"
#include "fracdiff/specfun.hpp"

namespace fracdiff::estimators {

using fraccalc::FracOrder;
using signals::SampledSignal;

enum class EstimatorKind { minimal_integer, minimal_fractional, affine_fractional };

enum class WindowOrientation { forward, backward };

inline const char* kind_name(EstimatorKind k) {
  switch (k) {
    case EstimatorKind::minimal_integer: return "minimal_integer";
    case EstimatorKind::minimal_fractional: return "minimal_fractional";
    case EstimatorKind::affine_fractional: return "affine_fractional";
  }
  return "?";
}

// The affine combination coefficient diverges as alpha approaches its
// integer part; orders closer than this are rejected for the affine kind.
inline constexpr double affine_min_frac_part = 1e-3;

/// Parameters of one differentiator instance: derivative order, kernel
/// exponents k and mu, window length T and sample count m (the window holds
/// m+1 samples, T = m * dt on a sampled signal).
struct EstimatorParams {
  FracOrder order{1.0, 0};
  double k = 0.0;
  double mu = 0.0;
  double T = 0.0;
  int m = 0;

  void validate() const {
    if (!(k > -1.0) || !(mu > -1.0))
      throw std::domain_error("EstimatorParams: k and mu must exceed -1");
    if (!(T > 0.0)) throw std::domain_error("EstimatorParams: window length T must be positive");
    if (m < 1) throw std::domain_error("EstimatorParams: m must be positive");
  }
};

/// Precomputed window kernel: quadrature nodes in [0,1], normalized weights
/// (summing to 1), kernel values w(tau) * P(tau) at the nodes, and the
/// overall prefactor. The estimate over one window is
/// scale * sum_i qweights[i] * kvals[i] * y(t0 + T * taus[i]).
///
/// Node layout depends on the weight exponents: for min(k, mu) >= 0 the
/// nodes are the m+1 uniform grid points i/m with composite-trapezoid
/// weights; when either exponent is negative the weight is singular at an
/// endpoint and the open composite midpoint rule on m subintervals is used
/// instead (m off-grid nodes (i+1/2)/m). Only the grid-node variant can be
/// driven by window samples of a uniformly sampled signal.
struct KernelTable {
  std::vector<double> taus;
  std::vector<double> qweights;
  std::vector<double> kvals;
  double scale = 0.0;

  size_t node_count() const noexcept { return taus.size(); }
  bool on_sample_grid() const noexcept { return !taus.empty() && taus.front() == 0.0; }
};

namespace detail {

inline void fill_nodes(KernelTable& t, double k, double mu, int m) {
  const bool trapezoid = k >= 0.0 && mu >= 0.0;
  if (trapezoid) {
    t.taus.resize(static_cast<size_t>(m) + 1);
    t.qweights.assign(static_cast<size_t>(m) + 1, 1.0 / m);
    for (int i = 0; i <= m; ++i) t.taus[static_cast<size_t>(i)] = static_cast<double>(i) / m;
    t.qweights.front() *= 0.5;
    t.qweights.back() *= 0.5;
  } else {
    t.taus.resize(static_cast<size_t>(m));
    t.qweights.assign(static_cast<size_t>(m), 1.0 / m);
    for (int i = 0; i < m; ++i) t.taus[static_cast<size_t>(i)] = (i + 0.5) / m;
  }
}

inline void fill_kernel_values(KernelTable& t, int degree, double k, double mu) {
  const specfun::JacobiParams jp(degree, mu, k);
  const std::vector<double> coeffs = specfun::jacobi_coefficients(jp);
  t.kvals.resize(t.taus.size());
  for (size_t i = 0; i < t.taus.size(); ++i) {
    const double tau = t.taus[i];
    const double v = specfun::jacobi_weight(jp, tau) *
                     specfun::detail::jacobi_eval_coeffs(coeffs, degree, tau);
    if (!std::isfinite(v))
      throw numerical_error("kernel value not finite at tau=" + std::to_string(tau));
    t.kvals[i] = v;
  }
}

}  // namespace detail

/// Kernel of the minimal integer differentiator of order n: degree-n
/// polynomial kernel with prefactor n!/T^n * 1/B(n+k+1, n+mu+1).
inline KernelTable minimal_integer_kernel(int n, double k, double mu, double T, int m) {
  if (n < 0) throw std::domain_error("minimal_integer_kernel: order must be non-negative");
  if (!(k > -1.0) || !(mu > -1.0))
    throw std::domain_error("minimal_integer_kernel: k and mu must exceed -1");
  if (!(T > 0.0)) throw std::domain_error("minimal_integer_kernel: T must be positive");
  if (m < n + 1)
    throw std::domain_error("minimal_integer_kernel: need m >= n+1 to resolve the kernel");
  KernelTable t;
  detail::fill_nodes(t, k, mu, m);
  detail::fill_kernel_values(t, n, k, mu);
  // log-space: n! / T^n / B(n+k+1, n+mu+1); every factor is positive.
  const double ln_scale = specfun::ln_gamma(n + 1.0) - n * std::log(T) -
                          (specfun::ln_gamma(n + k + 1.0) + specfun::ln_gamma(n + mu + 1.0) -
                           specfun::ln_gamma(2.0 * n + k + mu + 2.0));
  t.scale = std::exp(ln_scale);
  return t;
}

/// Kernel of the minimal fractional differentiator: degree-(n+1) polynomial
/// kernel with prefactor (n+1)!/T^alpha * Gamma(alpha-n)/B(alpha+1+k, n+mu+2).
/// At alpha = n+1 this reduces to the integer kernel of order n+1.
inline KernelTable minimal_fractional_kernel(const EstimatorParams& p) {
  p.validate();
  const int n = p.order.n;
  const double alpha = p.order.alpha;
  if (p.m < n + 2)
    throw std::domain_error("minimal_fractional_kernel: need m >= n+2 to resolve the kernel");
  KernelTable t;
  detail::fill_nodes(t, p.k, p.mu, p.m);
  detail::fill_kernel_values(t, n + 1, p.k, p.mu);
  const double ln_scale =
      specfun::ln_gamma(n + 2.0) - alpha * std::log(p.T) + specfun::ln_gamma(alpha - n) -
      (specfun::ln_gamma(alpha + 1.0 + p.k) + specfun::ln_gamma(n + p.mu + 2.0) -
       specfun::ln_gamma(alpha + 1.0 + p.k + n + p.mu + 2.0));
  t.scale = std::exp(ln_scale);
  return t;
}

/// Coefficient of the affine combination: (2*alpha - n + 1 + k)/(alpha - n).
inline double affine_lambda(double alpha, double k, int n) {
  if (!(alpha - n >= affine_min_frac_part))
    throw numerical_error("affine_lambda: alpha - n below " +
                          std::to_string(affine_min_frac_part) +
                          "; the coefficient diverges near integer orders");
  return (2.0 * alpha - n + 1.0 + k) / (alpha - n);
}

/// Apply a kernel table to one window of values taken at its nodes.
inline double quadrature_apply(const KernelTable& t, std::span<const double> samples) {
  if (samples.size() != t.node_count())
    throw std::invalid_argument("quadrature_apply: expected " + std::to_string(t.node_count()) +
                                " samples, got " + std::to_string(samples.size()));
  double acc = 0.0;
  for (size_t i = 0; i < samples.size(); ++i) acc += t.qweights[i] * t.kvals[i] * samples[i];
  return t.scale * acc;
}

/// Apply a kernel to an analytic signal by evaluating it at the window's
/// nodes t0 + T*tau. Works for both node layouts, including the off-grid
/// midpoint variant.
template <class F>
double estimate_callable(const KernelTable& t, F&& f, double t0, double T) {
  double acc = 0.0;
  for (size_t i = 0; i < t.node_count(); ++i)
    acc += t.qweights[i] * t.kvals[i] * f(t0 + T * t.taus[i]);
  return t.scale * acc;
}

/// The two minimal kernels behind one affine estimator, sharing one node set.
struct AffineKernelPair {
  KernelTable mu_raised;  // exponents (k, mu+1)
  KernelTable k_raised;   // exponents (k+1, mu)
  double lambda = 0.0;

  double apply(std::span<const double> samples) const {
    return lambda * quadrature_apply(mu_raised, samples) +
           (1.0 - lambda) * quadrature_apply(k_raised, samples);
  }
};

inline AffineKernelPair make_affine_kernels(const EstimatorParams& p) {
  p.validate();
  AffineKernelPair pair;
  pair.lambda = affine_lambda(p.order.alpha, p.k, p.order.n);
  EstimatorParams up = p;
  up.mu = p.mu + 1.0;
  pair.mu_raised = minimal_fractional_kernel(up);
  EstimatorParams right = p;
  right.k = p.k + 1.0;
  pair.k_raised = minimal_fractional_kernel(right);
  // The node sets agree by construction: both variants resolve the same
  // trapezoid-vs-midpoint choice because raising an exponent by one never
  // flips its sign below zero. Guard anyway.
  if (pair.mu_raised.node_count() != pair.k_raised.node_count())
    throw numerical_error("affine kernels disagree on node layout");
  return pair;
}

namespace detail {

inline size_t window_start_index(const SampledSignal& y, const EstimatorParams& p, double t0,
                                 const char* who) {
  const double pos = (t0 - y.t_start) / y.dt;
  const double r = std::rint(pos);
  if (!(std::fabs(pos - r) <= 1e-6) || r < 0)
    throw std::invalid_argument(std::string(who) + ": t0 does not lie on the signal grid");
  const size_t i0 = static_cast<size_t>(r);
  if (i0 + static_cast<size_t>(p.m) >= y.values.size())
    throw std::invalid_argument(std::string(who) + ": window [t0, t0+T] leaves the signal");
  return i0;
}

inline void check_window_binding(const SampledSignal& y, const EstimatorParams& p,
                                 const char* who) {
  signals::require_valid(y, who);
  const double mdt = static_cast<double>(p.m) * y.dt;
  if (std::fabs(p.T - mdt) > 32.0 * std::numeric_limits<double>::epsilon() *
                                 std::max({1.0, std::fabs(p.T), std::fabs(mdt)}))
    throw std::invalid_argument(std::string(who) + ": T must equal m*dt (T=" +
                                std::to_string(p.T) + ", m*dt=" + std::to_string(mdt) + ")");
  if (y.values.size() < static_cast<size_t>(p.m) + 1)
    throw std::invalid_argument(std::string(who) + ": signal shorter than one window");
}

inline void require_grid_kernel(const KernelTable& t, const char* who) {
  if (!t.on_sample_grid())
    throw std::invalid_argument(
        std::string(who) +
        ": negative k or mu selects off-grid midpoint nodes; sampled-signal estimation "
        "requires k >= 0 and mu >= 0");
}

}  // namespace detail

/// One affine estimate over the window starting at t0 on the signal's grid.
/// Equals lambda*E1 + (1-lambda)*E2 where E1, E2 are the minimal estimates
/// with exponents (k, mu+1) and (k+1, mu) over the identical samples;
/// computing those separately reproduces this value bit for bit.
inline double affine_fractional_estimate(const SampledSignal& y, const EstimatorParams& p,
                                         double t0) {
  detail::check_window_binding(y, p, "affine_fractional_estimate");
  const AffineKernelPair pair = make_affine_kernels(p);
  detail::require_grid_kernel(pair.mu_raised, "affine_fractional_estimate");
  const size_t i0 = detail::window_start_index(y, p, t0, "affine_fractional_estimate");
  return pair.apply(std::span<const double>(y.values).subspan(i0, static_cast<size_t>(p.m) + 1));
}

/// Per-window estimates for every admissible anchor on the signal's grid.
struct EstimateSeries {
  std::vector<double> t0s;
  std::vector<double> values;
  EstimatorParams params;
  EstimatorKind kind = EstimatorKind::minimal_fractional;
};

/// Slide the estimator across the whole signal. Kernel tables are built once
/// and reused for every window. Forward orientation reads [t0, t0+T] and
/// anchors the estimate at the window start; the backward variant (integer
/// kind only) reads [t0-T, t0] reversed and flips the sign for odd orders.
inline EstimateSeries sliding_estimate(const SampledSignal& y, const EstimatorParams& p,
                                       EstimatorKind kind,
                                       WindowOrientation orientation = WindowOrientation::forward) {
  detail::check_window_binding(y, p, "sliding_estimate");
  if (orientation == WindowOrientation::backward && kind != EstimatorKind::minimal_integer)
    throw std::invalid_argument(
        "sliding_estimate: backward windows are defined for the integer kind only (time "
        "reversal has no classical meaning for fractional orders with terminal 0)");

  EstimateSeries out;
  out.params = p;
  out.kind = kind;

  KernelTable single;
  AffineKernelPair pair;
  if (kind == EstimatorKind::minimal_integer) {
    single = minimal_integer_kernel(p.order.n, p.k, p.mu, p.T, p.m);
  } else if (kind == EstimatorKind::minimal_fractional) {
    single = minimal_fractional_kernel(p);
  } else {
    pair = make_affine_kernels(p);
  }
  const KernelTable& probe = kind == EstimatorKind::affine_fractional ? pair.mu_raised : single;
  detail::require_grid_kernel(probe, "sliding_estimate");

  const size_t m = static_cast<size_t>(p.m);
  const size_t windows = y.values.size() - m;
  out.t0s.resize(windows);
  out.values.resize(windows);
  std::vector<double> reversed;
  if (orientation == WindowOrientation::backward) reversed.resize(m + 1);
  const double sign = (orientation == WindowOrientation::backward && (p.order.n % 2) != 0)
                          ? -1.0
                          : 1.0;
  for (size_t i = 0; i < windows; ++i) {
    std::span<const double> win(y.values.data() + i, m + 1);
    if (orientation == WindowOrientation::backward) {
      for (size_t j = 0; j <= m; ++j) reversed[j] = win[m - j];
      win = std::span<const double>(reversed);
      out.t0s[i] = y.time(i + m);  // anchored at the window end
    } else {
      out.t0s[i] = y.time(i);
    }
    out.values[i] = sign * (kind == EstimatorKind::affine_fractional ? pair.apply(win)
                                                                     : quadrature_apply(single, win));
  }
  return out;
}

}  // namespace fracdiff::estimators
