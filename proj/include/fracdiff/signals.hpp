#pragma once

// Test-signal sampling and calibrated additive Gaussian noise.

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "fracdiff/errors.hpp"
#include "fracdiff/fraccalc.hpp"
#include "fracdiff/specfun.hpp"

namespace fracdiff::signals {

/// Uniform-grid time series. time(i) = t_start + i*dt, always computed from
/// the index (never by accumulation).
struct SampledSignal {
  double t_start = 0.0;
  double dt = 0.0;
  std::vector<double> values;

  size_t size() const noexcept { return values.size(); }
  double time(size_t i) const noexcept { return t_start + static_cast<double>(i) * dt; }
  double end_time() const noexcept { return time(values.empty() ? 0 : values.size() - 1); }
};

inline void require_valid(const SampledSignal& s, const char* who) {
  if (!(s.dt > 0.0)) throw std::invalid_argument(std::string(who) + ": signal dt must be positive");
  if (s.values.empty()) throw std::invalid_argument(std::string(who) + ": signal is empty");
}

/// Named analytic signal: value plus its exact classical derivatives, used
/// both for sampling and for oracle reference curves.
struct TestSignal {
  std::string name;
  std::function<double(double)> value;
  std::function<double(double, int)> derivative;  // d^n/dt^n, n >= 0
};

namespace detail {

inline TestSignal make_exp_sin() {
  // x(t) = exp(0.2 t) sin(5 t). The n-th derivative keeps the same shape
  // with rotated coefficients: exp(0.2 t)(a_n sin 5t + b_n cos 5t).
  TestSignal s;
  s.name = "exp_sin";
  s.value = [](double t) { return std::exp(0.2 * t) * std::sin(5.0 * t); };
  s.derivative = [](double t, int n) {
    double a = 1.0, b = 0.0;
    for (int i = 0; i < n; ++i) {
      const double na = 0.2 * a - 5.0 * b;
      const double nb = 0.2 * b + 5.0 * a;
      a = na;
      b = nb;
    }
    return std::exp(0.2 * t) * (a * std::sin(5.0 * t) + b * std::cos(5.0 * t));
  };
  return s;
}

inline TestSignal make_monomial(double p) {
  if (!(p >= 0.0)) throw std::invalid_argument("monomial signal: exponent must be non-negative");
  TestSignal s;
  s.name = "monomial:" + std::to_string(p);
  s.value = [p](double t) { return std::pow(t, p); };
  s.derivative = [p](double t, int n) {
    double coeff = 1.0;
    for (int i = 0; i < n; ++i) coeff *= (p - i);
    if (coeff == 0.0) return 0.0;
    return coeff * std::pow(t, p - n);
  };
  return s;
}

inline TestSignal make_constant(double c) {
  TestSignal s;
  s.name = "constant:" + std::to_string(c);
  s.value = [c](double) { return c; };
  s.derivative = [c](double, int n) { return n == 0 ? c : 0.0; };
  return s;
}

}  // namespace detail

inline TestSignal make_frac_taylor(const fraccalc::FracTaylorSignal& sig) {
  TestSignal s;
  s.name = "frac_taylor";
  s.value = [sig](double t) { return fraccalc::frac_taylor_eval(sig, t - sig.t0); };
  s.derivative = [sig](double t, int n) {
    const double u = t - sig.t0;
    double v = 0.0;
    for (int j = n; j <= sig.order.n; ++j)
      v += sig.c[static_cast<size_t>(j)] * std::pow(u, j - n) / specfun::gamma(j - n + 1.0);
    const double a = sig.order.alpha;
    if (u > 0.0 || a - n > 0.0)
      v += sig.c_alpha * std::pow(u, a - n) / specfun::gamma(a - n + 1.0);
    if (sig.c_2an) {
      const double e = 2.0 * a - sig.order.n;
      if (u > 0.0 || e - n > 0.0)
        v += *sig.c_2an * std::pow(u, e - n) / specfun::gamma(e - n + 1.0);
    }
    return v;
  };
  return s;
}

/// Look up a signal from its textual spec: "exp_sin", "constant:<c>",
/// "monomial:<p>". Unknown names are rejected.
inline TestSignal make_signal(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string head = spec.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (head == "exp_sin") {
    if (!arg.empty()) throw std::invalid_argument("signal exp_sin takes no parameter");
    return detail::make_exp_sin();
  }
  if (head == "constant") {
    if (arg.empty()) throw std::invalid_argument("signal constant needs a value: constant:<c>");
    return detail::make_constant(std::stod(arg));
  }
  if (head == "monomial") {
    if (arg.empty()) throw std::invalid_argument("signal monomial needs an exponent: monomial:<p>");
    return detail::make_monomial(std::stod(arg));
  }
  throw std::invalid_argument("unknown signal '" + spec +
                              "' (expected exp_sin, constant:<c> or monomial:<p>)");
}

/// Sample an expression on a uniform grid.
inline SampledSignal sample_expression(const TestSignal& expr, double t_start, double dt,
                                       int count) {
  if (count < 1) throw std::invalid_argument("sample_expression: count must be >= 1");
  if (!(dt > 0.0)) throw std::invalid_argument("sample_expression: dt must be positive");
  SampledSignal out;
  out.t_start = t_start;
  out.dt = dt;
  out.values.resize(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i)
    out.values[static_cast<size_t>(i)] = expr.value(t_start + static_cast<double>(i) * dt);
  return out;
}

/// Target SNR (paper formula, noisy signal in the numerator) plus the seed of
/// the noise stream. Identical spec => bit-identical noise sequence.
struct NoiseSpec {
  double target_snr_db = 0.0;
  std::uint64_t seed = 0;
};

/// Deterministic standard-Gaussian stream: mt19937_64 (fully specified by the
/// C++ standard) feeding the basic Box-Muller transform. Per pair of raw
/// draws: u1 = ((x >> 11) + 1) * 2^-53 in (0,1], u2 = (x >> 11) * 2^-53 in
/// [0,1); r = sqrt(-2 ln u1); emits r cos(2 pi u2) then r sin(2 pi u2).
class GaussianRng {
 public:
  explicit GaussianRng(std::uint64_t seed) : eng_(seed) {}

  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = ((eng_() >> 11) + 1) * 0x1.0p-53;
    const double u2 = (eng_() >> 11) * 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * 3.141592653589793238462643383279502884 * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

/// SNR in dB with the noisy signal in the numerator:
/// 10 log10( sum y_i^2 / sum w_i^2 ).
inline double snr_db(const SampledSignal& y, const SampledSignal& noise) {
  if (y.values.size() != noise.values.size())
    throw std::invalid_argument("snr_db: length mismatch");
  double sy = 0.0, sw = 0.0;
  for (size_t i = 0; i < y.values.size(); ++i) {
    sy += y.values[i] * y.values[i];
    sw += noise.values[i] * noise.values[i];
  }
  if (sw == 0.0) throw std::domain_error("snr_db: zero noise energy");
  return 10.0 * std::log10(sy / sw);
}

struct AddNoiseResult {
  SampledSignal y;
  SampledSignal noise;
  double achieved_snr_db = 0.0;
  double sigma = 0.0;
};

/// Add seeded Gaussian noise scaled so the SNR formula above meets the
/// target. With y = x + sigma*g and R = 10^(target/10) the formula is a
/// quadratic in sigma,
///   sigma^2 (R-1) sum g^2 - 2 sigma sum x g - sum x^2 = 0,
/// solved in closed form against the realized draw g, so the achieved value
/// is exact up to rounding.
inline AddNoiseResult add_noise(const SampledSignal& x, const NoiseSpec& spec) {
  require_valid(x, "add_noise");
  if (!std::isfinite(spec.target_snr_db))
    throw std::invalid_argument("add_noise: target SNR must be finite");
  double sxx = 0.0;
  for (const double v : x.values) sxx += v * v;
  if (sxx == 0.0) throw std::domain_error("add_noise: degenerate (all-zero) signal");

  GaussianRng rng(spec.seed);
  std::vector<double> g(x.values.size());
  for (auto& v : g) v = rng.next();

  double sxg = 0.0, sgg = 0.0;
  for (size_t i = 0; i < g.size(); ++i) {
    sxg += x.values[i] * g[i];
    sgg += g[i] * g[i];
  }
  if (sgg == 0.0) throw numerical_error("add_noise: degenerate noise draw");

  const double ratio = std::pow(10.0, spec.target_snr_db / 10.0);
  const double a = (ratio - 1.0) * sgg;
  const double disc = sxg * sxg + a * sxx;
  if (!(disc >= 0.0) || a == 0.0) throw numerical_error("add_noise: no positive noise scale solves the target SNR");
  const double sigma = (sxg + std::sqrt(disc)) / a;
  if (!(sigma > 0.0)) throw numerical_error("add_noise: no positive noise scale solves the target SNR");

  AddNoiseResult out;
  out.sigma = sigma;
  out.noise.t_start = x.t_start;
  out.noise.dt = x.dt;
  out.noise.values.resize(g.size());
  out.y.t_start = x.t_start;
  out.y.dt = x.dt;
  out.y.values.resize(g.size());
  for (size_t i = 0; i < g.size(); ++i) {
    out.noise.values[i] = sigma * g[i];
    out.y.values[i] = x.values[i] + out.noise.values[i];
  }
  out.achieved_snr_db = snr_db(out.y, out.noise);
  return out;
}

}  // namespace fracdiff::signals
