#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "terzatic/core.hpp"
#include "terzatic/functional.hpp"
#include "terzatic/random.hpp"
#include "terzatic/tensor_kernel.hpp"

namespace terzatic {

enum class Direction { super, sub };
enum class Verdict { holds, violated, degenerate };

template <Scalar T>
struct CheckReport {
  T lhs = 0;
  T rhs = 0;
  T slack = 0;  // lhs − rhs (super) or rhs − lhs (sub)
  Verdict verdict = Verdict::holds;
  T tolerance = 0;  // absolute; holds iff slack >= −tolerance
  T c_used = 0;
  T barycenter = 0;                    // x̄
  std::optional<T> barycenter_r;       // x̌, for checks that use the r family
  Direction direction = Direction::super;

  friend bool operator==(const CheckReport&, const CheckReport&) = default;
};

struct CheckOptions {
  /// Replaces the mode default (float 1e-9, float with cube_log 1e-8,
  /// rational 0). Scaled by max(|lhs|, |rhs|, 1).
  std::optional<double> relative_tolerance;
  std::size_t cap = kDefaultEnumerationCap;
};

template <Scalar T>
double default_relative_tolerance(const FunctionModel<T>& f) {
  if constexpr (is_exact_v<T>) {
    return 0.0;
  } else {
    return f.is_transcendental() ? 1e-8 : 1e-9;
  }
}

template <Scalar T>
Direction default_direction(const FunctionModel<T>& f) {
  return f.claim() == Claim::subterzatic ? Direction::sub : Direction::super;
}

template <Scalar T>
CheckReport<T> make_report(T lhs, T rhs, Direction direction, T c_used, T center,
                           std::optional<T> center_r, bool degenerate, double relative_tolerance) {
  CheckReport<T> r;
  r.slack = direction == Direction::super ? T(lhs - rhs) : T(rhs - lhs);
  const T scale = max_of(max_of(abs_value(lhs), abs_value(rhs)), T(1));
  r.tolerance = from_double<T>(relative_tolerance) * scale;
  r.lhs = std::move(lhs);
  r.rhs = std::move(rhs);
  r.c_used = std::move(c_used);
  r.barycenter = std::move(center);
  r.barycenter_r = std::move(center_r);
  r.direction = direction;
  if (degenerate) {
    r.verdict = Verdict::degenerate;
  } else {
    r.verdict = r.slack >= -r.tolerance ? Verdict::holds : Verdict::violated;
  }
  return r;
}

/// C as a function of the barycenter it is evaluated at.
template <Scalar T>
class Certificate {
 public:
  explicit Certificate(std::function<T(const T&)> fn) : fn_(std::move(fn)) {}

  static Certificate polynomial(Polynomial<T> poly) {
    return Certificate([poly = std::move(poly)](const T& x) { return poly(x); });
  }
  static Certificate constant(T c) {
    return Certificate([c = std::move(c)](const T&) { return c; });
  }
  /// The model's own certificate; ValidationError when it has none.
  static Certificate of(const FunctionModel<T>& f) {
    if (!f.certificate()) {
      throw ValidationError("function has no certificate and no override was given", "certificate");
    }
    return polynomial(*f.certificate());
  }

  T operator()(const T& x) const { return fn_(x); }

 private:
  std::function<T(const T&)> fn_;
};

template <Scalar T>
Certificate<T> resolve_certificate(const FunctionModel<T>& f, const std::optional<T>& c_override) {
  return c_override ? Certificate<T>::constant(*c_override) : Certificate<T>::of(f);
}

/// (s − center)·c + f(|s − center|)/|s − center|, the bracket shared by
/// every lower-bound display.
template <Scalar T>
T terza_bracket(const FunctionModel<T>& f, const T& s, const T& center, const T& c, const T& upper) {
  const T d = s - center;
  return d * c + terza_quotient(f, d, upper);
}

/// Σ p_i x_i [(x_i − x̄)c + f(|x_i − x̄|)/|x_i − x̄|]
template <Scalar T>
T def2_rhs(const FunctionModel<T>& f, const T& c, const SimpleInstance<T>& inst) {
  const T center = barycenter(inst);
  Accumulator<T> acc;
  for (std::size_t i = 0; i < inst.size(); ++i) {
    acc.add(T(inst.p[i] * inst.x[i] * terza_bracket(f, inst.x[i], center, c, inst.domain_upper())));
  }
  return acc.value();
}

/// c Σ p_i (x_i − x̄)² + Σ p_i x_i f(|x_i − x̄|)/|x_i − x̄|
template <Scalar T>
T def2_rhs_alt(const FunctionModel<T>& f, const T& c, const SimpleInstance<T>& inst) {
  const T center = barycenter(inst);
  Accumulator<T> spread, tail;
  for (std::size_t i = 0; i < inst.size(); ++i) {
    const T d = inst.x[i] - center;
    spread.add(T(inst.p[i] * d * d));
    tail.add(T(inst.p[i] * inst.x[i] * terza_quotient(f, d, inst.domain_upper())));
  }
  return c * spread.value() + tail.value();
}

template <Scalar T>
CheckReport<T> check_def2(const FunctionModel<T>& f, const SimpleInstance<T>& inst,
                          std::optional<Direction> direction = std::nullopt,
                          const std::optional<T>& c_override = std::nullopt, const CheckOptions& options = {}) {
  const Certificate<T> cert = resolve_certificate(f, c_override);
  const T center = barycenter(inst);
  const T c = cert(center);
  T lhs = jensen(f, inst);
  T rhs = def2_rhs(f, c, inst);
  bool degenerate = true;
  for (std::size_t i = 1; i < inst.size(); ++i) degenerate = degenerate && inst.x[i] == inst.x[0];
  return make_report(std::move(lhs), std::move(rhs), direction.value_or(default_direction(f)), c, center,
                     std::optional<T>{}, degenerate,
                     options.relative_tolerance.value_or(default_relative_tolerance(f)));
}

/// Σ_{multi-indices} Π p · S · [(S − x̄)c + f(|S − x̄|)/|S − x̄|]
template <Scalar T>
T lemma5_rhs(const FunctionModel<T>& f, const T& c, const GeneralInstance<T>& g,
             std::size_t cap = kDefaultEnumerationCap) {
  const T center = general_barycenter(g, WeightFamily::p);
  const T& upper = g.domain_upper();
  return tensor_sum(
      g,
      [&](const TensorPoint<T>& pt) -> T {
        return pt.weight_p * pt.value * terza_bracket(f, pt.value, center, c, upper);
      },
      cap);
}

template <Scalar T>
CheckReport<T> check_lemma5(const FunctionModel<T>& f, const GeneralInstance<T>& g,
                            std::optional<Direction> direction = std::nullopt,
                            const std::optional<T>& c_override = std::nullopt, const CheckOptions& options = {}) {
  const Certificate<T> cert = resolve_certificate(f, c_override);
  const T center = general_barycenter(g, WeightFamily::p);
  const T c = cert(center);
  T lhs = generalized_jensen(f, g, WeightFamily::p, options.cap);
  T rhs = lemma5_rhs(f, c, g, options.cap);
  return make_report(std::move(lhs), std::move(rhs), direction.value_or(default_direction(f)), c, center,
                     std::optional<T>{}, g.is_degenerate(),
                     options.relative_tolerance.value_or(default_relative_tolerance(f)));
}

/// Largest C for which the lower bound holds at one instance, or +∞ when
/// all points coincide.
template <Scalar T>
struct Threshold {
  std::optional<T> value;  // nullopt encodes +∞

  bool is_infinite() const { return !value.has_value(); }
  friend bool operator==(const Threshold&, const Threshold&) = default;
};

/// (J − B)/A with A = Σ p (x − x̄)², B = Σ p x f(|x − x̄|)/|x − x̄|.
/// The lower bound is affine in C, so it holds iff C <= (J − B)/A.
template <Scalar T>
Threshold<T> feasibility_threshold(const FunctionModel<T>& f, const SimpleInstance<T>& inst) {
  const T center = barycenter(inst);
  Accumulator<T> a, b;
  for (std::size_t i = 0; i < inst.size(); ++i) {
    const T d = inst.x[i] - center;
    a.add(T(inst.p[i] * d * d));
    b.add(T(inst.p[i] * inst.x[i] * terza_quotient(f, d, inst.domain_upper())));
  }
  const T spread = a.value();
  if (is_zero(spread)) return {};
  return {T((jensen(f, inst) - b.value()) / spread)};
}

namespace detail {

template <Scalar T>
T uniform_fraction(std::mt19937_64& rng) {
  if constexpr (is_exact_v<T>) {
    // k/d with d <= 64
    const long d = std::uniform_int_distribution<long>(1, 64)(rng);
    const long k = std::uniform_int_distribution<long>(0, d)(rng);
    Rational out(k, d);
    out.canonicalize();
    return out;
  } else {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  }
}

template <Scalar T>
T dyadic(unsigned k) {
  if constexpr (is_exact_v<T>) {
    Rational out(1, 1);
    mpz_mul_2exp(out.get_den_mpz_t(), out.get_den_mpz_t(), k);
    return out;
  } else {
    return std::ldexp(1.0, -static_cast<int>(k));
  }
}

/// Offset in (0, 1]: uniform half of the time, otherwise at the boundary
/// (1) or at a log-uniform scale 2^-k close to 0. Extremal thresholds sit
/// at the ends of the interval and near coincidence with x̄, so the sampler
/// reaches both.
template <Scalar T>
T multiscale_offset(std::mt19937_64& rng) {
  const int mode = std::uniform_int_distribution<int>(0, 3)(rng);
  if (mode == 0) return T(1);
  if (mode == 1) return dyadic<T>(std::uniform_int_distribution<unsigned>(1, 20)(rng));
  T u = uniform_fraction<T>(rng);
  while (is_zero(u)) u = uniform_fraction<T>(rng);
  return u;
}

template <Scalar T>
T positive_weight(std::mt19937_64& rng) {
  if constexpr (is_exact_v<T>) {
    return Rational(std::uniform_int_distribution<long>(1, 64)(rng));
  } else {
    return std::uniform_real_distribution<double>(1e-3, 1.0)(rng);
  }
}

}  // namespace detail

/// Instance with barycenter x_bar (exactly in rational mode). Points 0 and 1
/// straddle x_bar; the rest are free in [0, a] but never equal to x_bar.
/// Weights are a random positive convex combination of the two-point
/// solutions of every straddling pair.
template <Scalar T>
SimpleInstance<T> sample_instance_with_barycenter(const T& x_bar, std::size_t n, std::uint64_t seed,
                                                  const T& domain_upper = T(1)) {
  if (!(x_bar > 0) || !(x_bar < domain_upper)) {
    throw ValidationError("x_bar must lie strictly inside (0, " + to_string(domain_upper) + ")", "x_bar");
  }
  if (n < 2) throw ValidationError("n must be >= 2", "n");
  std::mt19937_64 rng(seed);
  std::vector<T> x(n);
  const T below_span = x_bar;
  const T above_span = domain_upper - x_bar;
  x[0] = x_bar - below_span * detail::multiscale_offset<T>(rng);
  x[1] = x_bar + above_span * detail::multiscale_offset<T>(rng);
  for (std::size_t i = 2; i < n; ++i) {
    do {
      const int mode = std::uniform_int_distribution<int>(0, 7)(rng);
      if (mode == 0) {
        x[i] = T(0);
      } else if (mode == 1) {
        x[i] = domain_upper;
      } else {
        x[i] = domain_upper * detail::uniform_fraction<T>(rng);
      }
    } while (x[i] == x_bar);
  }
  if constexpr (!is_exact_v<T>) {
    // Rounding may push the forced points onto x_bar.
    if (!(x[0] < x_bar)) x[0] = 0.0;
    if (!(x[1] > x_bar) || x[1] > domain_upper) x[1] = domain_upper;
  }

  std::vector<T> w(n, T(0));
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (x[i] < x_bar && x_bar < x[j]) pairs.emplace_back(i, j);
    }
  }
  std::vector<T> lambda(pairs.size());
  Accumulator<T> lambda_total;
  for (auto& l : lambda) {
    l = detail::positive_weight<T>(rng);
    lambda_total.add(l);
  }
  const T total = lambda_total.value();
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto [i, j] = pairs[k];
    const T share = lambda[k] / total;
    const T gap = x[j] - x[i];
    w[i] += share * (x[j] - x_bar) / gap;
    w[j] += share * (x_bar - x[i]) / gap;
  }
  return SimpleInstance<T>(Weights<T>::normalize(std::move(w)), PointVector<T>(std::move(x), domain_upper));
}

struct SizeRange {
  std::size_t min = 2;
  std::size_t max = 6;
};

template <Scalar T>
struct ThresholdSummary {
  T min = 0;
  T median = 0;  // lower median
  T max = 0;
};

template <Scalar T>
struct CertificateEstimate {
  T x_bar = 0;
  std::size_t samples = 0;
  T c_sup_estimate = 0;  // min observed threshold
  SimpleInstance<T> witness;
  std::size_t witness_trial = 0;
  ThresholdSummary<T> thresholds;
};

/// The n and instance used by trial `trial` of estimate_certificate.
template <Scalar T>
SimpleInstance<T> certificate_trial_instance(const T& x_bar, SizeRange n_range, std::uint64_t seed,
                                             std::size_t trial, const T& domain_upper) {
  const std::uint64_t sub = derive_seed(seed, trial);
  std::mt19937_64 rng(sub);
  const std::size_t n = std::uniform_int_distribution<std::size_t>(n_range.min, n_range.max)(rng);
  return sample_instance_with_barycenter(x_bar, n, mix64(sub), domain_upper);
}

/// min over sampled instances with barycenter x_bar of the feasibility
/// threshold. Trial i depends only on (seed, i), so adding trials can only
/// lower the estimate.
template <Scalar T>
CertificateEstimate<T> estimate_certificate(const FunctionModel<T>& f, const T& x_bar, SizeRange n_range,
                                            std::size_t trials, std::uint64_t seed,
                                            const T& domain_upper = T(1)) {
  if (trials < 1) throw ValidationError("trials must be >= 1", "trials");
  if (n_range.min < 2 || n_range.max < n_range.min) throw ValidationError("n range must satisfy 2 <= min <= max", "n_range");
  if (!(x_bar > 0) || !(x_bar < domain_upper)) {
    throw ValidationError("x_bar must lie strictly inside (0, " + to_string(domain_upper) + ")", "x_bar");
  }
  std::vector<T> values(trials);
  std::vector<std::exception_ptr> errors(trials);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t t = 0; t < static_cast<std::ptrdiff_t>(trials); ++t) {
    try {
      const auto inst = certificate_trial_instance(x_bar, n_range, seed, static_cast<std::size_t>(t), domain_upper);
      // Straddling points guarantee a positive spread, so the threshold is finite.
      values[t] = *feasibility_threshold(f, inst).value;
    } catch (...) {
      errors[t] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::size_t best = 0;
  for (std::size_t t = 1; t < trials; ++t) {
    if (values[t] < values[best]) best = t;
  }
  std::vector<T> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  return CertificateEstimate<T>{
      x_bar,
      trials,
      values[best],
      certificate_trial_instance(x_bar, n_range, seed, best, domain_upper),
      best,
      {sorted.front(), sorted[(sorted.size() - 1) / 2], sorted.back()},
  };
}

}  // namespace terzatic
