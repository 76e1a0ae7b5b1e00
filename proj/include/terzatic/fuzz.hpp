#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string_view>
#include <vector>

#include "terzatic/bounds.hpp"
#include "terzatic/core.hpp"
#include "terzatic/random.hpp"
#include "terzatic/terzatic.hpp"

namespace terzatic {

enum class FuzzTarget { def2, lemma5, thm6_lower, thm6_upper, cor8_lower, cor8_upper };

std::string_view to_string(FuzzTarget target);
FuzzTarget parse_fuzz_target(std::string_view name);

constexpr bool needs_r(FuzzTarget t) {
  return t != FuzzTarget::def2 && t != FuzzTarget::lemma5;
}

/// def2 and the k = 1 corollary draw a single block.
constexpr bool single_block_target(FuzzTarget t) {
  return t == FuzzTarget::def2 || t == FuzzTarget::cor8_lower || t == FuzzTarget::cor8_upper;
}

struct FuzzShape {
  SizeRange k{1, 3};
  SizeRange n{1, 4};
};

template <Scalar T>
struct FuzzConfig {
  FuzzTarget target = FuzzTarget::def2;
  FunctionModel<T> function;
  std::optional<Polynomial<T>> certificate{};  // replaces the model's when set
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
  FuzzShape shape{};
  T domain_upper = 1;
  std::optional<Direction> direction{};
  bool force_r_equals_p = false;
  std::optional<double> relative_tolerance{};
  std::size_t cap = kDefaultEnumerationCap;
};

namespace detail {

template <Scalar T>
T fuzz_fraction(std::mt19937_64& rng) {
  if constexpr (is_exact_v<T>) {
    const long d = std::uniform_int_distribution<long>(1, 64)(rng);
    Rational out(std::uniform_int_distribution<long>(0, d)(rng), d);
    out.canonicalize();
    return out;
  } else {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  }
}

/// Strictly positive draw for weights: k/d with 1 <= k <= d <= 64 in
/// rational mode, a uniform on (0, 1] in float mode.
template <Scalar T>
T fuzz_positive(std::mt19937_64& rng) {
  if constexpr (is_exact_v<T>) {
    const long d = std::uniform_int_distribution<long>(1, 64)(rng);
    Rational out(std::uniform_int_distribution<long>(1, d)(rng), d);
    out.canonicalize();
    return out;
  } else {
    return 1.0 - std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  }
}

template <Scalar T>
Weights<T> fuzz_weights(std::size_t n, std::mt19937_64& rng) {
  std::vector<T> raw(n);
  for (auto& w : raw) w = fuzz_positive<T>(rng);
  return Weights<T>::normalize(std::move(raw));
}

template <Scalar T>
PointVector<T> fuzz_points(std::size_t n, const T& upper, std::mt19937_64& rng) {
  std::vector<T> x(n);
  for (auto& v : x) {
    v = upper * fuzz_fraction<T>(rng);
    if (v > upper) v = upper;
  }
  return PointVector<T>(std::move(x), upper);
}

inline std::size_t draw_size(SizeRange range, std::mt19937_64& rng) {
  return std::uniform_int_distribution<std::size_t>(range.min, range.max)(rng);
}

}  // namespace detail

/// Uniform points on [0, a], normalized positive weights. Deterministic per sub-seed.
template <Scalar T>
SimpleInstance<T> gen_simple(const FuzzShape& shape, const T& domain_upper, std::uint64_t sub_seed) {
  std::mt19937_64 rng(sub_seed);
  const std::size_t n = detail::draw_size(shape.n, rng);
  auto p = detail::fuzz_weights<T>(n, rng);
  auto x = detail::fuzz_points<T>(n, domain_upper, rng);
  return SimpleInstance<T>(std::move(p), std::move(x));
}

template <Scalar T>
GeneralInstance<T> gen_general(const FuzzShape& shape, const T& domain_upper, std::uint64_t sub_seed, bool with_r,
                               bool r_equals_p = false) {
  std::mt19937_64 rng(sub_seed);
  const std::size_t k = detail::draw_size(shape.k, rng);
  auto q = detail::fuzz_weights<T>(k, rng);
  std::vector<Block<T>> blocks;
  std::vector<Weights<T>> r_blocks;
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t n = detail::draw_size(shape.n, rng);
    auto p = detail::fuzz_weights<T>(n, rng);
    auto x = detail::fuzz_points<T>(n, domain_upper, rng);
    if (with_r) r_blocks.push_back(r_equals_p ? p : detail::fuzz_weights<T>(n, rng));
    blocks.emplace_back(std::move(p), std::move(x));
  }
  std::optional<std::vector<Weights<T>>> r;
  if (with_r) r = std::move(r_blocks);
  return GeneralInstance<T>(std::move(q), std::move(blocks), std::move(r));
}

template <Scalar T>
struct FuzzTrial {
  std::size_t trial = 0;
  std::uint64_t sub_seed = 0;
  std::optional<GeneralInstance<T>> instance;
  std::optional<CheckReport<T>> report;  // empty when the trial hit the cap
};

template <Scalar T>
struct FuzzViolation {
  std::size_t trial;
  std::uint64_t sub_seed;
  GeneralInstance<T> instance;
  CheckReport<T> report;
};

template <Scalar T>
struct FuzzReport {
  std::size_t trials_run = 0;
  std::vector<FuzzViolation<T>> violations;  // ordered by trial index
  std::optional<T> min_slack;
  std::optional<std::size_t> min_slack_trial;
  std::size_t degenerate_count = 0;
  std::size_t cap_errors = 0;
};

template <Scalar T>
void validate(const FuzzConfig<T>& config) {
  const auto& s = config.shape;
  if (s.n.min < 1 || s.n.max < s.n.min) throw ValidationError("n range must satisfy 1 <= min <= max", "n_range");
  if (s.k.min < 1 || s.k.max < s.k.min) throw ValidationError("k range must satisfy 1 <= min <= max", "k_range");
  if (!(config.domain_upper > 0)) throw ValidationError("domain upper bound must be > 0", "domain_upper");
  if (!single_block_target(config.target)) {
    // Largest possible tensor must fit under the cap.
    const double largest = std::pow(static_cast<double>(s.n.max), static_cast<double>(s.k.max));
    if (largest > static_cast<double>(config.cap)) {
      throw ValidationError("shape allows " + format_double(largest) + " multi-indices, above the cap", "shape");
    }
  }
}

/// Runs (or replays) trial `trial`: everything is derived from
/// derive_seed(config.seed, trial).
template <Scalar T>
FuzzTrial<T> run_trial(const FuzzConfig<T>& config, std::size_t trial) {
  FuzzTrial<T> out;
  out.trial = trial;
  out.sub_seed = derive_seed(config.seed, trial);
  const FunctionModel<T> f =
      config.certificate ? config.function.with_certificate(config.certificate) : config.function;
  const Certificate<T> cert = Certificate<T>::of(f);
  RatioCheckOptions opts;
  opts.relative_tolerance = config.relative_tolerance;
  opts.cap = config.cap;
  opts.direction = config.direction;

  FuzzShape shape = config.shape;
  if (single_block_target(config.target)) shape.k = {1, 1};
  const auto g = gen_general<T>(shape, config.domain_upper, out.sub_seed, needs_r(config.target),
                                config.force_r_equals_p);
  out.instance = g;
  try {
    switch (config.target) {
      case FuzzTarget::def2: {
        const SimpleInstance<T> inst(g.block(0).p, g.block(0).x);
        out.report = check_def2(f, inst, config.direction, std::optional<T>(cert(barycenter(inst))), opts);
        break;
      }
      case FuzzTarget::lemma5:
        out.report = check_lemma5(f, g, config.direction,
                                  std::optional<T>(cert(general_barycenter(g, WeightFamily::p))), opts);
        break;
      case FuzzTarget::thm6_lower:
        out.report = theorem6_lower_check(f, g, cert, opts);
        break;
      case FuzzTarget::thm6_upper:
        out.report = theorem6_upper_check(f, g, cert, opts);
        break;
      case FuzzTarget::cor8_lower:
      case FuzzTarget::cor8_upper:
        out.report = corollary8_check(f, g.block(0).x, g.block(0).p, (*g.r_blocks())[0],
                                      config.target == FuzzTarget::cor8_lower ? Side::lower : Side::upper, cert, opts);
        break;
    }
  } catch (const CapExceeded&) {
    out.report.reset();
  }
  return out;
}

/// Trials run concurrently; the report is assembled in trial order so it is
/// identical for any schedule.
template <Scalar T>
FuzzReport<T> run_fuzz(const FuzzConfig<T>& config) {
  validate(config);
  if (!config.certificate && !config.function.certificate()) {
    throw ValidationError("function has no certificate and none was given", "certificate");
  }
  std::vector<std::optional<FuzzTrial<T>>> trials(config.trials);
  std::vector<std::exception_ptr> errors(config.trials);
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t t = 0; t < static_cast<std::ptrdiff_t>(config.trials); ++t) {
    try {
      trials[t] = run_trial(config, static_cast<std::size_t>(t));
    } catch (...) {
      errors[t] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  FuzzReport<T> report;
  report.trials_run = config.trials;
  for (auto& slot : trials) {
    FuzzTrial<T>& t = *slot;
    if (!t.report) {
      ++report.cap_errors;
      continue;
    }
    const CheckReport<T>& r = *t.report;
    if (r.verdict == Verdict::degenerate) ++report.degenerate_count;
    if (!report.min_slack || r.slack < *report.min_slack) {
      report.min_slack = r.slack;
      report.min_slack_trial = t.trial;
    }
    if (r.verdict == Verdict::violated) {
      report.violations.push_back({t.trial, t.sub_seed, std::move(*t.instance), r});
    }
  }
  return report;
}

}  // namespace terzatic
