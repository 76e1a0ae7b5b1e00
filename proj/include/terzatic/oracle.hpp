#pragma once

// Independent reference computations. Everything here is serial and walks
// the multi-index tensor literally through MultiIndexRange; none of it goes
// through the OpenMP tensor kernel it is used to check.

#include <chrono>
#include <functional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "terzatic/bounds.hpp"
#include "terzatic/core.hpp"
#include "terzatic/functional.hpp"
#include "terzatic/terzatic.hpp"

namespace terzatic::oracle {

inline constexpr std::size_t kBruteCap = 10'000;

/// Exact-mode literal table: "num/den" and finite decimals only.
struct ExactContext {
  static Rational literal(std::string_view text) { return parse_rational(text); }
};

namespace detail {

template <Scalar T>
T tuple_weight(const GeneralInstance<T>& g, const MultiIndex& idx, WeightFamily family) {
  T w = 1;
  for (std::size_t i = 0; i < g.k(); ++i) w *= g.weights(i, family)[idx.j[i] - 1];
  return w;
}

template <Scalar T>
T tuple_value(const GeneralInstance<T>& g, const MultiIndex& idx) {
  T s = 0;
  for (std::size_t i = 0; i < g.k(); ++i) s += g.q()[i] * g.block(i).x[idx.j[i] - 1];
  return s;
}

}  // namespace detail

/// min/max of Π p / Π r by full enumeration; ties keep the first
/// (lexicographically smallest) multi-index.
template <Scalar T>
RatioExtrema<T> brute_ratio_extrema(const GeneralInstance<T>& g, std::size_t cap = kBruteCap) {
  if (!g.has_r()) throw ValidationError("ratio extrema need r_blocks", "instance.r_blocks");
  RatioExtrema<T> out;
  bool first = true;
  for (const MultiIndex& idx : multi_indices(g.extents(), cap)) {
    const T ratio = detail::tuple_weight(g, idx, WeightFamily::p) / detail::tuple_weight(g, idx, WeightFamily::r);
    if (first || ratio < out.m) {
      out.m = ratio;
      out.argmin = idx;
    }
    if (first || ratio > out.M) {
      out.M = ratio;
      out.argmax = idx;
    }
    first = false;
  }
  return out;
}

/// Serial Σ over multi-indices of fn(Π p, Π r, S), plain left-to-right sum.
template <Scalar T, class Fn>
T brute_tensor_sum(const GeneralInstance<T>& g, Fn&& fn, std::size_t cap = kDefaultEnumerationCap) {
  T total = 0;
  for (const MultiIndex& idx : multi_indices(g.extents(), cap)) {
    const T wp = detail::tuple_weight(g, idx, WeightFamily::p);
    const T wr = g.has_r() ? detail::tuple_weight(g, idx, WeightFamily::r) : T(0);
    total += fn(wp, wr, detail::tuple_value(g, idx));
  }
  return total;
}

template <Scalar T>
T brute_generalized_jensen(const FunctionModel<T>& f, const GeneralInstance<T>& g, WeightFamily family,
                           std::size_t cap = kDefaultEnumerationCap) {
  if (family == WeightFamily::r && !g.has_r()) {
    throw ValidationError("r weights requested but r_blocks are absent", "instance.r_blocks");
  }
  // Barycenter written out as the double sum, independent of general_barycenter.
  T center = 0;
  for (std::size_t i = 0; i < g.k(); ++i) {
    for (std::size_t j = 0; j < g.block(i).size(); ++j) {
      center += g.q()[i] * g.weights(i, family)[j] * g.block(i).x[j];
    }
  }
  const T expectation = brute_tensor_sum(
      g,
      [&](const T& wp, const T& wr, const T& s) -> T { return (family == WeightFamily::p ? wp : wr) * f(s); },
      cap);
  return expectation - f(center);
}

template <Scalar T>
T brute_lemma5_rhs(const FunctionModel<T>& f, const T& c, const GeneralInstance<T>& g,
                   std::size_t cap = kDefaultEnumerationCap) {
  const T center = brute_tensor_sum(g, [](const T& wp, const T&, const T& s) -> T { return wp * s; }, cap);
  return brute_tensor_sum(
      g,
      [&](const T& wp, const T&, const T& s) -> T {
        const T d = s - center;
        const T quotient = is_zero(d) ? T(0) : T(f(abs_value(d)) / abs_value(d));
        return wp * s * (d * c + quotient);
      },
      cap);
}

/// Moments of the tensor weights: Σ Π w and Σ Π w · S.
template <Scalar T>
struct TensorMoments {
  T mass;
  T mean;
};

template <Scalar T>
TensorMoments<T> tensor_moments(const GeneralInstance<T>& g, WeightFamily family,
                                std::size_t cap = kDefaultEnumerationCap) {
  const bool use_p = family == WeightFamily::p;
  return {brute_tensor_sum(g, [&](const T& wp, const T& wr, const T&) -> T { return use_p ? wp : wr; }, cap),
          brute_tensor_sum(g, [&](const T& wp, const T& wr, const T& s) -> T { return (use_p ? wp : wr) * s; }, cap)};
}

/// Left-hand sides of the barycenter decompositions used by both
/// inequalities of the ratio-weighted bound. Expected: lower_mean = x̄,
/// upper_mean = x̌, upper_mass = 1, shift = x̌ − x̄.
template <Scalar T>
struct DecompositionIdentities {
  T lower_mean;  // Σ (Πp − mΠr) S + m x̌
  T upper_mean;  // Σ ((MΠr − Πp)/M) S + x̄/M
  T upper_mass;  // Σ ((MΠr − Πp)/M) + 1/M
  T shift;       // Σ_i q_i Σ_j (r_ij − p_ij) x_ij
};

template <Scalar T>
DecompositionIdentities<T> decomposition_identities(const GeneralInstance<T>& g,
                                                    std::size_t cap = kDefaultEnumerationCap) {
  const RatioExtrema<T> ext = brute_ratio_extrema(g, cap);
  const TensorMoments<T> p = tensor_moments(g, WeightFamily::p, cap);
  const TensorMoments<T> r = tensor_moments(g, WeightFamily::r, cap);
  DecompositionIdentities<T> out;
  out.lower_mean =
      brute_tensor_sum(g, [&](const T& wp, const T& wr, const T& s) -> T { return (wp - ext.m * wr) * s; }, cap) +
      ext.m * r.mean;
  out.upper_mean =
      brute_tensor_sum(g, [&](const T& wp, const T& wr, const T& s) -> T { return (ext.M * wr - wp) / ext.M * s; },
                       cap) +
      p.mean / ext.M;
  out.upper_mass =
      brute_tensor_sum(g, [&](const T& wp, const T& wr, const T&) -> T { return (ext.M * wr - wp) / ext.M; }, cap) +
      T(1) / ext.M;
  T shift = 0;
  for (std::size_t i = 0; i < g.k(); ++i) {
    for (std::size_t j = 0; j < g.block(i).size(); ++j) {
      shift += g.q()[i] * ((*g.r_blocks())[i][j] - g.block(i).p[j]) * g.block(i).x[j];
    }
  }
  out.shift = shift;
  return out;
}

enum class CheckId { jensen, generalized_jensen, def2, lemma5, thm6_lower, thm6_upper, threshold, ratio_extrema };

struct ExactInputs {
  FunctionModel<Rational> function;
  GeneralInstance<Rational> instance;
  std::optional<Polynomial<Rational>> certificate;  // overrides the model's
};

using ExactResult =
    std::variant<Rational, CheckReport<Rational>, Threshold<Rational>, RatioExtrema<Rational>>;

/// Re-evaluates one display end to end in rational arithmetic.
ExactResult exact_evaluate(CheckId id, const ExactInputs& inputs);

/// One row of the pinned example table: a named exact computation and the
/// rational it must reproduce bit-exactly.
struct PinnedExample {
  std::string name;
  std::string expected;
  std::function<Rational()> compute;
};

std::vector<PinnedExample> pinned_examples();

struct SelftestResult {
  std::size_t passed = 0;
  std::vector<std::string> failures;  // "<name>: expected X, got Y"
  std::chrono::duration<double> elapsed{};
  bool ok() const { return failures.empty(); }
};

SelftestResult run_selftest(const std::vector<PinnedExample>& table);

}  // namespace terzatic::oracle
