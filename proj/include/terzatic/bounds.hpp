#pragma once

#include <optional>
#include <stdexcept>
#include <type_traits>

#include "terzatic/core.hpp"
#include "terzatic/functional.hpp"
#include "terzatic/tensor_kernel.hpp"
#include "terzatic/terzatic.hpp"

namespace terzatic {

/// m = min and M = max over multi-indices of Π p_{i j_i} / Π r_{i j_i}.
template <Scalar T>
struct RatioExtrema {
  T m = 0;
  T M = 0;
  MultiIndex argmin;
  MultiIndex argmax;
  friend bool operator==(const RatioExtrema&, const RatioExtrema&) = default;
};

/// The product separates over blocks, so m and M are products of per-block
/// extrema. Per-block first occurrence gives the lexicographically smallest
/// witnessing multi-index.
template <Scalar T>
RatioExtrema<T> ratio_extrema(const GeneralInstance<T>& g) {
  if (!g.has_r()) throw ValidationError("ratio extrema need r_blocks", "instance.r_blocks");
  RatioExtrema<T> out;
  out.m = 1;
  out.M = 1;
  for (std::size_t i = 0; i < g.k(); ++i) {
    const auto& p = g.block(i).p;
    const auto& r = (*g.r_blocks())[i];
    std::size_t lo = 0, hi = 0;
    T lo_val = p[0] / r[0];
    T hi_val = lo_val;
    for (std::size_t j = 1; j < p.size(); ++j) {
      const T ratio = p[j] / r[j];
      if (ratio < lo_val) {
        lo_val = ratio;
        lo = j;
      }
      if (ratio > hi_val) {
        hi_val = ratio;
        hi = j;
      }
    }
    out.m *= lo_val;
    out.M *= hi_val;
    out.argmin.j.push_back(lo + 1);
    out.argmax.j.push_back(hi + 1);
  }
  return out;
}

enum class Side { lower, upper };

struct RatioCheckOptions : CheckOptions {
  std::optional<Direction> direction;
  /// Also evaluate the second term as the literal nested sum
  /// Σ_i q_i Σ_j (r_ij − p_ij) x_ij and throw std::logic_error if it
  /// disagrees with the compact x̌ − x̄ form.
  bool verify_literal_forms = false;
};

namespace detail {

template <Scalar T>
T literal_shift(const GeneralInstance<T>& g, WeightFamily plus, WeightFamily minus) {
  Accumulator<T> acc;
  for (std::size_t i = 0; i < g.k(); ++i) {
    const auto& a = g.weights(i, plus);
    const auto& b = g.weights(i, minus);
    for (std::size_t j = 0; j < g.block(i).size(); ++j) {
      acc.add(T(g.q()[i] * (a[j] - b[j]) * g.block(i).x[j]));
    }
  }
  return acc.value();
}

template <Scalar T>
void require_agree(const T& compact, const T& literal, const char* what) {
  bool ok;
  if constexpr (is_exact_v<T>) {
    ok = compact == literal;
  } else {
    ok = std::fabs(compact - literal) <= 1e-12 * std::max({std::fabs(compact), std::fabs(literal), 1.0});
  }
  if (!ok) {
    throw std::logic_error(std::string(what) + ": compact form " + to_string(compact) +
                           " disagrees with literal form " + to_string(literal));
  }
}

}  // namespace detail

/// J_k(p) − m J_k(r) against its lower bound, with C evaluated at x̄.
template <Scalar T>
CheckReport<T> theorem6_lower_check(const FunctionModel<T>& f, const GeneralInstance<T>& g,
                                    const Certificate<T>& cert, const RatioCheckOptions& options = {}) {
  const RatioExtrema<T> ext = ratio_extrema(g);
  const T& m = ext.m;
  const T x_bar = general_barycenter(g, WeightFamily::p);
  const T x_check = general_barycenter(g, WeightFamily::r);
  const T c = cert(x_bar);
  const T& upper = g.domain_upper();

  T lhs = generalized_jensen(f, g, WeightFamily::p, options.cap) -
          m * generalized_jensen(f, g, WeightFamily::r, options.cap);
  const T spread_part = tensor_sum(
      g,
      [&](const TensorPoint<T>& pt) -> T {
        return (pt.weight_p - m * pt.weight_r) * pt.value * terza_bracket(f, pt.value, x_bar, c, upper);
      },
      options.cap);
  const T shift_part = m * x_check * terza_bracket(f, x_check, x_bar, c, upper);
  if (options.verify_literal_forms) {
    const T shift = detail::literal_shift(g, WeightFamily::r, WeightFamily::p);
    const T r_mean = general_barycenter(g, WeightFamily::r);
    detail::require_agree(shift_part, T(m * r_mean * (shift * c + terza_quotient(f, shift, upper))),
                          "theorem6 lower second term");
  }
  T rhs = spread_part + shift_part;
  return make_report(std::move(lhs), std::move(rhs), options.direction.value_or(Direction::super), c, x_bar,
                     std::optional<T>(x_check), g.is_degenerate(),
                     options.relative_tolerance.value_or(default_relative_tolerance(f)));
}

/// M J_k(r) − J_k(p) against its lower bound, with C evaluated at x̌.
template <Scalar T>
CheckReport<T> theorem6_upper_check(const FunctionModel<T>& f, const GeneralInstance<T>& g,
                                    const Certificate<T>& cert, const RatioCheckOptions& options = {}) {
  const RatioExtrema<T> ext = ratio_extrema(g);
  const T& M = ext.M;
  const T x_bar = general_barycenter(g, WeightFamily::p);
  const T x_check = general_barycenter(g, WeightFamily::r);
  const T c = cert(x_check);
  const T& upper = g.domain_upper();

  T lhs = M * generalized_jensen(f, g, WeightFamily::r, options.cap) -
          generalized_jensen(f, g, WeightFamily::p, options.cap);
  const T spread_part = tensor_sum(
      g,
      [&](const TensorPoint<T>& pt) -> T {
        return (M * pt.weight_r - pt.weight_p) * pt.value * terza_bracket(f, pt.value, x_check, c, upper);
      },
      options.cap);
  const T shift_part = x_bar * terza_bracket(f, x_bar, x_check, c, upper);
  if (options.verify_literal_forms) {
    const T shift = detail::literal_shift(g, WeightFamily::p, WeightFamily::r);
    const T p_mean = general_barycenter(g, WeightFamily::p);
    detail::require_agree(shift_part, T(p_mean * (shift * c + terza_quotient(f, shift, upper))),
                          "theorem6 upper second term");
  }
  T rhs = spread_part + shift_part;
  return make_report(std::move(lhs), std::move(rhs), options.direction.value_or(Direction::super), c, x_bar,
                     std::optional<T>(x_check), g.is_degenerate(),
                     options.relative_tolerance.value_or(default_relative_tolerance(f)));
}

template <Scalar T>
CheckReport<T> theorem6_lower_check(const FunctionModel<T>& f, const GeneralInstance<T>& g,
                                    const RatioCheckOptions& options = {}) {
  return theorem6_lower_check(f, g, Certificate<T>::of(f), options);
}

template <Scalar T>
CheckReport<T> theorem6_upper_check(const FunctionModel<T>& f, const GeneralInstance<T>& g,
                                    const RatioCheckOptions& options = {}) {
  return theorem6_upper_check(f, g, Certificate<T>::of(f), options);
}

/// k copies of the block (p, x), with r copied alongside when given.
template <Scalar T>
GeneralInstance<T> replicate_instance(const Weights<T>& p, const PointVector<T>& x, const Weights<T>& q,
                                      const std::optional<std::type_identity_t<Weights<T>>>& r = std::nullopt) {
  std::vector<Block<T>> blocks(q.size(), Block<T>(p, x));
  std::optional<std::vector<Weights<T>>> r_blocks;
  if (r) r_blocks = std::vector<Weights<T>>(q.size(), *r);
  return GeneralInstance<T>(q, std::move(blocks), std::move(r_blocks));
}

/// The k = 1 displays evaluated directly from (x, p, r), without the tensor
/// machinery.
template <Scalar T>
CheckReport<T> corollary8_check(const FunctionModel<T>& f, const PointVector<T>& x, const Weights<T>& p,
                                const Weights<T>& r, Side side, const Certificate<T>& cert,
                                const RatioCheckOptions& options = {}) {
  if (p.size() != x.size() || r.size() != x.size()) {
    throw ValidationError("x, p and r must have equal lengths");
  }
  const SimpleInstance<T> with_p(p, x);
  const SimpleInstance<T> with_r(r, x);
  T m = p[0] / r[0];
  T M = m;
  for (std::size_t i = 1; i < x.size(); ++i) {
    const T ratio = p[i] / r[i];
    if (ratio < m) m = ratio;
    if (ratio > M) M = ratio;
  }
  const T x_bar = barycenter(with_p);
  const T x_check = barycenter(with_r);
  const T& upper = x.domain_upper();
  bool degenerate = true;
  for (std::size_t i = 1; i < x.size(); ++i) degenerate = degenerate && x[i] == x[0];

  T lhs, c;
  Accumulator<T> rhs;
  if (side == Side::lower) {
    c = cert(x_bar);
    lhs = jensen(f, with_p) - m * jensen(f, with_r);
    Accumulator<T> shift;
    for (std::size_t i = 0; i < x.size(); ++i) {
      rhs.add(T((p[i] - m * r[i]) * x[i] * terza_bracket(f, x[i], x_bar, c, upper)));
      shift.add(T((r[i] - p[i]) * x[i]));
    }
    const T s = shift.value();
    rhs.add(T(m * x_check * (s * c + terza_quotient(f, s, upper))));
  } else {
    c = cert(x_check);
    lhs = M * jensen(f, with_r) - jensen(f, with_p);
    Accumulator<T> shift;
    for (std::size_t i = 0; i < x.size(); ++i) {
      rhs.add(T((M * r[i] - p[i]) * x[i] * terza_bracket(f, x[i], x_check, c, upper)));
      shift.add(T((p[i] - r[i]) * x[i]));
    }
    const T s = shift.value();
    rhs.add(T(x_bar * (s * c + terza_quotient(f, s, upper))));
  }
  return make_report(std::move(lhs), rhs.value(), options.direction.value_or(Direction::super), c, x_bar,
                     std::optional<T>(x_check), degenerate,
                     options.relative_tolerance.value_or(default_relative_tolerance(f)));
}

}  // namespace terzatic
