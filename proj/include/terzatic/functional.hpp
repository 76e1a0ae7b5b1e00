#pragma once

#include <algorithm>
#include <climits>
#include <cmath>
#include <cstdlib>
#include <utility>
#include <vector>

#include "terzatic/core.hpp"
#include "terzatic/tensor_kernel.hpp"

namespace terzatic {

/// J(f, p, x) = Σ p_i f(x_i) − f(Σ p_i x_i).
template <Scalar T>
T jensen(const FunctionModel<T>& f, const SimpleInstance<T>& inst) {
  Accumulator<T> acc;
  for (std::size_t i = 0; i < inst.size(); ++i) acc.add(T(inst.p[i] * f(inst.x[i])));
  acc.add(T(-f(barycenter(inst))));
  return acc.value();
}

template <Scalar T>
struct Atom {
  T weight;
  T value;
  friend bool operator==(const Atom&, const Atom&) = default;
};

/// Discrete law of S = Σ_i q_i x_{i j_i} under the tensor weights Π w_{i j_i}.
template <Scalar T>
struct AtomDistribution {
  std::vector<Atom<T>> atoms;
  T total_weight = 0;
  bool merged = false;

  /// Σ w·v
  T mean() const {
    Accumulator<T> acc;
    for (const auto& a : atoms) acc.add(T(a.weight * a.value));
    return acc.value();
  }
};

namespace detail {

/// Identifies doubles that agree to 12 significant decimal digits.
inline std::pair<int, long long> merge_key(double v) {
  if (v == 0.0) return {INT_MIN, 0};
  int e = static_cast<int>(std::floor(std::log10(std::fabs(v))));
  long long m = std::llround(v / std::pow(10.0, e - 11));
  if (std::llabs(m) >= 1'000'000'000'000LL) {
    ++e;
    m = std::llround(v / std::pow(10.0, e - 11));
  }
  return {e, m};
}

template <Scalar T>
bool same_atom(const T& a, const T& b) {
  if constexpr (is_exact_v<T>) {
    return a == b;
  } else {
    return merge_key(a) == merge_key(b);
  }
}

}  // namespace detail

/// Unmerged: one atom per multi-index, in enumeration order. Merged: sorted
/// ascending with equal values coalesced (exact equality in rational mode,
/// 12 significant digits in float mode, where the merged value is the
/// weighted mean of its group).
template <Scalar T>
AtomDistribution<T> tensor_distribution(const GeneralInstance<T>& g, WeightFamily family, bool merge,
                                        std::size_t cap = kDefaultEnumerationCap) {
  if (family == WeightFamily::r && !g.has_r()) {
    throw ValidationError("r weights requested but r_blocks are absent", "instance.r_blocks");
  }
  const auto points = tensor_points(g, cap);
  AtomDistribution<T> dist;
  dist.atoms.reserve(points.size());
  for (const auto& pt : points) {
    dist.atoms.push_back({family == WeightFamily::p ? pt.weight_p : pt.weight_r, pt.value});
  }
  if (merge) {
    std::stable_sort(dist.atoms.begin(), dist.atoms.end(),
                     [](const Atom<T>& a, const Atom<T>& b) { return a.value < b.value; });
    std::vector<Atom<T>> merged;
    for (std::size_t i = 0; i < dist.atoms.size();) {
      std::size_t j = i;
      Accumulator<T> w, wv;
      while (j < dist.atoms.size() && detail::same_atom(dist.atoms[j].value, dist.atoms[i].value)) {
        w.add(dist.atoms[j].weight);
        wv.add(T(dist.atoms[j].weight * dist.atoms[j].value));
        ++j;
      }
      if (j == i + 1) {
        merged.push_back(dist.atoms[i]);
      } else if constexpr (is_exact_v<T>) {
        merged.push_back({w.value(), dist.atoms[i].value});
      } else {
        merged.push_back({w.value(), wv.value() / w.value()});
      }
      i = j;
    }
    dist.atoms = std::move(merged);
    dist.merged = true;
  }
  Accumulator<T> total;
  for (const auto& a : dist.atoms) total.add(a.weight);
  dist.total_weight = total.value();
  return dist;
}

/// J_k: Σ_{multi-indices} Π w_{i j_i} f(Σ_i q_i x_{i j_i}) − f(Σ_i q_i Σ_j w_ij x_ij).
template <Scalar T>
T generalized_jensen(const FunctionModel<T>& f, const GeneralInstance<T>& g, WeightFamily family,
                     std::size_t cap = kDefaultEnumerationCap) {
  const T center = general_barycenter(g, family);
  const bool use_p = family == WeightFamily::p;
  const T expectation = tensor_sum(
      g, [&](const TensorPoint<T>& pt) -> T { return (use_p ? pt.weight_p : pt.weight_r) * f(pt.value); },
      cap);
  return expectation - f(center);
}

/// Jensen gap of an atom distribution: Σ w f(v) − f(Σ w v).
template <Scalar T>
T generalized_jensen(const FunctionModel<T>& f, const AtomDistribution<T>& dist) {
  Accumulator<T> acc;
  for (const auto& a : dist.atoms) acc.add(T(a.weight * f(a.value)));
  acc.add(T(-f(dist.mean())));
  return acc.value();
}

}  // namespace terzatic
