#pragma once

// OpenMP kernels for sums over the multi-index tensor of a GeneralInstance.
//
// The index space [0, Π n_i) is cut into fixed-size chunks independent of
// the thread count. Each chunk is accumulated in enumeration order and the
// chunk partials are reduced serially in chunk order, so results are
// bit-identical for any number of threads.

#include <algorithm>
#include <cstddef>
#include <exception>
#include <vector>

#include "terzatic/core.hpp"

namespace terzatic {

inline constexpr std::size_t kTensorChunk = 4096;

/// One term of the tensor sum: Π p_{i j_i}, Π r_{i j_i} (0 without r) and
/// S = Σ q_i x_{i j_i}.
template <Scalar T>
struct TensorPoint {
  T weight_p = 0;
  T weight_r = 0;
  T value = 0;
};

namespace detail {

template <Scalar T>
class TensorCursor {
 public:
  TensorCursor(const GeneralInstance<T>& g, std::size_t start) : g_(g), index_(g.k(), 0) {
    std::size_t rest = start;
    for (std::size_t i = g.k(); i-- > 0;) {
      index_[i] = rest % g.block(i).size();
      rest /= g.block(i).size();
    }
  }

  void load(TensorPoint<T>& pt) const {
    pt.weight_p = 1;
    pt.weight_r = g_.has_r() ? T(1) : T(0);
    Accumulator<T> s;
    for (std::size_t i = 0; i < index_.size(); ++i) {
      const auto& b = g_.block(i);
      pt.weight_p *= b.p[index_[i]];
      if (g_.has_r()) pt.weight_r *= (*g_.r_blocks())[i][index_[i]];
      s.add(T(g_.q()[i] * b.x[index_[i]]));
    }
    pt.value = s.value();
  }

  void advance() {
    for (std::size_t i = index_.size(); i-- > 0;) {
      if (++index_[i] < g_.block(i).size()) return;
      index_[i] = 0;
    }
  }

 private:
  const GeneralInstance<T>& g_;
  std::vector<std::size_t> index_;
};

}  // namespace detail

/// Σ over all multi-indices of term(TensorPoint).
template <Scalar T, class Term>
T tensor_sum(const GeneralInstance<T>& g, Term&& term, std::size_t cap = kDefaultEnumerationCap) {
  const auto extents = g.extents();
  const std::size_t total = count_multi_indices(extents, cap);
  const std::size_t chunks = (total + kTensorChunk - 1) / kTensorChunk;
  std::vector<T> partial(chunks, T(0));
  std::vector<std::exception_ptr> errors(chunks);

#pragma omp parallel for schedule(dynamic, 1) if (chunks > 1)
  for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(chunks); ++c) {
    try {
      const std::size_t begin = static_cast<std::size_t>(c) * kTensorChunk;
      const std::size_t end = std::min(total, begin + kTensorChunk);
      detail::TensorCursor<T> cursor(g, begin);
      TensorPoint<T> pt;
      Accumulator<T> acc;
      for (std::size_t idx = begin; idx < end; ++idx) {
        cursor.load(pt);
        acc.add(term(pt));
        cursor.advance();
      }
      partial[c] = acc.value();
    } catch (...) {
      errors[c] = std::current_exception();
    }
  }

  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  Accumulator<T> acc;
  for (const auto& v : partial) acc.add(v);
  return acc.value();
}

/// Materializes every TensorPoint in enumeration order.
template <Scalar T>
std::vector<TensorPoint<T>> tensor_points(const GeneralInstance<T>& g,
                                          std::size_t cap = kDefaultEnumerationCap) {
  const auto extents = g.extents();
  const std::size_t total = count_multi_indices(extents, cap);
  const std::size_t chunks = (total + kTensorChunk - 1) / kTensorChunk;
  std::vector<TensorPoint<T>> out(total);

#pragma omp parallel for schedule(static) if (chunks > 1)
  for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(chunks); ++c) {
    const std::size_t begin = static_cast<std::size_t>(c) * kTensorChunk;
    const std::size_t end = std::min(total, begin + kTensorChunk);
    detail::TensorCursor<T> cursor(g, begin);
    for (std::size_t idx = begin; idx < end; ++idx) {
      cursor.load(out[idx]);
      cursor.advance();
    }
  }
  return out;
}

}  // namespace terzatic
