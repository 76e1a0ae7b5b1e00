#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "terzatic/errors.hpp"
#include "terzatic/function_model.hpp"
#include "terzatic/scalar.hpp"

namespace terzatic {

inline constexpr std::size_t kDefaultEnumerationCap = 10'000'000;

/// Absolute tolerance on Σw = 1 for float-mode weights.
inline constexpr double kFloatWeightTolerance = 1e-12;

enum class WeightFamily { p, r };

/// A strictly positive weight vector summing to 1 (exactly in rational mode).
template <Scalar T>
class Weights {
 public:
  /// Normalizes `raw` by its sum. Every entry must be > 0.
  static Weights normalize(std::vector<T> raw, const std::string& path = {}) {
    if (raw.empty()) throw ValidationError("weights must be nonempty", path);
    Accumulator<T> acc;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (!(raw[i] > 0)) {
        throw ValidationError("weight " + std::to_string(i) + " is not strictly positive (" +
                                  to_string(raw[i]) + ")",
                              path);
      }
      acc.add(raw[i]);
    }
    const T total = acc.value();
    for (auto& w : raw) w /= total;
    return Weights(std::move(raw));
  }

  /// Accepts weights that already sum to 1 (within kFloatWeightTolerance in
  /// float mode, exactly in rational mode). Values are kept as given so a
  /// serialized instance reads back bit-identically.
  static Weights from_normalized(std::vector<T> w, const std::string& path = {}) {
    if (w.empty()) throw ValidationError("weights must be nonempty", path);
    Accumulator<T> acc;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (!(w[i] > 0)) {
        throw ValidationError("weight " + std::to_string(i) + " is not strictly positive (" + to_string(w[i]) + ")",
                              path);
      }
      acc.add(w[i]);
    }
    const T total = acc.value();
    bool ok;
    if constexpr (is_exact_v<T>) {
      ok = total == 1;
    } else {
      ok = std::fabs(total - 1.0) <= kFloatWeightTolerance;
    }
    if (!ok) throw ValidationError("weights sum to " + to_string(total) + ", expected 1", path);
    return Weights(std::move(w));
  }

  std::size_t size() const { return w_.size(); }
  const T& operator[](std::size_t i) const { return w_[i]; }
  std::span<const T> values() const { return w_; }
  auto begin() const { return w_.begin(); }
  auto end() const { return w_.end(); }

  friend bool operator==(const Weights&, const Weights&) = default;

 private:
  explicit Weights(std::vector<T> w) : w_(std::move(w)) {}
  std::vector<T> w_;
};

template <Scalar T>
Weights<T> make_weights(std::vector<T> raw) {
  return Weights<T>::normalize(std::move(raw));
}

/// Points in [0, a].
template <Scalar T>
class PointVector {
 public:
  PointVector(std::vector<T> x, T domain_upper, const std::string& path = {})
      : x_(std::move(x)), upper_(std::move(domain_upper)) {
    if (!(upper_ > 0)) throw ValidationError("domain upper bound must be > 0", path);
    if (x_.empty()) throw ValidationError("point vector must be nonempty", path);
    for (std::size_t i = 0; i < x_.size(); ++i) {
      if (x_[i] < 0 || x_[i] > upper_) {
        throw ValidationError("point " + std::to_string(i) + " = " + to_string(x_[i]) +
                                  " lies outside [0, " + to_string(upper_) + "]",
                              path);
      }
    }
  }

  std::size_t size() const { return x_.size(); }
  const T& operator[](std::size_t i) const { return x_[i]; }
  std::span<const T> values() const { return x_; }
  const T& domain_upper() const { return upper_; }

  friend bool operator==(const PointVector&, const PointVector&) = default;

 private:
  std::vector<T> x_;
  T upper_;
};

template <Scalar T>
T weighted_sum(const Weights<T>& w, std::span<const T> x) {
  Accumulator<T> acc;
  for (std::size_t i = 0; i < w.size(); ++i) acc.add(T(w[i] * x[i]));
  return acc.value();
}

template <Scalar T>
struct SimpleInstance {
  Weights<T> p;
  PointVector<T> x;

  SimpleInstance(Weights<T> p_, PointVector<T> x_) : p(std::move(p_)), x(std::move(x_)) {
    if (p.size() != x.size()) {
      throw ValidationError("weights and points differ in length (" + std::to_string(p.size()) +
                            " vs " + std::to_string(x.size()) + ")");
    }
  }

  std::size_t size() const { return p.size(); }
  const T& domain_upper() const { return x.domain_upper(); }

  friend bool operator==(const SimpleInstance&, const SimpleInstance&) = default;
};

template <Scalar T>
T barycenter(const SimpleInstance<T>& inst) {
  return weighted_sum(inst.p, inst.x.values());
}

template <Scalar T>
struct Block {
  Weights<T> p;
  PointVector<T> x;

  Block(Weights<T> p_, PointVector<T> x_, const std::string& path = {})
      : p(std::move(p_)), x(std::move(x_)) {
    if (p.size() != x.size()) throw ValidationError("block weights and points differ in length", path);
  }

  std::size_t size() const { return p.size(); }

  friend bool operator==(const Block&, const Block&) = default;
};

/// The (q, blocks, r_blocks) data of the generalized Jensen functional.
template <Scalar T>
class GeneralInstance {
 public:
  GeneralInstance(Weights<T> q, std::vector<Block<T>> blocks,
                  std::optional<std::vector<Weights<T>>> r_blocks = std::nullopt)
      : q_(std::move(q)), blocks_(std::move(blocks)), r_blocks_(std::move(r_blocks)) {
    if (blocks_.empty()) throw ValidationError("at least one block required", "instance.blocks");
    if (q_.size() != blocks_.size()) {
      throw ValidationError("q has " + std::to_string(q_.size()) + " entries but there are " +
                                std::to_string(blocks_.size()) + " blocks",
                            "instance.q");
    }
    upper_ = blocks_.front().x.domain_upper();
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
      if (blocks_[i].x.domain_upper() != upper_) {
        throw ValidationError("blocks disagree on the domain upper bound",
                              "instance.blocks[" + std::to_string(i) + "]");
      }
    }
    if (r_blocks_) {
      if (r_blocks_->size() != blocks_.size()) {
        throw ValidationError("r_blocks must have one entry per block", "instance.r_blocks");
      }
      for (std::size_t i = 0; i < blocks_.size(); ++i) {
        if ((*r_blocks_)[i].size() != blocks_[i].size()) {
          throw ValidationError("length does not match block " + std::to_string(i),
                                "instance.r_blocks[" + std::to_string(i) + "]");
        }
      }
    }
  }

  /// k = 1 wrapper around a simple instance.
  static GeneralInstance single(const SimpleInstance<T>& inst,
                                std::optional<Weights<T>> r = std::nullopt) {
    std::vector<Block<T>> blocks{Block<T>(inst.p, inst.x)};
    std::optional<std::vector<Weights<T>>> rb;
    if (r) rb = std::vector<Weights<T>>{*r};
    return GeneralInstance(Weights<T>::normalize({T(1)}), std::move(blocks), std::move(rb));
  }

  std::size_t k() const { return blocks_.size(); }
  const Weights<T>& q() const { return q_; }
  const std::vector<Block<T>>& blocks() const { return blocks_; }
  const Block<T>& block(std::size_t i) const { return blocks_[i]; }
  bool has_r() const { return r_blocks_.has_value(); }
  const std::optional<std::vector<Weights<T>>>& r_blocks() const { return r_blocks_; }
  const T& domain_upper() const { return upper_; }

  /// Weights of block i under the chosen family.
  const Weights<T>& weights(std::size_t i, WeightFamily family) const {
    if (family == WeightFamily::p) return blocks_[i].p;
    if (!r_blocks_) throw ValidationError("r weights requested but r_blocks are absent", "instance.r_blocks");
    return (*r_blocks_)[i];
  }

  std::vector<std::size_t> extents() const {
    std::vector<std::size_t> n;
    n.reserve(blocks_.size());
    for (const auto& b : blocks_) n.push_back(b.size());
    return n;
  }

  /// Every block holds a single repeated point, so every tensor value S
  /// coincides with the barycenter and all displays vanish.
  bool is_degenerate() const {
    for (const auto& b : blocks_) {
      for (std::size_t j = 1; j < b.size(); ++j) {
        if (b.x[j] != b.x[0]) return false;
      }
    }
    return true;
  }

  friend bool operator==(const GeneralInstance&, const GeneralInstance&) = default;

 private:
  Weights<T> q_;
  std::vector<Block<T>> blocks_;
  std::optional<std::vector<Weights<T>>> r_blocks_;
  T upper_;
};

/// Σ_i q_i Σ_j w_ij x_ij for the chosen weight family.
template <Scalar T>
T general_barycenter(const GeneralInstance<T>& g, WeightFamily family) {
  Accumulator<T> acc;
  for (std::size_t i = 0; i < g.k(); ++i) {
    acc.add(T(g.q()[i] * weighted_sum(g.weights(i, family), g.block(i).x.values())));
  }
  return acc.value();
}

/// f(|d|)/|d| with the value 0 at d = 0 exactly.
template <Scalar T>
T terza_quotient(const FunctionModel<T>& f, const T& d, const T& domain_upper) {
  if (is_zero(d)) return T(0);
  const T magnitude = abs_value(d);
  if (magnitude > domain_upper) {
    throw DomainError("|d| = " + to_string(magnitude) + " exceeds the domain bound " +
                      to_string(domain_upper));
  }
  return f(magnitude) / magnitude;
}

/// (j_1, ..., j_k), 1-based.
struct MultiIndex {
  std::vector<std::size_t> j;
  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
  friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;
};

/// Π n_i, throwing CapExceeded when it exceeds `cap` (or overflows).
std::size_t count_multi_indices(std::span<const std::size_t> extents,
                                std::size_t cap = kDefaultEnumerationCap);

/// Lazy lexicographic enumeration of all multi-indices, j_1 slowest.
class MultiIndexRange {
 public:
  MultiIndexRange(std::vector<std::size_t> extents, std::size_t cap = kDefaultEnumerationCap);

  class iterator {
   public:
    using value_type = MultiIndex;
    using difference_type = std::ptrdiff_t;

    iterator() = default;
    const MultiIndex& operator*() const { return current_; }
    const MultiIndex* operator->() const { return &current_; }
    iterator& operator++();
    iterator operator++(int) {
      iterator tmp = *this;
      ++*this;
      return tmp;
    }
    bool operator==(const iterator& o) const { return position_ == o.position_; }

   private:
    friend class MultiIndexRange;
    iterator(const std::vector<std::size_t>* extents, std::size_t position);
    const std::vector<std::size_t>* extents_ = nullptr;
    std::size_t position_ = 0;
    MultiIndex current_;
  };

  iterator begin() const { return iterator(&extents_, 0); }
  iterator end() const { return iterator(&extents_, size_); }
  std::size_t size() const { return size_; }

 private:
  std::vector<std::size_t> extents_;
  std::size_t size_;
};

inline MultiIndexRange multi_indices(std::vector<std::size_t> extents,
                                     std::size_t cap = kDefaultEnumerationCap) {
  return MultiIndexRange(std::move(extents), cap);
}

}  // namespace terzatic
