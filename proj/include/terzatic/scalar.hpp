#pragma once

#include <gmpxx.h>

#include <cmath>
#include <concepts>
#include <string>
#include <string_view>

namespace terzatic {

/// Arbitrary-precision rational, always kept canonical (lowest terms,
/// positive denominator).
using Rational = mpq_class;

/// The two computation modes. Every operation is a template over one of
/// these; a single computation never mixes them.
template <class T>
concept Scalar = std::same_as<T, double> || std::same_as<T, Rational>;

template <Scalar T>
inline constexpr bool is_exact_v = std::same_as<T, Rational>;

template <Scalar T>
constexpr std::string_view mode_name() {
  return is_exact_v<T> ? "rational" : "float";
}

/// Parses "num/den", an integer, or a finite decimal ("0.375", "-1.5e-3")
/// into an exact rational. Throws ValidationError on anything else.
Rational parse_rational(std::string_view text);

/// "num/den" for non-integers, "n" for integers.
std::string format_rational(const Rational& value);

/// Shortest text that reads back to the same double (up to 17 digits).
std::string format_double(double value);

inline double to_double(double v) { return v; }
inline double to_double(const Rational& v) { return v.get_d(); }

template <Scalar T>
T from_double(double v) {
  if constexpr (is_exact_v<T>) {
    return Rational(v);  // exact: every finite double is a dyadic rational
  } else {
    return v;
  }
}

template <Scalar T>
T from_rational(const Rational& v) {
  if constexpr (is_exact_v<T>) {
    return v;
  } else {
    return v.get_d();
  }
}

template <Scalar T>
T parse_scalar(std::string_view text) {
  return from_rational<T>(parse_rational(text));
}

inline std::string to_string(double v) { return format_double(v); }
inline std::string to_string(const Rational& v) { return format_rational(v); }

inline double abs_value(double v) { return std::fabs(v); }
inline Rational abs_value(const Rational& v) { return Rational(abs(v)); }

inline bool is_zero(double v) { return v == 0.0; }
inline bool is_zero(const Rational& v) { return sgn(v) == 0; }

template <Scalar T>
T int_power(const T& base, unsigned exponent) {
  if constexpr (is_exact_v<T>) {
    Rational out;
    mpz_pow_ui(out.get_num_mpz_t(), base.get_num_mpz_t(), exponent);
    mpz_pow_ui(out.get_den_mpz_t(), base.get_den_mpz_t(), exponent);
    out.canonicalize();
    return out;
  } else {
    T out = 1.0;
    T b = base;
    while (exponent) {
      if (exponent & 1u) out *= b;
      b *= b;
      exponent >>= 1u;
    }
    return out;
  }
}

template <Scalar T>
T max_of(const T& a, const T& b) {
  return a < b ? b : a;
}

/// Sum accumulator: Neumaier-compensated for doubles, plain for rationals.
template <Scalar T>
class Accumulator;

template <>
class Accumulator<double> {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::fabs(sum_) >= std::fabs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

template <>
class Accumulator<Rational> {
 public:
  void add(const Rational& v) { sum_ += v; }
  Rational value() const { return sum_; }

 private:
  Rational sum_ = 0;
};

}  // namespace terzatic
