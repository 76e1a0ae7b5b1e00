#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "terzatic/errors.hpp"
#include "terzatic/scalar.hpp"

namespace terzatic {

enum class Claim { superterzatic, subterzatic, unknown };

/// Polynomial in one variable, coefficients in ascending degree.
template <Scalar T>
struct Polynomial {
  std::vector<T> coeffs;

  T operator()(const T& x) const {
    T out = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
      out = out * x + *it;
    }
    return out;
  }

  friend bool operator==(const Polynomial&, const Polynomial&) = default;
};

template <Scalar T>
Polynomial<T> scaled_sum(const std::vector<T>& scales, const std::vector<Polynomial<T>>& polys) {
  Polynomial<T> out;
  for (std::size_t i = 0; i < polys.size(); ++i) {
    if (out.coeffs.size() < polys[i].coeffs.size()) out.coeffs.resize(polys[i].coeffs.size(), T(0));
    for (std::size_t t = 0; t < polys[i].coeffs.size(); ++t) {
      out.coeffs[t] += scales[i] * polys[i].coeffs[t];
    }
  }
  return out;
}

/// An evaluable f on [0, a] together with an optional certificate C(x̄)
/// (a polynomial in the barycenter) and a claim tag. The claim only picks
/// the default inequality direction; nothing trusts it.
template <Scalar T>
class FunctionModel {
 public:
  struct Power {
    double exponent;
    friend bool operator==(const Power&, const Power&) = default;
  };
  struct CubeLog {
    friend bool operator==(const CubeLog&, const CubeLog&) = default;
  };
  struct PolynomialFamily {
    Polynomial<T> poly;
    friend bool operator==(const PolynomialFamily&, const PolynomialFamily&) = default;
  };
  struct Combination {
    std::vector<T> scales;
    std::vector<FunctionModel> members;
    friend bool operator==(const Combination& a, const Combination& b) {
      return a.scales == b.scales && a.members == b.members;
    }
  };
  using Family = std::variant<Power, CubeLog, PolynomialFamily, Combination>;

  /// x^p for p >= 3. Integer p carries the certificate p x̄^{p-1}.
  static FunctionModel power(double exponent) {
    if (!(exponent >= 3.0) || !std::isfinite(exponent)) {
      throw ValidationError("power exponent must be >= 3, got " + format_double(exponent));
    }
    const bool integral = exponent == std::floor(exponent);
    if constexpr (is_exact_v<T>) {
      if (!integral || exponent > 64) {
        throw NotExactError("power exponent " + format_double(exponent) +
                            " is not representable in rational mode");
      }
    }
    FunctionModel f(Power{exponent}, Claim::superterzatic);
    if (integral && exponent <= 64) {
      const auto p = static_cast<std::size_t>(exponent);
      Polynomial<T> cert;
      cert.coeffs.assign(p, T(0));
      cert.coeffs[p - 1] = T(static_cast<long>(p));
      f.certificate_ = std::move(cert);
    }
    return f;
  }

  /// x^3 log(1/x) with the value 0 at 0; natural logarithm.
  static FunctionModel cube_log() {
    if constexpr (is_exact_v<T>) {
      throw NotExactError("cube_log is transcendental and has no rational mode");
    }
    return FunctionModel(CubeLog{}, Claim::subterzatic);
  }

  static FunctionModel polynomial(std::vector<T> coeffs) {
    if (coeffs.empty()) throw ValidationError("polynomial needs at least one coefficient");
    return FunctionModel(PolynomialFamily{Polynomial<T>{std::move(coeffs)}}, Claim::unknown);
  }

  /// Σ α_i f_i with every α_i > 0. The certificate is the same combination
  /// of the member certificates when all members carry one.
  static FunctionModel linear_combination(std::vector<std::pair<T, FunctionModel>> terms) {
    if (terms.empty()) throw ValidationError("linear combination needs at least one term");
    Combination combo;
    std::vector<Polynomial<T>> certs;
    bool all_certified = true;
    std::optional<Claim> shared_claim;
    for (auto& [scale, member] : terms) {
      if (!(scale > 0)) throw ValidationError("linear combination scales must be strictly positive");
      if (member.certificate_) {
        certs.push_back(*member.certificate_);
      } else {
        all_certified = false;
      }
      if (!shared_claim) {
        shared_claim = member.claim_;
      } else if (*shared_claim != member.claim_) {
        shared_claim = Claim::unknown;
      }
      combo.scales.push_back(scale);
      combo.members.push_back(std::move(member));
    }
    FunctionModel f(std::move(combo), shared_claim.value_or(Claim::unknown));
    if (all_certified) {
      f.certificate_ = scaled_sum(std::get<Combination>(f.family_).scales, certs);
    }
    return f;
  }

  T operator()(const T& x) const {
    if (x < 0) throw DomainError("function evaluated at negative argument " + to_string(x));
    return std::visit([&](const auto& fam) { return eval(fam, x); }, family_);
  }

  const Family& family() const { return family_; }
  const std::optional<Polynomial<T>>& certificate() const { return certificate_; }
  Claim claim() const { return claim_; }

  FunctionModel with_certificate(std::optional<Polynomial<T>> cert) const {
    FunctionModel out = *this;
    out.certificate_ = std::move(cert);
    return out;
  }

  FunctionModel with_claim(Claim claim) const {
    FunctionModel out = *this;
    out.claim_ = claim;
    return out;
  }

  friend bool operator==(const FunctionModel&, const FunctionModel&) = default;

  /// True when some member cannot be evaluated exactly (cube_log or a
  /// non-integer power); such models run float-only with a wider tolerance.
  bool is_transcendental() const {
    return std::visit(
        [](const auto& fam) -> bool {
          using F = std::decay_t<decltype(fam)>;
          if constexpr (std::is_same_v<F, CubeLog>) {
            return true;
          } else if constexpr (std::is_same_v<F, Power>) {
            return fam.exponent != std::floor(fam.exponent);
          } else if constexpr (std::is_same_v<F, Combination>) {
            for (const auto& m : fam.members) {
              if (m.is_transcendental()) return true;
            }
            return false;
          } else {
            return false;
          }
        },
        family_);
  }

 private:
  FunctionModel(Family family, Claim claim) : family_(std::move(family)), claim_(claim) {}

  static T eval(const Power& fam, const T& x) {
    if (fam.exponent == std::floor(fam.exponent)) {
      return int_power(x, static_cast<unsigned>(fam.exponent));
    }
    if constexpr (is_exact_v<T>) {
      throw NotExactError("non-integer power in rational mode");
    } else {
      return std::pow(x, fam.exponent);
    }
  }

  static T eval(const CubeLog&, const T& x) {
    if constexpr (is_exact_v<T>) {
      throw NotExactError("cube_log in rational mode");
    } else {
      if (x == 0.0) return 0.0;
      return -x * x * x * std::log(x);
    }
  }

  static T eval(const PolynomialFamily& fam, const T& x) { return fam.poly(x); }

  static T eval(const Combination& fam, const T& x) {
    Accumulator<T> acc;
    for (std::size_t i = 0; i < fam.members.size(); ++i) {
      acc.add(T(fam.scales[i] * fam.members[i](x)));
    }
    return acc.value();
  }

  Family family_;
  std::optional<Polynomial<T>> certificate_;
  Claim claim_ = Claim::unknown;
};

}  // namespace terzatic
