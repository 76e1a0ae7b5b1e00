#pragma once

// JSON instance files and the compact function/certificate spec strings used
// on the command line.
//
// Instance file:
//   {
//     "mode": "rational" | "float",
//     "domain_upper": "1",
//     "function": {"family": "power", "exponent": 3, "claim": "superterzatic"},
//     "certificate": {"coeffs": ["0", "0", "3"]},            (optional)
//     "instance": {
//       "q": ["1/2", "1/2"],
//       "blocks": [{"p": [...], "x": [...]}, ...],
//       "r_blocks": [[...], ...]                              (optional)
//     }
//   }
// Rational mode takes "num/den" or finite-decimal strings (or JSON integers);
// float mode takes JSON numbers.

#include <json.hpp>

#include <optional>
#include <string_view>
#include <variant>

#include "terzatic/bounds.hpp"
#include "terzatic/core.hpp"
#include "terzatic/fuzz.hpp"
#include "terzatic/terzatic.hpp"

namespace terzatic {

template <Scalar T>
struct InstanceFile {
  FunctionModel<T> function;
  std::optional<Polynomial<T>> certificate;  // explicit override of the model's
  GeneralInstance<T> instance;

  /// The model with the override applied.
  FunctionModel<T> effective_function() const {
    return certificate ? function.with_certificate(certificate) : function;
  }

  friend bool operator==(const InstanceFile&, const InstanceFile&) = default;
};

using AnyInstanceFile = std::variant<InstanceFile<double>, InstanceFile<Rational>>;

/// Throws ValidationError with a JSON field path on any schema problem.
AnyInstanceFile parse_instance_file(const nlohmann::json& doc);
AnyInstanceFile read_instance_file(const std::string& path);

template <Scalar T>
nlohmann::json to_json(const InstanceFile<T>& file);

template <Scalar T>
nlohmann::json scalar_to_json(const T& v);

template <Scalar T>
nlohmann::json function_to_json(const FunctionModel<T>& f);

template <Scalar T>
nlohmann::json to_json(const CheckReport<T>& report);

template <Scalar T>
nlohmann::json to_json(const CertificateEstimate<T>& estimate);

template <Scalar T>
nlohmann::json to_json(const FuzzReport<T>& report, std::size_t max_listed = 50);

template <Scalar T>
nlohmann::json to_json(const RatioExtrema<T>& ext);

/// "power:3", "cube_log", "poly:c0,c1,...", and positive combinations such
/// as "2*power:3+power:4".
template <Scalar T>
FunctionModel<T> parse_function_spec(std::string_view spec);

/// "0,0,3" or "[0,0,3]" -> c_0 + c_1 x + c_2 x^2 ...
template <Scalar T>
Polynomial<T> parse_coefficients(std::string_view spec);

std::string_view to_string(Verdict v);
std::string_view to_string(Direction d);
std::string_view to_string(Claim c);
Direction parse_direction(std::string_view s);

}  // namespace terzatic
