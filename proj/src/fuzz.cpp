#include "terzatic/fuzz.hpp"

#include <array>
#include <string>
#include <utility>

namespace terzatic {
namespace {

constexpr std::array<std::pair<FuzzTarget, std::string_view>, 6> kTargetNames{{
    {FuzzTarget::def2, "def2"},
    {FuzzTarget::lemma5, "lemma5"},
    {FuzzTarget::thm6_lower, "thm6-lower"},
    {FuzzTarget::thm6_upper, "thm6-upper"},
    {FuzzTarget::cor8_lower, "cor8-lower"},
    {FuzzTarget::cor8_upper, "cor8-upper"},
}};

}  // namespace

std::string_view to_string(FuzzTarget target) {
  for (const auto& [t, name] : kTargetNames) {
    if (t == target) return name;
  }
  return "unknown";
}

FuzzTarget parse_fuzz_target(std::string_view name) {
  for (const auto& [t, n] : kTargetNames) {
    if (n == name) return t;
  }
  // Accept underscores too (thm6_lower).
  std::string dashed(name);
  for (auto& c : dashed) {
    if (c == '_') c = '-';
  }
  for (const auto& [t, n] : kTargetNames) {
    if (n == dashed) return t;
  }
  throw ValidationError("unknown target '" + std::string(name) + "'", "target");
}

}  // namespace terzatic
