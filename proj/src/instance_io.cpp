#include "terzatic/instance_io.hpp"

#include <fstream>
#include <string>

namespace terzatic {

using nlohmann::json;

namespace {

std::string at(const std::string& base, const std::string& key) { return base.empty() ? key : base + "." + key; }
std::string at(const std::string& base, std::size_t i) { return base + "[" + std::to_string(i) + "]"; }

const json& require(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw ValidationError("expected an object", path);
  const auto it = obj.find(key);
  if (it == obj.end()) throw ValidationError("missing field", at(path, key));
  return *it;
}

template <Scalar T>
T scalar_from_json(const json& v, const std::string& path) {
  if constexpr (is_exact_v<T>) {
    if (v.is_string()) {
      try {
        return parse_rational(v.get<std::string>());
      } catch (const ValidationError& e) {
        throw ValidationError(e.what(), path);
      }
    }
    if (v.is_number_integer()) return Rational(v.get<long>());
    throw ValidationError("rational mode needs \"num/den\" or decimal strings", path);
  } else {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
      try {
        return parse_rational(v.get<std::string>()).get_d();
      } catch (const ValidationError& e) {
        throw ValidationError(e.what(), path);
      }
    }
    throw ValidationError("expected a number", path);
  }
}

template <Scalar T>
std::vector<T> vector_from_json(const json& v, const std::string& path) {
  if (!v.is_array()) throw ValidationError("expected an array", path);
  std::vector<T> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(scalar_from_json<T>(v[i], at(path, i)));
  return out;
}

template <Scalar T>
json vector_to_json(std::span<const T> v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(scalar_to_json(x));
  return out;
}

Claim parse_claim(const json& v, const std::string& path) {
  const std::string s = v.is_string() ? v.get<std::string>() : "";
  if (s == "superterzatic") return Claim::superterzatic;
  if (s == "subterzatic") return Claim::subterzatic;
  if (s == "unknown") return Claim::unknown;
  throw ValidationError("claim must be superterzatic, subterzatic or unknown", path);
}

template <Scalar T>
FunctionModel<T> function_from_json(const json& v, const std::string& path) {
  const json& fam = require(v, "family", path);
  if (!fam.is_string()) throw ValidationError("expected a string", at(path, "family"));
  const std::string family = fam.get<std::string>();
  std::optional<FunctionModel<T>> f;
  try {
    if (family == "power") {
      const json& e = require(v, "exponent", path);
      f = FunctionModel<T>::power(e.is_number() ? e.get<double>() : to_double(scalar_from_json<Rational>(e, at(path, "exponent"))));
    } else if (family == "cube_log") {
      f = FunctionModel<T>::cube_log();
    } else if (family == "polynomial") {
      f = FunctionModel<T>::polynomial(vector_from_json<T>(require(v, "coeffs", path), at(path, "coeffs")));
    } else if (family == "linear_combination") {
      const json& terms = require(v, "terms", path);
      if (!terms.is_array()) throw ValidationError("expected an array", at(path, "terms"));
      std::vector<std::pair<T, FunctionModel<T>>> members;
      for (std::size_t i = 0; i < terms.size(); ++i) {
        const std::string tp = at(at(path, "terms"), i);
        members.emplace_back(scalar_from_json<T>(require(terms[i], "scale", tp), at(tp, "scale")),
                             function_from_json<T>(require(terms[i], "function", tp), at(tp, "function")));
      }
      f = FunctionModel<T>::linear_combination(std::move(members));
    } else {
      throw ValidationError("unknown family '" + family + "'", at(path, "family"));
    }
  } catch (const ValidationError& e) {
    if (!e.path().empty()) throw;
    throw ValidationError(e.what(), path);
  } catch (const NotExactError& e) {
    throw ValidationError(e.what(), path);
  }
  if (const auto it = v.find("claim"); it != v.end()) f = f->with_claim(parse_claim(*it, at(path, "claim")));
  return *f;
}

template <Scalar T>
InstanceFile<T> instance_file_from_json(const json& doc) {
  const T upper = doc.contains("domain_upper") ? scalar_from_json<T>(doc["domain_upper"], "domain_upper") : T(1);
  if (!(upper > 0)) throw ValidationError("must be > 0", "domain_upper");
  FunctionModel<T> f = function_from_json<T>(require(doc, "function", ""), "function");
  std::optional<Polynomial<T>> cert;
  if (const auto it = doc.find("certificate"); it != doc.end() && !it->is_null()) {
    cert = Polynomial<T>{vector_from_json<T>(require(*it, "coeffs", "certificate"), "certificate.coeffs")};
  }

  const json& inst = require(doc, "instance", "");
  const json& blocks_json = require(inst, "blocks", "instance");
  if (!blocks_json.is_array() || blocks_json.empty()) {
    throw ValidationError("expected a nonempty array", "instance.blocks");
  }
  std::vector<Block<T>> blocks;
  for (std::size_t i = 0; i < blocks_json.size(); ++i) {
    const std::string bp = at("instance.blocks", i);
    auto p = Weights<T>::from_normalized(vector_from_json<T>(require(blocks_json[i], "p", bp), at(bp, "p")), at(bp, "p"));
    PointVector<T> x(vector_from_json<T>(require(blocks_json[i], "x", bp), at(bp, "x")), upper, at(bp, "x"));
    blocks.emplace_back(std::move(p), std::move(x), bp);
  }
  Weights<T> q = inst.contains("q")
                     ? Weights<T>::from_normalized(vector_from_json<T>(inst["q"], "instance.q"), "instance.q")
                     : (blocks.size() == 1 ? Weights<T>::normalize({T(1)})
                                           : throw ValidationError("missing field", "instance.q"));
  std::optional<std::vector<Weights<T>>> r_blocks;
  if (const auto it = inst.find("r_blocks"); it != inst.end() && !it->is_null()) {
    if (!it->is_array()) throw ValidationError("expected an array", "instance.r_blocks");
    r_blocks.emplace();
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string rp = at("instance.r_blocks", i);
      r_blocks->push_back(Weights<T>::from_normalized(vector_from_json<T>((*it)[i], rp), rp));
    }
  }
  return InstanceFile<T>{std::move(f), std::move(cert), GeneralInstance<T>(std::move(q), std::move(blocks), std::move(r_blocks))};
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

std::string trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

template <Scalar T>
FunctionModel<T> parse_single_function(std::string_view text) {
  const std::string s = trim(text);
  if (s == "cube_log") return FunctionModel<T>::cube_log();
  if (s.rfind("power:", 0) == 0) return FunctionModel<T>::power(parse_rational(s.substr(6)).get_d());
  if (s.rfind("poly:", 0) == 0) return FunctionModel<T>::polynomial(parse_coefficients<T>(s.substr(5)).coeffs);
  throw ValidationError("unknown function spec '" + s + "' (expected power:<p>, cube_log or poly:<c0,c1,...>)",
                        "function");
}

}  // namespace

template <Scalar T>
json scalar_to_json(const T& v) {
  if constexpr (is_exact_v<T>) {
    return format_rational(v);
  } else {
    return v;
  }
}

template <Scalar T>
json function_to_json(const FunctionModel<T>& f) {
  json out = std::visit(
      [](const auto& fam) -> json {
        using F = std::decay_t<decltype(fam)>;
        if constexpr (std::is_same_v<F, typename FunctionModel<T>::Power>) {
          return {{"family", "power"}, {"exponent", fam.exponent}};
        } else if constexpr (std::is_same_v<F, typename FunctionModel<T>::CubeLog>) {
          return {{"family", "cube_log"}};
        } else if constexpr (std::is_same_v<F, typename FunctionModel<T>::PolynomialFamily>) {
          return {{"family", "polynomial"}, {"coeffs", vector_to_json<T>(fam.poly.coeffs)}};
        } else {
          json terms = json::array();
          for (std::size_t i = 0; i < fam.members.size(); ++i) {
            terms.push_back({{"scale", scalar_to_json(fam.scales[i])}, {"function", function_to_json(fam.members[i])}});
          }
          return {{"family", "linear_combination"}, {"terms", terms}};
        }
      },
      f.family());
  out["claim"] = std::string(to_string(f.claim()));
  return out;
}

template <Scalar T>
json to_json(const InstanceFile<T>& file) {
  const auto& g = file.instance;
  json blocks = json::array();
  for (const auto& b : g.blocks()) blocks.push_back({{"p", vector_to_json(b.p.values())}, {"x", vector_to_json(b.x.values())}});
  json inst = {{"q", vector_to_json(g.q().values())}, {"blocks", blocks}};
  if (g.has_r()) {
    json r = json::array();
    for (const auto& w : *g.r_blocks()) r.push_back(vector_to_json(w.values()));
    inst["r_blocks"] = r;
  }
  json doc = {{"mode", std::string(mode_name<T>())},
              {"domain_upper", scalar_to_json(g.domain_upper())},
              {"function", function_to_json(file.function)},
              {"instance", inst}};
  if (file.certificate) doc["certificate"] = {{"coeffs", vector_to_json<T>(file.certificate->coeffs)}};
  return doc;
}

AnyInstanceFile parse_instance_file(const json& doc) {
  if (!doc.is_object()) throw ValidationError("instance file must be a JSON object");
  const std::string mode = doc.contains("mode") && doc["mode"].is_string() ? doc["mode"].get<std::string>() : "float";
  if (mode == "float") return instance_file_from_json<double>(doc);
  if (mode == "rational") return instance_file_from_json<Rational>(doc);
  throw ValidationError("mode must be \"float\" or \"rational\"", "mode");
}

AnyInstanceFile read_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open instance file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("malformed JSON: ") + e.what());
  }
  return parse_instance_file(doc);
}

template <Scalar T>
json to_json(const CheckReport<T>& r) {
  json bary = {{"x_bar", scalar_to_json(r.barycenter)}};
  if (r.barycenter_r) bary["x_check"] = scalar_to_json(*r.barycenter_r);
  return {{"lhs", scalar_to_json(r.lhs)},
          {"rhs", scalar_to_json(r.rhs)},
          {"slack", scalar_to_json(r.slack)},
          {"verdict", std::string(to_string(r.verdict))},
          {"degenerate", r.verdict == Verdict::degenerate},
          {"tolerance", scalar_to_json(r.tolerance)},
          {"c_used", scalar_to_json(r.c_used)},
          {"direction", std::string(to_string(r.direction))},
          {"barycenters", bary}};
}

template <Scalar T>
json to_json(const CertificateEstimate<T>& e) {
  return {{"x_bar", scalar_to_json(e.x_bar)},
          {"samples", e.samples},
          {"c_sup_estimate", scalar_to_json(e.c_sup_estimate)},
          {"witness_trial", e.witness_trial},
          {"witness", {{"p", vector_to_json(e.witness.p.values())}, {"x", vector_to_json(e.witness.x.values())}}},
          {"thresholds",
           {{"min", scalar_to_json(e.thresholds.min)},
            {"median", scalar_to_json(e.thresholds.median)},
            {"max", scalar_to_json(e.thresholds.max)}}}};
}

template <Scalar T>
json to_json(const FuzzReport<T>& r, std::size_t max_listed) {
  json violations = json::array();
  for (std::size_t i = 0; i < r.violations.size() && i < max_listed; ++i) {
    const auto& v = r.violations[i];
    violations.push_back({{"trial", v.trial}, {"sub_seed", v.sub_seed}, {"slack", scalar_to_json(v.report.slack)}});
  }
  json out = {{"trials_run", r.trials_run},
              {"violation_count", r.violations.size()},
              {"violations", violations},
              {"degenerate_count", r.degenerate_count},
              {"cap_errors", r.cap_errors}};
  out["min_slack"] = r.min_slack ? scalar_to_json(*r.min_slack) : json(nullptr);
  out["min_slack_trial"] = r.min_slack_trial ? json(*r.min_slack_trial) : json(nullptr);
  return out;
}

template <Scalar T>
json to_json(const RatioExtrema<T>& e) {
  return {{"m", scalar_to_json(e.m)}, {"M", scalar_to_json(e.M)}, {"argmin", e.argmin.j}, {"argmax", e.argmax.j}};
}

template <Scalar T>
Polynomial<T> parse_coefficients(std::string_view spec) {
  std::string s = trim(spec);
  if (!s.empty() && s.front() == '[') s.erase(0, 1);
  if (!s.empty() && s.back() == ']') s.pop_back();
  if (trim(s).empty()) throw ValidationError("empty coefficient list", "certificate");
  Polynomial<T> out;
  for (const auto& part : split(s, ',')) {
    try {
      out.coeffs.push_back(parse_scalar<T>(trim(part)));
    } catch (const ValidationError& e) {
      throw ValidationError(e.what(), "certificate");
    }
  }
  return out;
}

template <Scalar T>
FunctionModel<T> parse_function_spec(std::string_view spec) {
  const auto terms = split(spec, '+');
  if (terms.size() == 1 && trim(terms[0]).find('*') == std::string::npos) return parse_single_function<T>(terms[0]);
  std::vector<std::pair<T, FunctionModel<T>>> members;
  for (const auto& term : terms) {
    const auto star = term.find('*');
    if (star == std::string::npos) {
      members.emplace_back(T(1), parse_single_function<T>(term));
    } else {
      members.emplace_back(parse_scalar<T>(trim(term.substr(0, star))), parse_single_function<T>(term.substr(star + 1)));
    }
  }
  return FunctionModel<T>::linear_combination(std::move(members));
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::holds:
      return "holds";
    case Verdict::violated:
      return "violated";
    case Verdict::degenerate:
      return "degenerate";
  }
  return "unknown";
}

std::string_view to_string(Direction d) { return d == Direction::super ? "super" : "sub"; }

std::string_view to_string(Claim c) {
  switch (c) {
    case Claim::superterzatic:
      return "superterzatic";
    case Claim::subterzatic:
      return "subterzatic";
    case Claim::unknown:
      return "unknown";
  }
  return "unknown";
}

Direction parse_direction(std::string_view s) {
  if (s == "super") return Direction::super;
  if (s == "sub") return Direction::sub;
  throw ValidationError("direction must be super or sub", "direction");
}

#define TERZATIC_INSTANTIATE_IO(T)                                        \
  template json scalar_to_json<T>(const T&);                              \
  template json function_to_json<T>(const FunctionModel<T>&);             \
  template json to_json<T>(const InstanceFile<T>&);                       \
  template json to_json<T>(const CheckReport<T>&);                        \
  template json to_json<T>(const CertificateEstimate<T>&);                \
  template json to_json<T>(const FuzzReport<T>&, std::size_t);            \
  template json to_json<T>(const RatioExtrema<T>&);                       \
  template Polynomial<T> parse_coefficients<T>(std::string_view);         \
  template FunctionModel<T> parse_function_spec<T>(std::string_view);

TERZATIC_INSTANTIATE_IO(double)
TERZATIC_INSTANTIATE_IO(Rational)

#undef TERZATIC_INSTANTIATE_IO

}  // namespace terzatic
