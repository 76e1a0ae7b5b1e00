#include <gtest/gtest.h>

#include "terzatic/instance_io.hpp"
#include "test_support.hpp"

namespace terzatic {
namespace {

using nlohmann::json;
using testing::qs;
using testing::Q;

json worked_rational() {
  return json::parse(R"({
    "mode": "rational",
    "domain_upper": "1",
    "function": {"family": "power", "exponent": 3},
    "certificate": {"coeffs": ["0", "0", "3"]},
    "instance": {"q": ["1"], "blocks": [{"p": ["1/2", "1/2"], "x": ["0", "1"]}], "r_blocks": [["1/4", "0.75"]]}
  })");
}

std::string error_path(const json& doc) {
  try {
    parse_instance_file(doc);
  } catch (const ValidationError& e) {
    return e.path();
  }
  return "<no error>";
}

TEST(InstanceFile, ParsesRational) {
  const auto any = parse_instance_file(worked_rational());
  const auto& file = std::get<InstanceFile<Q>>(any);
  EXPECT_EQ(file.instance.k(), 1u);
  EXPECT_EQ((*file.instance.r_blocks())[0][1], Q(3, 4));
  EXPECT_EQ((*file.effective_function().certificate())(Q(1, 2)), Q(3, 4));
}

TEST(InstanceFile, RoundTripRational) {
  for (std::uint64_t s = 0; s < 100; ++s) {
    const InstanceFile<Q> file{FunctionModel<Q>::linear_combination(
                                   {{Q(2), FunctionModel<Q>::power(3)}, {Q(1, 3), FunctionModel<Q>::polynomial(qs({"0", "1/7", "0", "2"}))}}),
                               Polynomial<Q>{qs({"1/3", "2"})}, testing::random_general<Q>(s, s % 2 == 0)};
    const json doc = to_json(file);
    const auto back = std::get<InstanceFile<Q>>(parse_instance_file(doc));
    EXPECT_EQ(back, file);
    EXPECT_EQ(to_json(back), doc);
  }
}

TEST(InstanceFile, RoundTripFloatIsBitExact) {
  for (std::uint64_t s = 0; s < 100; ++s) {
    const InstanceFile<double> file{FunctionModel<double>::power(3.5), std::nullopt,
                                    testing::random_general<double>(s, true)};
    const auto back = std::get<InstanceFile<double>>(parse_instance_file(json::parse(to_json(file).dump())));
    EXPECT_EQ(back, file);
  }
}

TEST(InstanceFile, ClaimAndCubeLogSurvive) {
  const InstanceFile<double> file{FunctionModel<double>::cube_log().with_claim(Claim::unknown), std::nullopt,
                                  testing::random_general<double>(1, false)};
  EXPECT_EQ(std::get<InstanceFile<double>>(parse_instance_file(to_json(file))), file);
}

TEST(InstanceFile, ErrorPaths) {
  auto doc = worked_rational();
  doc["instance"]["blocks"][0]["p"] = {"1/2", "1/4"};
  EXPECT_EQ(error_path(doc), "instance.blocks[0].p");

  doc = worked_rational();
  doc["instance"]["blocks"][0]["x"] = {"0", "2"};
  EXPECT_EQ(error_path(doc), "instance.blocks[0].x");

  doc = worked_rational();
  doc["instance"]["blocks"][0]["x"][1] = 0.5;  // floats are not exact literals
  EXPECT_EQ(error_path(doc), "instance.blocks[0].x[1]");

  doc = worked_rational();
  doc["instance"]["r_blocks"][0] = {"1"};
  EXPECT_EQ(error_path(doc), "instance.r_blocks[0]");

  doc = worked_rational();
  doc["function"]["family"] = "exp";
  EXPECT_EQ(error_path(doc), "function.family");

  doc = worked_rational();
  doc["function"] = {{"family", "cube_log"}};
  EXPECT_EQ(error_path(doc), "function");

  doc = worked_rational();
  doc["mode"] = "decimal";
  EXPECT_EQ(error_path(doc), "mode");

  doc = worked_rational();
  doc["instance"].erase("blocks");
  EXPECT_EQ(error_path(doc), "instance.blocks");

  doc = worked_rational();
  doc["certificate"]["coeffs"][0] = "x";
  EXPECT_EQ(error_path(doc), "certificate.coeffs[0]");
}

TEST(InstanceFile, FloatModeAcceptsNumbers) {
  auto doc = json::parse(R"({"mode": "float", "function": {"family": "power", "exponent": 3},
    "instance": {"blocks": [{"p": [0.5, 0.5], "x": [0.5, 1.0]}]}})");
  const auto file = std::get<InstanceFile<double>>(parse_instance_file(doc));
  EXPECT_EQ(file.instance.q()[0], 1.0);
  EXPECT_EQ(file.instance.domain_upper(), 1.0);
}

TEST(InstanceFile, MissingFile) { EXPECT_THROW(read_instance_file("/nonexistent/file.json"), ValidationError); }

TEST(FunctionSpec, Parses) {
  EXPECT_EQ(parse_function_spec<Q>("power:3"), FunctionModel<Q>::power(3));
  EXPECT_EQ(parse_function_spec<double>("cube_log"), FunctionModel<double>::cube_log());
  EXPECT_EQ(parse_function_spec<Q>("poly:0,0,0,1/2"), FunctionModel<Q>::polynomial(qs({"0", "0", "0", "1/2"})));
  EXPECT_EQ(parse_function_spec<Q>("2*power:3+power:4"),
            FunctionModel<Q>::linear_combination({{Q(2), FunctionModel<Q>::power(3)}, {Q(1), FunctionModel<Q>::power(4)}}));
  EXPECT_THROW(parse_function_spec<Q>("sin"), ValidationError);
  EXPECT_THROW(parse_function_spec<Q>("cube_log"), NotExactError);
  EXPECT_THROW(parse_function_spec<Q>("power:2"), ValidationError);
}

TEST(Coefficients, Parse) {
  EXPECT_EQ(parse_coefficients<Q>("0,0,3").coeffs, qs({"0", "0", "3"}));
  EXPECT_EQ(parse_coefficients<Q>("[0, 1/2]").coeffs, qs({"0", "1/2"}));
  EXPECT_THROW(parse_coefficients<Q>(""), ValidationError);
  EXPECT_THROW(parse_coefficients<Q>("1,,2"), ValidationError);
}

TEST(ReportJson, SchemaFields) {
  const auto inst = testing::simple_q({"1/2", "1/2"}, {"1/2", "1"});
  const json j = to_json(check_def2(FunctionModel<Q>::power(3), inst));
  EXPECT_EQ(j["slack"], "-3/256");
  EXPECT_EQ(j["verdict"], "violated");
  EXPECT_EQ(j["c_used"], "27/16");
  EXPECT_EQ(j["barycenters"]["x_bar"], "3/4");
  EXPECT_FALSE(j["degenerate"].get<bool>());
  for (const char* key : {"lhs", "rhs", "tolerance", "direction"}) EXPECT_TRUE(j.contains(key)) << key;
}

}  // namespace
}  // namespace terzatic
