#include <bit>
#include <cstdint>
#include <string>

#include <gtest/gtest.h>

#include "hyperflow/io.hpp"
#include "test_support.hpp"

using namespace hyperflow;

namespace {

std::string parse_error(const std::string& text) {
  try {
    parse_matrix(text);
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(ParseMatrix, Valid) {
  const MatrixR a = parse_matrix(R"({"d": 2, "data": [[-1, 0], [0, 2.5]]})");
  EXPECT_EQ(a, (MatrixR{{-1, 0}, {0, 2.5}}));
}

TEST(ParseMatrix, ErrorsNameTheField) {
  EXPECT_NE(parse_error(R"({"d": 2, "data": [[1, 2, 3], [4, 5]]})").find("row 0"), std::string::npos);
  EXPECT_NE(parse_error(R"({"d": 2, "data": [[1, 2], [4]]})").find("row 1"), std::string::npos);
  EXPECT_NE(parse_error(R"({"data": [[1]]})").find("'d'"), std::string::npos);
  EXPECT_NE(parse_error(R"({"d": 1})").find("'data'"), std::string::npos);
  EXPECT_NE(parse_error(R"({"d": 0, "data": []})").find("'d'"), std::string::npos);
  EXPECT_NE(parse_error(R"({"d": 1.5, "data": [[1]]})").find("'d'"), std::string::npos);
  EXPECT_NE(parse_error(R"({"d": 2, "data": [[1, 2]]})").find("rows"), std::string::npos);
  EXPECT_NE(parse_error(R"({"d": 1, "data": [["x"]]})").find("data[0][0]"), std::string::npos);
  EXPECT_NE(parse_error(R"({"d": 1, "data": [1]})").find("data[0]"), std::string::npos);
  EXPECT_NE(parse_error("[1, 2]").find("object"), std::string::npos);
  EXPECT_NE(parse_error("{not json").find("invalid JSON"), std::string::npos);
}

TEST(ParseMatrix, RoundTripIsExact) {
  Rng rng(81);
  for (int i = 0; i < 300; ++i) {
    const int d = 1 + i % 8;
    Eigen::MatrixXd m(d, d);
    for (int r = 0; r < d; ++r) {
      for (int c = 0; c < d; ++c) {
        m(r, c) = rng.normal() * std::pow(10.0, rng.integer(-300, 300));
      }
    }
    if (i % 5 == 0) m(0, 0) = -0.0;
    if (i % 7 == 0) m(d - 1, 0) = 5e-324;
    const MatrixR a(m);
    const MatrixR b = parse_matrix(format_matrix(a));
    for (int r = 0; r < d; ++r) {
      for (int c = 0; c < d; ++c) {
        EXPECT_EQ(std::bit_cast<std::uint64_t>(a(r, c)), std::bit_cast<std::uint64_t>(b(r, c)));
      }
    }
  }
}

TEST(Reports, VerdictFields) {
  const json j = to_json(classify(MatrixR{{0, 1}, {-1, 0}}));
  EXPECT_EQ(j.at("verdict"), "non_hyperbolic");
  EXPECT_EQ(j.at("s"), 0);
  EXPECT_EQ(j.at("u"), 0);
  EXPECT_EQ(j.at("c"), 2);
  EXPECT_EQ(j.at("eigenvalues").size(), 2u);
  EXPECT_TRUE(j.contains("residual_bound"));
  EXPECT_TRUE(j.contains("tau"));
  EXPECT_NEAR(std::abs(j.at("witness")[1].get<double>()), 1.0, 1e-15);

  const json h = to_json(classify(MatrixR::diagonal({-1, 2})));
  EXPECT_EQ(h.at("verdict"), "hyperbolic");
  EXPECT_FALSE(h.contains("witness"));
}

TEST(Reports, MarginAndCampaignFields) {
  const json m = to_json(margin(MatrixR::diagonal({-1, 2})));
  for (const char* key : {"verdict", "lower", "upper", "omega_star", "iterations"}) {
    EXPECT_TRUE(m.contains(key)) << key;
  }
  const json c = to_json(perturb_campaign(MatrixR::diagonal({-0.01, 2}), 20, 0.5, 3, 1e-9));
  EXPECT_EQ(c.at("samples"), 20);
  EXPECT_EQ(c.at("seed"), 3);
  EXPECT_EQ(c.at("base_inertia").at("s"), 1);
  EXPECT_GT(c.at("flips").get<int>(), 0);
  EXPECT_EQ(c.at("flip_witnesses")[0].at("perturbation").at("d"), 2);
}

TEST(TrajectoryCsv, Format) {
  const std::vector<double> grid{0.0, 1.0};
  Vector x0(2);
  x0 << 1, 1;
  const std::string csv = format_trajectory_csv(trajectory(MatrixR::diagonal({-1, 2}), x0, grid));
  EXPECT_EQ(csv.rfind("t,x1,x2\n0,1,1\n1,0.36787944117144233,7.38905609893", 0), 0u) << csv;
  const auto last = csv.substr(csv.rfind(',') + 1);
  EXPECT_NEAR(std::stod(last), std::exp(2.0), 1e-14);
  EXPECT_EQ(last.size(), 19u);  // 17 significant digits plus point and newline
}
