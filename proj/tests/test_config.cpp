#include <gtest/gtest.h>

#include "fockshift/cli.hpp"
#include "fockshift/condition.hpp"

using namespace fockshift;
using cli::Json;

namespace {

std::string error_path(const std::string& text) {
  try {
    cli::parse_config(Json::parse(text));
  } catch (const cli::ConfigError& e) {
    return e.path();
  }
  return "<no error>";
}

}  // namespace

TEST(Config, ConstantDefaults) {
  const auto c = cli::parse_config(Json::parse(R"({"n":2, "family":"constant", "value":1.0})"));
  EXPECT_TRUE(c.weights->is_unweighted());
  EXPECT_EQ(c.depth, 8);
  EXPECT_EQ(c.tolerance, 1e-10);
  EXPECT_EQ(c.epsilon, 0.02);
  const auto echo = cli::config_echo(c);
  EXPECT_EQ(echo["depth"], 8);
  EXPECT_EQ(echo["tolerance"], 1e-10);
  EXPECT_EQ(echo["epsilon"], 0.02);
  EXPECT_EQ(echo["weights"]["family"], "constant");
}

TEST(Config, PeriodicExample) {
  const auto c = cli::parse_config(Json::parse(
      R"({"n":2, "family":"periodic", "period":2, "remainders":{"1:e":1,"2:e":1,"1:1":2,"2:1":2,"1:2":2,"2:2":2}, "depth": 6})"));
  EXPECT_EQ(c.depth, 6);
  EXPECT_EQ(c.weights->lambda(1, Word{2, 1, 1}), 2.0);
  EXPECT_EQ(condition6_sup(*c.weights, 6).value, 2.0);
}

TEST(Config, TwoLetterMAndOtherFamilies) {
  const auto m = cli::parse_config(Json::parse(R"({"n":2, "family":"two_letter_m", "m":4, "c":1})"));
  EXPECT_EQ(condition6_sup(*m.weights, 8).verdict, Verdict::Diverging);
  const auto s = cli::parse_config(Json::parse(R"({"n":2, "family":"scaled", "scales":[2,3], "grid":"0:1:0.5"})"));
  EXPECT_EQ(s.weights->lambda(2, Word{1}), 3.0);
  EXPECT_EQ(s.grid->step, 0.5);
  const auto f = cli::parse_config(
      Json::parse(R"({"n":2, "family":"finite_perturbation", "cutoff":2, "table":{"1:e":2,"2:21":3}, "tail":[1,1]})"));
  EXPECT_EQ(f.weights->lambda(1, Word{}), 2.0);
}

TEST(Config, ErrorsNameTheOffendingPath) {
  EXPECT_EQ(error_path(R"({"n":2, "family":"constant", "value":1, "colour":3})"), "$.colour");
  EXPECT_EQ(error_path(R"({"n":2, "family":"constant"})"), "$.value");
  EXPECT_EQ(error_path(R"({"n":2, "family":"constant", "value":-2})"), "$.value");
  EXPECT_EQ(error_path(R"({"n":2, "family":"scaled", "scales":[1]})"), "$.scales");
  EXPECT_EQ(error_path(R"({"n":2, "family":"scaled", "scales":[1, 0]})"), "$.scales[1]");
  EXPECT_EQ(error_path(R"({"n":2, "family":"periodic", "period":2, "remainders":{"1:3":1}})"), "$.remainders[\"1:3\"]");
  EXPECT_EQ(error_path(R"({"n":2, "family":"periodic", "period":1, "remainders":{"x":1}})"), "$.remainders[\"x\"]");
  EXPECT_EQ(error_path(R"({"n":2, "family":"finite_perturbation", "cutoff":0, "table":{"1:1":2}, "tail":[1,1]})"),
            "$.table[\"1:1\"]");
  EXPECT_EQ(error_path(R"({"n":3, "family":"two_letter_m", "m":4, "c":1})"), "$.n");
  EXPECT_EQ(error_path(R"({"n":2, "family":"spiral"})"), "$.family");
  EXPECT_EQ(error_path(R"({"n":"2", "family":"constant", "value":1})"), "$.n");
  EXPECT_EQ(error_path(R"({"n":2, "family":"constant", "value":1, "depth":0})"), "$.depth");
  EXPECT_EQ(error_path(R"({"n":2, "family":"constant", "value":1, "tolerance":-1})"), "$.tolerance");
  EXPECT_EQ(error_path(R"({"n":2, "family":"constant", "value":1, "grid":"1:0:1"})"), "$.grid");
  EXPECT_EQ(error_path(R"([1,2])"), "$");
}

TEST(Config, PositivityMessage) {
  try {
    cli::parse_config(Json::parse(R"({"n":2, "family":"constant", "value":0})"));
    FAIL();
  } catch (const cli::ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("strictly positive"), std::string::npos);
  }
}

TEST(Config, LambdaLiterals) {
  const auto l = cli::parse_lambda("0.3+0.1i,0.4");
  ASSERT_EQ(l.size(), 2u);
  EXPECT_EQ(l[0], cplx(0.3, 0.1));
  EXPECT_EQ(l[1], cplx(0.4, 0.0));
  EXPECT_EQ(cli::parse_lambda("-1.5e-1-2i")[0], cplx(-0.15, -2.0));
  EXPECT_EQ(cli::parse_lambda("2i")[0], cplx(0.0, 2.0));
  EXPECT_THROW(cli::parse_lambda("1+i"), DomainError);
  EXPECT_THROW(cli::parse_lambda("abc"), DomainError);
  EXPECT_THROW(cli::parse_lambda("0.1,"), DomainError);
  EXPECT_THROW(cli::parse_lambda("0.1+0.2"), DomainError);
}

TEST(Config, FourierJson) {
  const auto a = cli::parse_fourier(Json::parse(R"({"coeffs":{"e":[1,0],"12":[0.5,-2]}})"), 2);
  EXPECT_EQ(a.at(Word{}), cplx(1.0));
  EXPECT_EQ(a.at(Word{1, 2}), cplx(0.5, -2.0));
  EXPECT_THROW(cli::parse_fourier(Json::parse(R"({"coeffs":{"3":[1,0]}})"), 2), cli::ConfigError);
  EXPECT_THROW(cli::parse_fourier(Json::parse(R"({"coeffs":{"1":1}})"), 2), cli::ConfigError);
  EXPECT_THROW(cli::parse_fourier(Json::parse(R"({"coeffs":{}, "extra":1})"), 2), cli::ConfigError);
}
