#include "doctest.h"
#include "stagsrl/config.hpp"
#include "stagsrl/error.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>

using namespace stagsrl;

TEST_CASE("sections, comments and the unnamed section") {
  const auto c = KeyValueConfig::parse(
      "seed = 3\n"
      "# comment\n"
      "[common]\n"
      "  batch_size=10  \n"
      "\n"
      "[train-srl]\n"
      "d_h = 32\n"
      "pretrained = \n");
  CHECK(c.section("") == ConfigMap{{"seed", "3"}});
  CHECK(c.section("common") == ConfigMap{{"batch_size", "10"}});
  CHECK(c.get("train-srl", "d_h") == std::optional<std::string>("32"));
  CHECK(c.get("train-srl", "pretrained") == std::optional<std::string>(""));
  CHECK_FALSE(c.get("train-srl", "missing").has_value());
  CHECK(c.section("nope").empty());
}

TEST_CASE("malformed config lines") {
  CHECK_THROWS_AS(KeyValueConfig::parse("[open\n"), ParseError);
  CHECK_THROWS_AS(KeyValueConfig::parse("novalue\n"), ParseError);
  CHECK_THROWS_AS(KeyValueConfig::parse(" = 3\n"), ParseError);
  try {
    KeyValueConfig::parse("a = 1\nb\n");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("canonical text is sorted and round trips") {
  const ConfigMap m{{"zeta", "1"}, {"alpha", "x y"}, {"mid", ""}};
  const auto text = canonical_text(m);
  CHECK(text == "alpha = x y\nmid = \nzeta = 1\n");
  CHECK(parse_canonical_text(text) == m);
  CHECK(canonical_text(parse_canonical_text(text)) == text);
}

TEST_CASE("typed accessors") {
  const ConfigMap m{{"i", "12"}, {"d", "0.25"}, {"b", "true"}, {"n", "no"}, {"l", "a, b,c"}, {"bad", "1x"}};
  CHECK(config_int(m, "i", 0) == 12);
  CHECK(config_int(m, "missing", 7) == 7);
  CHECK(config_double(m, "d", 0) == 0.25);
  CHECK(config_bool(m, "b", false));
  CHECK_FALSE(config_bool(m, "n", true));
  CHECK(config_list(m, "l", {}) == std::vector<std::string>{"a", "b", "c"});
  CHECK(config_string(m, "missing", "fb") == "fb");
  CHECK_THROWS_AS(config_int(m, "bad", 0), ParseError);
  CHECK_THROWS_AS(config_double(m, "bad", 0), ParseError);
  CHECK_THROWS_AS(config_bool(m, "bad", false), ParseError);
  try {
    config_int(m, "bad", 0);
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("'bad'") != std::string::npos);
  }
}

TEST_CASE("lists and doubles") {
  CHECK(split_list("") == std::vector<std::string>{});
  CHECK(join_list({"a", "b"}) == "a,b");
  CHECK(split_list(join_list({"x", "y", "z"})) == std::vector<std::string>{"x", "y", "z"});
  for (double v : {0.1, 1e-8, 0.999, 3.0, -2.5e300, 1.0 / 3.0, std::numeric_limits<double>::denorm_min()}) {
    CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
    CHECK(config_double({{"x", format_double(v)}}, "x", 0) == v);
  }
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(50) == "50");
}
