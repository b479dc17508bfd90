#include <gtest/gtest.h>

#include <cmath>

#include "stcomp/config.hpp"

using namespace stcomp;

namespace {

int error_line(const std::string& text) {
  try {
    ConfigDocument::parse(text);
  } catch (const ConfigError& e) {
    return e.line();
  }
  return -1;
}

}  // namespace

TEST(Config, ParsesScalarsTablesAndComments) {
  const auto doc = ConfigDocument::parse(R"(# leading comment
name = "demo"   # trailing comment

[graph]
type = "ring"
n = 10
weight = 1.5e0

[sim.extra]
flag = true
neg = -3
big = +inf
)");
  EXPECT_EQ(doc.string("name"), "demo");
  EXPECT_EQ(doc.string("graph.type"), "ring");
  EXPECT_EQ(doc.integer("graph.n"), 10);
  EXPECT_DOUBLE_EQ(doc.number("graph.weight"), 1.5);
  EXPECT_TRUE(doc.boolean("sim.extra.flag", false));
  EXPECT_EQ(doc.integer("sim.extra.neg"), -3);
  EXPECT_TRUE(std::isinf(doc.number("sim.extra.big")));
  EXPECT_TRUE(doc.has_table("graph"));
  EXPECT_EQ(doc.keys_in("graph"), (std::vector<std::string>{"type", "n", "weight"}));
  EXPECT_EQ(doc.keys().front(), "name");
}

TEST(Config, MultiLineNestedArrays) {
  const auto doc = ConfigDocument::parse(R"([graph]
edges = [[0, 1, 1.0],   # first
         [1, 2, 2.0],
        ]
empty = []
)");
  const auto& edges = ConfigDocument::as_array(doc.require("graph.edges"), "graph.edges");
  ASSERT_EQ(edges.size(), 2u);
  EXPECT_EQ(ConfigDocument::as_numbers(edges[1], "e"), (std::vector<double>{1, 2, 2}));
  EXPECT_EQ(edges[1].line, 2);
  EXPECT_TRUE(doc.numbers("graph.empty").empty());
}

TEST(Config, StringsMayContainHashAndBrackets) {
  const auto doc = ConfigDocument::parse("path = \"a#b[1]\"\n");
  EXPECT_EQ(doc.string("path"), "a#b[1]");
}

TEST(Config, Fallbacks) {
  const auto doc = ConfigDocument::parse("[a]\nx = 1\n");
  EXPECT_EQ(doc.number("a.y", 2.5), 2.5);
  EXPECT_EQ(doc.string("a.z", "q"), "q");
  EXPECT_EQ(doc.integer("a.x", 7), 1);
  EXPECT_THROW(doc.number("a.y"), ConfigError);
}

TEST(Config, ErrorsAreLineAnchored) {
  EXPECT_EQ(error_line("a = 1\nb = oops\n"), 2);
  EXPECT_EQ(error_line("a = 1\n[bad\n"), 2);
  EXPECT_EQ(error_line("a = 1\na = 2\n"), 2);
  EXPECT_EQ(error_line("\n\nx = [1, 2\n"), 3);
  EXPECT_EQ(error_line("just words\n"), 1);
  EXPECT_EQ(error_line("x = \"unterminated\n"), 1);
  EXPECT_EQ(error_line("x = 1 2\n"), 1);
  EXPECT_EQ(error_line("bad key = 1\n"), 1);
  EXPECT_EQ(error_line("x = [1 2]\n"), 1);
  try {
    ConfigDocument::parse("[t]\nk = oops\n");
  } catch (const ConfigError& e) {
    EXPECT_EQ(std::string(e.what()).rfind("line 2: ", 0), 0u);
  }
}

TEST(Config, TypeErrorsNameKeyAndLine) {
  const auto doc = ConfigDocument::parse("[s]\nn = 1.5\nt = \"x\"\nb = 1\n");
  try {
    doc.integer("s.n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line(), 2);
    EXPECT_NE(std::string(e.what()).find("s.n"), std::string::npos);
  }
  EXPECT_THROW(doc.number("s.t"), ConfigError);
  EXPECT_THROW(doc.boolean("s.b", false), ConfigError);
  EXPECT_THROW(doc.numbers("s.t"), ConfigError);
}

TEST(Config, CheckKeys) {
  const auto doc = ConfigDocument::parse("[flow]\nalpha = 1\nalpah = 2\n");
  try {
    doc.check_keys("flow", {"alpha", "beta"});
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line(), 3);
    EXPECT_NE(std::string(e.what()).find("flow.alpah"), std::string::npos);
  }
}

TEST(Config, LoadMissingFileIsIoError) {
  EXPECT_THROW(ConfigDocument::load("/nonexistent/dir/x.toml"), IoError);
}

TEST(Config, DoublesRoundTripExactly) {
  const double values[] = {0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-300, 0.01};
  for (double v : values) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "x = %.17g\n", v);
    EXPECT_EQ(ConfigDocument::parse(buf).number("x"), v);
  }
}
