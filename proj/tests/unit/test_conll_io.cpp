#include "doctest.h"
#include "fixtures.hpp"
#include "stagsrl/error.hpp"

#include <algorithm>

using namespace stagsrl;

namespace {

const std::string kTwoTokens =
    "1\tdog\tdog\tdog\tNN\tNN\t_\t_\t2\t_\tSBJ\t_\t_\t_\tA0\n"
    "2\tbarks\tbark\tbark\tVBZ\tVBZ\t_\t_\t0\t_\tROOT\t_\tY\tbarks.01\t_\n"
    "\n";

std::string replace_field(std::string text, int line, int column, const std::string& value) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  auto& l = lines.at(static_cast<std::size_t>(line));
  std::vector<std::string> cols;
  std::size_t s = 0;
  for (;;) {
    auto e = l.find('\t', s);
    cols.push_back(l.substr(s, e == std::string::npos ? std::string::npos : e - s));
    if (e == std::string::npos) break;
    s = e + 1;
  }
  cols.at(static_cast<std::size_t>(column - 1)) = value;
  l.clear();
  for (std::size_t i = 0; i < cols.size(); ++i) l += (i ? "\t" : "") + cols[i];
  std::string out;
  for (auto& x : lines) out += x + "\n";
  return out;
}

}  // namespace

TEST_CASE("two-token fixture fields") {
  auto v = parse_conll2009(kTwoTokens);
  REQUIRE(v.size() == 1);
  const auto& s = v[0];
  CHECK(s.predicates == std::vector<int>{2});
  CHECK(s.token(1).form == "dog");
  CHECK(s.token(1).head == 2);
  CHECK(s.token(1).deprel == "SBJ");
  CHECK_FALSE(s.token(1).phead.has_value());
  CHECK(s.token(1).pdeprel.empty());
  CHECK(s.token(1).apreds.size() == 1);
  CHECK(s.token(1).apreds[0] == std::optional<std::string>("A0"));
  CHECK_FALSE(s.token(2).apreds[0].has_value());
  CHECK(s.token(2).fillpred);
  CHECK(s.token(2).pred == std::optional<std::string>("barks.01"));
  CHECK(s.token(2).feat.empty());
}

TEST_CASE("serialization reproduces the fixture bytes") {
  CHECK(serialize_conll2009(parse_conll2009(kTwoTokens)) == kTwoTokens);
  CHECK(serialize_conll2009(parse_conll2009(fixtures::kReference)) == fixtures::kReference);
}

TEST_CASE("empty input and empty output") {
  CHECK(parse_conll2009("").empty());
  CHECK(parse_conll2009("\n\n").empty());
  CHECK(serialize_conll2009({}).empty());
}

TEST_CASE("13 columns is a parse error naming the line") {
  const std::string bad = "1\tdog\tdog\tdog\tNN\tNN\t_\t_\t0\t_\tROOT\t_\t_\n";
  try {
    parse_conll2009(bad);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("line 1") != std::string::npos);
  }
  const std::string second = kTwoTokens.substr(0, kTwoTokens.find('\n') + 1) +
                             "2\tbarks\tbark\tbark\tVBZ\tVBZ\t_\t_\t0\t_\tROOT\t_\tY\n";
  try {
    parse_conll2009(second);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("validation rejects self loops, out-of-range heads and ragged apreds") {
  CHECK_THROWS_AS(parse_conll2009(replace_field(kTwoTokens, 0, 9, "1")), ValidationError);
  CHECK_THROWS_AS(parse_conll2009(replace_field(kTwoTokens, 0, 9, "3")), ValidationError);
  CHECK_THROWS_AS(parse_conll2009(replace_field(kTwoTokens, 0, 9, "-1")), ValidationError);
  // Two predicates but only one APRED column.
  CHECK_THROWS_AS(parse_conll2009(replace_field(kTwoTokens, 0, 13, "Y")), ValidationError);
  try {
    parse_conll2009(replace_field(kTwoTokens, 1, 9, "5"));
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("sentence 1") != std::string::npos);
    CHECK(msg.find("token 2") != std::string::npos);
  }
}

TEST_CASE("round trip and apred alignment over generated corpora") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    SynthConfig cfg;
    cfg.seed = seed;
    cfg.sentence_count = 100;
    const auto corpus = generate_synthetic(cfg);
    const auto text = serialize_conll2009(corpus);
    const auto back = parse_conll2009(text);
    CHECK(back == corpus);
    CHECK(serialize_conll2009(back) == text);
    for (const auto& s : back) {
      for (const auto& t : s.tokens) CHECK(t.apreds.size() == s.predicates.size());
      CHECK(std::is_sorted(s.predicates.begin(), s.predicates.end()));
    }
  }
}

TEST_CASE("embedding files") {
  auto t = load_embeddings("a 1 2 3\nb 3 4 5\n");
  CHECK(t.dim() == 3);
  CHECK(t.size() == 2);
  CHECK(t.lookup("zzz") == std::vector<double>{2, 3, 4});
  CHECK(t.lookup("a") == std::vector<double>{1, 2, 3});
  auto dup = load_embeddings("a 1\na 5\n");
  CHECK(dup.lookup("a") == std::vector<double>{1});
  try {
    load_embeddings("a 1 2 3\nb 1 2 3 4\n");
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  CHECK_THROWS_AS(load_embeddings(""), Error);

  auto with_header = load_embeddings("2 3\na 1 2 3\nb 3 4 5\n");
  CHECK(with_header.dim() == 3);
  CHECK(with_header.size() == 2);
  CHECK(with_header.lookup("2") == std::vector<double>{2, 3, 4});
}

TEST_CASE("file helpers report io errors") {
  CHECK_THROWS_AS(read_text_file("/nonexistent/dir/file.conll"), IoError);
  CHECK_THROWS_AS(write_text_file("/nonexistent/dir/out.txt", "x"), IoError);
}
