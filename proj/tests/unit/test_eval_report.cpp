#include "doctest.h"
#include "stagsrl/error.hpp"
#include "stagsrl/eval_report.hpp"

#include <set>
#include <tuple>

using namespace stagsrl;

namespace {

SrlFrame frame(int p, std::map<int, std::string> args, std::string sense = "") {
  return SrlFrame{p, "lemma", std::move(sense), std::move(args)};
}

const std::vector<std::string> kRoles{"A0", "A1", "A2", "A3", "AM-TMP", "AM-DIR", "C-A1", "R-A0"};

// Random frames over random sentence lengths, plus a noisy copy.
struct RandomCorpus {
  FrameCorpus gold, pred;
  std::vector<std::size_t> lengths;
  std::vector<std::vector<std::string>> pos;
};

RandomCorpus random_corpus(std::uint64_t seed, int sentences) {
  Rng rng(seed);
  RandomCorpus c;
  for (int i = 0; i < sentences; ++i) {
    const int n = rng.between(1, 40);
    c.lengths.push_back(static_cast<std::size_t>(n));
    std::vector<std::string> pos;
    for (int t = 0; t < n; ++t) pos.push_back(rng.bernoulli(0.3) ? "VBD" : "NN");
    c.pos.push_back(pos);
    std::vector<SrlFrame> g, p;
    for (int t = 1; t <= n; ++t) {
      if (!rng.bernoulli(0.2)) continue;
      SrlFrame gf = frame(t, {}), pf = frame(t, {});
      for (int a = 1; a <= n; ++a) {
        if (rng.bernoulli(0.15)) gf.arguments[a] = kRoles[rng.below(kRoles.size())];
        if (rng.bernoulli(0.15)) pf.arguments[a] = kRoles[rng.below(kRoles.size())];
        if (gf.arguments.count(a) && rng.bernoulli(0.6)) pf.arguments[a] = gf.arguments[a];
      }
      g.push_back(gf);
      p.push_back(pf);
    }
    c.gold.push_back(g);
    c.pred.push_back(p);
  }
  return c;
}

using Tuple = std::tuple<std::size_t, int, int, std::string>;

std::set<Tuple> all_tuples(const FrameCorpus& c) {
  std::set<Tuple> out;
  for (std::size_t i = 0; i < c.size(); ++i)
    for (const auto& f : c[i])
      for (const auto& [a, r] : f.arguments) out.emplace(i, f.predicate, a, r);
  return out;
}

void check_partition(const Breakdown& b, const SrlScore& overall) {
  SrlScore sum;
  for (const auto& [k, s] : b.entries) sum.add(s);
  CHECK(sum == overall);
  CHECK(b.total() == overall);
}

}  // namespace

TEST_CASE("hand fixture") {
  const FrameCorpus gold{{frame(1, {{3, "A0"}, {5, "A1"}})}};
  const FrameCorpus pred{{frame(1, {{3, "A0"}, {4, "A1"}, {6, "AM"}})}};
  const auto s = srl_prf(gold, pred);
  CHECK(s.correct == 1);
  CHECK(s.predicted == 3);
  CHECK(s.gold == 2);
  CHECK(s.precision() == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(s.recall() == 0.5);
  CHECK(s.f1() == doctest::Approx(0.4).epsilon(1e-15));
}

TEST_CASE("empty predictions score zero") {
  const FrameCorpus gold{{frame(1, {{2, "A0"}})}};
  const FrameCorpus pred{{frame(1, {})}};
  const auto s = srl_prf(gold, pred);
  CHECK(s.precision() == 0.0);
  CHECK(s.recall() == 0.0);
  CHECK(s.f1() == 0.0);
  CHECK(SrlScore{}.f1() == 0.0);
  CHECK_THROWS_AS(srl_prf(gold, {}), ValidationError);
}

TEST_CASE("sense mode") {
  const FrameCorpus gold{{frame(2, {{1, "A0"}}, "go.01")}};
  const FrameCorpus right{{frame(2, {{1, "A0"}}, "go.01")}};
  const FrameCorpus wrong{{frame(2, {{1, "A0"}}, "go.02")}};
  CHECK(srl_prf(gold, right, ScoreMode::ArgumentsAndSense).f1() == 1.0);
  const auto s = srl_prf(gold, wrong, ScoreMode::ArgumentsAndSense);
  CHECK(s.correct == 1);
  CHECK(s.gold == 2);
  CHECK(srl_prf(gold, wrong).f1() == 1.0);
  const FrameCorpus no_sense{{frame(2, {{1, "A0"}})}};
  CHECK_THROWS_AS(srl_prf(gold, no_sense, ScoreMode::ArgumentsAndSense), ValidationError);
}

TEST_CASE("set-intersection oracle on 50 random sentences") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto c = random_corpus(seed, 50);
    const auto g = all_tuples(c.gold), p = all_tuples(c.pred);
    long inter = 0;
    for (const auto& t : p) inter += g.count(t);
    const auto s = srl_prf(c.gold, c.pred);
    CHECK(s.correct == inter);
    CHECK(s.gold == static_cast<long>(g.size()));
    CHECK(s.predicted == static_cast<long>(p.size()));
    CHECK(s.precision() >= 0.0);
    CHECK(s.f1() <= 1.0);
  }
}

TEST_CASE("F1 monotonicity") {
  const auto c = random_corpus(9, 50);
  const auto base = srl_prf(c.gold, c.pred);
  for (std::size_t i = 0; i < c.gold.size(); ++i) {
    for (std::size_t k = 0; k < c.gold[i].size(); ++k) {
      for (const auto& [a, r] : c.gold[i][k].arguments) {
        auto more = c.pred;
        if (more[i][k].arguments.count(a)) continue;
        more[i][k].arguments[a] = r;
        CHECK(srl_prf(c.gold, more).f1() >= base.f1());
        auto wrong = c.pred;
        wrong[i][k].arguments[a] = r + "-x";
        CHECK(srl_prf(c.gold, wrong).precision() <= base.precision());
      }
    }
  }
}

TEST_CASE("tagging accuracy") {
  const std::vector<std::string> g{"a", "b", "c", "d", "e", "f", "g", "h"};
  CHECK(tagging_accuracy(g, g) == 1.0);
  auto p = g;
  p[3] = "x";
  CHECK(tagging_accuracy(g, p) == 0.875);
  CHECK_THROWS_AS(tagging_accuracy(g, {"a"}), ValidationError);

  Rng rng(5);
  TagSequences gold, pred;
  long total = 0, correct = 0;
  while (total < 1000) {
    const int n = std::min<int>(rng.between(1, 30), static_cast<int>(1000 - total));
    std::vector<std::string> gs, ps;
    for (int t = 0; t < n; ++t) {
      gs.push_back("T" + std::to_string(rng.below(6)));
      ps.push_back(rng.bernoulli(0.7) ? gs.back() : "T" + std::to_string(rng.below(6)));
      correct += gs.back() == ps.back();
      ++total;
    }
    gold.push_back(gs);
    pred.push_back(ps);
  }
  const std::set<std::string> known{"T0", "T1", "T2", "T3", "T4"};
  long unseen = 0;
  for (const auto& s : gold)
    for (const auto& t : s) unseen += known.count(t) == 0;
  const auto s = tagging_score(gold, pred, &known);
  CHECK(s.total == 1000);
  CHECK(s.correct == correct);
  CHECK(s.unseen == unseen);
  CHECK(s.accuracy() == static_cast<double>(correct) / 1000.0);
}

TEST_CASE("length buckets") {
  CHECK(length_bucket(1) == "1-10");
  CHECK(length_bucket(10) == "1-10");
  CHECK(length_bucket(11) == "11-15");
  CHECK(length_bucket(12) == "11-15");
  CHECK(length_bucket(30) == "26-30");
  CHECK(length_bucket(31) == "31+");
  const FrameCorpus gold{{frame(2, {{1, "A0"}, {5, "A1"}})}};
  const auto b = breakdown_by_length(gold, gold, {12});
  REQUIRE(b.entries.size() == kLengthBuckets.size());
  for (const auto& [k, s] : b.entries) CHECK(s.gold == (k == "11-15" ? 2 : 0));
  const auto c = random_corpus(4, 200);
  check_partition(breakdown_by_length(c.gold, c.pred, c.lengths), srl_prf(c.gold, c.pred));
}

TEST_CASE("role keys and categories") {
  CHECK(role_key("AM-DIR") == "AM");
  CHECK(role_key("AM-TMP") == "AM");
  CHECK(role_key("A0") == "A0");
  CHECK(role_key("A5") == "A5");
  CHECK(role_key("C-A1") == "other");
  CHECK(role_key("R-A0") == "other");
  CHECK(predicate_category("VBZ", {"V"}) == "V");
  CHECK(predicate_category("NN", {"V"}) == "N");
  CHECK(predicate_category("v", {"v"}) == "V");

  const FrameCorpus gold{{frame(1, {{2, "AM-DIR"}, {3, "AM-TMP"}, {4, "A0"}}), frame(4, {{3, "A1"}})}};
  const std::vector<std::vector<std::string>> pos{{"VBD", "NN", "NN", "NN"}};
  const auto b = breakdown_by_role(gold, gold, pos, {"V"});
  REQUIRE(b.find("V:AM") != nullptr);
  CHECK(b.find("V:AM")->gold == 2);
  CHECK(b.find("N:A1")->gold == 1);
  CHECK(b.find("V:A2") == nullptr);
  for (const auto& [k, s] : b.entries) {
    CHECK(s.precision() == 1.0);
    CHECK(s.recall() == 1.0);
    CHECK(s.f1() == 1.0);
  }
  const auto c = random_corpus(6, 200);
  check_partition(breakdown_by_role(c.gold, c.pred, c.pos, {"V"}), srl_prf(c.gold, c.pred));
}

TEST_CASE("reports") {
  const auto c = random_corpus(7, 30);
  Report r;
  r.corpus = "dev.conll";
  r.model = "m.ckpt";
  r.srl = srl_prf(c.gold, c.pred);
  r.tagging = TaggingScore{7, 8, 1};
  r.breakdowns.push_back(breakdown_by_length(c.gold, c.pred, c.lengths));
  r.breakdowns.push_back(breakdown_by_role(c.gold, c.pred, c.pos, {"V"}));
  r.vocab = {{"0", 99, 1000}, {"tag", 430, 1000}};
  r.config = {{"seed", "3"}, {"lang", "en"}};

  const auto jsonl = emit_report(r, ReportFormat::JsonLines);
  CHECK(jsonl == emit_report(r, ReportFormat::JsonLines));
  CHECK(jsonl.rfind("{\"type\":\"header\",\"version\":1,", 0) == 0);
  CHECK(jsonl.find("\"accuracy\":0.8750") != std::string::npos);
  CHECK(parse_report_jsonl(jsonl) == r);

  const auto csv = emit_report(r, ReportFormat::Csv);
  CHECK(csv == emit_report(r, ReportFormat::Csv));
  CHECK(csv.rfind("type,name,key,correct,predicted,gold,total,distinct,precision,recall,f1,accuracy\n", 0) == 0);
  CHECK(csv.find("vocab,tag,,,,,1000,430,,,,") != std::string::npos);

  CHECK(parse_report_format("csv") == ReportFormat::Csv);
  CHECK_THROWS_AS(parse_report_format("xml"), ParseError);
  CHECK_THROWS_AS(parse_report_jsonl("{\"type\":\"header\",\"version\":9}\n"), FormatError);
  const std::string head = jsonl.substr(0, jsonl.find('\n') + 1);
  CHECK_THROWS_AS(parse_report_jsonl(head + "{\"type\":\"zzz\"}\n"), FormatError);
  CHECK_THROWS_AS(parse_report_jsonl(head + "{\"type\":\"srl\",\"correct\":1}\n"), ParseError);
  CHECK_THROWS_AS(parse_report_jsonl("{not json\n"), ParseError);
}
