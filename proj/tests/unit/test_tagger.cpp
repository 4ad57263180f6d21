#include "doctest.h"
#include "fixtures.hpp"
#include "stagsrl/error.hpp"
#include "stagsrl/eval_report.hpp"
#include "stagsrl/supertags.hpp"
#include "stagsrl/tagger.hpp"

#include <cmath>

using namespace stagsrl;

namespace {

TaggerConfig small_config() {
  TaggerConfig c;
  c.d_w = 8;
  c.d_pos = 4;
  c.char_dim = 4;
  c.char_filters = 5;
  c.d_h = 6;
  c.layers = 2;
  c.schedule.epochs = 3;
  c.schedule.batch_size = 4;
  c.lstm_dropout = 0.2;
  c.recurrent_dropout = 0.2;
  c.word_dropout = 0.25;
  return c;
}

struct Data {
  std::vector<ConllSentence> sentences;
  std::vector<TaggerInput> xs;
  std::vector<std::vector<std::string>> ys;
};

Data make_data(const TaggerConfig& cfg, int n = 16, std::uint64_t seed = 2) {
  SynthConfig sc;
  sc.seed = seed;
  sc.sentence_count = n;
  Data d;
  d.sentences = generate_synthetic(sc);
  for (const auto& s : d.sentences) {
    d.xs.push_back(tagger_input(s, cfg));
    d.ys.push_back(extract_strings(tree_from_sentence(s), SupertagModel::M0, ObligatorySet::english()));
  }
  return d;
}

}  // namespace

TEST_CASE("configuration") {
  const TaggerConfig defaults;
  CHECK(defaults.d_h == 512);
  CHECK(defaults.layers == 4);
  CHECK(defaults.schedule.batch_size == 100);
  CHECK(defaults.char_filters == 30);
  auto c = small_config();
  c.seed = 77;
  c.labels = "pos";
  const auto back = TaggerConfig::from_map(c.to_map());
  CHECK(back.to_map() == c.to_map());
  CHECK(TaggerConfig::from_map({{"d_h", "9"}, {"epochs", "4"}, {"learning_rate", "0.5"}}).d_h == 9);
  CHECK(TaggerConfig::from_map({{"epochs", "4"}}).schedule.epochs == 4);
  CHECK(TaggerConfig::from_map({{"learning_rate", "0.5"}}).schedule.adam.learning_rate == 0.5);
  auto bad = c;
  bad.d_h = 0;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = c;
  bad.lstm_dropout = 1.0;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = c;
  bad.use_words = bad.use_pos = bad.use_chars = false;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  CHECK_THROWS_AS(TaggerConfig::from_map({{"d_h", "-3"}}), ParseError);
}

TEST_CASE("input columns") {
  auto s = fixtures::parse_one(fixtures::kReference);
  s.tokens[0].ppos = "XX";
  auto cfg = small_config();
  CHECK(tagger_input(s, cfg).pos[0] == "XX");
  cfg.pos_column = "gold";
  CHECK(tagger_input(s, cfg).pos[0] == "UH");
  CHECK(tagger_input(s, cfg).words[3] == "was");
}

TEST_CASE("tagging totality and distributions") {
  const auto cfg = small_config();
  const auto d = make_data(cfg);
  TaggerModel m(cfg, d.xs, d.ys);
  const auto r = m.tag({{"zzzunseen"}, {"QQ"}});
  CHECK(r.labels.size() == 1);
  CHECK(m.label_set().index(r.labels[0]) >= 0);
  for (const auto& x : d.xs) {
    const auto res = m.tag(x);
    CHECK(res.labels.size() == x.words.size());
    for (const auto& dist : res.distributions) {
      double s = 0;
      for (double p : dist) s += p;
      CHECK(std::abs(s - 1.0) < 1e-6);
    }
  }
  CHECK_THROWS_AS(m.tag({{}, {}}), ValidationError);
  CHECK_THROWS_AS(m.tag({{"a", "b"}, {"X"}}), ValidationError);
}

TEST_CASE("ties go to the lowest label index") {
  const auto cfg = small_config();
  const auto d = make_data(cfg);
  TaggerModel m(cfg, d.xs, d.ys);
  m.parameters().get("output.w").value().fill(0.0);
  m.parameters().get("output.b").value().fill(0.0);
  const auto r = m.tag(d.xs[0]);
  for (const auto& l : r.labels) CHECK(l == m.label_set().label(0));
}

TEST_CASE("one Adam step lowers the first batch's loss") {
  auto cfg = small_config();
  cfg.lstm_dropout = cfg.recurrent_dropout = 0;
  cfg.word_dropout = 0;
  const auto d = make_data(cfg);
  TaggerModel m(cfg, d.xs, d.ys);
  auto batch_loss = [&](bool backward) {
    double total = 0;
    for (std::size_t i = 0; i < 4; ++i) {
      Graph g;
      Rng rng(1);
      auto l = m.loss(g, d.xs[i], d.ys[i], true, rng);
      if (backward) g.backward(l);
      total += l.value().item();
    }
    return total;
  };
  m.parameters().zero_grad();
  const double before = batch_loss(true);
  AdamState state;
  adam_step(m.parameters().trainable(), state, cfg.schedule.adam);
  CHECK(batch_loss(false) < before);
}

TEST_CASE("training, checkpoints and cross-module agreement") {
  const auto cfg = small_config();
  const auto d = make_data(cfg);
  std::vector<EpochStats> history;
  auto m = train_tagger(d.xs, d.ys, cfg, nullptr, {}, &history);
  CHECK(history.size() == 3);

  const auto ckpt = m->to_checkpoint({{"note", "x"}});
  CHECK(ckpt.kind() == "tagger");
  CHECK(ckpt.metadata.at("note") == "x");
  const auto bytes = serialize_checkpoint(ckpt);
  auto loaded = load_tagger(parse_checkpoint(bytes));
  for (const auto& x : d.xs) {
    const auto a = m->tag(x), b = loaded->tag(x);
    CHECK(a.labels == b.labels);
    CHECK(a.distributions == b.distributions);
  }
  CHECK(loaded->config().to_map() == cfg.to_map());

  auto again = train_tagger(d.xs, d.ys, cfg);
  CHECK(serialize_checkpoint(again->to_checkpoint({{"note", "x"}})) == bytes);

  const auto one = m->tag_all(d.xs, 1), three = m->tag_all(d.xs, 3);
  std::vector<std::vector<std::string>> pred;
  long correct = 0, total = 0;
  for (std::size_t i = 0; i < d.xs.size(); ++i) {
    CHECK(one[i].labels == three[i].labels);
    CHECK(one[i].distributions == three[i].distributions);
    pred.push_back(one[i].labels);
    for (std::size_t t = 0; t < pred[i].size(); ++t) {
      correct += pred[i][t] == d.ys[i][t];
      ++total;
    }
  }
  CHECK(tagging_score(d.ys, pred).accuracy() == static_cast<double>(correct) / static_cast<double>(total));

  auto wrong = ckpt;
  wrong.config["kind"] = "srl";
  CHECK_THROWS_AS(load_tagger(wrong), FormatError);
}

TEST_CASE("pretrained vectors are frozen and loaded") {
  auto cfg = small_config();
  cfg.schedule.epochs = 1;
  const auto d = make_data(cfg, 6);
  const EmbeddingTable pre(3, {{d.xs[0].words[0], {1.0, 2.0, 3.0}}}, {0.0, 0.0, 0.0});
  auto m = train_tagger(d.xs, d.ys, cfg, &pre);
  const auto& frozen = m->parameters().get("word.frozen");
  CHECK_FALSE(frozen.trainable());
  CHECK(frozen.value().cols() == 3);
  auto loaded = load_tagger(parse_checkpoint(serialize_checkpoint(m->to_checkpoint())));
  CHECK(loaded->tag(d.xs[1]).distributions == m->tag(d.xs[1]).distributions);
}

TEST_CASE("misaligned or empty training data") {
  const auto cfg = small_config();
  auto d = make_data(cfg, 4);
  CHECK_THROWS_AS(train_tagger({}, {}, cfg), ValidationError);
  d.ys[1].pop_back();
  CHECK_THROWS_AS(train_tagger(d.xs, d.ys, cfg), ValidationError);
}
