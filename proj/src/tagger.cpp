#include "stagsrl/tagger.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <set>

#include "stagsrl/error.hpp"

namespace stagsrl {

namespace {

std::string bool_text(bool b) { return b ? "true" : "false"; }

std::size_t config_size(const ConfigMap& m, const std::string& key, std::size_t fallback) {
  const int v = config_int(m, key, static_cast<int>(fallback));
  if (v < 0) throw ParseError("config key '" + key + "' must not be negative");
  return static_cast<std::size_t>(v);
}

void check_rate(double r, const char* name) {
  if (!(r >= 0.0 && r < 1.0)) throw ValidationError(std::string(name) + " must lie in [0, 1)");
}

std::uint64_t train_stream(std::uint64_t seed) { return seed * 0x9E3779B97F4A7C15ULL + 1; }

}  // namespace

void TaggerConfig::validate() const {
  if (!use_words && !use_pos && !use_chars) throw ValidationError("tagger needs at least one input feature");
  if (d_w == 0 || d_pos == 0 || char_dim == 0 || char_filters == 0 || d_h == 0 || layers == 0) {
    throw ValidationError("tagger dimensions must be positive");
  }
  if (char_window % 2 == 0) throw ValidationError("char_window must be odd");
  check_rate(lstm_dropout, "lstm_dropout");
  check_rate(recurrent_dropout, "recurrent_dropout");
  if (word_dropout < 0.0) throw ValidationError("word_dropout must be non-negative");
  if (schedule.batch_size < 1 || schedule.epochs < 0) throw ValidationError("bad batch size or epoch count");
  if (pos_column != "predicted" && pos_column != "gold") {
    throw ValidationError("pos_column must be 'predicted' or 'gold'");
  }
}

ConfigMap TaggerConfig::to_map() const {
  return {
      {"use_words", bool_text(use_words)},
      {"use_pos", bool_text(use_pos)},
      {"use_chars", bool_text(use_chars)},
      {"d_w", std::to_string(d_w)},
      {"d_pos", std::to_string(d_pos)},
      {"char_dim", std::to_string(char_dim)},
      {"char_filters", std::to_string(char_filters)},
      {"char_window", std::to_string(char_window)},
      {"d_h", std::to_string(d_h)},
      {"layers", std::to_string(layers)},
      {"highway", bool_text(highway)},
      {"lstm_dropout", format_double(lstm_dropout)},
      {"recurrent_dropout", format_double(recurrent_dropout)},
      {"word_dropout", format_double(word_dropout)},
      {"epochs", std::to_string(schedule.epochs)},
      {"batch_size", std::to_string(schedule.batch_size)},
      {"learning_rate", format_double(schedule.adam.learning_rate)},
      {"beta1", format_double(schedule.adam.beta1)},
      {"beta2", format_double(schedule.adam.beta2)},
      {"epsilon", format_double(schedule.adam.epsilon)},
      {"clip_norm", format_double(schedule.adam.clip_norm)},
      {"seed", std::to_string(seed)},
      {"pos_column", pos_column},
      {"labels", labels},
      {"pretrained", pretrained},
  };
}

TaggerConfig TaggerConfig::from_map(const ConfigMap& m) {
  TaggerConfig c;
  c.use_words = config_bool(m, "use_words", c.use_words);
  c.use_pos = config_bool(m, "use_pos", c.use_pos);
  c.use_chars = config_bool(m, "use_chars", c.use_chars);
  c.d_w = config_size(m, "d_w", c.d_w);
  c.d_pos = config_size(m, "d_pos", c.d_pos);
  c.char_dim = config_size(m, "char_dim", c.char_dim);
  c.char_filters = config_size(m, "char_filters", c.char_filters);
  c.char_window = config_size(m, "char_window", c.char_window);
  c.d_h = config_size(m, "d_h", c.d_h);
  c.layers = config_size(m, "layers", c.layers);
  c.highway = config_bool(m, "highway", c.highway);
  c.lstm_dropout = config_double(m, "lstm_dropout", c.lstm_dropout);
  c.recurrent_dropout = config_double(m, "recurrent_dropout", c.recurrent_dropout);
  c.word_dropout = config_double(m, "word_dropout", c.word_dropout);
  c.schedule.epochs = config_int(m, "epochs", c.schedule.epochs);
  c.schedule.batch_size = config_int(m, "batch_size", c.schedule.batch_size);
  c.schedule.adam.learning_rate = config_double(m, "learning_rate", c.schedule.adam.learning_rate);
  c.schedule.adam.beta1 = config_double(m, "beta1", c.schedule.adam.beta1);
  c.schedule.adam.beta2 = config_double(m, "beta2", c.schedule.adam.beta2);
  c.schedule.adam.epsilon = config_double(m, "epsilon", c.schedule.adam.epsilon);
  c.schedule.adam.clip_norm = config_double(m, "clip_norm", c.schedule.adam.clip_norm);
  c.seed = std::stoull(config_string(m, "seed", std::to_string(c.seed)));
  c.pos_column = config_string(m, "pos_column", c.pos_column);
  c.labels = config_string(m, "labels", c.labels);
  c.pretrained = config_string(m, "pretrained", c.pretrained);
  return c;
}

TaggerInput tagger_input(const ConllSentence& s, const TaggerConfig& cfg) {
  TaggerInput x;
  const bool predicted = cfg.pos_column == "predicted";
  for (const auto& t : s.tokens) {
    x.words.push_back(t.form);
    x.pos.push_back(predicted ? t.ppos : t.pos);
  }
  return x;
}

// ---- model -------------------------------------------------------------------

TaggerModel::TaggerModel(const TaggerConfig& cfg, const std::vector<TaggerInput>& corpus,
                         const std::vector<std::vector<std::string>>& labels,
                         const EmbeddingTable* pretrained)
    : cfg_(cfg) {
  cfg_.validate();
  std::map<std::string, long> wc, pc, cc;
  std::set<std::string> label_set;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    for (const auto& w : corpus[i].words) {
      ++wc[w];
      for (const auto& ch : utf8_chars(w)) ++cc[ch];
    }
    for (const auto& p : corpus[i].pos) ++pc[p];
  }
  for (const auto& seq : labels) label_set.insert(seq.begin(), seq.end());
  words_ = Vocabulary::build(wc);
  pos_ = Vocabulary::build(pc);
  chars_ = Vocabulary::build(cc);
  labels_ = LabelSet(std::vector<std::string>(label_set.begin(), label_set.end()));
  word_freq_ = wc;
  Rng init(cfg_.seed);
  build_layers(true, &init, pretrained);
}

TaggerModel::TaggerModel(const Checkpoint& c) : cfg_(TaggerConfig::from_map(c.config)) {
  if (c.kind() != "tagger") throw FormatError("checkpoint kind '" + c.kind() + "' is not a tagger");
  words_ = Vocabulary::from_entries(c.vocab("words").entries);
  pos_ = Vocabulary::from_entries(c.vocab("pos").entries);
  chars_ = Vocabulary::from_entries(c.vocab("chars").entries);
  std::vector<std::string> labels;
  for (const auto& e : c.vocab("labels").entries) labels.push_back(e.first);
  labels_ = LabelSet(std::move(labels));
  for (const auto& [w, n] : words_.entries()) word_freq_[w] = n;
  import_parameters(store_, c.params);
  build_layers(false, nullptr, nullptr);
}

void TaggerModel::build_layers(bool fresh, Rng* rng, const EmbeddingTable* pretrained) {
  std::size_t in = 0;
  if (cfg_.use_words) {
    word_emb_ = fresh ? EmbeddingBank::create(store_, "word", words_, cfg_.d_w, *rng, pretrained)
                      : EmbeddingBank::attach(store_, "word", words_);
    in += word_emb_.dim();
  }
  if (cfg_.use_pos) {
    pos_emb_ = fresh ? EmbeddingBank::create(store_, "pos", pos_, cfg_.d_pos, *rng)
                     : EmbeddingBank::attach(store_, "pos", pos_);
    in += pos_emb_.dim();
  }
  if (cfg_.use_chars) {
    char_cnn_ = fresh ? CharCnn::create(store_, "charcnn", chars_, cfg_.char_dim, cfg_.char_filters,
                                        cfg_.char_window, *rng)
                      : CharCnn::attach(store_, "charcnn", chars_, cfg_.char_window);
    in += char_cnn_.output_dim();
  }
  BiLstmConfig lc;
  lc.input_dim = in;
  lc.hidden_dim = cfg_.d_h;
  lc.layers = cfg_.layers;
  lc.highway = cfg_.highway;
  lc.recurrent_dropout = cfg_.recurrent_dropout;
  lc.layer_dropout = cfg_.lstm_dropout;
  if (fresh) {
    lstm_ = BiLstmStack::create(store_, "bilstm", lc, *rng);
    output_ = Linear::create(store_, "output", lstm_.output_dim(), labels_.size(), *rng);
  } else {
    lstm_ = BiLstmStack::attach(store_, "bilstm", lc);
    output_.weight = &store_.get("output.w");
    output_.bias = &store_.get("output.b");
    if (output_.weight->value().cols() != labels_.size()) {
      throw FormatError("tagger output layer does not match its label set");
    }
  }
}

Var TaggerModel::logits(Graph& g, const TaggerInput& x, bool train, Rng& rng,
                        const std::vector<bool>* dropped) const {
  const std::size_t T = x.words.size();
  if (T == 0) throw ValidationError("cannot tag an empty sentence");
  if (x.pos.size() != T) throw ValidationError("POS sequence does not align with words");
  std::vector<Var> feats;
  if (cfg_.use_words) {
    auto ids = word_emb_.indices(x.words);
    if (dropped) {
      for (std::size_t i = 0; i < T; ++i) {
        if ((*dropped)[i]) ids[i] = Vocabulary::kUnk;
      }
    }
    feats.push_back(word_emb_.lookup(g, ids));
  }
  if (cfg_.use_pos) feats.push_back(pos_emb_.lookup(g, pos_emb_.indices(x.pos)));
  if (cfg_.use_chars) feats.push_back(char_cnn_.encode_words(g, x.words));
  Var input = feats.size() == 1 ? feats[0] : concat(feats, 1);
  Var h = bilstm_forward(lstm_, g, input, T, 1, train, rng);
  return output_.apply(g, h);
}

Var TaggerModel::loss(Graph& g, const TaggerInput& x, const std::vector<std::string>& gold,
                      bool train, Rng& rng) const {
  if (gold.size() != x.words.size()) {
    throw ValidationError("label sequence of length " + std::to_string(gold.size()) +
                          " for a sentence of " + std::to_string(x.words.size()) + " tokens");
  }
  std::vector<bool> dropped = word_dropout_mask(x.words, word_freq_, cfg_.word_dropout, rng, train);
  std::vector<int> targets;
  for (const auto& l : gold) targets.push_back(labels_.index(l));
  return cross_entropy(logits(g, x, train, rng, &dropped), targets);
}

TagResult TaggerModel::tag(const TaggerInput& x) const {
  Graph g;
  Rng unused(0);
  const Tensor& z = logits(g, x, false, unused).value();
  TagResult r;
  for (std::size_t t = 0; t < z.rows(); ++t) {
    double mx = -INFINITY;
    std::size_t best = 0;
    for (std::size_t c = 0; c < z.cols(); ++c) {
      if (z(t, c) > mx) {
        mx = z(t, c);
        best = c;
      }
    }
    std::vector<double> p(z.cols());
    double total = 0.0;
    for (std::size_t c = 0; c < z.cols(); ++c) total += p[c] = std::exp(z(t, c) - mx);
    for (double& v : p) v /= total;
    r.labels.push_back(labels_.label(static_cast<int>(best)));
    r.distributions.push_back(std::move(p));
  }
  return r;
}

std::vector<TagResult> TaggerModel::tag_all(const std::vector<TaggerInput>& xs,
                                            unsigned threads) const {
  std::vector<TagResult> out(xs.size());
  if (threads <= 1 || xs.size() < 2) {
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] = tag(xs[i]);
    return out;
  }
  std::vector<std::future<void>> jobs;
  for (unsigned w = 0; w < threads; ++w) {
    jobs.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t i = w; i < xs.size(); i += threads) out[i] = tag(xs[i]);
    }));
  }
  for (auto& j : jobs) j.get();
  return out;
}

Checkpoint TaggerModel::to_checkpoint(const ConfigMap& metadata) const {
  Checkpoint c;
  c.config = cfg_.to_map();
  c.config["kind"] = "tagger";
  c.metadata = metadata;
  c.vocabs.push_back({"words", words_.entries()});
  c.vocabs.push_back({"pos", pos_.entries()});
  c.vocabs.push_back({"chars", chars_.entries()});
  NamedVocab labels{"labels", {}};
  for (const auto& l : labels_.labels()) labels.entries.emplace_back(l, 0);
  c.vocabs.push_back(std::move(labels));
  c.params = export_parameters(store_);
  return c;
}

std::unique_ptr<TaggerModel> train_tagger(const std::vector<TaggerInput>& corpus,
                                          const std::vector<std::vector<std::string>>& labels,
                                          const TaggerConfig& cfg, const EmbeddingTable* pretrained,
                                          const std::function<void(const EpochStats&)>& on_epoch,
                                          std::vector<EpochStats>* history) {
  if (corpus.empty()) throw ValidationError("training corpus is empty");
  if (labels.size() != corpus.size()) {
    throw ValidationError(std::to_string(labels.size()) + " label sequences for " +
                          std::to_string(corpus.size()) + " sentences");
  }
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (labels[i].size() != corpus[i].words.size()) {
      throw ValidationError("sentence " + std::to_string(i + 1) + ": " + std::to_string(labels[i].size()) +
                            " labels for " + std::to_string(corpus[i].words.size()) + " tokens");
    }
  }
  auto model = std::make_unique<TaggerModel>(cfg, corpus, labels, pretrained);
  Rng rng(train_stream(cfg.seed));
  auto h = run_training(
      model->parameters(), corpus.size(), cfg.schedule, rng,
      [&](std::size_t i) { return corpus[i].words.size(); },
      [&](std::size_t i, double scale) {
        Graph g;
        Var l = model->loss(g, corpus[i], labels[i], true, rng);
        g.backward(scale == 1.0 ? l : stagsrl::scale(l, scale));
        return l.value().item();
      },
      on_epoch);
  if (history) *history = std::move(h);
  round_to_float32(model->parameters());
  return model;
}

std::unique_ptr<TaggerModel> load_tagger(const Checkpoint& c) { return std::make_unique<TaggerModel>(c); }

}  // namespace stagsrl
