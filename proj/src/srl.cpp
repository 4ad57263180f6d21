#include "stagsrl/srl.hpp"

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

std::uint64_t train_stream(std::uint64_t seed) { return seed * 0x9E3779B97F4A7C15ULL + 2; }

std::string lemma_of(const ConllToken& t, bool predicted) {
  const std::string& l = predicted ? t.plemma : t.lemma;
  return l.empty() ? t.form : l;
}

// Rows b, B+b, 2B+b, ... of a time-major batch.
Var sequence_rows(Var batch, std::size_t steps, std::size_t width, std::size_t b) {
  if (width == 1) return batch;
  std::vector<int> idx(steps);
  for (std::size_t t = 0; t < steps; ++t) idx[t] = static_cast<int>(t * width + b);
  return embedding_lookup(batch, idx);
}

}  // namespace

void SrlConfig::validate() const {
  if (d_w == 0 || d_pos == 0 || d_l == 0 || d_s == 0 || d_ind == 0 || d_h == 0 || d_r == 0 ||
      d_lo == 0 || layers == 0) {
    throw ValidationError("SRL dimensions must be positive");
  }
  if (!(lstm_dropout >= 0.0 && lstm_dropout < 1.0) ||
      !(recurrent_dropout >= 0.0 && recurrent_dropout < 1.0)) {
    throw ValidationError("SRL dropout rates must lie in [0, 1)");
  }
  if (word_dropout < 0.0) throw ValidationError("word_dropout must be non-negative");
  if (schedule.batch_size < 1 || schedule.epochs < 0) throw ValidationError("bad batch size or epoch count");
  for (const auto* col : {&pos_column, &lemma_column}) {
    if (*col != "predicted" && *col != "gold") {
      throw ValidationError("column choice must be 'predicted' or 'gold', got '" + *col + "'");
    }
  }
}

ConfigMap SrlConfig::to_map() const {
  return {
      {"d_w", std::to_string(d_w)},
      {"d_pos", std::to_string(d_pos)},
      {"d_l", std::to_string(d_l)},
      {"d_s", std::to_string(d_s)},
      {"d_ind", std::to_string(d_ind)},
      {"d_h", std::to_string(d_h)},
      {"d_r", std::to_string(d_r)},
      {"d_lo", std::to_string(d_lo)},
      {"layers", std::to_string(layers)},
      {"highway", bool_text(highway)},
      {"use_pos", bool_text(use_pos)},
      {"use_lemma", bool_text(use_lemma)},
      {"use_stags", bool_text(use_stags)},
      {"word_dropout", format_double(word_dropout)},
      {"lstm_dropout", format_double(lstm_dropout)},
      {"recurrent_dropout", format_double(recurrent_dropout)},
      {"epochs", std::to_string(schedule.epochs)},
      {"batch_size", std::to_string(schedule.batch_size)},
      {"learning_rate", format_double(schedule.adam.learning_rate)},
      {"beta1", format_double(schedule.adam.beta1)},
      {"beta2", format_double(schedule.adam.beta2)},
      {"epsilon", format_double(schedule.adam.epsilon)},
      {"clip_norm", format_double(schedule.adam.clip_norm)},
      {"seed", std::to_string(seed)},
      {"stag_model", stag_model},
      {"pos_column", pos_column},
      {"lemma_column", lemma_column},
      {"pretrained", pretrained},
  };
}

SrlConfig SrlConfig::from_map(const ConfigMap& m) {
  SrlConfig c;
  c.d_w = config_size(m, "d_w", c.d_w);
  c.d_pos = config_size(m, "d_pos", c.d_pos);
  c.d_l = config_size(m, "d_l", c.d_l);
  c.d_s = config_size(m, "d_s", c.d_s);
  c.d_ind = config_size(m, "d_ind", c.d_ind);
  c.d_h = config_size(m, "d_h", c.d_h);
  c.d_r = config_size(m, "d_r", c.d_r);
  c.d_lo = config_size(m, "d_lo", c.d_lo);
  c.layers = config_size(m, "layers", c.layers);
  c.highway = config_bool(m, "highway", c.highway);
  c.use_pos = config_bool(m, "use_pos", c.use_pos);
  c.use_lemma = config_bool(m, "use_lemma", c.use_lemma);
  c.use_stags = config_bool(m, "use_stags", c.use_stags);
  c.word_dropout = config_double(m, "word_dropout", c.word_dropout);
  c.lstm_dropout = config_double(m, "lstm_dropout", c.lstm_dropout);
  c.recurrent_dropout = config_double(m, "recurrent_dropout", c.recurrent_dropout);
  c.schedule.epochs = config_int(m, "epochs", c.schedule.epochs);
  c.schedule.batch_size = config_int(m, "batch_size", c.schedule.batch_size);
  c.schedule.adam.learning_rate = config_double(m, "learning_rate", c.schedule.adam.learning_rate);
  c.schedule.adam.beta1 = config_double(m, "beta1", c.schedule.adam.beta1);
  c.schedule.adam.beta2 = config_double(m, "beta2", c.schedule.adam.beta2);
  c.schedule.adam.epsilon = config_double(m, "epsilon", c.schedule.adam.epsilon);
  c.schedule.adam.clip_norm = config_double(m, "clip_norm", c.schedule.adam.clip_norm);
  c.seed = std::stoull(config_string(m, "seed", std::to_string(c.seed)));
  c.stag_model = config_string(m, "stag_model", c.stag_model);
  c.pos_column = config_string(m, "pos_column", c.pos_column);
  c.lemma_column = config_string(m, "lemma_column", c.lemma_column);
  c.pretrained = config_string(m, "pretrained", c.pretrained);
  return c;
}

// ---- data plumbing ------------------------------------------------------------

SrlInput srl_input(const ConllSentence& s, const SrlConfig& cfg,
                   const std::vector<std::string>* stags) {
  SrlInput x;
  const bool ppos = cfg.pos_column == "predicted";
  const bool plemma = cfg.lemma_column == "predicted";
  for (const auto& t : s.tokens) {
    x.words.push_back(t.form);
    x.pos.push_back(ppos ? t.ppos : t.pos);
    x.lemmas.push_back(lemma_of(t, plemma));
  }
  if (stags) {
    if (stags->size() != s.size()) {
      throw ValidationError("supertag sequence of length " + std::to_string(stags->size()) +
                            " for a sentence of " + std::to_string(s.size()) + " tokens");
    }
    x.stags = *stags;
  }
  x.predicates = s.predicates;
  for (int p : s.predicates) {
    x.predicate_lemmas.push_back(lemma_of(s.token(p), plemma));
    x.predicate_senses.push_back(s.token(p).pred.value_or(""));
  }
  return x;
}

std::vector<SrlFrame> frames_from_sentence(const ConllSentence& s, bool predicted_lemma) {
  std::vector<SrlFrame> frames;
  for (std::size_t k = 0; k < s.predicates.size(); ++k) {
    const ConllToken& p = s.token(s.predicates[k]);
    SrlFrame f;
    f.predicate = s.predicates[k];
    f.lemma = lemma_of(p, predicted_lemma);
    f.sense = p.pred.value_or("");
    for (const auto& t : s.tokens) {
      if (k < t.apreds.size() && t.apreds[k]) f.arguments[t.id] = *t.apreds[k];
    }
    frames.push_back(std::move(f));
  }
  return frames;
}

void apply_frames(ConllSentence& s, const std::vector<SrlFrame>& frames) {
  std::map<int, const SrlFrame*> by_pred;
  for (const auto& f : frames) {
    if (f.predicate < 1 || static_cast<std::size_t>(f.predicate) > s.size()) {
      throw ValidationError("frame predicate " + std::to_string(f.predicate) + " outside sentence");
    }
    by_pred[f.predicate] = &f;
  }
  for (auto& t : s.tokens) {
    auto it = by_pred.find(t.id);
    t.fillpred = it != by_pred.end();
    if (t.fillpred) {
      const SrlFrame& f = *it->second;
      t.pred = f.sense.empty() ? std::optional<std::string>(f.lemma) : f.sense;
    } else {
      t.pred.reset();
    }
    t.apreds.assign(by_pred.size(), std::nullopt);
  }
  std::size_t k = 0;
  for (const auto& [p, f] : by_pred) {
    for (const auto& [arg, role] : f->arguments) {
      if (arg < 1 || static_cast<std::size_t>(arg) > s.size()) {
        throw ValidationError("argument " + std::to_string(arg) + " outside sentence");
      }
      s.tokens[static_cast<std::size_t>(arg - 1)].apreds[k] = role;
    }
    ++k;
  }
  refresh_predicates(s);
}

void apply_external_predicates(std::vector<ConllSentence>& sentences,
                               const std::vector<ConllSentence>& external) {
  if (sentences.size() != external.size()) {
    throw ValidationError("predicate file has " + std::to_string(external.size()) +
                          " sentences, input has " + std::to_string(sentences.size()));
  }
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    auto& s = sentences[i];
    const auto& e = external[i];
    if (s.size() != e.size()) {
      throw ValidationError("sentence " + std::to_string(i + 1) + ": predicate file has " +
                            std::to_string(e.size()) + " tokens, input has " + std::to_string(s.size()));
    }
    std::size_t count = 0;
    for (const auto& t : e.tokens) count += t.fillpred ? 1 : 0;
    for (std::size_t k = 0; k < s.size(); ++k) {
      s.tokens[k].fillpred = e.tokens[k].fillpred;
      s.tokens[k].pred = e.tokens[k].pred;
      s.tokens[k].apreds.assign(count, std::nullopt);
    }
    refresh_predicates(s);
  }
}

// ---- model ---------------------------------------------------------------------

SrlModel::SrlModel(const SrlConfig& cfg, const std::vector<SrlInput>& corpus,
                   const std::vector<std::vector<SrlFrame>>& frames,
                   const EmbeddingTable* pretrained)
    : cfg_(cfg) {
  cfg_.validate();
  std::map<std::string, long> wc, pc, lc, sc, plc;
  std::set<std::string> roles;
  for (const auto& x : corpus) {
    for (const auto& w : x.words) ++wc[w];
    for (const auto& p : x.pos) ++pc[p];
    for (const auto& l : x.lemmas) ++lc[l];
    for (const auto& s : x.stags) ++sc[s];
    for (const auto& l : x.predicate_lemmas) ++plc[l];
  }
  for (const auto& fs : frames) {
    for (const auto& f : fs) {
      for (const auto& [arg, role] : f.arguments) roles.insert(role);
    }
  }
  roles.erase(kNullRole);
  std::vector<std::string> role_list{kNullRole};
  role_list.insert(role_list.end(), roles.begin(), roles.end());
  roles_ = LabelSet(std::move(role_list));
  words_ = Vocabulary::build(wc);
  pos_ = Vocabulary::build(pc);
  lemmas_ = Vocabulary::build(lc);
  stags_ = Vocabulary::build(sc);
  pred_lemmas_ = Vocabulary::build(plc);
  word_freq_ = wc;
  pred_lemma_freq_ = plc;
  Rng init(cfg_.seed);
  build_layers(true, &init, pretrained);
}

SrlModel::SrlModel(const Checkpoint& c) : cfg_(SrlConfig::from_map(c.config)) {
  if (c.kind() != "srl") throw FormatError("checkpoint kind '" + c.kind() + "' is not an SRL model");
  words_ = Vocabulary::from_entries(c.vocab("words").entries);
  pos_ = Vocabulary::from_entries(c.vocab("pos").entries);
  lemmas_ = Vocabulary::from_entries(c.vocab("lemmas").entries);
  stags_ = Vocabulary::from_entries(c.vocab("stags").entries);
  pred_lemmas_ = Vocabulary::from_entries(c.vocab("pred_lemmas").entries);
  std::vector<std::string> roles;
  for (const auto& e : c.vocab("roles").entries) roles.push_back(e.first);
  roles_ = LabelSet(std::move(roles));
  for (const auto& [w, n] : words_.entries()) word_freq_[w] = n;
  for (const auto& [w, n] : pred_lemmas_.entries()) pred_lemma_freq_[w] = n;
  import_parameters(store_, c.params);
  build_layers(false, nullptr, nullptr);
}

void SrlModel::build_layers(bool fresh, Rng* rng, const EmbeddingTable* pretrained) {
  auto bank = [&](const std::string& name, const Vocabulary& v, std::size_t dim,
                  const EmbeddingTable* pre) {
    return fresh ? EmbeddingBank::create(store_, name, v, dim, *rng, pre)
                 : EmbeddingBank::attach(store_, name, v);
  };
  word_emb_ = bank("word", words_, cfg_.d_w, pretrained);
  if (cfg_.use_pos) pos_emb_ = bank("pos", pos_, cfg_.d_pos, nullptr);
  if (cfg_.use_lemma) lemma_emb_ = bank("lemma", lemmas_, cfg_.d_l, nullptr);
  if (cfg_.use_stags) stag_emb_ = bank("stag", stags_, cfg_.d_s, nullptr);
  if (fresh) {
    indicator_ = &store_.add("indicator", uniform_tensor(2, cfg_.d_ind, 0.01, *rng));
  } else {
    indicator_ = &store_.get("indicator");
  }

  BiLstmConfig lc;
  lc.input_dim = input_dim();
  lc.hidden_dim = cfg_.d_h;
  lc.layers = cfg_.layers;
  lc.highway = cfg_.highway;
  lc.recurrent_dropout = cfg_.recurrent_dropout;
  lc.layer_dropout = cfg_.lstm_dropout;
  lstm_ = fresh ? BiLstmStack::create(store_, "bilstm", lc, *rng)
                : BiLstmStack::attach(store_, "bilstm", lc);

  const std::size_t R = roles_.size(), W = 4 * cfg_.d_h;
  lemma_out_ = bank("lemma_out", pred_lemmas_, cfg_.d_lo, nullptr);
  if (fresh) {
    role_emb_ = &store_.add("role", glorot_uniform(R, cfg_.d_r, *rng));
    u_r_ = &store_.add("scorer.u_r", glorot_uniform(cfg_.d_r, W, *rng));
    u_l_ = &store_.add("scorer.u_l", glorot_uniform(cfg_.d_lo, W, *rng));
    b_lr_ = &store_.add("scorer.b", Tensor(1, W, 0.0));
  } else {
    role_emb_ = &store_.get("role");
    u_r_ = &store_.get("scorer.u_r");
    u_l_ = &store_.get("scorer.u_l");
    b_lr_ = &store_.get("scorer.b");
    if (role_emb_->value().rows() != R || u_r_->value().cols() != W) {
      throw FormatError("SRL scorer parameters do not match the role set");
    }
  }
}

std::size_t SrlModel::input_dim() const {
  std::size_t d = word_emb_.dim() + cfg_.d_ind;
  if (cfg_.use_pos) d += pos_emb_.dim();
  if (cfg_.use_lemma) d += lemma_emb_.dim();
  if (cfg_.use_stags) d += stag_emb_.dim();
  return d;
}

Var SrlModel::encode(Graph& g, const SrlInput& x, const std::vector<std::size_t>& which, bool train,
                     Rng& rng, const std::vector<bool>* dropped) const {
  const std::size_t T = x.words.size();
  const std::size_t B = which.size();
  if (T == 0 || B == 0) throw ValidationError("encode: empty sentence or no predicates");
  if (x.pos.size() != T || x.lemmas.size() != T) {
    throw ValidationError("SRL input columns do not align");
  }
  if (cfg_.use_stags && x.stags.size() != T) {
    throw ValidationError("supertag sequence of length " + std::to_string(x.stags.size()) +
                          " for a sentence of " + std::to_string(T) + " tokens");
  }
  auto drop = [&](std::vector<int> ids) {
    if (dropped) {
      for (std::size_t t = 0; t < T; ++t) {
        if ((*dropped)[t]) ids[t] = Vocabulary::kUnk;
      }
    }
    return ids;
  };
  std::vector<Var> feats{word_emb_.lookup(g, drop(word_emb_.indices(x.words)))};
  if (cfg_.use_pos) feats.push_back(pos_emb_.lookup(g, pos_emb_.indices(x.pos)));
  if (cfg_.use_lemma) feats.push_back(lemma_emb_.lookup(g, drop(lemma_emb_.indices(x.lemmas))));
  if (cfg_.use_stags) feats.push_back(stag_emb_.lookup(g, stag_emb_.indices(x.stags)));
  Var base = feats.size() == 1 ? feats[0] : concat(feats, 1);

  std::vector<int> rep, ind;
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t b = 0; b < B; ++b) {
      const std::size_t k = which[b];
      if (k >= x.predicates.size()) throw ValidationError("predicate position out of range");
      const int p = x.predicates[k];
      if (p < 1 || static_cast<std::size_t>(p) > T) {
        throw ValidationError("predicate index " + std::to_string(p) + " outside sentence");
      }
      rep.push_back(static_cast<int>(t));
      ind.push_back(static_cast<int>(t) + 1 == p ? 1 : 0);
    }
  }
  Var tokens = B == 1 ? base : embedding_lookup(base, rep);
  Var input = concat({tokens, embedding_lookup(g.param(*indicator_), ind)}, 1);
  return bilstm_forward(lstm_, g, input, T, B, train, rng);
}

Var SrlModel::encode_for_predicate(Graph& g, const SrlInput& x, int predicate, bool train,
                                   Rng& rng) const {
  auto it = std::find(x.predicates.begin(), x.predicates.end(), predicate);
  if (it == x.predicates.end()) {
    throw ValidationError("token " + std::to_string(predicate) + " is not a predicate");
  }
  return encode(g, x, {static_cast<std::size_t>(it - x.predicates.begin())}, train, rng);
}

Var SrlModel::score_roles(Graph& g, Var encoding, int predicate, const std::string& lemma,
                          bool drop_lemma) const {
  const std::size_t H2 = 2 * cfg_.d_h;
  if (encoding.cols() != H2) {
    throw ShapeError("score_roles: encoding " + encoding.value().shape_string() +
                     " is not 2*d_h wide");
  }
  if (predicate < 1 || static_cast<std::size_t>(predicate) > encoding.rows()) {
    throw ValidationError("score_roles: predicate " + std::to_string(predicate) + " outside sentence");
  }
  const int lemma_id = drop_lemma ? Vocabulary::kUnk : pred_lemmas_.index(lemma);
  Var u = lemma_out_.lookup(g, {lemma_id});
  Var lemma_term = add(matmul(u, g.param(*u_l_)), g.param(*b_lr_));
  Var w = relu(add(matmul(g.param(*role_emb_), g.param(*u_r_)), lemma_term));
  Var w_tok = slice(w, 1, 0, H2);
  Var w_pred = slice(w, 1, H2, 2 * H2);
  const auto p = static_cast<std::size_t>(predicate);
  Var e_p = slice(encoding, 0, p - 1, p);
  return add(matmul(encoding, transpose(w_tok)), matmul(e_p, transpose(w_pred)));
}

Var SrlModel::loss(Graph& g, const SrlInput& x, const std::vector<SrlFrame>& gold, bool train,
                   Rng& rng) const {
  if (gold.size() != x.predicates.size()) {
    throw ValidationError(std::to_string(gold.size()) + " frames for " +
                          std::to_string(x.predicates.size()) + " predicates");
  }
  if (x.predicates.empty()) return g.constant(Tensor::scalar(0.0));
  const std::size_t T = x.words.size();
  const std::size_t B = x.predicates.size();
  std::vector<bool> dropped = word_dropout_mask(x.words, word_freq_, cfg_.word_dropout, rng, train);
  std::vector<std::size_t> all(B);
  for (std::size_t b = 0; b < B; ++b) all[b] = b;
  Var enc = encode(g, x, all, train, rng, &dropped);
  Var total{};
  for (std::size_t b = 0; b < B; ++b) {
    if (gold[b].predicate != x.predicates[b]) {
      throw ValidationError("frame for token " + std::to_string(gold[b].predicate) +
                            " does not match predicate " + std::to_string(x.predicates[b]));
    }
    std::vector<int> targets(T, 0);
    for (const auto& [arg, role] : gold[b].arguments) {
      if (arg < 1 || static_cast<std::size_t>(arg) > T) {
        throw ValidationError("argument index " + std::to_string(arg) + " outside sentence");
      }
      targets[static_cast<std::size_t>(arg - 1)] = roles_.index(role);
    }
    const auto it = pred_lemma_freq_.find(x.predicate_lemmas[b]);
    const long freq = it == pred_lemma_freq_.end() ? 0 : it->second;
    const bool drop_lemma =
        train && cfg_.word_dropout > 0.0 && rng.uniform() < word_dropout_probability(cfg_.word_dropout, freq);
    Var logits = score_roles(g, sequence_rows(enc, T, B, b), x.predicates[b], x.predicate_lemmas[b],
                             drop_lemma);
    Var l = cross_entropy(logits, targets);
    total = b == 0 ? l : add(total, l);
  }
  return total;
}

std::vector<Tensor> SrlModel::role_distributions(const SrlInput& x) const {
  std::vector<Tensor> out;
  if (x.predicates.empty()) return out;
  if (x.predicate_lemmas.size() != x.predicates.size()) {
    throw ValidationError("predicate lemmas do not align with predicates");
  }
  Graph g;
  Rng unused(0);
  const std::size_t T = x.words.size();
  const std::size_t B = x.predicates.size();
  std::vector<std::size_t> all(B);
  for (std::size_t b = 0; b < B; ++b) all[b] = b;
  Var enc = encode(g, x, all, false, unused);
  for (std::size_t b = 0; b < B; ++b) {
    Var logits = score_roles(g, sequence_rows(enc, T, B, b), x.predicates[b], x.predicate_lemmas[b]);
    out.push_back(softmax(logits, 1).value());
  }
  return out;
}

std::vector<SrlFrame> SrlModel::label(const SrlInput& x) const {
  std::vector<SrlFrame> frames;
  const auto dists = role_distributions(x);
  for (std::size_t b = 0; b < dists.size(); ++b) {
    const Tensor& d = dists[b];
    SrlFrame f;
    f.predicate = x.predicates[b];
    f.lemma = x.predicate_lemmas[b];
    if (b < x.predicate_senses.size()) f.sense = x.predicate_senses[b];
    for (std::size_t t = 0; t < d.rows(); ++t) {
      std::size_t best = 0;
      for (std::size_t r = 1; r < d.cols(); ++r) {
        if (d(t, r) > d(t, best)) best = r;
      }
      if (best != 0) f.arguments[static_cast<int>(t) + 1] = roles_.label(static_cast<int>(best));
    }
    frames.push_back(std::move(f));
  }
  return frames;
}

std::vector<std::vector<SrlFrame>> SrlModel::label_all(const std::vector<SrlInput>& xs,
                                                       unsigned threads) const {
  std::vector<std::vector<SrlFrame>> out(xs.size());
  if (threads <= 1 || xs.size() < 2) {
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] = label(xs[i]);
    return out;
  }
  std::vector<std::future<void>> jobs;
  for (unsigned w = 0; w < threads; ++w) {
    jobs.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t i = w; i < xs.size(); i += threads) out[i] = label(xs[i]);
    }));
  }
  for (auto& j : jobs) j.get();
  return out;
}

Checkpoint SrlModel::to_checkpoint(const ConfigMap& metadata) const {
  Checkpoint c;
  c.config = cfg_.to_map();
  c.config["kind"] = "srl";
  c.metadata = metadata;
  c.vocabs.push_back({"words", words_.entries()});
  c.vocabs.push_back({"pos", pos_.entries()});
  c.vocabs.push_back({"lemmas", lemmas_.entries()});
  c.vocabs.push_back({"stags", stags_.entries()});
  c.vocabs.push_back({"pred_lemmas", pred_lemmas_.entries()});
  NamedVocab roles{"roles", {}};
  for (const auto& r : roles_.labels()) roles.entries.emplace_back(r, 0);
  c.vocabs.push_back(std::move(roles));
  c.params = export_parameters(store_);
  return c;
}

std::unique_ptr<SrlModel> train_srl(const std::vector<SrlInput>& corpus,
                                    const std::vector<std::vector<SrlFrame>>& frames,
                                    const SrlConfig& cfg, const EmbeddingTable* pretrained,
                                    const std::function<void(const EpochStats&)>& on_epoch,
                                    std::vector<EpochStats>* history) {
  if (corpus.empty()) throw ValidationError("training corpus is empty");
  if (frames.size() != corpus.size()) {
    throw ValidationError(std::to_string(frames.size()) + " frame lists for " +
                          std::to_string(corpus.size()) + " sentences");
  }
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (frames[i].size() != corpus[i].predicates.size()) {
      throw ValidationError("sentence " + std::to_string(i + 1) + ": " + std::to_string(frames[i].size()) +
                            " frames for " + std::to_string(corpus[i].predicates.size()) + " predicates");
    }
    if (cfg.use_stags && corpus[i].stags.size() != corpus[i].words.size()) {
      throw ValidationError("sentence " + std::to_string(i + 1) + " lacks aligned supertags");
    }
  }
  auto model = std::make_unique<SrlModel>(cfg, corpus, frames, pretrained);
  Rng rng(train_stream(cfg.seed));
  auto h = run_training(
      model->parameters(), corpus.size(), cfg.schedule, rng,
      [&](std::size_t i) { return corpus[i].words.size() * corpus[i].predicates.size(); },
      [&](std::size_t i, double scale) {
        if (corpus[i].predicates.empty()) return 0.0;
        Graph g;
        Var l = model->loss(g, corpus[i], frames[i], true, rng);
        g.backward(stagsrl::scale(l, scale));
        return l.value().item();
      },
      on_epoch);
  if (history) *history = std::move(h);
  round_to_float32(model->parameters());
  return model;
}

std::unique_ptr<SrlModel> load_srl(const Checkpoint& c) { return std::make_unique<SrlModel>(c); }

}  // namespace stagsrl
