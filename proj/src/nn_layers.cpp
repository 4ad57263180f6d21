#include "stagsrl/nn_layers.hpp"

#include <algorithm>
#include <cmath>

#include "stagsrl/error.hpp"

namespace stagsrl {

// ---- vocabularies ------------------------------------------------------------

Vocabulary Vocabulary::build(const std::map<std::string, long>& counts, long min_count) {
  std::vector<std::pair<std::string, long>> entries;
  for (const auto& [sym, n] : counts) {
    if (n >= min_count) entries.emplace_back(sym, n);
  }
  return from_entries(entries);
}

Vocabulary Vocabulary::from_entries(const std::vector<std::pair<std::string, long>>& entries) {
  Vocabulary v;
  for (const auto& [sym, n] : entries) {
    if (v.index_.count(sym)) throw ValidationError("duplicate vocabulary symbol '" + sym + "'");
    v.index_[sym] = static_cast<int>(v.symbols_.size()) + 2;
    v.symbols_.push_back(sym);
    v.counts_.push_back(n);
  }
  return v;
}

int Vocabulary::index(const std::string& symbol) const {
  auto it = index_.find(symbol);
  return it == index_.end() ? kUnk : it->second;
}

long Vocabulary::count(const std::string& symbol) const {
  auto it = index_.find(symbol);
  return it == index_.end() ? 0 : counts_[static_cast<std::size_t>(it->second - 2)];
}

std::vector<std::pair<std::string, long>> Vocabulary::entries() const {
  std::vector<std::pair<std::string, long>> out;
  for (std::size_t i = 0; i < symbols_.size(); ++i) out.emplace_back(symbols_[i], counts_[i]);
  return out;
}

LabelSet::LabelSet(std::vector<std::string> labels) : labels_(std::move(labels)) {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (!index_.emplace(labels_[i], static_cast<int>(i)).second) {
      throw ValidationError("duplicate label '" + labels_[i] + "'");
    }
  }
}

int LabelSet::index(const std::string& label) const {
  auto it = index_.find(label);
  return it == index_.end() ? -1 : it->second;
}

std::vector<std::string> utf8_chars(const std::string& s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const auto c = static_cast<unsigned char>(s[i]);
    std::size_t len = 1;
    if (c >= 0xF0 && c < 0xF8) {
      len = 4;
    } else if (c >= 0xE0) {
      len = c < 0xF0 ? 3 : 1;
    } else if (c >= 0xC0) {
      len = 2;
    }
    if (i + len > s.size()) len = 1;
    for (std::size_t k = 1; k < len; ++k) {
      if ((static_cast<unsigned char>(s[i + k]) & 0xC0) != 0x80) {
        len = 1;
        break;
      }
    }
    out.push_back(s.substr(i, len));
    i += len;
  }
  return out;
}

// ---- initialisation ------------------------------------------------------------

Tensor uniform_tensor(std::size_t rows, std::size_t cols, double bound, Rng& rng) {
  Tensor t(rows, cols);
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = rng.uniform(-bound, bound);
  return t;
}

Tensor glorot_uniform(std::size_t rows, std::size_t cols, Rng& rng) {
  return uniform_tensor(rows, cols, std::sqrt(6.0 / static_cast<double>(rows + cols)), rng);
}

// ---- linear ----------------------------------------------------------------------

Linear Linear::create(ParameterStore& store, const std::string& name, std::size_t in,
                      std::size_t out, Rng& rng, bool with_bias) {
  Linear l;
  l.weight = &store.add(name + ".w", glorot_uniform(in, out, rng));
  if (with_bias) l.bias = &store.add(name + ".b", Tensor(1, out, 0.0));
  return l;
}

Var Linear::apply(Graph& g, Var x) const {
  Var y = matmul(x, g.param(*weight));
  return bias ? add(y, g.param(*bias)) : y;
}

// ---- embeddings ------------------------------------------------------------------

EmbeddingBank EmbeddingBank::create(ParameterStore& store, const std::string& name,
                                    Vocabulary vocab, std::size_t dim, Rng& rng,
                                    const EmbeddingTable* pretrained) {
  EmbeddingBank e;
  e.table_ = &store.add(name + ".table", uniform_tensor(vocab.size(), dim, 0.01, rng));
  if (pretrained) {
    Tensor t(vocab.size(), pretrained->dim(), 0.0);
    auto fill_row = [&](std::size_t r, const std::vector<double>& v) {
      std::copy(v.begin(), v.end(), t.row_ptr(r));
    };
    fill_row(Vocabulary::kUnk, pretrained->unk_vector());
    for (std::size_t i = 0; i < vocab.symbols().size(); ++i) {
      fill_row(i + 2, pretrained->lookup(vocab.symbols()[i]));
    }
    e.frozen_ = &store.add(name + ".frozen", std::move(t), false);
  }
  e.vocab_ = std::move(vocab);
  return e;
}

EmbeddingBank EmbeddingBank::attach(ParameterStore& store, const std::string& name,
                                    Vocabulary vocab) {
  EmbeddingBank e;
  e.table_ = &store.get(name + ".table");
  if (store.contains(name + ".frozen")) {
    e.frozen_ = &store.get(name + ".frozen");
    e.frozen_->set_trainable(false);
  }
  if (e.table_->value().rows() != vocab.size()) {
    throw FormatError("embedding '" + name + "' has " + std::to_string(e.table_->value().rows()) +
                      " rows for a vocabulary of " + std::to_string(vocab.size()));
  }
  e.vocab_ = std::move(vocab);
  return e;
}

std::size_t EmbeddingBank::dim() const {
  return table_->value().cols() + (frozen_ ? frozen_->value().cols() : 0);
}

std::vector<int> EmbeddingBank::indices(const std::vector<std::string>& symbols) const {
  std::vector<int> ids;
  ids.reserve(symbols.size());
  for (const auto& s : symbols) ids.push_back(vocab_.index(s));
  return ids;
}

Var EmbeddingBank::lookup(Graph& g, const std::vector<int>& ids) const {
  Var v = embedding_lookup(g.param(*table_), ids);
  if (!frozen_) return v;
  return concat({v, embedding_lookup(g.param(*frozen_), ids)}, 1);
}

// ---- char CNN ----------------------------------------------------------------------

CharCnn CharCnn::create(ParameterStore& store, const std::string& name, Vocabulary chars,
                        std::size_t char_dim, std::size_t filters, std::size_t window, Rng& rng) {
  if (window % 2 == 0) throw ValidationError("char CNN window must be odd");
  CharCnn c;
  c.embedding_ = &store.add(name + ".chars", uniform_tensor(chars.size(), char_dim, 0.01, rng));
  c.filters_ = &store.add(name + ".filters", glorot_uniform(window * char_dim, filters, rng));
  c.bias_ = &store.add(name + ".bias", Tensor(1, filters, 0.0));
  c.chars_ = std::move(chars);
  c.window_ = window;
  return c;
}

CharCnn CharCnn::attach(ParameterStore& store, const std::string& name, Vocabulary chars,
                        std::size_t window) {
  CharCnn c;
  c.embedding_ = &store.get(name + ".chars");
  c.filters_ = &store.get(name + ".filters");
  c.bias_ = &store.get(name + ".bias");
  c.chars_ = std::move(chars);
  c.window_ = window;
  if (c.filters_->value().rows() != window * c.embedding_->value().cols()) {
    throw FormatError("char CNN '" + name + "' filter shape does not match window " +
                      std::to_string(window));
  }
  return c;
}

std::size_t CharCnn::output_dim() const { return filters_->value().cols(); }

Var CharCnn::encode(Graph& g, const std::string& word) const {
  const std::size_t pad = (window_ - 1) / 2;
  std::vector<int> ids(pad, Vocabulary::kPad);
  for (const auto& ch : utf8_chars(word)) ids.push_back(chars_.index(ch));
  ids.insert(ids.end(), pad, Vocabulary::kPad);
  while (ids.size() < window_) ids.push_back(Vocabulary::kPad);
  Var x = embedding_lookup(g.param(*embedding_), ids);
  Var conv = add(conv1d(x, g.param(*filters_), window_), g.param(*bias_));
  return max_over_axis(relu(conv), 0);
}

Var CharCnn::encode_words(Graph& g, const std::vector<std::string>& words) const {
  std::vector<Var> rows;
  rows.reserve(words.size());
  for (const auto& w : words) rows.push_back(encode(g, w));
  return concat(rows, 0);
}

Var char_cnn_encode(const CharCnn& cnn, Graph& g, const std::string& word) {
  return cnn.encode(g, word);
}

// ---- LSTM --------------------------------------------------------------------------

LstmLayer LstmLayer::create(ParameterStore& store, const std::string& name, std::size_t in,
                            std::size_t hidden, bool highway, Rng& rng) {
  LstmLayer l;
  l.input_dim = in;
  l.hidden_dim = hidden;
  l.highway = highway;
  l.w_x = &store.add(name + ".w_x", glorot_uniform(in, 4 * hidden, rng));
  l.w_h = &store.add(name + ".w_h", glorot_uniform(hidden, 4 * hidden, rng));
  Tensor bias(1, 4 * hidden, 0.0);
  for (std::size_t j = hidden; j < 2 * hidden; ++j) bias[j] = 1.0;
  l.b = &store.add(name + ".b", std::move(bias));
  if (highway) {
    l.w_tx = &store.add(name + ".w_tx", glorot_uniform(in, hidden, rng));
    l.w_th = &store.add(name + ".w_th", glorot_uniform(hidden, hidden, rng));
    l.b_t = &store.add(name + ".b_t", Tensor(1, hidden, 0.0));
    l.w_p = &store.add(name + ".w_p", glorot_uniform(in, hidden, rng));
  }
  return l;
}

LstmLayer LstmLayer::attach(ParameterStore& store, const std::string& name, bool highway) {
  LstmLayer l;
  l.w_x = &store.get(name + ".w_x");
  l.w_h = &store.get(name + ".w_h");
  l.b = &store.get(name + ".b");
  l.input_dim = l.w_x->value().rows();
  l.hidden_dim = l.w_h->value().rows();
  l.highway = highway;
  if (highway) {
    l.w_tx = &store.get(name + ".w_tx");
    l.w_th = &store.get(name + ".w_th");
    l.b_t = &store.get(name + ".b_t");
    l.w_p = &store.get(name + ".w_p");
  }
  return l;
}

LstmStep lstm_step(const LstmLayer& layer, Graph& g, Var x_t, Var h_prev, Var c_prev,
                   const Tensor* mask, const Var* x_proj) {
  const std::size_t H = layer.hidden_dim;
  Var xp = x_proj ? *x_proj : matmul(x_t, g.param(*layer.w_x));
  Var h_in = mask ? mul(h_prev, g.constant(*mask)) : h_prev;
  Var z = add(add(xp, matmul(h_in, g.param(*layer.w_h))), g.param(*layer.b));
  Var i = sigmoid(slice(z, 1, 0, H));
  Var f = sigmoid(slice(z, 1, H, 2 * H));
  Var o = sigmoid(slice(z, 1, 2 * H, 3 * H));
  Var cand = tanh(slice(z, 1, 3 * H, 4 * H));
  Var c = add(mul(f, c_prev), mul(i, cand));
  Var h = mul(o, tanh(c));
  if (!layer.highway) return {h, c, h};
  Var gate = sigmoid(add(add(matmul(x_t, g.param(*layer.w_tx)), matmul(h, g.param(*layer.w_th))),
                         g.param(*layer.b_t)));
  Var proj = matmul(x_t, g.param(*layer.w_p));
  Var out = add(proj, mul(gate, sub(h, proj)));
  return {h, c, out};
}

BiLstmStack BiLstmStack::create(ParameterStore& store, const std::string& name,
                                const BiLstmConfig& cfg, Rng& rng) {
  if (cfg.layers < 1) throw ValidationError("BiLSTM needs at least one layer");
  BiLstmStack s;
  s.config = cfg;
  std::size_t in = cfg.input_dim;
  for (std::size_t l = 0; l < cfg.layers; ++l) {
    const std::string base = name + ".l" + std::to_string(l);
    s.forward.push_back(LstmLayer::create(store, base + ".fwd", in, cfg.hidden_dim, cfg.highway, rng));
    s.backward.push_back(LstmLayer::create(store, base + ".bwd", in, cfg.hidden_dim, cfg.highway, rng));
    in = 2 * cfg.hidden_dim;
  }
  return s;
}

BiLstmStack BiLstmStack::attach(ParameterStore& store, const std::string& name,
                                const BiLstmConfig& cfg) {
  BiLstmStack s;
  s.config = cfg;
  for (std::size_t l = 0; l < cfg.layers; ++l) {
    const std::string base = name + ".l" + std::to_string(l);
    s.forward.push_back(LstmLayer::attach(store, base + ".fwd", cfg.highway));
    s.backward.push_back(LstmLayer::attach(store, base + ".bwd", cfg.highway));
  }
  return s;
}

namespace {

Var run_direction(const LstmLayer& layer, Graph& g, Var x, std::size_t steps, std::size_t batch,
                  bool reverse, double recurrent_dropout, bool train, Rng& rng) {
  const std::size_t H = layer.hidden_dim;
  Var xw = matmul(x, g.param(*layer.w_x));
  Var h = g.constant(Tensor(batch, H, 0.0));
  Var c = h;
  std::optional<Tensor> mask;
  if (train && recurrent_dropout > 0.0) {
    mask = Tensor(batch, H);
    const double keep = 1.0 / (1.0 - recurrent_dropout);
    for (std::size_t i = 0; i < mask->size(); ++i) {
      (*mask)[i] = rng.uniform() < recurrent_dropout ? 0.0 : keep;
    }
  }
  std::vector<Var> outs(steps);
  for (std::size_t k = 0; k < steps; ++k) {
    const std::size_t t = reverse ? steps - 1 - k : k;
    Var x_t = steps == 1 ? x : slice(x, 0, t * batch, (t + 1) * batch);
    Var xp = steps == 1 ? xw : slice(xw, 0, t * batch, (t + 1) * batch);
    LstmStep s = lstm_step(layer, g, x_t, h, c, mask ? &*mask : nullptr, &xp);
    h = s.h;
    c = s.c;
    outs[t] = s.out;
  }
  return steps == 1 ? outs[0] : concat(outs, 0);
}

}  // namespace

Var bilstm_forward(const BiLstmStack& stack, Graph& g, Var input, std::size_t steps,
                   std::size_t batch, bool train, Rng& rng) {
  if (steps == 0 || batch == 0) throw ShapeError("bilstm_forward: empty sequence");
  if (input.rows() != steps * batch || input.cols() != stack.config.input_dim) {
    throw ShapeError("bilstm_forward: input " + input.value().shape_string() + " for " +
                     std::to_string(steps) + " steps x " + std::to_string(batch) +
                     " sequences of dim " + std::to_string(stack.config.input_dim));
  }
  Var x = input;
  for (std::size_t l = 0; l < stack.forward.size(); ++l) {
    if (l > 0) x = dropout(x, stack.config.layer_dropout, rng, train);
    Var f = run_direction(stack.forward[l], g, x, steps, batch, false,
                          stack.config.recurrent_dropout, train, rng);
    Var b = run_direction(stack.backward[l], g, x, steps, batch, true,
                          stack.config.recurrent_dropout, train, rng);
    x = concat({f, b}, 1);
  }
  return x;
}

}  // namespace stagsrl
