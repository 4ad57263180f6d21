#pragma once

// Neural building blocks on top of the autodiff graph.
//
// Sequences are laid out time-major: a batch of B equal-length sequences of T
// steps is a (T*B x d) matrix whose row t*B + b is step t of sequence b.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stagsrl/autodiff.hpp"
#include "stagsrl/conll_io.hpp"
#include "stagsrl/rng.hpp"

namespace stagsrl {

// Symbol table with two reserved rows: 0 = PAD, 1 = UNK. Symbols are stored
// in the order given, starting at row 2, together with their training counts.
class Vocabulary {
 public:
  static constexpr int kPad = 0;
  static constexpr int kUnk = 1;

  Vocabulary() = default;
  // Symbols sorted lexicographically; counts below min_count are dropped.
  static Vocabulary build(const std::map<std::string, long>& counts, long min_count = 1);
  static Vocabulary from_entries(const std::vector<std::pair<std::string, long>>& entries);

  // kUnk when absent.
  int index(const std::string& symbol) const;
  bool contains(const std::string& symbol) const { return index_.count(symbol) != 0; }
  long count(const std::string& symbol) const;
  // Rows including PAD and UNK.
  std::size_t size() const { return symbols_.size() + 2; }
  const std::vector<std::string>& symbols() const { return symbols_; }
  std::vector<std::pair<std::string, long>> entries() const;

 private:
  std::vector<std::string> symbols_;
  std::vector<long> counts_;
  std::map<std::string, int> index_;
};

// Closed output label set (no reserved rows).
class LabelSet {
 public:
  LabelSet() = default;
  explicit LabelSet(std::vector<std::string> labels);

  // -1 when absent.
  int index(const std::string& label) const;
  const std::string& label(int i) const { return labels_.at(static_cast<std::size_t>(i)); }
  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }

 private:
  std::vector<std::string> labels_;
  std::map<std::string, int> index_;
};

// Codepoints of a UTF-8 string, each as its own byte sequence. Invalid bytes
// become single-byte pieces.
std::vector<std::string> utf8_chars(const std::string& s);

// uniform(-a, a) with a = sqrt(6 / (rows + cols)).
Tensor glorot_uniform(std::size_t rows, std::size_t cols, Rng& rng);
Tensor uniform_tensor(std::size_t rows, std::size_t cols, double bound, Rng& rng);

struct Linear {
  Parameter* weight = nullptr;  // in x out
  Parameter* bias = nullptr;    // 1 x out, may be null

  static Linear create(ParameterStore& store, const std::string& name, std::size_t in,
                       std::size_t out, Rng& rng, bool with_bias = true);
  Var apply(Graph& g, Var x) const;
};

class EmbeddingBank {
 public:
  EmbeddingBank() = default;
  // Rows uniform in +-0.01. With `pretrained`, a frozen table holding the
  // pretrained vectors of every vocabulary word (unk vector for others) is
  // concatenated to the trainable one.
  static EmbeddingBank create(ParameterStore& store, const std::string& name, Vocabulary vocab,
                              std::size_t dim, Rng& rng, const EmbeddingTable* pretrained = nullptr);
  // Rebinds to parameters already present in `store` (checkpoint loading).
  static EmbeddingBank attach(ParameterStore& store, const std::string& name, Vocabulary vocab);

  std::size_t dim() const;
  const Vocabulary& vocab() const { return vocab_; }
  std::vector<int> indices(const std::vector<std::string>& symbols) const;
  // One row per id; ids must be < vocab().size().
  Var lookup(Graph& g, const std::vector<int>& ids) const;

 private:
  Vocabulary vocab_;
  Parameter* table_ = nullptr;
  Parameter* frozen_ = nullptr;
};

// Character CNN word encoder: embed codepoints, pad with (window-1)/2 PAD
// characters on each side (more on the right if still shorter than the
// window), convolve, add bias, relu, max-pool over positions.
class CharCnn {
 public:
  CharCnn() = default;
  static CharCnn create(ParameterStore& store, const std::string& name, Vocabulary chars,
                        std::size_t char_dim, std::size_t filters, std::size_t window, Rng& rng);
  static CharCnn attach(ParameterStore& store, const std::string& name, Vocabulary chars,
                        std::size_t window);

  std::size_t output_dim() const;
  const Vocabulary& vocab() const { return chars_; }
  Var encode(Graph& g, const std::string& word) const;  // 1 x filters
  Var encode_words(Graph& g, const std::vector<std::string>& words) const;  // T x filters

 private:
  Vocabulary chars_;
  Parameter* embedding_ = nullptr;
  Parameter* filters_ = nullptr;
  Parameter* bias_ = nullptr;
  std::size_t window_ = 3;
};

Var char_cnn_encode(const CharCnn& cnn, Graph& g, const std::string& word);

// One direction of an LSTM layer. Gate blocks in the 4H-wide matrices are
// ordered i, f, o, g.
struct LstmLayer {
  std::size_t input_dim = 0;
  std::size_t hidden_dim = 0;
  bool highway = false;
  Parameter* w_x = nullptr;  // in x 4H
  Parameter* w_h = nullptr;  // H x 4H
  Parameter* b = nullptr;    // 1 x 4H, forget block initialised to 1
  // Highway: out = proj + t * (h - proj), proj = x W_p,
  //          t = sigmoid(x W_tx + h W_th + b_t)
  Parameter* w_tx = nullptr;
  Parameter* w_th = nullptr;
  Parameter* b_t = nullptr;
  Parameter* w_p = nullptr;

  static LstmLayer create(ParameterStore& store, const std::string& name, std::size_t in,
                          std::size_t hidden, bool highway, Rng& rng);
  static LstmLayer attach(ParameterStore& store, const std::string& name, bool highway);
};

struct LstmStep {
  Var h;    // recurrent state
  Var c;    // cell
  Var out;  // layer output (h, or the highway mix)
};

// x_t: B x in, h_prev / c_prev: B x H. `mask` (B x H, already scaled) is
// applied to h_prev on the recurrent path when non-null. `x_proj` optionally
// supplies a precomputed x_t W_x.
LstmStep lstm_step(const LstmLayer& layer, Graph& g, Var x_t, Var h_prev, Var c_prev,
                   const Tensor* mask = nullptr, const Var* x_proj = nullptr);

struct BiLstmConfig {
  std::size_t input_dim = 0;
  std::size_t hidden_dim = 0;
  std::size_t layers = 1;
  bool highway = false;
  double recurrent_dropout = 0.0;  // variational, one mask per sequence
  double layer_dropout = 0.0;      // between layers, per token
};

struct BiLstmStack {
  BiLstmConfig config;
  std::vector<LstmLayer> forward;
  std::vector<LstmLayer> backward;

  static BiLstmStack create(ParameterStore& store, const std::string& name, const BiLstmConfig& cfg,
                            Rng& rng);
  static BiLstmStack attach(ParameterStore& store, const std::string& name, const BiLstmConfig& cfg);
  std::size_t output_dim() const { return 2 * config.hidden_dim; }
};

// input: (T*B x input_dim), output: (T*B x 2H), forward half first.
Var bilstm_forward(const BiLstmStack& stack, Graph& g, Var input, std::size_t steps,
                   std::size_t batch, bool train, Rng& rng);

}  // namespace stagsrl
