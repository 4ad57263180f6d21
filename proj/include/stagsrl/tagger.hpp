#pragma once

// Generic BiLSTM sequence labeler, used as the POS tagger and the supertagger.
// Per-token input is the concatenation of the enabled features (word
// embedding, POS embedding, character CNN); a k-layer BiLSTM feeds a linear
// layer and a softmax over the closed label set.

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "stagsrl/checkpoint.hpp"
#include "stagsrl/conll_io.hpp"
#include "stagsrl/nn_layers.hpp"
#include "stagsrl/optim.hpp"

namespace stagsrl {

struct TaggerConfig {
  bool use_words = true;
  bool use_pos = true;
  bool use_chars = true;
  std::size_t d_w = 100;
  std::size_t d_pos = 100;
  std::size_t char_dim = 30;
  std::size_t char_filters = 30;
  std::size_t char_window = 3;
  std::size_t d_h = 512;
  std::size_t layers = 4;
  bool highway = true;
  double lstm_dropout = 0.5;
  double recurrent_dropout = 0.5;
  double word_dropout = 0.0;
  TrainSchedule schedule;
  std::uint64_t seed = 1;
  // Which CoNLL columns feed the model: "predicted" or "gold".
  std::string pos_column = "predicted";
  // Free-form description of the label set, e.g. "stag:1" or "pos".
  std::string labels = "stag:1";
  std::string pretrained;  // embedding file path, informational

  void validate() const;
  ConfigMap to_map() const;
  // Missing keys keep defaults; unknown keys are ignored.
  static TaggerConfig from_map(const ConfigMap& m);
};

struct TaggerInput {
  std::vector<std::string> words;
  std::vector<std::string> pos;
};

TaggerInput tagger_input(const ConllSentence& s, const TaggerConfig& cfg);

struct TagResult {
  std::vector<std::string> labels;
  std::vector<std::vector<double>> distributions;  // per token, label-set order
};

class TaggerModel {
 public:
  // Fresh model with vocabularies built from the corpus.
  TaggerModel(const TaggerConfig& cfg, const std::vector<TaggerInput>& corpus,
              const std::vector<std::vector<std::string>>& labels,
              const EmbeddingTable* pretrained = nullptr);
  explicit TaggerModel(const Checkpoint& c);
  TaggerModel(const TaggerModel&) = delete;
  TaggerModel& operator=(const TaggerModel&) = delete;

  const TaggerConfig& config() const { return cfg_; }
  const LabelSet& label_set() const { return labels_; }
  ParameterStore& parameters() { return store_; }
  const ParameterStore& parameters() const { return store_; }

  // T x |labels|. `dropped` marks words replaced by UNK (word dropout).
  Var logits(Graph& g, const TaggerInput& x, bool train, Rng& rng,
             const std::vector<bool>* dropped = nullptr) const;
  // Summed token cross-entropy; labels outside the label set are skipped.
  Var loss(Graph& g, const TaggerInput& x, const std::vector<std::string>& gold, bool train,
           Rng& rng) const;
  // Argmax per token, ties to the lowest label index.
  TagResult tag(const TaggerInput& x) const;
  std::vector<TagResult> tag_all(const std::vector<TaggerInput>& xs, unsigned threads = 1) const;

  Checkpoint to_checkpoint(const ConfigMap& metadata = {}) const;

 private:
  void build_layers(bool fresh, Rng* rng, const EmbeddingTable* pretrained);

  TaggerConfig cfg_;
  ParameterStore store_;
  Vocabulary words_, pos_, chars_;
  LabelSet labels_;
  std::map<std::string, long> word_freq_;
  EmbeddingBank word_emb_, pos_emb_;
  CharCnn char_cnn_;
  BiLstmStack lstm_;
  Linear output_;
};

// Trains with Adam over shuffled minibatches; parameters are rounded to
// float32 at the end so the in-memory model equals its checkpoint.
// Throws ValidationError on an empty corpus or misaligned labels.
std::unique_ptr<TaggerModel> train_tagger(const std::vector<TaggerInput>& corpus,
                                          const std::vector<std::vector<std::string>>& labels,
                                          const TaggerConfig& cfg,
                                          const EmbeddingTable* pretrained = nullptr,
                                          const std::function<void(const EpochStats&)>& on_epoch = {},
                                          std::vector<EpochStats>* history = nullptr);

// Rejects checkpoints of another kind with FormatError.
std::unique_ptr<TaggerModel> load_tagger(const Checkpoint& c);

}  // namespace stagsrl
