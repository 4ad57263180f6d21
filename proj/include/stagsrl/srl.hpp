#pragma once

// Supertag-augmented semantic role labeler.
//
// Each predicate gets its own pass over the sentence: the per-token input is
// word, POS, lemma and supertag embeddings plus a predicate-indicator
// embedding (row 1 at the predicate, row 0 elsewhere), encoded by a k-layer
// highway BiLSTM. All predicates of a sentence are run as one batch; batch
// rows never interact, so a predicate's result does not depend on the others.
//
// Role scorer, for predicate p with lemma l and encodings e_t (2H wide):
//   W      = relu(V U_r + u_l U_l + b)          R x 4H
//   s(t,r) = [e_t ; e_p] . W[r]
// where V holds the d_r-dimensional role embeddings and u_l is the
// d'_l-dimensional output representation of l. Role 0 is NULL (not an
// argument).

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "stagsrl/checkpoint.hpp"
#include "stagsrl/conll_io.hpp"
#include "stagsrl/nn_layers.hpp"
#include "stagsrl/optim.hpp"

namespace stagsrl {

inline const std::string kNullRole = "NULL";

struct SrlConfig {
  std::size_t d_w = 100;
  std::size_t d_pos = 16;
  std::size_t d_l = 100;
  std::size_t d_s = 50;
  std::size_t d_ind = 16;
  std::size_t d_h = 512;
  std::size_t d_r = 128;
  std::size_t d_lo = 128;  // output lemma representation
  std::size_t layers = 4;
  bool highway = true;
  bool use_pos = true;
  bool use_lemma = true;
  bool use_stags = true;
  double word_dropout = 0.25;
  double lstm_dropout = 0.5;
  double recurrent_dropout = 0.0;
  TrainSchedule schedule;
  std::uint64_t seed = 1;
  std::string stag_model = "1";  // informational
  std::string pos_column = "predicted";
  std::string lemma_column = "predicted";
  std::string pretrained;

  void validate() const;
  ConfigMap to_map() const;
  static SrlConfig from_map(const ConfigMap& m);
};

struct SrlFrame {
  int predicate = 0;  // 1-based token index
  std::string lemma;
  std::string sense;  // PRED column, may be empty
  std::map<int, std::string> arguments;  // token index -> role

  bool operator==(const SrlFrame&) const = default;
};

struct SrlInput {
  std::vector<std::string> words;
  std::vector<std::string> pos;
  std::vector<std::string> lemmas;
  std::vector<std::string> stags;  // empty when the supertag channel is off
  std::vector<int> predicates;     // 1-based
  std::vector<std::string> predicate_lemmas;
  std::vector<std::string> predicate_senses;
};

// Throws ValidationError when `stags` is given but misaligned.
SrlInput srl_input(const ConllSentence& s, const SrlConfig& cfg,
                   const std::vector<std::string>* stags = nullptr);

// Gold frames from the PRED/APRED columns.
std::vector<SrlFrame> frames_from_sentence(const ConllSentence& s, bool predicted_lemma = true);

// Writes frames back into FILLPRED/PRED/APRED. Frame predicates become the
// sentence's predicates.
void apply_frames(ConllSentence& s, const std::vector<SrlFrame>& frames);

// Copies FILLPRED and PRED from `external` (other columns are ignored) and
// clears the argument columns. Throws ValidationError if sentence or token
// counts differ.
void apply_external_predicates(std::vector<ConllSentence>& sentences,
                               const std::vector<ConllSentence>& external);

class SrlModel {
 public:
  SrlModel(const SrlConfig& cfg, const std::vector<SrlInput>& corpus,
           const std::vector<std::vector<SrlFrame>>& frames,
           const EmbeddingTable* pretrained = nullptr);
  explicit SrlModel(const Checkpoint& c);
  SrlModel(const SrlModel&) = delete;
  SrlModel& operator=(const SrlModel&) = delete;

  const SrlConfig& config() const { return cfg_; }
  const LabelSet& roles() const { return roles_; }
  ParameterStore& parameters() { return store_; }
  const ParameterStore& parameters() const { return store_; }
  std::size_t input_dim() const;

  // Encodings of the predicates x.predicates[k] for k in `which`, stacked
  // time-major: (T*B x 2H) with B = which.size().
  Var encode(Graph& g, const SrlInput& x, const std::vector<std::size_t>& which, bool train,
             Rng& rng, const std::vector<bool>* dropped = nullptr) const;
  // T x 2H for one predicate (1-based token index).
  Var encode_for_predicate(Graph& g, const SrlInput& x, int predicate, bool train, Rng& rng) const;
  // T x R logits. Unknown lemmas use the UNK row.
  Var score_roles(Graph& g, Var encoding, int predicate, const std::string& lemma,
                  bool drop_lemma = false) const;
  // Summed cross-entropy over all (predicate, token) cells, NULL included.
  Var loss(Graph& g, const SrlInput& x, const std::vector<SrlFrame>& gold, bool train,
           Rng& rng) const;

  // Per predicate: T x R probabilities.
  std::vector<Tensor> role_distributions(const SrlInput& x) const;
  // Argmax per token (ties to the lowest role index); NULL tokens omitted.
  std::vector<SrlFrame> label(const SrlInput& x) const;
  std::vector<std::vector<SrlFrame>> label_all(const std::vector<SrlInput>& xs,
                                               unsigned threads = 1) const;

  Checkpoint to_checkpoint(const ConfigMap& metadata = {}) const;

 private:
  void build_layers(bool fresh, Rng* rng, const EmbeddingTable* pretrained);

  SrlConfig cfg_;
  ParameterStore store_;
  Vocabulary words_, pos_, lemmas_, stags_, pred_lemmas_;
  LabelSet roles_;
  std::map<std::string, long> word_freq_, pred_lemma_freq_;
  EmbeddingBank word_emb_, pos_emb_, lemma_emb_, stag_emb_, lemma_out_;
  Parameter* indicator_ = nullptr;
  Parameter* role_emb_ = nullptr;
  Parameter* u_r_ = nullptr;
  Parameter* u_l_ = nullptr;
  Parameter* b_lr_ = nullptr;
  BiLstmStack lstm_;
};

// `frames[i]` must list one frame per predicate of corpus[i], in order.
std::unique_ptr<SrlModel> train_srl(const std::vector<SrlInput>& corpus,
                                    const std::vector<std::vector<SrlFrame>>& frames,
                                    const SrlConfig& cfg, const EmbeddingTable* pretrained = nullptr,
                                    const std::function<void(const EpochStats&)>& on_epoch = {},
                                    std::vector<EpochStats>* history = nullptr);

std::unique_ptr<SrlModel> load_srl(const Checkpoint& c);

}  // namespace stagsrl
