#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "stagsrl/autodiff.hpp"
#include "stagsrl/rng.hpp"

namespace stagsrl {

struct AdamConfig {
  double learning_rate = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double clip_norm = 5.0;  // global gradient norm; <= 0 disables clipping
};

struct AdamState {
  std::vector<Tensor> m;
  std::vector<Tensor> v;
  long t = 0;
};

// Bias-corrected Adam on every parameter in `params` using its accumulated
// gradient. The state is sized on first use and must keep seeing the same
// parameter list.
void adam_step(const std::vector<Parameter*>& params, AdamState& state, const AdamConfig& cfg);

// Scales all gradients so their joint L2 norm is at most max_norm. Returns the
// norm before scaling.
double clip_global_norm(const std::vector<Parameter*>& params, double max_norm);

// Replacement probability of a word seen `freq` times: alpha / (alpha + freq).
double word_dropout_probability(double alpha, long freq);

// true = replace with UNK. Unknown words count as frequency 0.
std::vector<bool> word_dropout_mask(const std::vector<std::string>& tokens,
                                    const std::map<std::string, long>& frequencies, double alpha,
                                    Rng& rng, bool train = true);

std::vector<std::string> word_dropout(const std::vector<std::string>& tokens,
                                      const std::map<std::string, long>& frequencies, double alpha,
                                      Rng& rng, const std::string& unk_symbol, bool train = true);

}  // namespace stagsrl

namespace stagsrl {

struct TrainSchedule {
  int epochs = 50;
  int batch_size = 100;
  AdamConfig adam;
};

struct EpochStats {
  int epoch = 0;          // 1-based
  double mean_loss = 0.0;  // per loss cell
};

// Minibatch loop shared by the taggers and the role labeler. Each epoch
// shuffles the item order with `rng`; a batch's loss is the sum of its items'
// losses divided by the batch's total cell count, which equals a padded and
// masked batch. `cells(i)` is the number of loss terms of item i;
// `accumulate(i, scale)` must build item i's loss, call backward on
// loss * scale, and return the unscaled loss.
std::vector<EpochStats> run_training(
    ParameterStore& store, std::size_t items, const TrainSchedule& schedule, Rng& rng,
    const std::function<std::size_t(std::size_t)>& cells,
    const std::function<double(std::size_t, double)>& accumulate,
    const std::function<void(const EpochStats&)>& on_epoch = {});

}  // namespace stagsrl
