#include "stagsrl/optim.hpp"

#include <algorithm>
#include <cmath>

#include "stagsrl/error.hpp"

namespace stagsrl {

void adam_step(const std::vector<Parameter*>& params, AdamState& state, const AdamConfig& cfg) {
  if (state.m.empty()) {
    for (const Parameter* p : params) {
      state.m.emplace_back(p->value().rows(), p->value().cols(), 0.0);
      state.v.emplace_back(p->value().rows(), p->value().cols(), 0.0);
    }
  }
  if (state.m.size() != params.size()) {
    throw ShapeError("adam_step: state holds " + std::to_string(state.m.size()) +
                     " moments for " + std::to_string(params.size()) + " parameters");
  }
  ++state.t;
  const double c1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.t));
  const double c2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.t));
  for (std::size_t k = 0; k < params.size(); ++k) {
    Tensor& w = params[k]->value();
    const Tensor& g = params[k]->grad();
    Tensor& m = state.m[k];
    Tensor& v = state.v[k];
    if (!m.same_shape(w)) throw ShapeError("adam_step: moment shape mismatch for " + params[k]->name());
    for (std::size_t i = 0; i < w.size(); ++i) {
      m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g[i];
      v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * g[i] * g[i];
      const double mhat = m[i] / c1;
      const double vhat = v[i] / c2;
      w[i] -= cfg.learning_rate * mhat / (std::sqrt(vhat) + cfg.epsilon);
    }
  }
}

double clip_global_norm(const std::vector<Parameter*>& params, double max_norm) {
  double sq = 0.0;
  for (const Parameter* p : params) {
    for (double x : p->grad().values()) sq += x * x;
  }
  const double norm = std::sqrt(sq);
  if (max_norm > 0.0 && norm > max_norm) {
    const double s = max_norm / norm;
    for (Parameter* p : params) {
      for (double& x : p->grad().values()) x *= s;
    }
  }
  return norm;
}

double word_dropout_probability(double alpha, long freq) {
  if (alpha <= 0.0) return 0.0;
  return alpha / (alpha + static_cast<double>(freq));
}

std::vector<bool> word_dropout_mask(const std::vector<std::string>& tokens,
                                    const std::map<std::string, long>& frequencies, double alpha,
                                    Rng& rng, bool train) {
  std::vector<bool> out(tokens.size(), false);
  if (!train || alpha <= 0.0) return out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    auto it = frequencies.find(tokens[i]);
    const long f = it == frequencies.end() ? 0 : it->second;
    out[i] = rng.uniform() < word_dropout_probability(alpha, f);
  }
  return out;
}

std::vector<std::string> word_dropout(const std::vector<std::string>& tokens,
                                      const std::map<std::string, long>& frequencies, double alpha,
                                      Rng& rng, const std::string& unk_symbol, bool train) {
  auto mask = word_dropout_mask(tokens, frequencies, alpha, rng, train);
  std::vector<std::string> out = tokens;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (mask[i]) out[i] = unk_symbol;
  }
  return out;
}

}  // namespace stagsrl

namespace stagsrl {

std::vector<EpochStats> run_training(
    ParameterStore& store, std::size_t items, const TrainSchedule& schedule, Rng& rng,
    const std::function<std::size_t(std::size_t)>& cells,
    const std::function<double(std::size_t, double)>& accumulate,
    const std::function<void(const EpochStats&)>& on_epoch) {
  if (items == 0) throw ValidationError("training corpus is empty");
  if (schedule.batch_size < 1) throw ValidationError("batch size must be positive");
  const auto params = store.trainable();
  AdamState state;
  std::vector<std::size_t> order(items);
  for (std::size_t i = 0; i < items; ++i) order[i] = i;
  const auto batch = static_cast<std::size_t>(schedule.batch_size);
  std::vector<EpochStats> history;
  for (int epoch = 1; epoch <= schedule.epochs; ++epoch) {
    rng.shuffle(order);
    double loss_sum = 0.0;
    std::size_t cell_sum = 0;
    for (std::size_t start = 0; start < items; start += batch) {
      const std::size_t end = std::min(items, start + batch);
      std::size_t n = 0;
      for (std::size_t k = start; k < end; ++k) n += cells(order[k]);
      if (n == 0) continue;
      store.zero_grad();
      const double scale = 1.0 / static_cast<double>(n);
      for (std::size_t k = start; k < end; ++k) loss_sum += accumulate(order[k], scale);
      cell_sum += n;
      clip_global_norm(params, schedule.adam.clip_norm);
      adam_step(params, state, schedule.adam);
    }
    EpochStats s{epoch, cell_sum ? loss_sum / static_cast<double>(cell_sum) : 0.0};
    history.push_back(s);
    if (on_epoch) on_epoch(s);
  }
  return history;
}

}  // namespace stagsrl
