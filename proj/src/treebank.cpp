#include "stagsrl/treebank.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "stagsrl/error.hpp"
#include "stagsrl/rng.hpp"

namespace stagsrl {

DepTree::DepTree(std::vector<int> heads, std::vector<std::string> relations,
                 std::vector<std::string> pos)
    : heads_(std::move(heads)), relations_(std::move(relations)), pos_(std::move(pos)) {
  const int n = size();
  if (relations_.size() != heads_.size() || pos_.size() != heads_.size()) {
    throw ValidationError("tree arrays have different lengths");
  }
  bool has_root = false;
  for (int i = 1; i <= n; ++i) {
    int h = heads_[static_cast<std::size_t>(i - 1)];
    if (h < 0 || h > n) {
      throw StructureError("token " + std::to_string(i) + ": head " + std::to_string(h) +
                           " out of range");
    }
    if (h == i) throw StructureError("token " + std::to_string(i) + ": attached to itself");
    if (h == 0) has_root = true;
  }
  if (n > 0 && !has_root) throw StructureError("no token attaches to the root");
  // 0 = unvisited, 1 = on current path, 2 = reaches root.
  std::vector<int> state(static_cast<std::size_t>(n + 1), 0);
  state[0] = 2;
  for (int i = 1; i <= n; ++i) {
    std::vector<int> path;
    int cur = i;
    while (state[static_cast<std::size_t>(cur)] == 0) {
      state[static_cast<std::size_t>(cur)] = 1;
      path.push_back(cur);
      cur = heads_[static_cast<std::size_t>(cur - 1)];
    }
    if (state[static_cast<std::size_t>(cur)] == 1) {
      throw StructureError("token " + std::to_string(cur) + ": part of a cycle");
    }
    for (int p : path) state[static_cast<std::size_t>(p)] = 2;
  }
}

DepTree tree_from_sentence(const ConllSentence& s, bool use_predicted) {
  std::vector<int> heads;
  std::vector<std::string> rels;
  std::vector<std::string> pos;
  heads.reserve(s.size());
  for (const auto& t : s.tokens) {
    if (use_predicted) {
      if (!t.phead) {
        throw ValidationError("token " + std::to_string(t.id) + ": no predicted head");
      }
      heads.push_back(*t.phead);
      rels.push_back(t.pdeprel);
      pos.push_back(t.ppos);
    } else {
      heads.push_back(t.head);
      rels.push_back(t.deprel);
      pos.push_back(t.pos);
    }
  }
  return DepTree(std::move(heads), std::move(rels), std::move(pos));
}

std::vector<Dependent> dependents_of(const DepTree& t, int i) {
  if (i < 1 || i > t.size()) {
    throw std::out_of_range("dependents_of: index " + std::to_string(i) + " outside 1.." +
                            std::to_string(t.size()));
  }
  std::vector<Dependent> out;
  for (int j = 1; j <= t.size(); ++j) {
    if (t.head(j) == i) out.push_back({j, t.relation(j), j < i ? Side::L : Side::R});
  }
  return out;
}

void SynthConfig::validate() const {
  if (sentence_count < 0) throw ValidationError("synth: sentences must be non-negative");
  if (min_length < 1 || max_length < min_length) {
    throw ValidationError("synth: length range must be nonempty and start at 1 or more");
  }
  if (relations.empty()) throw ValidationError("synth: relation alphabet is empty");
  for (const auto& r : relations) {
    if (!(r.weight > 0.0)) throw ValidationError("synth: weight of " + r.relation + " not positive");
  }
  bool has_optional = false;
  for (const auto& r : relations) {
    if (std::find(obligatory.begin(), obligatory.end(), r.relation) == obligatory.end()) {
      has_optional = true;
    }
  }
  if (!has_optional) throw ValidationError("synth: need at least one optional relation");
  if (verb_pos.empty() || other_pos.empty()) throw ValidationError("synth: POS inventories empty");
  if (verb_probability < 0.0 || verb_probability > 1.0) {
    throw ValidationError("synth: verb_probability outside [0,1]");
  }
  if (lexicon_size < 1) throw ValidationError("synth: lexicon_size must be positive");
}

SynthConfig synth_config_from_map(const ConfigMap& m) {
  SynthConfig cfg;
  cfg.sentence_count = config_int(m, "sentences", cfg.sentence_count);
  cfg.min_length = config_int(m, "min_length", cfg.min_length);
  cfg.max_length = config_int(m, "max_length", cfg.max_length);
  if (auto it = m.find("relations"); it != m.end()) {
    cfg.relations.clear();
    for (const auto& item : split_list(it->second)) {
      auto colon = item.find(':');
      RelationWeight rw{item, 1.0};
      if (colon != std::string::npos) {
        rw.relation = item.substr(0, colon);
        ConfigMap tmp{{"weight", item.substr(colon + 1)}};
        rw.weight = config_double(tmp, "weight", 1.0);
      }
      cfg.relations.push_back(rw);
    }
  }
  cfg.obligatory = config_list(m, "obligatory", cfg.obligatory);
  cfg.adjunct_relations = config_list(m, "adjunct_relations", cfg.adjunct_relations);
  cfg.verb_pos = config_list(m, "verb_pos", cfg.verb_pos);
  cfg.other_pos = config_list(m, "other_pos", cfg.other_pos);
  cfg.verb_probability = config_double(m, "verb_probability", cfg.verb_probability);
  cfg.projective = config_bool(m, "projective", cfg.projective);
  cfg.emit_roles = config_bool(m, "emit_roles", cfg.emit_roles);
  cfg.lexicon_size = config_int(m, "lexicon_size", cfg.lexicon_size);
  cfg.seed = static_cast<std::uint64_t>(config_int(m, "seed", static_cast<int>(cfg.seed)));
  cfg.validate();
  return cfg;
}

ConfigMap synth_config_to_map(const SynthConfig& cfg) {
  std::vector<std::string> rels;
  for (const auto& r : cfg.relations) rels.push_back(r.relation + ":" + format_double(r.weight));
  return {{"sentences", std::to_string(cfg.sentence_count)},
          {"min_length", std::to_string(cfg.min_length)},
          {"max_length", std::to_string(cfg.max_length)},
          {"relations", join_list(rels)},
          {"obligatory", join_list(cfg.obligatory)},
          {"adjunct_relations", join_list(cfg.adjunct_relations)},
          {"verb_pos", join_list(cfg.verb_pos)},
          {"other_pos", join_list(cfg.other_pos)},
          {"verb_probability", format_double(cfg.verb_probability)},
          {"projective", cfg.projective ? "true" : "false"},
          {"emit_roles", cfg.emit_roles ? "true" : "false"},
          {"lexicon_size", std::to_string(cfg.lexicon_size)},
          {"seed", std::to_string(cfg.seed)}};
}

namespace {

std::string make_pseudo_word(Rng& rng) {
  static constexpr char kOnsets[] = "bdfgklmnprstvz";
  static constexpr char kVowels[] = "aeiou";
  std::string w;
  int syllables = rng.between(1, 3);
  for (int s = 0; s < syllables; ++s) {
    w += kOnsets[rng.below(sizeof(kOnsets) - 1)];
    w += kVowels[rng.below(sizeof(kVowels) - 1)];
  }
  if (rng.bernoulli(0.4)) w += kOnsets[rng.below(sizeof(kOnsets) - 1)];
  return w;
}

std::string inflect(const std::string& lemma, const std::string& pos) {
  if (pos == "VBD") return lemma + "ed";
  if (pos == "VBZ" || pos == "NNS") return lemma + "s";
  return lemma;
}

class SentenceBuilder {
 public:
  SentenceBuilder(const SynthConfig& cfg, Rng& rng) : cfg_(cfg), rng_(rng) {}

  std::vector<int> projective_heads(const std::vector<bool>& is_verb) {
    const int n = static_cast<int>(is_verb.size());
    std::vector<int> heads(static_cast<std::size_t>(n), 0);
    build_span(1, n, 0, is_verb, heads);
    return heads;
  }

  std::vector<int> free_heads(const std::vector<bool>& is_verb) {
    const int n = static_cast<int>(is_verb.size());
    std::vector<int> order(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i + 1;
    rng_.shuffle(order);
    std::vector<int> heads(static_cast<std::size_t>(n), 0);
    for (std::size_t k = 1; k < order.size(); ++k) {
      std::vector<double> w;
      for (std::size_t j = 0; j < k; ++j) w.push_back(is_verb[static_cast<std::size_t>(order[j] - 1)] ? 3.0 : 1.0);
      heads[static_cast<std::size_t>(order[k] - 1)] = order[rng_.weighted(w)];
    }
    return heads;
  }

 private:
  int pick_head(int l, int r, const std::vector<bool>& is_verb) {
    std::vector<int> verbs;
    for (int i = l; i <= r; ++i) {
      if (is_verb[static_cast<std::size_t>(i - 1)]) verbs.push_back(i);
    }
    if (!verbs.empty() && rng_.bernoulli(0.8)) return verbs[rng_.below(verbs.size())];
    return rng_.between(l, r);
  }

  void build_span(int l, int r, int parent, const std::vector<bool>& is_verb,
                  std::vector<int>& heads) {
    if (l > r) return;
    int h = pick_head(l, r, is_verb);
    heads[static_cast<std::size_t>(h - 1)] = parent;
    split_and_build(l, h - 1, h, is_verb, heads);
    split_and_build(h + 1, r, h, is_verb, heads);
  }

  void split_and_build(int l, int r, int parent, const std::vector<bool>& is_verb,
                       std::vector<int>& heads) {
    int start = l;
    for (int i = l; i <= r; ++i) {
      if (i == r || rng_.bernoulli(0.45)) {
        build_span(start, i, parent, is_verb, heads);
        start = i + 1;
      }
    }
  }

  const SynthConfig& cfg_;
  Rng& rng_;
};

}  // namespace

std::vector<ConllSentence> generate_synthetic(const SynthConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);
  const auto is_obligatory = [&](const std::string& rel) {
    return std::find(cfg.obligatory.begin(), cfg.obligatory.end(), rel) != cfg.obligatory.end();
  };
  const auto is_adjunct = [&](const std::string& rel) {
    return std::find(cfg.adjunct_relations.begin(), cfg.adjunct_relations.end(), rel) !=
           cfg.adjunct_relations.end();
  };

  std::vector<std::string> all_pos = cfg.verb_pos;
  all_pos.insert(all_pos.end(), cfg.other_pos.begin(), cfg.other_pos.end());
  // Verb tenses share one lemma inventory; so do NN/NNS.
  const auto lexicon_key = [](const std::string& pos) -> std::string {
    if (!pos.empty() && pos[0] == 'V') return "V";
    if (pos == "NNS") return "NN";
    return pos;
  };
  std::map<std::string, std::vector<std::string>> lexicon;
  for (const auto& pos : all_pos) {
    auto key = lexicon_key(pos);
    if (lexicon.count(key)) continue;
    std::set<std::string> seen;
    auto& words = lexicon[key];
    while (static_cast<int>(words.size()) < cfg.lexicon_size) {
      auto w = make_pseudo_word(rng);
      if (seen.insert(w).second) words.push_back(w);
      if (seen.size() > 50000) break;
    }
  }

  std::vector<double> all_weights;
  std::vector<double> optional_weights;
  std::vector<std::string> optional_rels;
  for (const auto& r : cfg.relations) {
    all_weights.push_back(r.weight);
    if (!is_obligatory(r.relation)) {
      optional_weights.push_back(r.weight);
      optional_rels.push_back(r.relation);
    }
  }

  SentenceBuilder builder(cfg, rng);
  std::vector<ConllSentence> out;
  out.reserve(static_cast<std::size_t>(cfg.sentence_count));
  for (int s = 0; s < cfg.sentence_count; ++s) {
    const int n = rng.between(cfg.min_length, cfg.max_length);
    std::vector<bool> is_verb(static_cast<std::size_t>(n));
    std::vector<std::string> pos(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      is_verb[static_cast<std::size_t>(i)] = rng.bernoulli(cfg.verb_probability);
      const auto& inventory = is_verb[static_cast<std::size_t>(i)] ? cfg.verb_pos : cfg.other_pos;
      pos[static_cast<std::size_t>(i)] = inventory[rng.below(inventory.size())];
    }
    auto heads = cfg.projective ? builder.projective_heads(is_verb) : builder.free_heads(is_verb);

    ConllSentence sent;
    for (int i = 1; i <= n; ++i) {
      const auto idx = static_cast<std::size_t>(i - 1);
      ConllToken t;
      t.id = i;
      const auto& words = lexicon[lexicon_key(pos[idx])];
      t.lemma = words[rng.below(words.size())];
      t.form = inflect(t.lemma, pos[idx]);
      t.plemma = t.lemma;
      t.pos = pos[idx];
      t.ppos = pos[idx];
      t.head = heads[idx];
      t.phead = heads[idx];
      if (t.head == 0) {
        t.deprel = "ROOT";
      } else if (is_verb[static_cast<std::size_t>(t.head - 1)]) {
        t.deprel = cfg.relations[rng.weighted(all_weights)].relation;
      } else {
        t.deprel = optional_rels[rng.weighted(optional_weights)];
      }
      t.pdeprel = t.deprel;
      if (cfg.emit_roles && is_verb[idx]) {
        t.fillpred = true;
        t.pred = t.lemma + ".01";
      }
      sent.tokens.push_back(std::move(t));
    }
    refresh_predicates(sent);
    for (auto& t : sent.tokens) {
      t.apreds.assign(sent.predicates.size(), std::nullopt);
      for (std::size_t p = 0; p < sent.predicates.size(); ++p) {
        if (t.head != sent.predicates[p]) continue;
        auto ob = std::find(cfg.obligatory.begin(), cfg.obligatory.end(), t.deprel);
        if (ob != cfg.obligatory.end()) {
          t.apreds[p] = "A" + std::to_string(ob - cfg.obligatory.begin());
        } else if (is_adjunct(t.deprel)) {
          t.apreds[p] = "AM-" + t.deprel;
        }
      }
    }
    out.push_back(std::move(sent));
  }
  return out;
}

}  // namespace stagsrl
