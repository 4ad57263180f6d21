#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stagsrl/config.hpp"
#include "stagsrl/conll_io.hpp"

namespace stagsrl {

enum class Side { L, R };

// A validated dependency tree. Token indices are 1-based; head 0 is the
// artificial root. Several tokens may attach to the root (CoNLL-2009 treebanks
// attach some punctuation that way), but every token must reach it.
class DepTree {
 public:
  DepTree(std::vector<int> heads, std::vector<std::string> relations, std::vector<std::string> pos);

  int size() const { return static_cast<int>(heads_.size()); }
  int head(int i) const { return heads_.at(static_cast<std::size_t>(i - 1)); }
  const std::string& relation(int i) const { return relations_.at(static_cast<std::size_t>(i - 1)); }
  const std::string& pos(int i) const { return pos_.at(static_cast<std::size_t>(i - 1)); }
  const std::vector<int>& heads() const { return heads_; }
  const std::vector<std::string>& relations() const { return relations_; }
  const std::vector<std::string>& pos_tags() const { return pos_; }

 private:
  std::vector<int> heads_;
  std::vector<std::string> relations_;
  std::vector<std::string> pos_;
};

struct Dependent {
  int index;
  std::string relation;
  Side side;  // L when the dependent precedes its head

  bool operator==(const Dependent&) const = default;
};

// Throws StructureError naming the offending token on cycles or nodes that do
// not reach the root.
DepTree tree_from_sentence(const ConllSentence& s, bool use_predicted = false);

// Dependents of token i in surface order. Throws std::out_of_range for bad i.
std::vector<Dependent> dependents_of(const DepTree& t, int i);

struct RelationWeight {
  std::string relation;
  double weight;
};

struct SynthConfig {
  int sentence_count = 200;
  int min_length = 4;
  int max_length = 14;
  std::vector<RelationWeight> relations = {
      {"SBJ", 3.0}, {"OBJ", 2.5}, {"PRD", 1.0}, {"VC", 1.0},  {"NMOD", 3.0},
      {"ADV", 1.5}, {"TMP", 1.0}, {"LOC", 1.0}, {"DEP", 0.5}, {"P", 0.5}};
  std::vector<std::string> obligatory = {"SBJ", "OBJ", "PRD", "VC"};
  // Optional relations whose dependents of a predicate receive AM-<REL> roles.
  std::vector<std::string> adjunct_relations = {"ADV", "TMP", "LOC"};
  std::vector<std::string> verb_pos = {"VB", "VBD", "VBZ"};
  std::vector<std::string> other_pos = {"NN", "NNS", "JJ", "DT", "IN", "RB"};
  double verb_probability = 0.25;
  bool projective = true;
  bool emit_roles = true;
  int lexicon_size = 300;  // distinct lemmas per POS
  std::uint64_t seed = 1;

  // Throws ValidationError when invariants fail.
  void validate() const;
};

// Keys: sentences, min_length, max_length, relations (REL:weight,...),
// obligatory, adjunct_relations, verb_pos, other_pos, verb_probability,
// projective, emit_roles, lexicon_size, seed. Missing keys keep defaults.
SynthConfig synth_config_from_map(const ConfigMap& m);
ConfigMap synth_config_to_map(const SynthConfig& cfg);

// Deterministic in cfg.seed. Verbs are predicates; with emit_roles their
// obligatory dependents get A<k> (k = position of the relation in the
// obligatory list) and adjunct-relation dependents get AM-<REL>.
std::vector<ConllSentence> generate_synthetic(const SynthConfig& cfg);

}  // namespace stagsrl
