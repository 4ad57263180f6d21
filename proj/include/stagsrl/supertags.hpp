#pragma once

// Dependency-based supertags.
//
// String grammar (bit-exact):
//   tag       := head [ "+" obligs ] [ "+" flags ]      (at most one of the two
//                                                      unless the Model 2
//                                                      optional-direction
//                                                      variant is enabled)
//   head      := "ROOT" | REL "/" DIR | "-"
//   obligs    := REL "/" DIR { "_" REL "/" DIR }
//   flags     := "L" | "R" | "L_R"
//   DIR       := "L" | "R"
//
// A head direction names the side of the head as seen from the token ("SBJ/R"
// = the head is to the right). A dependent direction names the side of the
// dependent ("SBJ/L" = the subject is to the left).

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "stagsrl/treebank.hpp"

namespace stagsrl {

enum class SupertagModel { M0, M1, M2, TAG };

std::string model_name(SupertagModel m);
// Accepts "0", "1", "2", "tag" (case-insensitive) and "M0".."M2".
SupertagModel parse_model(std::string_view s);

struct HeadPart {
  enum class Kind { Root, Arc, Omitted };
  Kind kind = Kind::Root;
  std::string relation;  // Arc only
  Side direction = Side::L;  // Arc only

  bool operator==(const HeadPart&) const = default;
};

struct ObligatoryDep {
  std::string relation;
  Side side;

  bool operator==(const ObligatoryDep&) const = default;
};

struct DirFlags {
  bool left = false;
  bool right = false;

  bool any() const { return left || right; }
  bool operator==(const DirFlags&) const = default;
};

struct DepPart {
  std::vector<ObligatoryDep> obligatory;  // surface order, duplicates kept
  DirFlags flags;

  bool empty() const { return obligatory.empty() && !flags.any(); }
  bool operator==(const DepPart&) const = default;
};

struct Supertag {
  SupertagModel model = SupertagModel::M0;
  HeadPart head;
  DepPart deps;

  bool operator==(const Supertag&) const = default;
};

struct ObligatorySet {
  std::set<std::string> relations;
  std::vector<std::string> verb_pos_prefixes;
  // Model 2 variant that also records optional-dependent directions next to a
  // nonempty obligatory list. Off by default.
  bool m2_optional_directions = false;

  bool is_obligatory(const std::string& rel) const { return relations.count(rel) != 0; }
  bool is_verb(const std::string& pos) const;

  static ObligatorySet english();
  static ObligatorySet spanish();
};

// One tag per token. Throws ValidationError for relation labels containing
// '/', '+' or '_' and when model TAG is requested without verb prefixes.
std::vector<Supertag> extract(const DepTree& tree, SupertagModel model, const ObligatorySet& oblig);
std::vector<std::string> extract_strings(const DepTree& tree, SupertagModel model,
                                         const ObligatorySet& oblig);

std::string serialize_tag(const Supertag& t);
// Throws ParseError on malformed strings.
Supertag parse_tag(std::string_view s, SupertagModel model);

// Supported: M1->M0, M2->M1, M2->M0. Anything else throws std::invalid_argument.
Supertag project(const Supertag& t, SupertagModel target);

bool consistent(const Supertag& t, const DepTree& tree, int i, const ObligatorySet& oblig);

struct SupertagVocab {
  SupertagModel model = SupertagModel::M0;
  std::map<std::string, long> counts;
  long total = 0;

  std::size_t distinct() const { return counts.size(); }
  // Order-independent merge.
  void merge(const SupertagVocab& other);
  bool operator==(const SupertagVocab&) const = default;
};

SupertagVocab vocab_stats(const std::vector<DepTree>& corpus, SupertagModel model,
                          const ObligatorySet& oblig, unsigned threads = 1);

// ".stags" sidecar: one block per sentence, "index<TAB>tag" per token, blank
// line between sentences.
using TagSequences = std::vector<std::vector<std::string>>;
std::string serialize_stags(const TagSequences& tags);
TagSequences parse_stags(std::string_view text);

}  // namespace stagsrl
