#pragma once

// Scoring and machine-readable reports (schema in docs/report-format.md).

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "stagsrl/config.hpp"
#include "stagsrl/srl.hpp"
#include "stagsrl/supertags.hpp"

namespace stagsrl {

struct SrlScore {
  long correct = 0;
  long predicted = 0;
  long gold = 0;

  // 0 when the denominator is 0.
  double precision() const;
  double recall() const;
  double f1() const;
  void add(const SrlScore& o);
  bool operator==(const SrlScore&) const = default;
};

struct TaggingScore {
  long correct = 0;
  long total = 0;
  long unseen = 0;  // gold labels outside the model's label set (always errors)

  double accuracy() const;
  bool operator==(const TaggingScore&) const = default;
};

// Throws ValidationError on misaligned sequences.
double tagging_accuracy(const std::vector<std::string>& gold, const std::vector<std::string>& pred);
TaggingScore tagging_score(const TagSequences& gold, const TagSequences& pred,
                           const std::set<std::string>* known_labels = nullptr);

enum class ScoreMode { Arguments, ArgumentsAndSense };

using FrameCorpus = std::vector<std::vector<SrlFrame>>;

// Micro-averaged over (predicate, argument, role) tuples. Sense mode adds one
// (predicate, predicate, sense) tuple per frame and throws ValidationError if
// a frame lacks its sense.
SrlScore srl_prf(const FrameCorpus& gold, const FrameCorpus& pred,
                 ScoreMode mode = ScoreMode::Arguments);

struct Breakdown {
  std::string name;  // "length" or "role"
  std::vector<std::pair<std::string, SrlScore>> entries;  // fixed key order

  const SrlScore* find(const std::string& key) const;
  SrlScore total() const;
  bool operator==(const Breakdown&) const = default;
};

inline const std::vector<std::string> kLengthBuckets = {"1-10",  "11-15", "16-20",
                                                        "21-25", "26-30", "31+"};
std::string length_bucket(std::size_t tokens);

// AM-* -> "AM", A0..A5 unchanged, anything else -> "other".
std::string role_key(const std::string& role);
// "V" when the POS starts with one of the prefixes, otherwise "N".
std::string predicate_category(const std::string& pos, const std::vector<std::string>& verb_prefixes);

// lengths[i] = token count of sentence i.
Breakdown breakdown_by_length(const FrameCorpus& gold, const FrameCorpus& pred,
                              const std::vector<std::size_t>& lengths);
// pos[i][t] = POS of token t+1 in sentence i. Keys are "<category>:<role key>".
Breakdown breakdown_by_role(const FrameCorpus& gold, const FrameCorpus& pred,
                            const std::vector<std::vector<std::string>>& pos,
                            const std::vector<std::string>& verb_prefixes = {"V", "v"});

struct VocabEntry {
  std::string model;
  long distinct = 0;
  long total = 0;
  bool operator==(const VocabEntry&) const = default;
};

struct Report {
  static constexpr int kVersion = 1;
  int version = kVersion;
  std::string corpus;
  std::string model;
  std::string mode = "arguments";  // or "arguments+sense"
  std::optional<SrlScore> srl;
  std::optional<TaggingScore> tagging;
  std::vector<Breakdown> breakdowns;
  std::vector<VocabEntry> vocab;
  ConfigMap config;

  bool operator==(const Report&) const = default;
};

enum class ReportFormat { JsonLines, Csv };

ReportFormat parse_report_format(std::string_view s);  // "jsonl" | "csv"
std::string emit_report(const Report& r, ReportFormat format);
// FormatError on unknown versions or record types, ParseError on bad JSON.
Report parse_report_jsonl(std::string_view text);

}  // namespace stagsrl
