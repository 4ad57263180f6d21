#pragma once

// CoNLL-2009 treebank reading/writing and plain-text embedding files.
//
// Column layout (1-based):
//   1 ID  2 FORM  3 LEMMA  4 PLEMMA  5 POS  6 PPOS  7 FEAT  8 PFEAT
//   9 HEAD  10 PHEAD  11 DEPREL  12 PDEPREL  13 FILLPRED  14 PRED
//   15.. APRED, one column per predicate of the sentence (surface order)
//
// "_" in any optional column parses to "absent" (empty string / nullopt) and
// absent values are always written back as "_".

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace stagsrl {

struct ConllToken {
  int id = 0;  // 1-based
  std::string form;
  std::string lemma;  // empty = absent
  std::string plemma;
  std::string pos;
  std::string ppos;
  std::string feat;
  std::string pfeat;
  int head = 0;  // 0 = artificial root
  std::optional<int> phead;
  std::string deprel;
  std::string pdeprel;
  bool fillpred = false;
  std::optional<std::string> pred;
  std::vector<std::optional<std::string>> apreds;  // one per predicate

  bool operator==(const ConllToken&) const = default;
};

struct ConllSentence {
  std::vector<ConllToken> tokens;
  std::vector<int> predicates;  // 1-based ids of FILLPRED=Y tokens

  std::size_t size() const { return tokens.size(); }
  const ConllToken& token(int id) const { return tokens.at(static_cast<std::size_t>(id - 1)); }

  bool operator==(const ConllSentence&) const = default;
};

// Throws ParseError (with 1-based line number) on malformed lines and
// ValidationError on invariant violations.
std::vector<ConllSentence> parse_conll2009(std::string_view text);

// Checks every ConllSentence invariant; throws ValidationError naming the
// sentence (1-based in the message; `sentence_index` is 0-based) and the token.
void validate_sentence(const ConllSentence& s, std::size_t sentence_index = 0);

// Recomputes `predicates` from the fillpred flags.
void refresh_predicates(ConllSentence& s);

std::string serialize_conll2009(const std::vector<ConllSentence>& sentences);

std::vector<ConllSentence> read_conll2009_file(const std::string& path);
void write_conll2009_file(const std::string& path, const std::vector<ConllSentence>& sentences);

class EmbeddingTable {
 public:
  EmbeddingTable(std::size_t dim, std::map<std::string, std::vector<double>> entries,
                 std::vector<double> unk_vector);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return entries_.size(); }
  bool contains(const std::string& word) const { return entries_.count(word) != 0; }
  // Unknown words return the unk vector.
  const std::vector<double>& lookup(const std::string& word) const;
  const std::vector<double>& unk_vector() const { return unk_; }
  const std::map<std::string, std::vector<double>>& entries() const { return entries_; }

 private:
  std::size_t dim_;
  std::map<std::string, std::vector<double>> entries_;
  std::vector<double> unk_;
};

// "word v1 ... vd" per line. Dimension inferred from the first line, the first
// occurrence of a duplicated word wins, unk = componentwise mean.
EmbeddingTable load_embeddings(std::string_view text);
EmbeddingTable load_embeddings_file(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view contents);

}  // namespace stagsrl
