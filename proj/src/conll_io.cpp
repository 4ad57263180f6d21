#include "stagsrl/conll_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "stagsrl/error.hpp"

namespace stagsrl {
namespace {

constexpr std::size_t kFixedColumns = 14;

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  if (line.find('\t') != std::string_view::npos) {
    std::size_t start = 0;
    while (true) {
      std::size_t tab = line.find('\t', start);
      out.push_back(line.substr(start, tab - start));
      if (tab == std::string_view::npos) break;
      start = tab + 1;
    }
    return out;
  }
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && line[i] == ' ') ++i;
    if (i >= line.size()) break;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ') ++j;
    out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

bool is_blank(std::string_view line) {
  for (char c : line) {
    if (c != ' ' && c != '\t' && c != '\r') return false;
  }
  return true;
}

std::string opt_field(std::string_view f) { return f == "_" ? std::string() : std::string(f); }

int parse_int(std::string_view f, std::size_t line_no, const char* what) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), value);
  if (ec != std::errc() || ptr != f.data() + f.size()) {
    throw ParseError("line " + std::to_string(line_no) + ": invalid " + what + " '" +
                     std::string(f) + "'");
  }
  return value;
}

ConllToken parse_token(std::string_view line, std::size_t line_no) {
  auto f = split_fields(line);
  if (f.size() < kFixedColumns) {
    throw ParseError("line " + std::to_string(line_no) + ": expected at least 14 columns, got " +
                     std::to_string(f.size()));
  }
  ConllToken t;
  t.id = parse_int(f[0], line_no, "ID");
  t.form = std::string(f[1]);
  t.lemma = opt_field(f[2]);
  t.plemma = opt_field(f[3]);
  t.pos = opt_field(f[4]);
  t.ppos = opt_field(f[5]);
  t.feat = opt_field(f[6]);
  t.pfeat = opt_field(f[7]);
  t.head = parse_int(f[8], line_no, "HEAD");
  if (f[9] != "_") t.phead = parse_int(f[9], line_no, "PHEAD");
  t.deprel = opt_field(f[10]);
  t.pdeprel = opt_field(f[11]);
  if (f[12] == "Y") {
    t.fillpred = true;
  } else if (f[12] != "_") {
    throw ParseError("line " + std::to_string(line_no) + ": FILLPRED must be 'Y' or '_', got '" +
                     std::string(f[12]) + "'");
  }
  if (f[13] != "_") t.pred = std::string(f[13]);
  for (std::size_t c = kFixedColumns; c < f.size(); ++c) {
    if (f[c] == "_") {
      t.apreds.emplace_back(std::nullopt);
    } else {
      t.apreds.emplace_back(std::string(f[c]));
    }
  }
  return t;
}

void emit_opt(std::string& out, const std::string& s) { out += s.empty() ? "_" : s; }

}  // namespace

void refresh_predicates(ConllSentence& s) {
  s.predicates.clear();
  for (const auto& t : s.tokens) {
    if (t.fillpred) s.predicates.push_back(t.id);
  }
}

void validate_sentence(const ConllSentence& s, std::size_t sentence_index) {
  const auto where = [&](const ConllToken& t) {
    return "sentence " + std::to_string(sentence_index + 1) + ", token " + std::to_string(t.id);
  };
  const int n = static_cast<int>(s.tokens.size());
  std::size_t pred_count = 0;
  for (int i = 0; i < n; ++i) {
    const auto& t = s.tokens[static_cast<std::size_t>(i)];
    if (t.id != i + 1) {
      throw ValidationError(where(t) + ": ids must run 1..n in order (expected " +
                            std::to_string(i + 1) + ")");
    }
    if (t.head < 0 || t.head > n) throw ValidationError(where(t) + ": head out of range");
    if (t.head == t.id) throw ValidationError(where(t) + ": token is its own head");
    if (t.phead && (*t.phead < 0 || *t.phead > n || *t.phead == t.id)) {
      throw ValidationError(where(t) + ": predicted head invalid");
    }
    if (t.fillpred) ++pred_count;
  }
  for (const auto& t : s.tokens) {
    if (t.apreds.size() != pred_count) {
      throw ValidationError(where(t) + ": " + std::to_string(t.apreds.size()) +
                            " argument columns for " + std::to_string(pred_count) + " predicates");
    }
  }
  std::size_t k = 0;
  for (const auto& t : s.tokens) {
    if (!t.fillpred) continue;
    if (k >= s.predicates.size() || s.predicates[k] != t.id) {
      throw ValidationError("sentence " + std::to_string(sentence_index + 1) +
                            ": predicate list does not match FILLPRED columns");
    }
    ++k;
  }
  if (k != s.predicates.size()) {
    throw ValidationError("sentence " + std::to_string(sentence_index + 1) +
                          ": predicate list does not match FILLPRED columns");
  }
}

std::vector<ConllSentence> parse_conll2009(std::string_view text) {
  std::vector<ConllSentence> out;
  ConllSentence current;
  auto flush = [&] {
    if (current.tokens.empty()) return;
    refresh_predicates(current);
    validate_sentence(current, out.size());
    out.push_back(std::move(current));
    current = ConllSentence{};
  };
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? nl : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (is_blank(line)) {
      flush();
      continue;
    }
    current.tokens.push_back(parse_token(line, line_no));
  }
  flush();
  return out;
}

std::string serialize_conll2009(const std::vector<ConllSentence>& sentences) {
  std::string out;
  for (const auto& sentence : sentences) {
    for (const auto& t : sentence.tokens) {
      out += std::to_string(t.id);
      out += '\t';
      out += t.form;
      for (const std::string* s : {&t.lemma, &t.plemma, &t.pos, &t.ppos, &t.feat, &t.pfeat}) {
        out += '\t';
        emit_opt(out, *s);
      }
      out += '\t';
      out += std::to_string(t.head);
      out += '\t';
      out += t.phead ? std::to_string(*t.phead) : "_";
      out += '\t';
      emit_opt(out, t.deprel);
      out += '\t';
      emit_opt(out, t.pdeprel);
      out += '\t';
      out += t.fillpred ? "Y" : "_";
      out += '\t';
      out += t.pred ? *t.pred : "_";
      for (const auto& a : t.apreds) {
        out += '\t';
        out += a ? *a : "_";
      }
      out += '\n';
    }
    out += '\n';
  }
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw IoError("write failed for '" + path + "'");
}

std::vector<ConllSentence> read_conll2009_file(const std::string& path) {
  return parse_conll2009(read_text_file(path));
}

void write_conll2009_file(const std::string& path, const std::vector<ConllSentence>& sentences) {
  write_text_file(path, serialize_conll2009(sentences));
}

EmbeddingTable::EmbeddingTable(std::size_t dim, std::map<std::string, std::vector<double>> entries,
                               std::vector<double> unk_vector)
    : dim_(dim), entries_(std::move(entries)), unk_(std::move(unk_vector)) {
  if (dim_ == 0) throw ValidationError("embedding dimension must be positive");
  if (unk_.size() != dim_) throw ValidationError("unk vector has wrong dimension");
  for (const auto& [w, v] : entries_) {
    if (v.size() != dim_) throw ValidationError("embedding for '" + w + "' has wrong dimension");
  }
}

const std::vector<double>& EmbeddingTable::lookup(const std::string& word) const {
  auto it = entries_.find(word);
  return it == entries_.end() ? unk_ : it->second;
}

namespace {

// "<count> <dim>" first line of word2vec-style text files.
bool is_count_header(std::string_view line) {
  std::istringstream ss{std::string(line)};
  std::string a, b, extra;
  if (!(ss >> a >> b) || (ss >> extra)) return false;
  auto digits = [](const std::string& t) {
    return !t.empty() && t.find_first_not_of("0123456789") == std::string::npos;
  };
  return digits(a) && digits(b);
}

}  // namespace

EmbeddingTable load_embeddings(std::string_view text) {
  std::map<std::string, std::vector<double>> entries;
  std::size_t dim = 0;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  std::vector<double> sum;
  std::size_t loaded = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? nl : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (is_blank(line)) continue;
    std::istringstream ss{std::string(line)};
    std::string word;
    ss >> word;
    if (dim == 0 && is_count_header(line)) continue;
    std::vector<double> vec;
    std::string tok;
    while (ss >> tok) {
      try {
        std::size_t used = 0;
        double v = std::stod(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        vec.push_back(v);
      } catch (const std::exception&) {
        throw ParseError("embeddings line " + std::to_string(line_no) + ": invalid number '" +
                         tok + "'");
      }
    }
    if (vec.empty()) {
      throw ParseError("embeddings line " + std::to_string(line_no) + ": no vector values");
    }
    if (dim == 0) {
      dim = vec.size();
      sum.assign(dim, 0.0);
    } else if (vec.size() != dim) {
      throw ParseError("embeddings line " + std::to_string(line_no) + ": dimension " +
                       std::to_string(vec.size()) + " differs from " + std::to_string(dim));
    }
    if (entries.count(word) != 0) continue;
    for (std::size_t i = 0; i < dim; ++i) sum[i] += vec[i];
    ++loaded;
    entries.emplace(std::move(word), std::move(vec));
  }
  if (loaded == 0) throw ParseError("embedding file contains no entries");
  for (double& v : sum) v /= static_cast<double>(loaded);
  return EmbeddingTable(dim, std::move(entries), std::move(sum));
}

EmbeddingTable load_embeddings_file(const std::string& path) {
  return load_embeddings(read_text_file(path));
}

}  // namespace stagsrl
