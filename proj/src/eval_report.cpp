#include "stagsrl/eval_report.hpp"

#include <cstdio>
#include <map>
#include <tuple>

#include "json.hpp"

#include "stagsrl/error.hpp"

namespace stagsrl {

// ---- scores --------------------------------------------------------------------

double SrlScore::precision() const {
  return predicted ? static_cast<double>(correct) / static_cast<double>(predicted) : 0.0;
}

double SrlScore::recall() const {
  return gold ? static_cast<double>(correct) / static_cast<double>(gold) : 0.0;
}

double SrlScore::f1() const {
  const double p = precision(), r = recall();
  return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
}

void SrlScore::add(const SrlScore& o) {
  correct += o.correct;
  predicted += o.predicted;
  gold += o.gold;
}

double TaggingScore::accuracy() const {
  return total ? static_cast<double>(correct) / static_cast<double>(total) : 0.0;
}

double tagging_accuracy(const std::vector<std::string>& gold, const std::vector<std::string>& pred) {
  TaggingScore s = tagging_score({gold}, {pred});
  return s.accuracy();
}

TaggingScore tagging_score(const TagSequences& gold, const TagSequences& pred,
                           const std::set<std::string>* known_labels) {
  if (gold.size() != pred.size()) {
    throw ValidationError("tagging: " + std::to_string(gold.size()) + " gold sentences vs " +
                          std::to_string(pred.size()) + " predicted");
  }
  TaggingScore s;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold[i].size() != pred[i].size()) {
      throw ValidationError("tagging: sentence " + std::to_string(i + 1) + " has " +
                            std::to_string(gold[i].size()) + " gold and " +
                            std::to_string(pred[i].size()) + " predicted labels");
    }
    for (std::size_t t = 0; t < gold[i].size(); ++t) {
      ++s.total;
      if (gold[i][t] == pred[i][t]) ++s.correct;
      if (known_labels && !known_labels->count(gold[i][t])) ++s.unseen;
    }
  }
  return s;
}

// ---- SRL tuples ------------------------------------------------------------------

namespace {

using Tuple = std::tuple<int, int, std::string>;

std::set<Tuple> tuples_of(const std::vector<SrlFrame>& frames, ScoreMode mode) {
  std::set<Tuple> out;
  for (const auto& f : frames) {
    for (const auto& [arg, role] : f.arguments) out.emplace(f.predicate, arg, role);
    if (mode == ScoreMode::ArgumentsAndSense) {
      if (f.sense.empty()) {
        throw ValidationError("sense scoring requested but the frame of token " +
                              std::to_string(f.predicate) + " has no sense");
      }
      out.emplace(f.predicate, f.predicate, "SENSE:" + f.sense);
    }
  }
  return out;
}

void check_aligned(const FrameCorpus& gold, const FrameCorpus& pred) {
  if (gold.size() != pred.size()) {
    throw ValidationError("SRL scoring: " + std::to_string(gold.size()) + " gold sentences vs " +
                          std::to_string(pred.size()) + " predicted");
  }
}

// Calls key_fn(sentence, tuple) for every gold and predicted tuple and
// accumulates counts per returned key.
template <typename KeyFn>
std::map<std::string, SrlScore> keyed_counts(const FrameCorpus& gold, const FrameCorpus& pred,
                                             KeyFn key_fn) {
  check_aligned(gold, pred);
  std::map<std::string, SrlScore> out;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const auto g = tuples_of(gold[i], ScoreMode::Arguments);
    const auto p = tuples_of(pred[i], ScoreMode::Arguments);
    for (const auto& t : g) ++out[key_fn(i, t)].gold;
    for (const auto& t : p) {
      auto& s = out[key_fn(i, t)];
      ++s.predicted;
      if (g.count(t)) ++s.correct;
    }
  }
  return out;
}

}  // namespace

SrlScore srl_prf(const FrameCorpus& gold, const FrameCorpus& pred, ScoreMode mode) {
  check_aligned(gold, pred);
  SrlScore s;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const auto g = tuples_of(gold[i], mode);
    const auto p = tuples_of(pred[i], mode);
    s.gold += static_cast<long>(g.size());
    s.predicted += static_cast<long>(p.size());
    for (const auto& t : p) s.correct += g.count(t) ? 1 : 0;
  }
  return s;
}

const SrlScore* Breakdown::find(const std::string& key) const {
  for (const auto& [k, s] : entries) {
    if (k == key) return &s;
  }
  return nullptr;
}

SrlScore Breakdown::total() const {
  SrlScore s;
  for (const auto& e : entries) s.add(e.second);
  return s;
}

std::string length_bucket(std::size_t tokens) {
  if (tokens <= 10) return "1-10";
  if (tokens <= 15) return "11-15";
  if (tokens <= 20) return "16-20";
  if (tokens <= 25) return "21-25";
  if (tokens <= 30) return "26-30";
  return "31+";
}

std::string role_key(const std::string& role) {
  if (role.rfind("AM", 0) == 0 && (role.size() == 2 || role[2] == '-')) return "AM";
  if (role.size() == 2 && role[0] == 'A' && role[1] >= '0' && role[1] <= '5') return role;
  return "other";
}

std::string predicate_category(const std::string& pos, const std::vector<std::string>& verb_prefixes) {
  for (const auto& p : verb_prefixes) {
    if (!p.empty() && pos.rfind(p, 0) == 0) return "V";
  }
  return "N";
}

Breakdown breakdown_by_length(const FrameCorpus& gold, const FrameCorpus& pred,
                              const std::vector<std::size_t>& lengths) {
  if (lengths.size() != gold.size()) {
    throw ValidationError("length breakdown: " + std::to_string(lengths.size()) + " lengths for " +
                          std::to_string(gold.size()) + " sentences");
  }
  auto counts = keyed_counts(gold, pred, [&](std::size_t i, const Tuple&) {
    return length_bucket(lengths[i]);
  });
  Breakdown b{"length", {}};
  for (const auto& k : kLengthBuckets) b.entries.emplace_back(k, counts[k]);
  return b;
}

Breakdown breakdown_by_role(const FrameCorpus& gold, const FrameCorpus& pred,
                            const std::vector<std::vector<std::string>>& pos,
                            const std::vector<std::string>& verb_prefixes) {
  if (pos.size() != gold.size()) {
    throw ValidationError("role breakdown: POS for " + std::to_string(pos.size()) +
                          " sentences, frames for " + std::to_string(gold.size()));
  }
  auto counts = keyed_counts(gold, pred, [&](std::size_t i, const Tuple& t) {
    const auto p = static_cast<std::size_t>(std::get<0>(t));
    if (p < 1 || p > pos[i].size()) {
      throw ValidationError("role breakdown: predicate " + std::to_string(p) + " outside sentence " +
                            std::to_string(i + 1));
    }
    return predicate_category(pos[i][p - 1], verb_prefixes) + ":" + role_key(std::get<2>(t));
  });
  Breakdown b{"role", {}};
  for (const char* cat : {"V", "N"}) {
    for (const char* role : {"A0", "A1", "A2", "A3", "A4", "A5", "AM", "other"}) {
      const std::string key = std::string(cat) + ":" + role;
      auto it = counts.find(key);
      if (it != counts.end()) b.entries.emplace_back(key, it->second);
    }
  }
  return b;
}

// ---- emission ------------------------------------------------------------------------

namespace {

std::string json_string(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", static_cast<unsigned>(c));
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out + "\"";
}

std::string fixed4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

std::string score_fields(const SrlScore& s) {
  return "\"correct\":" + std::to_string(s.correct) + ",\"predicted\":" + std::to_string(s.predicted) +
         ",\"gold\":" + std::to_string(s.gold) + ",\"precision\":" + fixed4(s.precision()) +
         ",\"recall\":" + fixed4(s.recall()) + ",\"f1\":" + fixed4(s.f1());
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string emit_jsonl(const Report& r) {
  std::string out = "{\"type\":\"header\",\"version\":" + std::to_string(r.version) +
                    ",\"corpus\":" + json_string(r.corpus) + ",\"model\":" + json_string(r.model) +
                    ",\"mode\":" + json_string(r.mode) + ",\"config\":{";
  bool first = true;
  for (const auto& [k, v] : r.config) {
    if (!first) out += ',';
    first = false;
    out += json_string(k) + ":" + json_string(v);
  }
  out += "}}\n";
  if (r.srl) out += "{\"type\":\"srl\"," + score_fields(*r.srl) + "}\n";
  if (r.tagging) {
    out += "{\"type\":\"tagging\",\"correct\":" + std::to_string(r.tagging->correct) +
           ",\"total\":" + std::to_string(r.tagging->total) +
           ",\"unseen\":" + std::to_string(r.tagging->unseen) +
           ",\"accuracy\":" + fixed4(r.tagging->accuracy()) + "}\n";
  }
  for (const auto& b : r.breakdowns) {
    for (const auto& [key, s] : b.entries) {
      out += "{\"type\":\"breakdown\",\"breakdown\":" + json_string(b.name) + ",\"key\":" +
             json_string(key) + "," + score_fields(s) + "}\n";
    }
  }
  for (const auto& v : r.vocab) {
    out += "{\"type\":\"vocab\",\"model\":" + json_string(v.model) +
           ",\"distinct\":" + std::to_string(v.distinct) + ",\"total\":" + std::to_string(v.total) +
           "}\n";
  }
  return out;
}

std::string emit_csv(const Report& r) {
  std::string out = "type,name,key,correct,predicted,gold,total,distinct,precision,recall,f1,accuracy\n";
  auto row = [&](std::vector<std::string> cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += csv_field(cells[i]);
    }
    out += '\n';
  };
  auto score_row = [&](const std::string& type, const std::string& name, const std::string& key,
                       const SrlScore& s) {
    row({type, name, key, std::to_string(s.correct), std::to_string(s.predicted),
         std::to_string(s.gold), "", "", fixed4(s.precision()), fixed4(s.recall()), fixed4(s.f1()), ""});
  };
  row({"meta", "version", std::to_string(r.version), "", "", "", "", "", "", "", "", ""});
  row({"meta", "corpus", r.corpus, "", "", "", "", "", "", "", "", ""});
  row({"meta", "model", r.model, "", "", "", "", "", "", "", "", ""});
  row({"meta", "mode", r.mode, "", "", "", "", "", "", "", "", ""});
  for (const auto& [k, v] : r.config) row({"config", k, v, "", "", "", "", "", "", "", "", ""});
  if (r.srl) score_row("srl", "overall", "", *r.srl);
  if (r.tagging) {
    const auto& t = *r.tagging;
    row({"tagging", "overall", "", std::to_string(t.correct), "", "", std::to_string(t.total), "",
         "", "", "", fixed4(t.accuracy())});
    row({"tagging", "unseen", "", "", "", "", std::to_string(t.unseen), "", "", "", "", ""});
  }
  for (const auto& b : r.breakdowns) {
    for (const auto& [key, s] : b.entries) score_row("breakdown", b.name, key, s);
  }
  for (const auto& v : r.vocab) {
    row({"vocab", v.model, "", "", "", "", std::to_string(v.total), std::to_string(v.distinct), "",
         "", "", ""});
  }
  return out;
}

}  // namespace

ReportFormat parse_report_format(std::string_view s) {
  if (s == "jsonl" || s == "json-lines") return ReportFormat::JsonLines;
  if (s == "csv") return ReportFormat::Csv;
  throw ParseError("unknown report format '" + std::string(s) + "' (expected jsonl or csv)");
}

std::string emit_report(const Report& r, ReportFormat format) {
  return format == ReportFormat::JsonLines ? emit_jsonl(r) : emit_csv(r);
}

Report parse_report_jsonl(std::string_view text) {
  Report r;
  bool header = false;
  std::size_t line_no = 0, pos = 0;
  auto score_of = [](const nlohmann::json& j) {
    return SrlScore{j.at("correct").get<long>(), j.at("predicted").get<long>(), j.at("gold").get<long>()};
  };
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? nl : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
      const std::string type = j.at("type").get<std::string>();
      if (type == "header") {
        r.version = j.at("version").get<int>();
        if (r.version != Report::kVersion) {
          throw FormatError("unsupported report version " + std::to_string(r.version));
        }
        r.corpus = j.at("corpus").get<std::string>();
        r.model = j.at("model").get<std::string>();
        r.mode = j.at("mode").get<std::string>();
        for (const auto& [k, v] : j.at("config").items()) r.config[k] = v.get<std::string>();
        header = true;
      } else if (type == "srl") {
        r.srl = score_of(j);
      } else if (type == "tagging") {
        r.tagging = TaggingScore{j.at("correct").get<long>(), j.at("total").get<long>(),
                                 j.at("unseen").get<long>()};
      } else if (type == "breakdown") {
        const std::string name = j.at("breakdown").get<std::string>();
        if (r.breakdowns.empty() || r.breakdowns.back().name != name) r.breakdowns.push_back({name, {}});
        r.breakdowns.back().entries.emplace_back(j.at("key").get<std::string>(), score_of(j));
      } else if (type == "vocab") {
        r.vocab.push_back({j.at("model").get<std::string>(), j.at("distinct").get<long>(),
                           j.at("total").get<long>()});
      } else {
        throw FormatError("report line " + std::to_string(line_no) + ": unknown record type '" + type + "'");
      }
    } catch (const nlohmann::json::exception& e) {
      throw ParseError("report line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!header) throw FormatError("report has no header record");
  return r;
}

}  // namespace stagsrl
