// stagsrl command-line driver. Exit codes are listed in docs/cli.md.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "stagsrl/checkpoint.hpp"
#include "stagsrl/config.hpp"
#include "stagsrl/conll_io.hpp"
#include "stagsrl/error.hpp"
#include "stagsrl/eval_report.hpp"
#include "stagsrl/srl.hpp"
#include "stagsrl/supertags.hpp"
#include "stagsrl/tagger.hpp"
#include "stagsrl/treebank.hpp"

using namespace stagsrl;

namespace {

enum ExitCode { kOk = 0, kOther = 1, kUsage = 2, kIo = 3, kData = 4, kFormat = 5 };

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

int fail(int code, const char* name, const std::string& message) {
  std::cerr << "error: code=" << name << " message=" << one_line(message) << "\n";
  return code;
}

// STAGSRL_LOG = quiet | error | warn | info | debug (default info).
class Log {
 public:
  enum Level { Quiet = 0, Error = 1, Warn = 2, Info = 3, Debug = 4 };

  Log() {
    const char* env = std::getenv("STAGSRL_LOG");
    const std::string v = env ? env : "info";
    if (v == "quiet" || v == "0") level_ = Quiet;
    else if (v == "error") level_ = Error;
    else if (v == "warn") level_ = Warn;
    else if (v == "debug") level_ = Debug;
    else level_ = Info;
  }

  void warn(const std::string& m) const { emit(Warn, "warn", m); }
  void info(const std::string& m) const { emit(Info, "info", m); }
  void debug(const std::string& m) const { emit(Debug, "debug", m); }

 private:
  void emit(Level l, const char* tag, const std::string& m) const {
    if (level_ >= l) std::cerr << "[" << tag << "] " << m << "\n";
  }
  Level level_ = Info;
};

struct Preset {
  std::string name;
  ObligatorySet oblig;
  std::size_t d_w;
  bool tagger_use_pos;
};

// [common] keys obligatory, verb_prefixes and m2_optional_directions override
// the language preset's supertag settings.
Preset preset_for(const std::string& lang, const std::string& config_path) {
  Preset p;
  if (lang == "en") p = {"en", ObligatorySet::english(), 100, true};
  else if (lang == "es") p = {"es", ObligatorySet::spanish(), 300, false};
  else throw ValidationError("unknown language '" + lang + "' (expected en or es)");
  if (config_path.empty()) return p;
  const auto common = KeyValueConfig::parse(read_text_file(config_path)).section("common");
  if (common.count("obligatory")) {
    const auto rels = config_list(common, "obligatory", {});
    p.oblig.relations = std::set<std::string>(rels.begin(), rels.end());
  }
  p.oblig.verb_pos_prefixes = config_list(common, "verb_prefixes", p.oblig.verb_pos_prefixes);
  p.oblig.m2_optional_directions =
      config_bool(common, "m2_optional_directions", p.oblig.m2_optional_directions);
  return p;
}

struct Options {
  std::string input, output, gold, model = "1", lang = "en", config_path, checkpoint;
  std::string predicates = "gold", stags = "gold", format = "jsonl", task = "supertag";
  std::string pretrained;
  std::optional<std::uint64_t> seed;
  std::optional<int> epochs, sentences;
  unsigned threads = 1;
  bool skip_invalid = false, sense = false, list = false;
};

// [common] then [<command>] from the config file, flags layered on top by the
// caller. `base` holds preset defaults.
ConfigMap resolve_config(const Options& o, const std::string& command, ConfigMap base) {
  if (!o.config_path.empty()) {
    const auto file = KeyValueConfig::parse(read_text_file(o.config_path));
    for (const auto& [k, v] : file.section("common")) base[k] = v;
    for (const auto& [k, v] : file.section(command)) base[k] = v;
  }
  if (o.seed) base["seed"] = std::to_string(*o.seed);
  if (o.epochs) base["epochs"] = std::to_string(*o.epochs);
  return base;
}

void log_resolved(const Log& log, const std::string& command, const Options& o, const ConfigMap& cfg) {
  ConfigMap shown = cfg;
  shown["command"] = command;
  shown["lang"] = o.lang;
  shown["threads"] = std::to_string(o.threads);
  if (!o.input.empty()) shown["input"] = o.input;
  if (!o.output.empty()) shown["output"] = o.output;
  if (!o.checkpoint.empty()) shown["checkpoint"] = o.checkpoint;
  std::string text = canonical_text(shown);
  if (!text.empty() && text.back() == '\n') text.pop_back();
  log.info("resolved config:\n" + text);
}

void write_output(const Options& o, const std::string& contents) {
  if (o.output.empty() || o.output == "-") {
    std::cout << contents;
  } else {
    write_text_file(o.output, contents);
  }
}

void require(const std::string& value, const char* flag) {
  if (value.empty()) throw CLI::RequiredError(flag);
}

// Whole-file parse, or with --skip-invalid a per-sentence parse that drops
// sentences failing validation (and, when `need_trees`, tree construction).
std::vector<ConllSentence> read_corpus(const std::string& path, bool skip_invalid, bool need_trees,
                                       const Log& log) {
  const std::string text = read_text_file(path);
  if (!skip_invalid) {
    auto sentences = parse_conll2009(text);
    if (need_trees) {
      for (std::size_t i = 0; i < sentences.size(); ++i) {
        try {
          tree_from_sentence(sentences[i]);
        } catch (const StructureError& e) {
          throw StructureError("sentence " + std::to_string(i + 1) + ": " + e.what());
        }
      }
    }
    return sentences;
  }
  std::vector<ConllSentence> out;
  std::istringstream in(text);
  std::string line, block;
  std::size_t index = 0, skipped = 0;
  auto flush = [&] {
    if (block.empty()) return;
    try {
      auto parsed = parse_conll2009(block);
      for (auto& s : parsed) {
        if (need_trees) tree_from_sentence(s);
        out.push_back(std::move(s));
      }
    } catch (const ValidationError& e) {
      ++skipped;
      log.warn("skipping sentence " + std::to_string(index + 1) + ": " + e.what());
    } catch (const StructureError& e) {
      ++skipped;
      log.warn("skipping sentence " + std::to_string(index + 1) + ": " + e.what());
    }
    ++index;
    block.clear();
  };
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      flush();
    } else {
      block += line + "\n";
    }
  }
  flush();
  if (skipped) log.warn("skipped " + std::to_string(skipped) + " invalid sentence(s)");
  return out;
}

std::vector<DepTree> trees_of(const std::vector<ConllSentence>& sentences, bool predicted) {
  std::vector<DepTree> trees;
  trees.reserve(sentences.size());
  for (const auto& s : sentences) trees.push_back(tree_from_sentence(s, predicted));
  return trees;
}

TagSequences gold_stags(const std::vector<ConllSentence>& sentences, SupertagModel model,
                        const ObligatorySet& oblig) {
  TagSequences out;
  for (const auto& s : sentences) out.push_back(extract_strings(tree_from_sentence(s), model, oblig));
  return out;
}

struct StagSource {
  bool enabled = true;
  TagSequences tags;
  std::string model;  // supertag model the tags follow
};

// gold | none | CHECKPOINT (tagger) | FILE (.stags)
StagSource resolve_stags(const Options& o, const std::vector<ConllSentence>& sentences,
                         const Preset& preset, const Log& log) {
  StagSource src;
  if (o.stags == "none") {
    src.enabled = false;
    return src;
  }
  if (o.stags == "gold") {
    const auto m = parse_model(o.model);
    src.model = model_name(m);
    src.tags = gold_stags(sentences, m, preset.oblig);
    log.info("supertags: gold " + src.model);
    return src;
  }
  if (is_checkpoint_file(o.stags)) {
    auto tagger = load_tagger(load_checkpoint(o.stags));
    std::vector<TaggerInput> xs;
    for (const auto& s : sentences) xs.push_back(tagger_input(s, tagger->config()));
    for (auto& r : tagger->tag_all(xs, o.threads)) src.tags.push_back(std::move(r.labels));
    src.model = tagger->config().labels;
    log.info("supertags: predicted by " + o.stags);
    return src;
  }
  src.tags = parse_stags(read_text_file(o.stags));
  src.model = "file";
  if (src.tags.size() != sentences.size()) {
    throw ValidationError("supertag file has " + std::to_string(src.tags.size()) +
                          " sentences, corpus has " + std::to_string(sentences.size()));
  }
  log.info("supertags: read from " + o.stags);
  return src;
}

// ---- commands -----------------------------------------------------------------------

int cmd_gen_synth(const Options& o, const Log& log) {
  ConfigMap cfg = resolve_config(o, "gen-synth", synth_config_to_map(SynthConfig{}));
  if (o.sentences) cfg["sentences"] = std::to_string(*o.sentences);
  log_resolved(log, "gen-synth", o, cfg);
  const SynthConfig sc = synth_config_from_map(cfg);
  write_output(o, serialize_conll2009(generate_synthetic(sc)));
  return kOk;
}

int cmd_extract_stags(const Options& o, const Log& log) {
  require(o.input, "--input");
  const Preset preset = preset_for(o.lang, o.config_path);
  ConfigMap cfg = resolve_config(o, "extract-stags", {{"tree_column", "gold"}});
  cfg["model"] = o.model;
  log_resolved(log, "extract-stags", o, cfg);
  const auto model = parse_model(o.model);
  const bool predicted = config_string(cfg, "tree_column", "gold") == "predicted";
  const auto sentences = read_corpus(o.input, o.skip_invalid, false, log);
  TagSequences tags;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    try {
      tags.push_back(extract_strings(tree_from_sentence(sentences[i], predicted), model, preset.oblig));
    } catch (const StructureError& e) {
      if (!o.skip_invalid) throw StructureError("sentence " + std::to_string(i + 1) + ": " + e.what());
      log.warn("skipping sentence " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  write_output(o, serialize_stags(tags));
  log.info("extracted " + model_name(model) + " supertags for " + std::to_string(tags.size()) + " sentences");
  return kOk;
}

int cmd_stag_stats(const Options& o, const Log& log, bool model_given) {
  require(o.input, "--input");
  const Preset preset = preset_for(o.lang, o.config_path);
  ConfigMap cfg = resolve_config(o, "stag-stats", {});
  log_resolved(log, "stag-stats", o, cfg);
  const auto sentences = read_corpus(o.input, o.skip_invalid, true, log);
  const auto trees = trees_of(sentences, false);
  std::vector<SupertagModel> models{SupertagModel::M0, SupertagModel::M1, SupertagModel::M2,
                                    SupertagModel::TAG};
  if (model_given) models = {parse_model(o.model)};
  Report r;
  r.corpus = std::filesystem::path(o.input).filename().string();
  r.model = "supertag-vocabulary";
  r.config = cfg;
  r.config["lang"] = o.lang;
  std::string listing;
  for (auto m : models) {
    const auto v = vocab_stats(trees, m, preset.oblig, o.threads);
    r.vocab.push_back({model_name(m), static_cast<long>(v.distinct()), v.total});
    for (const auto& [tag, n] : v.counts) listing += model_name(m) + "\t" + tag + "\t" + std::to_string(n) + "\n";
  }
  write_output(o, o.list ? listing : emit_report(r, parse_report_format(o.format)));
  return kOk;
}

int cmd_train_tagger(const Options& o, const Log& log) {
  require(o.input, "--input");
  require(o.checkpoint, "--checkpoint");
  const Preset preset = preset_for(o.lang, o.config_path);
  TaggerConfig defaults;
  defaults.d_w = preset.d_w;
  defaults.use_pos = preset.tagger_use_pos;
  if (o.task == "pos") {
    defaults.use_pos = false;
    defaults.labels = "pos";
  } else if (o.task == "supertag") {
    defaults.labels = "stag:" + o.model;
  } else {
    throw ValidationError("unknown task '" + o.task + "' (expected supertag or pos)");
  }
  ConfigMap cfg = resolve_config(o, "train-tagger", defaults.to_map());
  if (!o.pretrained.empty()) cfg["pretrained"] = o.pretrained;
  const TaggerConfig tc = TaggerConfig::from_map(cfg);
  tc.validate();
  log_resolved(log, "train-tagger", o, tc.to_map());

  const auto sentences = read_corpus(o.input, o.skip_invalid, o.task == "supertag", log);
  std::vector<TaggerInput> xs;
  std::vector<std::vector<std::string>> ys;
  for (const auto& s : sentences) {
    xs.push_back(tagger_input(s, tc));
    if (o.task == "pos") {
      std::vector<std::string> pos;
      for (const auto& t : s.tokens) pos.push_back(t.pos);
      ys.push_back(std::move(pos));
    } else {
      ys.push_back(extract_strings(tree_from_sentence(s), parse_model(o.model), preset.oblig));
    }
  }
  std::optional<EmbeddingTable> pretrained;
  if (!tc.pretrained.empty()) pretrained = load_embeddings_file(tc.pretrained);
  std::vector<EpochStats> history;
  auto model = train_tagger(
      xs, ys, tc, pretrained ? &*pretrained : nullptr,
      [&](const EpochStats& e) {
        log.info("epoch " + std::to_string(e.epoch) + " loss " + format_double(e.mean_loss));
      },
      &history);
  std::vector<std::vector<std::string>> predicted;
  for (auto& r : model->tag_all(xs, o.threads)) predicted.push_back(std::move(r.labels));
  const double acc = tagging_score(ys, predicted).accuracy();
  ConfigMap meta{{"epochs", std::to_string(tc.schedule.epochs)},
                 {"seed", std::to_string(tc.seed)},
                 {"train_accuracy", format_double(acc)},
                 {"train_sentences", std::to_string(xs.size())}};
  if (!history.empty()) meta["final_loss"] = format_double(history.back().mean_loss);
  save_checkpoint(o.checkpoint, model->to_checkpoint(meta));
  log.info("training accuracy " + format_double(acc) + "; wrote " + o.checkpoint);
  return kOk;
}

int cmd_tag(const Options& o, const Log& log) {
  require(o.input, "--input");
  require(o.checkpoint, "--checkpoint");
  auto tagger = load_tagger(load_checkpoint(o.checkpoint));
  ConfigMap cfg = tagger->config().to_map();
  log_resolved(log, "tag", o, cfg);
  auto sentences = read_corpus(o.input, o.skip_invalid, false, log);
  std::vector<TaggerInput> xs;
  for (const auto& s : sentences) xs.push_back(tagger_input(s, tagger->config()));
  auto results = tagger->tag_all(xs, o.threads);
  if (tagger->config().labels == "pos") {
    for (std::size_t i = 0; i < sentences.size(); ++i) {
      for (std::size_t t = 0; t < sentences[i].size(); ++t) sentences[i].tokens[t].ppos = results[i].labels[t];
    }
    write_output(o, serialize_conll2009(sentences));
  } else {
    TagSequences tags;
    for (auto& r : results) tags.push_back(std::move(r.labels));
    write_output(o, serialize_stags(tags));
  }
  log.info("tagged " + std::to_string(sentences.size()) + " sentences");
  return kOk;
}

int cmd_train_srl(const Options& o, const Log& log) {
  require(o.input, "--input");
  require(o.checkpoint, "--checkpoint");
  const Preset preset = preset_for(o.lang, o.config_path);
  SrlConfig defaults;
  defaults.d_w = preset.d_w;
  ConfigMap cfg = resolve_config(o, "train-srl", defaults.to_map());
  if (!o.pretrained.empty()) cfg["pretrained"] = o.pretrained;
  const auto sentences = read_corpus(o.input, o.skip_invalid, o.stags == "gold", log);
  StagSource stags = resolve_stags(o, sentences, preset, log);
  cfg["use_stags"] = stags.enabled ? cfg["use_stags"] : "false";
  if (stags.enabled) cfg["stag_model"] = stags.model;
  const SrlConfig sc = SrlConfig::from_map(cfg);
  sc.validate();
  log_resolved(log, "train-srl", o, sc.to_map());

  std::vector<SrlInput> xs;
  FrameCorpus frames;
  const bool plemma = sc.lemma_column == "predicted";
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    xs.push_back(srl_input(sentences[i], sc, sc.use_stags ? &stags.tags[i] : nullptr));
    frames.push_back(frames_from_sentence(sentences[i], plemma));
  }
  std::optional<EmbeddingTable> pretrained;
  if (!sc.pretrained.empty()) pretrained = load_embeddings_file(sc.pretrained);
  std::vector<EpochStats> history;
  auto model = train_srl(
      xs, frames, sc, pretrained ? &*pretrained : nullptr,
      [&](const EpochStats& e) {
        log.info("epoch " + std::to_string(e.epoch) + " loss " + format_double(e.mean_loss));
      },
      &history);
  const SrlScore s = srl_prf(frames, model->label_all(xs, o.threads));
  ConfigMap meta{{"epochs", std::to_string(sc.schedule.epochs)},
                 {"seed", std::to_string(sc.seed)},
                 {"train_f1", format_double(s.f1())},
                 {"train_sentences", std::to_string(xs.size())}};
  if (!history.empty()) meta["final_loss"] = format_double(history.back().mean_loss);
  save_checkpoint(o.checkpoint, model->to_checkpoint(meta));
  log.info("training F1 " + format_double(s.f1()) + "; wrote " + o.checkpoint);
  return kOk;
}

int cmd_label(const Options& o, const Log& log) {
  require(o.input, "--input");
  require(o.checkpoint, "--checkpoint");
  const Preset preset = preset_for(o.lang, o.config_path);
  auto model = load_srl(load_checkpoint(o.checkpoint));
  ConfigMap cfg = model->config().to_map();
  cfg["predicates"] = o.predicates;
  cfg["stags"] = o.stags;
  log_resolved(log, "label", o, cfg);
  auto sentences = read_corpus(o.input, o.skip_invalid, o.stags == "gold", log);
  if (o.predicates != "gold") {
    apply_external_predicates(sentences, read_conll2009_file(o.predicates));
  }
  StagSource stags;
  stags.enabled = false;
  if (model->config().use_stags) {
    if (o.stags == "none") throw ValidationError("model was trained with supertags; --stags none is not allowed");
    stags = resolve_stags(o, sentences, preset, log);
  }
  std::vector<SrlInput> xs;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    xs.push_back(srl_input(sentences[i], model->config(), stags.enabled ? &stags.tags[i] : nullptr));
  }
  const auto frames = model->label_all(xs, o.threads);
  for (std::size_t i = 0; i < sentences.size(); ++i) apply_frames(sentences[i], frames[i]);
  write_output(o, serialize_conll2009(sentences));
  log.info("labeled " + std::to_string(sentences.size()) + " sentences");
  return kOk;
}

int cmd_evaluate(const Options& o, const Log& log) {
  require(o.input, "--input");
  require(o.gold, "--gold");
  const Preset preset = preset_for(o.lang, o.config_path);
  ConfigMap cfg = resolve_config(o, "evaluate", {});
  cfg["mode"] = o.sense ? "arguments+sense" : "arguments";
  log_resolved(log, "evaluate", o, cfg);
  const auto gold = read_conll2009_file(o.gold);
  const auto pred = read_conll2009_file(o.input);
  if (gold.size() != pred.size()) {
    throw ValidationError("gold has " + std::to_string(gold.size()) + " sentences, predictions " +
                          std::to_string(pred.size()));
  }
  FrameCorpus gf, pf;
  std::vector<std::size_t> lengths;
  std::vector<std::vector<std::string>> pos;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold[i].size() != pred[i].size()) {
      throw ValidationError("sentence " + std::to_string(i + 1) + " differs in length between gold and predictions");
    }
    gf.push_back(frames_from_sentence(gold[i]));
    pf.push_back(frames_from_sentence(pred[i]));
    lengths.push_back(gold[i].size());
    std::vector<std::string> p;
    for (const auto& t : gold[i].tokens) p.push_back(t.pos.empty() ? t.ppos : t.pos);
    pos.push_back(std::move(p));
  }
  Report r;
  r.corpus = std::filesystem::path(o.gold).filename().string();
  r.model = o.checkpoint.empty() ? std::filesystem::path(o.input).filename().string()
                                 : std::filesystem::path(o.checkpoint).filename().string();
  r.mode = cfg["mode"];
  r.config = cfg;
  r.srl = srl_prf(gf, pf, o.sense ? ScoreMode::ArgumentsAndSense : ScoreMode::Arguments);
  r.breakdowns.push_back(breakdown_by_length(gf, pf, lengths));
  r.breakdowns.push_back(breakdown_by_role(gf, pf, pos, preset.oblig.verb_pos_prefixes));
  if (o.stags != "gold" && o.stags != "none") {
    const auto model = parse_model(o.model);
    const TagSequences gold_tags = gold_stags(gold, model, preset.oblig);
    std::set<std::string> known;
    const std::set<std::string>* known_ptr = nullptr;
    if (is_checkpoint_file(o.stags)) {
      auto tagger = load_tagger(load_checkpoint(o.stags));
      known.insert(tagger->label_set().labels().begin(), tagger->label_set().labels().end());
      known_ptr = &known;
    }
    const StagSource src = resolve_stags(o, gold, preset, log);
    r.tagging = tagging_score(gold_tags, src.tags, known_ptr);
  }
  write_output(o, emit_report(r, parse_report_format(o.format)));
  log.info("F1 " + format_double(r.srl->f1()));
  return kOk;
}

int cmd_report(const Options& o, const Log& log) {
  require(o.input, "--input");
  log_resolved(log, "report", o, {{"format", o.format}});
  const Report r = parse_report_jsonl(read_text_file(o.input));
  write_output(o, emit_report(r, parse_report_format(o.format)));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dependency supertag extraction, supertagging and supertag-augmented SRL"};
  app.require_subcommand(1);
  Options o;
  Log log;

  auto add_common = [&](CLI::App* c) {
    c->add_option("--config", o.config_path, "key = value config file with [common] and per-command sections");
    c->add_option("--lang", o.lang, "language preset")->check(CLI::IsMember({"en", "es"}));
    c->add_option("--seed", o.seed, "random seed");
    c->add_option("--threads", o.threads, "worker threads (1 = bit-reproducible)")->check(CLI::PositiveNumber);
    c->add_flag("--skip-invalid", o.skip_invalid, "drop sentences that fail validation instead of aborting");
  };
  auto add_model = [&](CLI::App* c) {
    return c->add_option("--model", o.model, "supertag model: 0, 1, 2 or tag")
        ->check(CLI::IsMember({"0", "1", "2", "tag", "TAG"}));
  };

  auto* gen = app.add_subcommand("gen-synth", "generate a synthetic treebank");
  add_common(gen);
  gen->add_option("--sentences", o.sentences, "number of sentences");
  gen->add_option("--output", o.output, "output CoNLL-2009 file (stdout if omitted)");

  auto* ext = app.add_subcommand("extract-stags", "extract supertags from gold trees");
  add_common(ext);
  add_model(ext);
  ext->add_option("--input", o.input, "CoNLL-2009 input")->required();
  ext->add_option("--output", o.output, "output .stags file (stdout if omitted)");

  auto* stats = app.add_subcommand("stag-stats", "supertag vocabulary statistics");
  add_common(stats);
  auto* stats_model = add_model(stats);
  stats->add_option("--input", o.input, "CoNLL-2009 input")->required();
  stats->add_option("--output", o.output, "output file (stdout if omitted)");
  stats->add_option("--format", o.format, "report format")->check(CLI::IsMember({"jsonl", "csv"}));
  stats->add_flag("--list", o.list, "list every tag with its count instead of a report");

  auto* ttag = app.add_subcommand("train-tagger", "train a supertagger or POS tagger");
  add_common(ttag);
  add_model(ttag);
  ttag->add_option("--input", o.input, "training CoNLL-2009 file")->required();
  ttag->add_option("--checkpoint", o.checkpoint, "output checkpoint")->required();
  ttag->add_option("--task", o.task, "supertag or pos")->check(CLI::IsMember({"supertag", "pos"}));
  ttag->add_option("--epochs", o.epochs, "training epochs");
  ttag->add_option("--pretrained", o.pretrained, "word embedding text file");

  auto* tag = app.add_subcommand("tag", "tag sentences with a trained tagger");
  add_common(tag);
  tag->add_option("--input", o.input, "CoNLL-2009 input")->required();
  tag->add_option("--checkpoint", o.checkpoint, "tagger checkpoint")->required();
  tag->add_option("--output", o.output, ".stags (supertagger) or CoNLL (POS tagger) output");

  auto* tsrl = app.add_subcommand("train-srl", "train the role labeler");
  add_common(tsrl);
  add_model(tsrl);
  tsrl->add_option("--input", o.input, "training CoNLL-2009 file with frames")->required();
  tsrl->add_option("--checkpoint", o.checkpoint, "output checkpoint")->required();
  tsrl->add_option("--stags", o.stags, "gold, none, a .stags file or a tagger checkpoint");
  tsrl->add_option("--epochs", o.epochs, "training epochs");
  tsrl->add_option("--pretrained", o.pretrained, "word embedding text file");

  auto* lab = app.add_subcommand("label", "label semantic roles");
  add_common(lab);
  add_model(lab);
  lab->add_option("--input", o.input, "CoNLL-2009 input")->required();
  lab->add_option("--checkpoint", o.checkpoint, "SRL checkpoint")->required();
  lab->add_option("--predicates", o.predicates, "gold or a CoNLL-2009 file with predicted predicates");
  lab->add_option("--stags", o.stags, "gold, none, a .stags file or a tagger checkpoint");
  lab->add_option("--output", o.output, "output CoNLL-2009 file (stdout if omitted)");

  auto* ev = app.add_subcommand("evaluate", "score predictions against gold");
  add_common(ev);
  add_model(ev);
  ev->add_option("--input", o.input, "predicted CoNLL-2009 file")->required();
  ev->add_option("--gold", o.gold, "gold CoNLL-2009 file")->required();
  ev->add_option("--checkpoint", o.checkpoint, "model checkpoint (recorded in the report)");
  ev->add_option("--stags", o.stags, "predicted supertags to score (.stags file or tagger checkpoint)");
  ev->add_option("--format", o.format, "report format")->check(CLI::IsMember({"jsonl", "csv"}));
  ev->add_option("--output", o.output, "report file (stdout if omitted)");
  ev->add_flag("--sense", o.sense, "also score predicate senses");

  auto* rep = app.add_subcommand("report", "convert a JSON-lines report");
  add_common(rep);
  rep->add_option("--input", o.input, "JSON-lines report")->required();
  rep->add_option("--format", o.format, "output format")->check(CLI::IsMember({"jsonl", "csv"}));
  rep->add_option("--output", o.output, "output file (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(kUsage, "usage", e.what());
  }

  try {
    if (*gen) return cmd_gen_synth(o, log);
    if (*ext) return cmd_extract_stags(o, log);
    if (*stats) return cmd_stag_stats(o, log, stats_model->count() > 0);
    if (*ttag) return cmd_train_tagger(o, log);
    if (*tag) return cmd_tag(o, log);
    if (*tsrl) return cmd_train_srl(o, log);
    if (*lab) return cmd_label(o, log);
    if (*ev) return cmd_evaluate(o, log);
    if (*rep) return cmd_report(o, log);
  } catch (const CLI::ParseError& e) {
    return fail(kUsage, "usage", e.what());
  } catch (const IoError& e) {
    return fail(kIo, "io", e.what());
  } catch (const FormatError& e) {
    return fail(kFormat, "format", e.what());
  } catch (const ParseError& e) {
    return fail(kData, "parse", e.what());
  } catch (const ValidationError& e) {
    return fail(kData, "validation", e.what());
  } catch (const StructureError& e) {
    return fail(kData, "structure", e.what());
  } catch (const std::exception& e) {
    return fail(kOther, "internal", e.what());
  }
  return kOther;
}
