#include "stagsrl/supertags.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <future>

#include "stagsrl/error.hpp"

namespace stagsrl {

std::string model_name(SupertagModel m) {
  switch (m) {
    case SupertagModel::M0: return "0";
    case SupertagModel::M1: return "1";
    case SupertagModel::M2: return "2";
    case SupertagModel::TAG: return "tag";
  }
  return "?";
}

SupertagModel parse_model(std::string_view s) {
  std::string lower;
  for (char c : s) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (lower == "0" || lower == "m0") return SupertagModel::M0;
  if (lower == "1" || lower == "m1") return SupertagModel::M1;
  if (lower == "2" || lower == "m2") return SupertagModel::M2;
  if (lower == "tag") return SupertagModel::TAG;
  throw ParseError("unknown supertag model '" + std::string(s) + "' (expected 0, 1, 2 or tag)");
}

bool ObligatorySet::is_verb(const std::string& pos) const {
  for (const auto& p : verb_pos_prefixes) {
    if (pos.compare(0, p.size(), p) == 0) return true;
  }
  return false;
}

ObligatorySet ObligatorySet::english() { return {{"SBJ", "OBJ", "PRD", "VC"}, {"V"}, false}; }

ObligatorySet ObligatorySet::spanish() { return {{"dc", "suj", "cd", "cpred"}, {"v"}, false}; }

namespace {

void check_relation(const DepTree& tree, int i) {
  const auto& rel = tree.relation(i);
  if (tree.head(i) == 0) return;
  if (rel.empty()) {
    throw ValidationError("token " + std::to_string(i) + ": empty dependency relation");
  }
  if (rel.find_first_of("/+_") != std::string::npos) {
    throw ValidationError("token " + std::to_string(i) + ": relation '" + rel +
                          "' cannot be written in a supertag");
  }
}

HeadPart arc_head(const DepTree& tree, int i) {
  HeadPart h;
  if (tree.head(i) == 0) {
    h.kind = HeadPart::Kind::Root;
  } else {
    h.kind = HeadPart::Kind::Arc;
    h.relation = tree.relation(i);
    h.direction = tree.head(i) < i ? Side::L : Side::R;
  }
  return h;
}

char side_char(Side s) { return s == Side::L ? 'L' : 'R'; }

Side parse_side(std::string_view s, std::string_view whole) {
  if (s == "L") return Side::L;
  if (s == "R") return Side::R;
  throw ParseError("supertag '" + std::string(whole) + "': unknown direction '" + std::string(s) +
                   "'");
}

std::pair<std::string, Side> parse_arc(std::string_view item, std::string_view whole) {
  auto slash = item.rfind('/');
  if (slash == std::string_view::npos) {
    throw ParseError("supertag '" + std::string(whole) + "': expected REL/DIR, got '" +
                     std::string(item) + "'");
  }
  auto rel = item.substr(0, slash);
  if (rel.empty()) throw ParseError("supertag '" + std::string(whole) + "': empty relation");
  return {std::string(rel), parse_side(item.substr(slash + 1), whole)};
}

}  // namespace

std::vector<Supertag> extract(const DepTree& tree, SupertagModel model, const ObligatorySet& oblig) {
  if (model == SupertagModel::TAG && oblig.verb_pos_prefixes.empty()) {
    throw ValidationError("model TAG requires verb POS prefixes");
  }
  const int n = tree.size();
  std::vector<std::vector<Dependent>> deps(static_cast<std::size_t>(n + 1));
  for (int j = 1; j <= n; ++j) {
    check_relation(tree, j);
    int h = tree.head(j);
    if (h > 0) deps[static_cast<std::size_t>(h)].push_back({j, tree.relation(j), j < h ? Side::L : Side::R});
  }

  std::vector<Supertag> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) {
    const auto& mine = deps[static_cast<std::size_t>(i)];
    Supertag t;
    t.model = model;
    DirFlags all_flags;
    DirFlags optional_flags;
    std::vector<ObligatoryDep> obl;
    for (const auto& d : mine) {
      (d.side == Side::L ? all_flags.left : all_flags.right) = true;
      if (oblig.is_obligatory(d.relation)) {
        obl.push_back({d.relation, d.side});
      } else {
        (d.side == Side::L ? optional_flags.left : optional_flags.right) = true;
      }
    }
    switch (model) {
      case SupertagModel::M0:
        t.head = arc_head(tree, i);
        break;
      case SupertagModel::M1:
        t.head = arc_head(tree, i);
        t.deps.flags = all_flags;
        break;
      case SupertagModel::M2:
        t.head = arc_head(tree, i);
        if (obl.empty()) {
          t.deps.flags = all_flags;
        } else {
          t.deps.obligatory = std::move(obl);
          if (oblig.m2_optional_directions) t.deps.flags = optional_flags;
        }
        break;
      case SupertagModel::TAG:
        if (oblig.is_obligatory(tree.relation(i))) {
          t.head.kind = HeadPart::Kind::Omitted;
        } else {
          t.head = arc_head(tree, i);
        }
        if (oblig.is_verb(tree.pos(i))) t.deps.obligatory = std::move(obl);
        break;
    }
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<std::string> extract_strings(const DepTree& tree, SupertagModel model,
                                         const ObligatorySet& oblig) {
  std::vector<std::string> out;
  for (const auto& t : extract(tree, model, oblig)) out.push_back(serialize_tag(t));
  return out;
}

std::string serialize_tag(const Supertag& t) {
  std::string out;
  switch (t.head.kind) {
    case HeadPart::Kind::Root: out = "ROOT"; break;
    case HeadPart::Kind::Omitted: out = "-"; break;
    case HeadPart::Kind::Arc:
      out = t.head.relation;
      out += '/';
      out += side_char(t.head.direction);
      break;
  }
  if (!t.deps.obligatory.empty()) {
    out += '+';
    for (std::size_t k = 0; k < t.deps.obligatory.size(); ++k) {
      if (k) out += '_';
      out += t.deps.obligatory[k].relation;
      out += '/';
      out += side_char(t.deps.obligatory[k].side);
    }
  }
  if (t.deps.flags.any()) {
    out += '+';
    if (t.deps.flags.left && t.deps.flags.right) {
      out += "L_R";
    } else {
      out += t.deps.flags.left ? 'L' : 'R';
    }
  }
  return out;
}

Supertag parse_tag(std::string_view s, SupertagModel model) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    auto p = s.find('+', start);
    parts.push_back(s.substr(start, p == std::string_view::npos ? p : p - start));
    if (p == std::string_view::npos) break;
    start = p + 1;
  }
  if (parts.size() > 3) throw ParseError("supertag '" + std::string(s) + "': too many '+' parts");
  Supertag t;
  t.model = model;
  const auto head = parts[0];
  if (head == "ROOT") {
    t.head.kind = HeadPart::Kind::Root;
  } else if (head == "-") {
    t.head.kind = HeadPart::Kind::Omitted;
  } else if (head.empty()) {
    throw ParseError("supertag '" + std::string(s) + "': empty head part");
  } else {
    auto [rel, side] = parse_arc(head, s);
    t.head.kind = HeadPart::Kind::Arc;
    t.head.relation = std::move(rel);
    t.head.direction = side;
  }
  bool seen_flags = false;
  for (std::size_t k = 1; k < parts.size(); ++k) {
    const auto part = parts[k];
    if (part.empty()) throw ParseError("supertag '" + std::string(s) + "': '+' with empty dep part");
    if (part.find('/') != std::string_view::npos) {
      if (k != 1) throw ParseError("supertag '" + std::string(s) + "': obligatory list out of place");
      std::size_t b = 0;
      while (true) {
        auto u = part.find('_', b);
        auto [rel, side] = parse_arc(part.substr(b, u == std::string_view::npos ? u : u - b), s);
        t.deps.obligatory.push_back({std::move(rel), side});
        if (u == std::string_view::npos) break;
        b = u + 1;
      }
    } else {
      if (seen_flags) throw ParseError("supertag '" + std::string(s) + "': repeated direction flags");
      seen_flags = true;
      if (part == "L") {
        t.deps.flags.left = true;
      } else if (part == "R") {
        t.deps.flags.right = true;
      } else if (part == "L_R") {
        t.deps.flags.left = t.deps.flags.right = true;
      } else {
        throw ParseError("supertag '" + std::string(s) + "': unknown direction flags '" +
                         std::string(part) + "'");
      }
    }
  }
  const auto fail = [&](const char* why) {
    throw ParseError("supertag '" + std::string(s) + "' invalid for model " + model_name(model) +
                     ": " + why);
  };
  if (t.head.kind == HeadPart::Kind::Omitted && model != SupertagModel::TAG) {
    fail("omitted head only exists in model TAG");
  }
  switch (model) {
    case SupertagModel::M0:
      if (!t.deps.empty()) fail("model 0 has no dependent part");
      break;
    case SupertagModel::M1:
      if (!t.deps.obligatory.empty()) fail("model 1 has no obligatory list");
      break;
    case SupertagModel::M2:
      break;
    case SupertagModel::TAG:
      if (t.deps.flags.any()) fail("model TAG has no direction flags");
      break;
  }
  return t;
}

Supertag project(const Supertag& t, SupertagModel target) {
  const auto from = t.model;
  const bool ok = (from == SupertagModel::M1 && target == SupertagModel::M0) ||
                  (from == SupertagModel::M2 &&
                   (target == SupertagModel::M1 || target == SupertagModel::M0));
  if (!ok) {
    throw std::invalid_argument("cannot project model " + model_name(from) + " onto model " +
                                model_name(target));
  }
  Supertag out;
  out.model = target;
  out.head = t.head;
  if (target == SupertagModel::M1) {
    out.deps.flags = t.deps.flags;
    for (const auto& d : t.deps.obligatory) {
      (d.side == Side::L ? out.deps.flags.left : out.deps.flags.right) = true;
    }
  }
  return out;
}

bool consistent(const Supertag& t, const DepTree& tree, int i, const ObligatorySet& oblig) {
  if (i < 1 || i > tree.size()) return false;
  return extract(tree, t.model, oblig)[static_cast<std::size_t>(i - 1)] == t;
}

void SupertagVocab::merge(const SupertagVocab& other) {
  for (const auto& [tag, c] : other.counts) counts[tag] += c;
  total += other.total;
}

SupertagVocab vocab_stats(const std::vector<DepTree>& corpus, SupertagModel model,
                          const ObligatorySet& oblig, unsigned threads) {
  const auto count_range = [&](std::size_t lo, std::size_t hi) {
    SupertagVocab v;
    v.model = model;
    for (std::size_t s = lo; s < hi; ++s) {
      for (const auto& tag : extract_strings(corpus[s], model, oblig)) {
        ++v.counts[tag];
        ++v.total;
      }
    }
    return v;
  };
  threads = std::max(1u, threads);
  if (threads == 1 || corpus.size() < 2 * threads) return count_range(0, corpus.size());
  std::vector<std::future<SupertagVocab>> parts;
  const std::size_t chunk = (corpus.size() + threads - 1) / threads;
  for (std::size_t lo = 0; lo < corpus.size(); lo += chunk) {
    parts.push_back(std::async(std::launch::async, count_range, lo, std::min(corpus.size(), lo + chunk)));
  }
  SupertagVocab out;
  out.model = model;
  for (auto& p : parts) out.merge(p.get());
  return out;
}

std::string serialize_stags(const TagSequences& tags) {
  std::string out;
  for (std::size_t s = 0; s < tags.size(); ++s) {
    for (std::size_t i = 0; i < tags[s].size(); ++i) {
      out += std::to_string(i + 1);
      out += '\t';
      out += tags[s][i];
      out += '\n';
    }
    out += '\n';
  }
  return out;
}

TagSequences parse_stags(std::string_view text) {
  TagSequences out;
  std::vector<std::string> current;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  auto flush = [&] {
    if (!current.empty()) out.push_back(std::move(current));
    current.clear();
  };
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? nl : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) {
      flush();
      continue;
    }
    auto tab = line.find('\t');
    if (tab == std::string_view::npos || tab + 1 >= line.size()) {
      throw ParseError("stags line " + std::to_string(line_no) + ": expected 'index<TAB>tag'");
    }
    std::size_t idx = 0;
    auto [ptr, ec] = std::from_chars(line.data(), line.data() + tab, idx);
    if (ec != std::errc() || ptr != line.data() + tab || idx != current.size() + 1) {
      throw ParseError("stags line " + std::to_string(line_no) + ": expected index " +
                       std::to_string(current.size() + 1));
    }
    current.emplace_back(line.substr(tab + 1));
  }
  flush();
  return out;
}

}  // namespace stagsrl
