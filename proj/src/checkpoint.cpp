#include "stagsrl/checkpoint.hpp"

#include <bit>
#include <type_traits>
#include <cstring>
#include <fstream>

#include "stagsrl/conll_io.hpp"
#include "stagsrl/error.hpp"

namespace stagsrl {


namespace {

template <typename T>
void put_le(std::string& out, T v) {
  static_assert(std::is_unsigned_v<T>);
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  }
}

void put_str(std::string& out, std::string_view s) {
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(s.size()));
  out.append(s);
}

class Reader {
 public:
  explicit Reader(std::string_view b) : bytes_(b) {}

  template <typename T>
  T get() {
    need(sizeof(T));
    T v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      v |= static_cast<T>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    }
    pos_ += sizeof(T);
    return v;
  }

  std::string str() {
    const auto n = get<std::uint32_t>();
    need(n);
    std::string s(bytes_.substr(pos_, n));
    pos_ += n;
    return s;
  }

  bool done() const { return pos_ == bytes_.size(); }

 private:
  void need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) throw FormatError("checkpoint truncated at byte " + std::to_string(pos_));
  }

  std::string_view bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string Checkpoint::kind() const {
  auto it = config.find("kind");
  return it == config.end() ? std::string() : it->second;
}

const NamedVocab& Checkpoint::vocab(const std::string& name) const {
  for (const auto& v : vocabs) {
    if (v.name == name) return v;
  }
  throw FormatError("checkpoint has no vocabulary '" + name + "'");
}

std::string serialize_checkpoint(const Checkpoint& c) {
  std::string out(kCheckpointMagic, sizeof(kCheckpointMagic));
  put_le<std::uint32_t>(out, c.version);
  put_str(out, canonical_text(c.config));
  put_str(out, canonical_text(c.metadata));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(c.vocabs.size()));
  for (const auto& v : c.vocabs) {
    put_str(out, v.name);
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(v.entries.size()));
    for (const auto& [sym, n] : v.entries) {
      put_str(out, sym);
      put_le<std::uint64_t>(out, static_cast<std::uint64_t>(n));
    }
  }
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(c.params.size()));
  for (const auto& p : c.params) {
    put_str(out, p.name);
    put_le<std::uint32_t>(out, 2);
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(p.value.rows()));
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(p.value.cols()));
    out.push_back(p.trainable ? 1 : 0);
    for (double v : p.value.values()) put_le<std::uint32_t>(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
  }
  return out;
}

bool has_checkpoint_magic(std::string_view bytes) {
  return bytes.size() >= sizeof(kCheckpointMagic) &&
         std::memcmp(bytes.data(), kCheckpointMagic, sizeof(kCheckpointMagic)) == 0;
}

Checkpoint parse_checkpoint(std::string_view bytes) {
  if (!has_checkpoint_magic(bytes)) throw FormatError("not a checkpoint (bad magic bytes)");
  Reader r(bytes.substr(sizeof(kCheckpointMagic)));
  Checkpoint c;
  c.version = r.get<std::uint32_t>();
  if (c.version != kCheckpointVersion) {
    throw FormatError("unsupported checkpoint version " + std::to_string(c.version) +
                      " (expected " + std::to_string(kCheckpointVersion) + ")");
  }
  try {
    c.config = parse_canonical_text(r.str());
    c.metadata = parse_canonical_text(r.str());
  } catch (const ParseError& e) {
    throw FormatError(std::string("checkpoint config block: ") + e.what());
  }
  const auto n_vocabs = r.get<std::uint32_t>();
  for (std::uint32_t i = 0; i < n_vocabs; ++i) {
    NamedVocab v;
    v.name = r.str();
    const auto n = r.get<std::uint32_t>();
    for (std::uint32_t k = 0; k < n; ++k) {
      std::string sym = r.str();
      v.entries.emplace_back(std::move(sym), static_cast<long>(r.get<std::uint64_t>()));
    }
    c.vocabs.push_back(std::move(v));
  }
  const auto n_params = r.get<std::uint32_t>();
  for (std::uint32_t i = 0; i < n_params; ++i) {
    NamedTensor p;
    p.name = r.str();
    const auto rank = r.get<std::uint32_t>();
    if (rank != 2) throw FormatError("parameter '" + p.name + "' has unsupported rank " + std::to_string(rank));
    const auto rows = r.get<std::uint32_t>();
    const auto cols = r.get<std::uint32_t>();
    p.trainable = r.get<std::uint8_t>() != 0;
    std::vector<double> data(static_cast<std::size_t>(rows) * cols);
    for (double& d : data) d = static_cast<double>(std::bit_cast<float>(r.get<std::uint32_t>()));
    p.value = Tensor(rows, cols, std::move(data));
    c.params.push_back(std::move(p));
  }
  if (!r.done()) throw FormatError("trailing bytes after checkpoint parameters");
  if (c.kind().empty()) throw FormatError("checkpoint config lacks 'kind'");
  return c;
}

void save_checkpoint(const std::string& path, const Checkpoint& c) {
  write_text_file(path, serialize_checkpoint(c));
}

Checkpoint load_checkpoint(const std::string& path) { return parse_checkpoint(read_text_file(path)); }

bool is_checkpoint_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  char buf[sizeof(kCheckpointMagic)] = {};
  if (!in.read(buf, sizeof(buf))) return false;
  return has_checkpoint_magic(std::string_view(buf, sizeof(buf)));
}

void round_to_float32(ParameterStore& store) {
  for (Parameter* p : store.all()) {
    for (double& v : p->value().values()) v = static_cast<double>(static_cast<float>(v));
  }
}

std::vector<NamedTensor> export_parameters(const ParameterStore& store) {
  std::vector<NamedTensor> out;
  for (const Parameter* p : store.all()) out.push_back({p->name(), p->value(), p->trainable()});
  return out;
}

void import_parameters(ParameterStore& store, const std::vector<NamedTensor>& params) {
  for (const auto& p : params) store.add(p.name, p.value, p.trainable);
}

}  // namespace stagsrl
