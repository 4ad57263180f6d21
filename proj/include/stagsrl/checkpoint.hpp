#pragma once

// Versioned binary model file. Layout (all integers little-endian):
//
//   magic      8 bytes  "STAGSRL\0"
//   version    u32
//   config     str      canonical "key = value" text (includes kind)
//   metadata   str      canonical "key = value" text
//   n_vocabs   u32, then per vocabulary:
//                name str, n u32, n x (symbol str, count u64)
//   n_params   u32, then per parameter:
//                name str, rank u32, rank x u32 dims, trainable u8,
//                prod(dims) x f32 values
//
// where str = u32 byte length followed by the bytes. See docs/checkpoint.md.

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "stagsrl/autodiff.hpp"
#include "stagsrl/config.hpp"

namespace stagsrl {

inline constexpr std::uint32_t kCheckpointVersion = 1;
inline constexpr char kCheckpointMagic[8] = {'S', 'T', 'A', 'G', 'S', 'R', 'L', '\0'};

struct NamedVocab {
  std::string name;
  std::vector<std::pair<std::string, long>> entries;

  bool operator==(const NamedVocab&) const = default;
};

struct NamedTensor {
  std::string name;
  Tensor value;
  bool trainable = true;

  bool operator==(const NamedTensor&) const = default;
};

struct Checkpoint {
  std::uint32_t version = kCheckpointVersion;
  ConfigMap config;    // must contain "kind"
  ConfigMap metadata;  // epoch, seed, scores, ...
  std::vector<NamedVocab> vocabs;
  std::vector<NamedTensor> params;

  std::string kind() const;
  const NamedVocab& vocab(const std::string& name) const;  // FormatError if missing
  bool operator==(const Checkpoint&) const = default;
};

// Values are rounded to float32 on write.
std::string serialize_checkpoint(const Checkpoint& c);
// FormatError on bad magic, unsupported version or truncation.
Checkpoint parse_checkpoint(std::string_view bytes);

void save_checkpoint(const std::string& path, const Checkpoint& c);
Checkpoint load_checkpoint(const std::string& path);
bool has_checkpoint_magic(std::string_view bytes);
bool is_checkpoint_file(const std::string& path);

// Rounds every parameter value to the nearest float32, so in-memory inference
// matches inference from the saved file exactly.
void round_to_float32(ParameterStore& store);

std::vector<NamedTensor> export_parameters(const ParameterStore& store);
void import_parameters(ParameterStore& store, const std::vector<NamedTensor>& params);

}  // namespace stagsrl
