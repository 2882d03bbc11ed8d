#pragma once

#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>

#include "twsent/nn/core.hpp"

namespace twsent::nn {

// Versioned binary checkpoint: header, architecture descriptor string, then
// each parameter tensor as little-endian 32-bit floats in declaration order.
inline constexpr std::uint32_t kCheckpointMagic = 0x54574e4e;  // "TWNN"
inline constexpr std::uint32_t kCheckpointVersion = 1;

inline void save_checkpoint(const ParamList<float>& params, const std::string& descriptor,
                            const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("checkpoint: cannot write " + path);
  auto put32 = [&](std::uint32_t v) { out.write(reinterpret_cast<const char*>(&v), 4); };
  auto put64 = [&](std::uint64_t v) { out.write(reinterpret_cast<const char*>(&v), 8); };
  put32(kCheckpointMagic);
  put32(kCheckpointVersion);
  put32(static_cast<std::uint32_t>(descriptor.size()));
  out.write(descriptor.data(), static_cast<std::streamsize>(descriptor.size()));
  put32(static_cast<std::uint32_t>(params.tensors.size()));
  for (const auto& t : params.tensors) {
    put32(static_cast<std::uint32_t>(t.name.size()));
    out.write(t.name.data(), static_cast<std::streamsize>(t.name.size()));
    put64(t.size);
    out.write(reinterpret_cast<const char*>(t.data),
              static_cast<std::streamsize>(t.size * sizeof(float)));
  }
  if (!out) throw std::runtime_error("checkpoint: write failed for " + path);
}

// Reads the descriptor without consuming tensors.
inline std::string read_checkpoint_descriptor(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("checkpoint: cannot open " + path);
  std::uint32_t magic = 0, version = 0, dlen = 0;
  in.read(reinterpret_cast<char*>(&magic), 4);
  if (magic != kCheckpointMagic) throw std::runtime_error("checkpoint: bad magic in " + path);
  in.read(reinterpret_cast<char*>(&version), 4);
  if (version != kCheckpointVersion) throw std::runtime_error("checkpoint: unsupported version");
  in.read(reinterpret_cast<char*>(&dlen), 4);
  std::string descriptor(dlen, '\0');
  in.read(descriptor.data(), dlen);
  if (!in) throw std::runtime_error("checkpoint: truncated header in " + path);
  return descriptor;
}

// Fills an already-built model's tensors; shapes must match exactly.
inline void load_checkpoint(ParamList<float>& params, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("checkpoint: cannot open " + path);
  std::uint32_t magic = 0, version = 0, dlen = 0, count = 0;
  in.read(reinterpret_cast<char*>(&magic), 4);
  if (magic != kCheckpointMagic) throw std::runtime_error("checkpoint: bad magic in " + path);
  in.read(reinterpret_cast<char*>(&version), 4);
  if (version != kCheckpointVersion) throw std::runtime_error("checkpoint: unsupported version");
  in.read(reinterpret_cast<char*>(&dlen), 4);
  in.ignore(dlen);
  in.read(reinterpret_cast<char*>(&count), 4);
  if (count != params.tensors.size())
    throw std::runtime_error("checkpoint: tensor count mismatch in " + path);
  for (auto& t : params.tensors) {
    std::uint32_t nlen = 0;
    in.read(reinterpret_cast<char*>(&nlen), 4);
    std::string name(nlen, '\0');
    in.read(name.data(), nlen);
    std::uint64_t size = 0;
    in.read(reinterpret_cast<char*>(&size), 8);
    if (name != t.name || size != t.size)
      throw std::runtime_error("checkpoint: tensor mismatch at " + t.name);
    in.read(reinterpret_cast<char*>(t.data), static_cast<std::streamsize>(size * sizeof(float)));
  }
  if (!in) throw std::runtime_error("checkpoint: truncated file " + path);
}

}  // namespace twsent::nn
