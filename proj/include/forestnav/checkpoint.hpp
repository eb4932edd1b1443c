#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>

#include "forestnav/agent.hpp"

namespace forestnav {

class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline constexpr std::array<char, 8> kCheckpointMagic = {'F', 'N', 'A', 'V',
                                                         'C', 'K', 'P', 'T'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

inline void write_u32_le(std::ostream& os, std::uint32_t v) {
  const char bytes[4] = {static_cast<char>(v), static_cast<char>(v >> 8),
                         static_cast<char>(v >> 16), static_cast<char>(v >> 24)};
  os.write(bytes, 4);
}

inline void write_f64_le(std::ostream& os, double d) {
  const auto u = std::bit_cast<std::uint64_t>(d);
  char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>(u >> (8 * i));
  os.write(bytes, 8);
}

inline std::uint32_t read_u32_le(std::istream& is) {
  unsigned char bytes[4];
  if (!is.read(reinterpret_cast<char*>(bytes), 4))
    throw CheckpointError("checkpoint truncated");
  return static_cast<std::uint32_t>(bytes[0]) | (static_cast<std::uint32_t>(bytes[1]) << 8) |
         (static_cast<std::uint32_t>(bytes[2]) << 16) |
         (static_cast<std::uint32_t>(bytes[3]) << 24);
}

inline double read_f64_le(std::istream& is) {
  unsigned char bytes[8];
  if (!is.read(reinterpret_cast<char*>(bytes), 8))
    throw CheckpointError("checkpoint truncated");
  std::uint64_t u = 0;
  for (int i = 0; i < 8; ++i) u |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  return std::bit_cast<double>(u);
}

}  // namespace detail

// Layout: magic "FNAVCKPT", u32 version, u32 obs_dim, u32 action_dim, then
// f64 little-endian parameters in Agent::visit_params order. Matrices are
// flattened row-major.
inline void save_checkpoint(const Agent<double>& agent, const std::string& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw CheckpointError("cannot open checkpoint for writing: " + path);
  os.write(detail::kCheckpointMagic.data(), detail::kCheckpointMagic.size());
  detail::write_u32_le(os, detail::kCheckpointVersion);
  detail::write_u32_le(os, static_cast<std::uint32_t>(agent.obs_dim()));
  detail::write_u32_le(os, static_cast<std::uint32_t>(agent.action_dim()));
  agent.visit_params([&](const auto& p) {
    for (Eigen::Index i = 0; i < p.rows(); ++i)
      for (Eigen::Index j = 0; j < p.cols(); ++j) detail::write_f64_le(os, p(i, j));
  });
  if (!os) throw CheckpointError("checkpoint write failed: " + path);
}

inline Agent<double> load_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw CheckpointError("cannot open checkpoint: " + path);
  std::array<char, 8> magic{};
  if (!is.read(magic.data(), magic.size()) || magic != detail::kCheckpointMagic)
    throw CheckpointError("not a forestnav checkpoint: " + path);
  const std::uint32_t version = detail::read_u32_le(is);
  if (version != detail::kCheckpointVersion)
    throw CheckpointError("unsupported checkpoint version " + std::to_string(version));
  const auto obs_dim = static_cast<int>(detail::read_u32_le(is));
  const auto action_dim = static_cast<int>(detail::read_u32_le(is));
  if (obs_dim <= 0 || action_dim <= 0 || obs_dim > (1 << 20) || action_dim > (1 << 10))
    throw CheckpointError("checkpoint header has implausible dimensions");

  Agent<double> agent;
  agent.policy.w1.resize(obs_dim, kPolicyHidden);
  agent.policy.b1.resize(kPolicyHidden);
  agent.policy.w2.resize(kPolicyHidden, kPolicyHidden);
  agent.policy.b2.resize(kPolicyHidden);
  agent.policy.w3.resize(kPolicyHidden, action_dim);
  agent.policy.b3.resize(action_dim);
  agent.log_std.resize(action_dim);
  agent.value.w1.resize(obs_dim, kValueHidden);
  agent.value.b1.resize(kValueHidden);
  agent.value.w2.resize(kValueHidden, kValueHidden);
  agent.value.b2.resize(kValueHidden);
  agent.value.w3.resize(kValueHidden, 1);
  agent.value.b3.resize(1);
  agent.visit_params([&](auto& p) {
    for (Eigen::Index i = 0; i < p.rows(); ++i)
      for (Eigen::Index j = 0; j < p.cols(); ++j) p(i, j) = detail::read_f64_le(is);
  });
  if (is.peek() != std::istream::traits_type::eof())
    throw CheckpointError("trailing bytes after checkpoint payload: " + path);
  return agent;
}

// Shape guard for consumers that pair a checkpoint with a config.
inline void require_shapes(const Agent<double>& agent, int obs_dim, int action_dim) {
  if (agent.obs_dim() != obs_dim || agent.action_dim() != action_dim)
    throw CheckpointError("checkpoint shape mismatch: holds obs_dim " +
                          std::to_string(agent.obs_dim()) + ", action_dim " +
                          std::to_string(agent.action_dim()) + "; config expects obs_dim " +
                          std::to_string(obs_dim) + ", action_dim " + std::to_string(action_dim));
}

}  // namespace forestnav
