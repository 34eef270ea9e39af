#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "mqrl/encoders.hpp"
#include "mqrl/rng.hpp"
#include "mqrl/statevector.hpp"

namespace mqrl::policy {

enum class Layout { MiniGrid, CartPole };

std::string_view layout_name(Layout layout);
Layout parse_layout(std::string_view name);

inline constexpr int kMiniGridQubits = 8;
inline constexpr int kMiniGridActions = 6;
inline constexpr int kCartPoleQubits = 2;
inline constexpr int kCartPoleLayers = 4;
inline constexpr std::size_t kAnglesPerQubit = 3;
inline constexpr std::size_t kMiniGridObsDim = 75;
inline constexpr double kInitScale = 0.01;

enc::MpsShape minigrid_mps_shape(std::size_t bond_dim);

// Flat parameter vector.
//   MiniGrid: [MPS tensors in site order] ++ [q0 (a,b,g), ..., q7 (a,b,g)]
//   CartPole: [layer0 q0 (a,b,g), layer0 q1, ..., layer3 q1]
class Genome {
 public:
  Genome(Layout layout, std::size_t bond_dim, std::vector<double> values);

  static std::size_t length_for(Layout layout, std::size_t bond_dim = 2);
  static Genome zeros(Layout layout, std::size_t bond_dim = 2);

  Layout layout() const noexcept { return layout_; }
  // Meaningful for MiniGrid only; CartPole genomes report 0.
  std::size_t bond_dim() const noexcept { return bond_dim_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  // MiniGrid only: the slice holding MPS tensors, and the 24 circuit angles.
  std::span<const double> mps_params() const;
  std::span<const double> circuit_params() const;

  friend bool operator==(const Genome&, const Genome&) = default;

 private:
  Layout layout_;
  std::size_t bond_dim_;
  std::vector<double> values_;
};

// Entries ~ N(0, 1) * scale from a generator seeded with `seed`.
Genome init_genome(Layout layout, std::uint64_t seed, std::size_t bond_dim = 2,
                   double scale = kInitScale);

struct ActionDistribution {
  enum class Kind { Probabilities, Scores };
  Kind kind = Kind::Probabilities;
  std::vector<double> values;
};

std::vector<double> softmax(std::span<const double> z);

// Genome with its rotation matrices and MPS precomputed, for repeated forward
// passes.
class VqcPolicy {
 public:
  explicit VqcPolicy(const Genome& genome);

  Layout layout() const noexcept { return layout_; }
  ActionDistribution forward(std::span<const double> obs) const;

  // Six Z expectations of the MiniGrid circuit before the softmax.
  std::vector<double> minigrid_expectations(std::span<const double> obs) const;

 private:
  ActionDistribution forward_minigrid(std::span<const double> obs) const;
  ActionDistribution forward_cartpole(std::span<const double> obs) const;

  Layout layout_;
  std::optional<enc::MpsCompressor> mps_;
  std::vector<qsim::Matrix2> rotations_;
};

ActionDistribution forward_minigrid(const Genome& genome, std::span<const double> obs);
ActionDistribution forward_cartpole(const Genome& genome, std::span<const double> obs);

// Probabilities are sampled with `rng`; scores are argmax with ties toward the
// lower index.
int select_action(const ActionDistribution& dist, Rng& rng);

// Checkpoint: one JSON header line, then `length` little-endian float64 values.
void save_genome(const std::filesystem::path& path, const Genome& genome);
Genome load_genome(const std::filesystem::path& path);

}  // namespace mqrl::policy
