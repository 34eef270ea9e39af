#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "mqrl/statevector.hpp"

namespace mqrl::enc {

// phi(v) = (1 - v, v)
struct FeaturePair {
  double off = 1.0;
  double on = 0.0;
};

// Out-of-range inputs are clamped to [0, 1]; a warning is logged once per
// process.
std::vector<FeaturePair> feature_map(std::span<const double> values);

inline constexpr std::size_t kCompressedDim = 8;
using CompressedState = std::array<double, kCompressedDim>;

struct MpsShape {
  std::size_t n_sites = 75;
  std::size_t bond_dim = 2;
  std::size_t out_dim = kCompressedDim;
  std::size_t out_site = 38;

  static constexpr std::size_t phys_dim = 2;

  // Boundary tensors are (phys, bond) and (bond, phys); interior tensors
  // (bond, phys, bond); the output site is (bond, phys, out, bond).
  std::size_t site_param_count(std::size_t site) const;
  std::size_t param_count() const;
  void validate() const;
};

// Matrix product state mapping a chain of feature pairs to an out_dim-vector.
// Tensors are stored flat in site order, row-major per tensor with the index
// order given in MpsShape.
class MpsCompressor {
 public:
  MpsCompressor(MpsShape shape, std::span<const double> params);

  const MpsShape& shape() const noexcept { return shape_; }
  std::span<const double> params() const noexcept { return params_; }
  std::span<const double> site_tensor(std::size_t site) const;

  // Left-to-right contraction.
  std::vector<double> contract(std::span<const FeaturePair> features) const;

  // Contraction for the 8-wide default output leg.
  CompressedState compress(std::span<const FeaturePair> features) const;

 private:
  MpsShape shape_;
  std::vector<double> params_;
  std::vector<std::size_t> offsets_;
};

// For each qubit i: RY(atan(x_i)) then RZ(atan(x_i^2)). The state must hold
// exactly x.size() qubits.
void variational_encode(qsim::StateVector& state, std::span<const double> x);

// Normalized 2-qubit amplitude embedding in basis order |00>,|01>,|10>,|11>.
// A vector with L2 norm below 1e-12 maps to the uniform state.
qsim::StateVector amplitude_encode(std::span<const double, 4> x);

}  // namespace mqrl::enc
