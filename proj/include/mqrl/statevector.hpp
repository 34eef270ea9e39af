#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace mqrl::qsim {

using Amplitude = std::complex<double>;

// Row-major 2x2 complex matrix: {u00, u01, u10, u11}.
using Matrix2 = std::array<Amplitude, 4>;

inline constexpr int kMaxQubits = 12;

Matrix2 hadamard_matrix();
// RY(t) = [[cos t/2, -sin t/2], [sin t/2, cos t/2]]
Matrix2 ry_matrix(double theta);
// RZ(t) = diag(exp(-i t/2), exp(+i t/2))
Matrix2 rz_matrix(double theta);
// General rotation R(a, b, g) = RZ(g) * RY(b) * RZ(a); RZ(a) acts first.
Matrix2 rot_matrix(double alpha, double beta, double gamma);

struct Gate {
  enum class Kind { H, RY, RZ, Rot, CNOT };

  Kind kind = Kind::H;
  int target = 0;
  int control = -1;  // CNOT only
  double alpha = 0.0;  // RY/RZ angle, or first Rot angle
  double beta = 0.0;
  double gamma = 0.0;

  static Gate h(int q) { return {Kind::H, q}; }
  static Gate ry(int q, double t) { return {Kind::RY, q, -1, t}; }
  static Gate rz(int q, double t) { return {Kind::RZ, q, -1, t}; }
  static Gate rot(int q, double a, double b, double g) { return {Kind::Rot, q, -1, a, b, g}; }
  static Gate cnot(int control, int target) { return {Kind::CNOT, target, control}; }

  // 2x2 unitary of a single-qubit gate. Not defined for CNOT.
  Matrix2 matrix() const;
};

using Qubit = std::array<Amplitude, 2>;

// Dense n-qubit register. Qubit 0 is the most significant bit of the basis
// index, so |q0 q1 ... q(n-1)> lives at index sum(q_k << (n-1-k)).
class StateVector {
 public:
  // |0...0> on n qubits, 1 <= n <= kMaxQubits.
  explicit StateVector(int n_qubits);

  // Takes ownership of amplitudes; length must be a power of two in range.
  // The caller is responsible for normalization.
  static StateVector from_amplitudes(std::vector<Amplitude> amplitudes);

  // Tensor product of single-qubit states; factors[k] is (<0|q_k>, <1|q_k>).
  static StateVector product(std::span<const Qubit> factors);

  int n_qubits() const noexcept { return n_qubits_; }
  std::size_t dim() const noexcept { return amps_.size(); }
  std::span<const Amplitude> amplitudes() const noexcept { return amps_; }
  const Amplitude& operator[](std::size_t i) const { return amps_[i]; }

  double norm() const;

  void apply(const Gate& gate);
  void apply_single(int qubit, const Matrix2& u);
  void apply_cnot(int control, int target);

  // <Z_q> = sum_b |amp_b|^2 * (+1 if bit q of b is 0 else -1)
  double expect_z(int qubit) const;
  // <Z_q> for q = 0 .. count-1 in one pass.
  std::vector<double> expect_z_first(int count) const;

 private:
  StateVector() = default;
  void check_qubit(int q) const;

  int n_qubits_ = 0;
  std::vector<Amplitude> amps_;
};

StateVector init_zero(int n_qubits);
StateVector apply_gate(StateVector state, const Gate& gate);
StateVector apply_rot(StateVector state, int qubit, double alpha, double beta, double gamma);
double expect_z(const StateVector& state, int qubit);

}  // namespace mqrl::qsim
