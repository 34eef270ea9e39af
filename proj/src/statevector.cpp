#include "mqrl/statevector.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "mqrl/error.hpp"

namespace mqrl::qsim {

namespace {

// Plain complex product; std::complex operator* goes through the Annex G
// NaN-recovery path, which is several times slower in this inner loop.
inline Amplitude mul(Amplitude x, Amplitude y) {
  return {x.real() * y.real() - x.imag() * y.imag(), x.real() * y.imag() + x.imag() * y.real()};
}

}  // namespace

Matrix2 hadamard_matrix() {
  const double r = std::numbers::sqrt2 / 2.0;
  return {Amplitude(r), Amplitude(r), Amplitude(r), Amplitude(-r)};
}

Matrix2 ry_matrix(double theta) {
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  return {Amplitude(c), Amplitude(-s), Amplitude(s), Amplitude(c)};
}

Matrix2 rz_matrix(double theta) {
  return {std::polar(1.0, -theta / 2.0), Amplitude(0.0), Amplitude(0.0),
          std::polar(1.0, theta / 2.0)};
}

Matrix2 rot_matrix(double alpha, double beta, double gamma) {
  // Closed form of RZ(gamma) * RY(beta) * RZ(alpha).
  const double c = std::cos(beta / 2.0);
  const double s = std::sin(beta / 2.0);
  const double sum = (alpha + gamma) / 2.0;
  const double diff = (alpha - gamma) / 2.0;
  return {c * std::polar(1.0, -sum), -s * std::polar(1.0, diff),
          s * std::polar(1.0, -diff), c * std::polar(1.0, sum)};
}

Matrix2 Gate::matrix() const {
  switch (kind) {
    case Kind::H: return hadamard_matrix();
    case Kind::RY: return ry_matrix(alpha);
    case Kind::RZ: return rz_matrix(alpha);
    case Kind::Rot: return rot_matrix(alpha, beta, gamma);
    case Kind::CNOT: break;
  }
  fail(ErrorCode::InvalidArgument, "CNOT has no single-qubit matrix");
}

StateVector::StateVector(int n_qubits) : n_qubits_(n_qubits) {
  require(n_qubits >= 1 && n_qubits <= kMaxQubits, ErrorCode::Configuration,
          "qubit count must be in 1.." + std::to_string(kMaxQubits) + ", got " +
              std::to_string(n_qubits));
  amps_.assign(std::size_t{1} << n_qubits, Amplitude(0.0));
  amps_[0] = 1.0;
}

StateVector StateVector::from_amplitudes(std::vector<Amplitude> amplitudes) {
  const std::size_t n = amplitudes.size();
  require(n >= 2 && (n & (n - 1)) == 0 && n <= (std::size_t{1} << kMaxQubits),
          ErrorCode::InvalidArgument, "amplitude count must be a power of two in 2..4096");
  StateVector s;
  s.n_qubits_ = std::countr_zero(n);
  s.amps_ = std::move(amplitudes);
  return s;
}

StateVector StateVector::product(std::span<const Qubit> factors) {
  const int n = static_cast<int>(factors.size());
  require(n >= 1 && n <= kMaxQubits, ErrorCode::Configuration,
          "qubit count must be in 1.." + std::to_string(kMaxQubits) + ", got " + std::to_string(n));
  StateVector s;
  s.n_qubits_ = n;
  s.amps_.assign(std::size_t{1} << n, Amplitude(0.0));
  s.amps_[0] = 1.0;
  // Grow the register one qubit at a time, appending it as the new LSB.
  std::size_t len = 1;
  for (const auto& f : factors) {
    for (std::size_t i = len; i-- > 0;) {
      const Amplitude v = s.amps_[i];
      s.amps_[2 * i] = mul(v, f[0]);
      s.amps_[2 * i + 1] = mul(v, f[1]);
    }
    len *= 2;
  }
  return s;
}

double StateVector::norm() const {
  double acc = 0.0;
  for (const auto& a : amps_) acc += std::norm(a);
  return std::sqrt(acc);
}

void StateVector::check_qubit(int q) const {
  if (q < 0 || q >= n_qubits_)
    fail(ErrorCode::InvalidArgument, "qubit index " + std::to_string(q) +
                                         " out of range for " + std::to_string(n_qubits_) +
                                         "-qubit state");
}

void StateVector::apply(const Gate& gate) {
  if (gate.kind == Gate::Kind::CNOT) {
    apply_cnot(gate.control, gate.target);
  } else {
    apply_single(gate.target, gate.matrix());
  }
}

void StateVector::apply_single(int qubit, const Matrix2& u) {
  check_qubit(qubit);
  const std::size_t stride = std::size_t{1} << (n_qubits_ - 1 - qubit);
  const std::size_t dim = amps_.size();
  Amplitude* a = amps_.data();
  for (std::size_t block = 0; block < dim; block += 2 * stride) {
    for (std::size_t i = block; i < block + stride; ++i) {
      const Amplitude a0 = a[i];
      const Amplitude a1 = a[i + stride];
      a[i] = mul(u[0], a0) + mul(u[1], a1);
      a[i + stride] = mul(u[2], a0) + mul(u[3], a1);
    }
  }
}

void StateVector::apply_cnot(int control, int target) {
  check_qubit(control);
  check_qubit(target);
  require(control != target, ErrorCode::InvalidArgument, "CNOT control equals target");
  const std::size_t cmask = std::size_t{1} << (n_qubits_ - 1 - control);
  const std::size_t tmask = std::size_t{1} << (n_qubits_ - 1 - target);
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    if ((i & cmask) && !(i & tmask)) std::swap(amps_[i], amps_[i | tmask]);
  }
}

double StateVector::expect_z(int qubit) const {
  check_qubit(qubit);
  const std::size_t mask = std::size_t{1} << (n_qubits_ - 1 - qubit);
  double acc = 0.0;
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    const double p = std::norm(amps_[i]);
    acc += (i & mask) ? -p : p;
  }
  return acc;
}

std::vector<double> StateVector::expect_z_first(int count) const {
  require(count >= 0 && count <= n_qubits_, ErrorCode::InvalidArgument,
          "expect_z_first: count out of range");
  std::vector<double> z(count, 0.0);
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    const double p = std::norm(amps_[i]);
    for (int q = 0; q < count; ++q) z[q] += (i >> (n_qubits_ - 1 - q)) & 1 ? -p : p;
  }
  return z;
}

StateVector init_zero(int n_qubits) { return StateVector(n_qubits); }

StateVector apply_gate(StateVector state, const Gate& gate) {
  state.apply(gate);
  return state;
}

StateVector apply_rot(StateVector state, int qubit, double alpha, double beta, double gamma) {
  state.apply_single(qubit, rot_matrix(alpha, beta, gamma));
  return state;
}

double expect_z(const StateVector& state, int qubit) { return state.expect_z(qubit); }

}  // namespace mqrl::qsim
