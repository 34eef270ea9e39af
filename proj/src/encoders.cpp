#include "mqrl/encoders.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iostream>
#include <string>

#include "mqrl/error.hpp"

namespace mqrl::enc {

namespace {

std::atomic<bool> g_clamp_warned{false};

}  // namespace

std::vector<FeaturePair> feature_map(std::span<const double> values) {
  require(!values.empty(), ErrorCode::InvalidArgument, "feature_map: empty input");
  std::vector<FeaturePair> out;
  out.reserve(values.size());
  for (double v : values) {
    if (!(v >= 0.0 && v <= 1.0)) {
      if (!g_clamp_warned.exchange(true))
        std::clog << "mqrl: warning: feature value " << v << " outside [0,1], clamping\n";
      v = std::isnan(v) ? 0.0 : std::clamp(v, 0.0, 1.0);
    }
    out.push_back({1.0 - v, v});
  }
  return out;
}

std::size_t MpsShape::site_param_count(std::size_t site) const {
  const std::size_t b = bond_dim;
  if (site == 0 || site + 1 == n_sites) return phys_dim * b;
  if (site == out_site) return b * phys_dim * out_dim * b;
  return b * phys_dim * b;
}

std::size_t MpsShape::param_count() const {
  std::size_t total = 0;
  for (std::size_t s = 0; s < n_sites; ++s) total += site_param_count(s);
  return total;
}

void MpsShape::validate() const {
  require(n_sites >= 3, ErrorCode::Configuration, "MPS needs at least 3 sites");
  require(bond_dim >= 1, ErrorCode::Configuration, "MPS bond dimension must be >= 1");
  require(out_dim >= 1, ErrorCode::Configuration, "MPS output dimension must be >= 1");
  require(out_site >= 1 && out_site + 1 < n_sites, ErrorCode::Configuration,
          "MPS output site must be an interior site");
}

MpsCompressor::MpsCompressor(MpsShape shape, std::span<const double> params)
    : shape_(shape), params_(params.begin(), params.end()) {
  shape_.validate();
  require(params.size() == shape_.param_count(), ErrorCode::InvalidArgument,
          "MPS parameter count mismatch: expected " + std::to_string(shape_.param_count()) +
              ", got " + std::to_string(params.size()));
  offsets_.reserve(shape_.n_sites + 1);
  std::size_t off = 0;
  for (std::size_t s = 0; s < shape_.n_sites; ++s) {
    offsets_.push_back(off);
    off += shape_.site_param_count(s);
  }
  offsets_.push_back(off);
}

std::span<const double> MpsCompressor::site_tensor(std::size_t site) const {
  return std::span<const double>(params_).subspan(offsets_.at(site),
                                                  offsets_[site + 1] - offsets_[site]);
}

std::vector<double> MpsCompressor::contract(std::span<const FeaturePair> features) const {
  require(features.size() == shape_.n_sites, ErrorCode::InvalidArgument,
          "MPS expects " + std::to_string(shape_.n_sites) + " feature pairs, got " +
              std::to_string(features.size()));
  const std::size_t b = shape_.bond_dim;
  const std::size_t out_dim = shape_.out_dim;
  const std::size_t last = shape_.n_sites - 1;

  // Boundary vector; after the output site it carries out_dim rows of width b.
  std::size_t rows = 1;
  std::vector<double> left(b, 0.0);
  std::vector<double> next;

  {
    const auto t = site_tensor(0);
    const auto& f = features[0];
    for (std::size_t r = 0; r < b; ++r) left[r] = f.off * t[r] + f.on * t[b + r];
  }

  for (std::size_t site = 1; site < last; ++site) {
    const auto t = site_tensor(site);
    const auto& f = features[site];
    if (site == shape_.out_site) {
      // t[l][p][o][r]
      next.assign(out_dim * b, 0.0);
      for (std::size_t l = 0; l < b; ++l) {
        const double w0 = left[l] * f.off;
        const double w1 = left[l] * f.on;
        const double* t0 = &t[(l * 2 + 0) * out_dim * b];
        const double* t1 = &t[(l * 2 + 1) * out_dim * b];
        for (std::size_t k = 0; k < out_dim * b; ++k) next[k] += w0 * t0[k] + w1 * t1[k];
      }
      rows = out_dim;
    } else {
      // t[l][p][r]; transfer[l][r] = off * t[l][0][r] + on * t[l][1][r]
      next.assign(rows * b, 0.0);
      for (std::size_t l = 0; l < b; ++l) {
        const double* t0 = &t[(l * 2 + 0) * b];
        const double* t1 = &t[(l * 2 + 1) * b];
        for (std::size_t row = 0; row < rows; ++row) {
          const double v = left[row * b + l];
          if (v == 0.0) continue;
          double* dst = &next[row * b];
          for (std::size_t r = 0; r < b; ++r) dst[r] += v * (f.off * t0[r] + f.on * t1[r]);
        }
      }
    }
    left.swap(next);
  }

  std::vector<double> out(rows, 0.0);
  const auto t = site_tensor(last);
  const auto& f = features[last];
  for (std::size_t row = 0; row < rows; ++row) {
    double acc = 0.0;
    for (std::size_t l = 0; l < b; ++l)
      acc += left[row * b + l] * (f.off * t[l * 2] + f.on * t[l * 2 + 1]);
    out[row] = acc;
  }
  return out;
}

CompressedState MpsCompressor::compress(std::span<const FeaturePair> features) const {
  require(shape_.out_dim == kCompressedDim, ErrorCode::Configuration,
          "compress() requires an 8-wide output leg");
  const auto v = contract(features);
  CompressedState out{};
  std::copy(v.begin(), v.end(), out.begin());
  return out;
}

void variational_encode(qsim::StateVector& state, std::span<const double> x) {
  require(static_cast<std::size_t>(state.n_qubits()) == x.size(), ErrorCode::InvalidArgument,
          "variational_encode: state has " + std::to_string(state.n_qubits()) +
              " qubits but input has " + std::to_string(x.size()) + " values");
  for (std::size_t i = 0; i < x.size(); ++i) {
    const int q = static_cast<int>(i);
    state.apply_single(q, qsim::ry_matrix(std::atan(x[i])));
    state.apply_single(q, qsim::rz_matrix(std::atan(x[i] * x[i])));
  }
}

qsim::StateVector amplitude_encode(std::span<const double, 4> x) {
  const double n = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3]);
  std::vector<qsim::Amplitude> amps(4);
  if (!(n >= 1e-12)) {
    std::fill(amps.begin(), amps.end(), qsim::Amplitude(0.5));
  } else {
    for (std::size_t i = 0; i < 4; ++i) amps[i] = x[i] / n;
  }
  return qsim::StateVector::from_amplitudes(std::move(amps));
}

}  // namespace mqrl::enc
