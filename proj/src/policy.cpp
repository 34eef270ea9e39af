#include "mqrl/policy.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <string>

#include <json.hpp>

#include "mqrl/error.hpp"

namespace mqrl::policy {

std::string_view layout_name(Layout layout) {
  return layout == Layout::MiniGrid ? "minigrid" : "cartpole";
}

Layout parse_layout(std::string_view name) {
  if (name == "minigrid" || name == "minigrid5x5") return Layout::MiniGrid;
  if (name == "cartpole") return Layout::CartPole;
  fail(ErrorCode::Configuration, "unknown genome layout '" + std::string(name) + "'");
}

enc::MpsShape minigrid_mps_shape(std::size_t bond_dim) {
  enc::MpsShape shape;
  shape.n_sites = kMiniGridObsDim;
  shape.bond_dim = bond_dim;
  return shape;
}

namespace {

constexpr std::size_t kMiniGridAngles = kMiniGridQubits * kAnglesPerQubit;
constexpr std::size_t kCartPoleAngles = kCartPoleLayers * kCartPoleQubits * kAnglesPerQubit;

qsim::Qubit apply_2x2(const qsim::Matrix2& u, const qsim::Qubit& v) {
  return {u[0] * v[0] + u[1] * v[1], u[2] * v[0] + u[3] * v[1]};
}

}  // namespace

std::size_t Genome::length_for(Layout layout, std::size_t bond_dim) {
  if (layout == Layout::CartPole) return kCartPoleAngles;
  require(bond_dim >= 1, ErrorCode::Configuration, "bond dimension must be >= 1");
  return minigrid_mps_shape(bond_dim).param_count() + kMiniGridAngles;
}

Genome::Genome(Layout layout, std::size_t bond_dim, std::vector<double> values)
    : layout_(layout),
      bond_dim_(layout == Layout::CartPole ? 0 : bond_dim),
      values_(std::move(values)) {
  const std::size_t expected = length_for(layout, bond_dim);
  require(values_.size() == expected, ErrorCode::InvalidArgument,
          std::string(layout_name(layout)) + " genome must have " + std::to_string(expected) +
              " entries, got " + std::to_string(values_.size()));
  require(std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); }),
          ErrorCode::InvalidArgument, "genome entries must be finite");
}

Genome Genome::zeros(Layout layout, std::size_t bond_dim) {
  return Genome(layout, bond_dim, std::vector<double>(length_for(layout, bond_dim), 0.0));
}

std::span<const double> Genome::mps_params() const {
  require(layout_ == Layout::MiniGrid, ErrorCode::InvalidArgument,
          "only MiniGrid genomes carry MPS tensors");
  return std::span<const double>(values_).first(values_.size() - kMiniGridAngles);
}

std::span<const double> Genome::circuit_params() const {
  if (layout_ == Layout::CartPole) return values_;
  return std::span<const double>(values_).last(kMiniGridAngles);
}

Genome init_genome(Layout layout, std::uint64_t seed, std::size_t bond_dim, double scale) {
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> values(Genome::length_for(layout, bond_dim));
  for (double& v : values) v = normal(rng) * scale;
  return Genome(layout, bond_dim, std::move(values));
}

std::vector<double> softmax(std::span<const double> z) {
  require(!z.empty(), ErrorCode::InvalidArgument, "softmax of empty vector");
  const double m = *std::max_element(z.begin(), z.end());
  std::vector<double> p(z.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) sum += (p[i] = std::exp(z[i] - m));
  for (double& v : p) v /= sum;
  return p;
}

VqcPolicy::VqcPolicy(const Genome& genome) : layout_(genome.layout()) {
  const auto angles = genome.circuit_params();
  rotations_.reserve(angles.size() / kAnglesPerQubit);
  for (std::size_t i = 0; i < angles.size(); i += kAnglesPerQubit)
    rotations_.push_back(qsim::rot_matrix(angles[i], angles[i + 1], angles[i + 2]));
  if (layout_ == Layout::MiniGrid)
    mps_.emplace(minigrid_mps_shape(genome.bond_dim()), genome.mps_params());
}

ActionDistribution VqcPolicy::forward(std::span<const double> obs) const {
  return layout_ == Layout::MiniGrid ? forward_minigrid(obs) : forward_cartpole(obs);
}

std::vector<double> VqcPolicy::minigrid_expectations(std::span<const double> obs) const {
  require(layout_ == Layout::MiniGrid, ErrorCode::InvalidArgument,
          "MiniGrid forward pass needs a MiniGrid genome");
  require(obs.size() == kMiniGridObsDim, ErrorCode::InvalidArgument,
          "MiniGrid observation must have 75 entries, got " + std::to_string(obs.size()));
  const auto x = mps_->compress(enc::feature_map(obs));

  // Everything before the entangler acts on single qubits, so build the
  // product state directly instead of sweeping the register 24 times.
  std::array<qsim::Qubit, kMiniGridQubits> factors;
  for (int q = 0; q < kMiniGridQubits; ++q) {
    qsim::Qubit v{qsim::Amplitude(std::numbers::sqrt2 / 2.0), qsim::Amplitude(std::numbers::sqrt2 / 2.0)};
    v = apply_2x2(qsim::ry_matrix(std::atan(x[q])), v);
    v = apply_2x2(qsim::rz_matrix(std::atan(x[q] * x[q])), v);
    factors[q] = v;
  }
  auto state = qsim::StateVector::product(factors);
  for (int q = 0; q + 1 < kMiniGridQubits; ++q) state.apply_cnot(q, q + 1);
  state.apply_cnot(kMiniGridQubits - 1, 0);
  for (int q = 0; q < kMiniGridQubits; ++q) state.apply_single(q, rotations_[q]);

  return state.expect_z_first(kMiniGridActions);
}

ActionDistribution VqcPolicy::forward_minigrid(std::span<const double> obs) const {
  const auto z = minigrid_expectations(obs);
  return {ActionDistribution::Kind::Probabilities, softmax(z)};
}

ActionDistribution VqcPolicy::forward_cartpole(std::span<const double> obs) const {
  require(obs.size() == 4, ErrorCode::InvalidArgument,
          "CartPole observation must have 4 entries, got " + std::to_string(obs.size()));
  auto state = enc::amplitude_encode(obs.first<4>());
  for (int layer = 0; layer < kCartPoleLayers; ++layer) {
    state.apply_cnot(0, 1);
    state.apply_single(0, rotations_[layer * kCartPoleQubits]);
    state.apply_single(1, rotations_[layer * kCartPoleQubits + 1]);
  }
  return {ActionDistribution::Kind::Scores, {state.expect_z(0), state.expect_z(1)}};
}

ActionDistribution forward_minigrid(const Genome& genome, std::span<const double> obs) {
  require(genome.layout() == Layout::MiniGrid, ErrorCode::InvalidArgument,
          "forward_minigrid: genome layout is not MiniGrid");
  return VqcPolicy(genome).forward(obs);
}

ActionDistribution forward_cartpole(const Genome& genome, std::span<const double> obs) {
  require(genome.layout() == Layout::CartPole, ErrorCode::InvalidArgument,
          "forward_cartpole: genome layout is not CartPole");
  return VqcPolicy(genome).forward(obs);
}

int select_action(const ActionDistribution& dist, Rng& rng) {
  const auto& v = dist.values;
  require(!v.empty(), ErrorCode::InvalidArgument, "empty action distribution");
  require(std::none_of(v.begin(), v.end(), [](double x) { return std::isnan(x); }),
          ErrorCode::InvalidArgument, "NaN in action distribution");
  if (dist.kind == ActionDistribution::Kind::Scores) {
    // max_element returns the first maximum, so ties go to the lower index.
    return static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin());
  }
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const double u = uniform(rng);
  double cum = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    cum += v[i];
    if (u < cum) return static_cast<int>(i);
  }
  // Rounding left the total just below u; fall back to the last nonzero entry.
  for (std::size_t i = v.size(); i-- > 0;)
    if (v[i] > 0.0) return static_cast<int>(i);
  return static_cast<int>(v.size() - 1);
}

namespace {

constexpr std::string_view kGenomeFormat = "mqrl-genome";
constexpr int kGenomeVersion = 1;

void put_le(std::ostream& out, double v) {
  auto bits = std::bit_cast<std::uint64_t>(v);
  char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((bits >> (8 * i)) & 0xff);
  out.write(buf, 8);
}

double get_le(const unsigned char* p) {
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= std::uint64_t{p[i]} << (8 * i);
  return std::bit_cast<double>(bits);
}

}  // namespace

void save_genome(const std::filesystem::path& path, const Genome& genome) {
  nlohmann::ordered_json header;
  header["format"] = kGenomeFormat;
  header["version"] = kGenomeVersion;
  header["layout"] = layout_name(genome.layout());
  header["bond_dim"] = genome.bond_dim();
  header["length"] = genome.size();
  header["dtype"] = "float64-le";

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(static_cast<bool>(out), ErrorCode::Io, "cannot open '" + path.string() + "' for writing");
  out << header.dump() << '\n';
  for (double v : genome.values()) put_le(out, v);
  require(static_cast<bool>(out), ErrorCode::Io, "write failed for '" + path.string() + "'");
}

Genome load_genome(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorCode::Io, "cannot open '" + path.string() + "'");
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), ErrorCode::Format,
          "'" + path.string() + "': missing genome header");

  nlohmann::json header;
  try {
    header = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Format, "'" + path.string() + "': bad genome header: " + e.what());
  }
  require(header.value("format", "") == kGenomeFormat, ErrorCode::Format,
          "'" + path.string() + "' is not a genome checkpoint");
  require(header.value("version", 0) == kGenomeVersion, ErrorCode::Format,
          "'" + path.string() + "': unsupported genome version");
  require(header.value("dtype", "") == "float64-le", ErrorCode::Format,
          "'" + path.string() + "': unsupported dtype");

  const Layout layout = parse_layout(header.at("layout").get<std::string>());
  const auto bond_dim = header.at("bond_dim").get<std::size_t>();
  const auto length = header.at("length").get<std::size_t>();

  std::vector<unsigned char> raw(length * 8);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  require(static_cast<std::size_t>(in.gcount()) == raw.size(), ErrorCode::Format,
          "'" + path.string() + "': truncated genome payload");

  std::vector<double> values(length);
  for (std::size_t i = 0; i < length; ++i) values[i] = get_le(&raw[i * 8]);
  return Genome(layout, bond_dim, std::move(values));
}

}  // namespace mqrl::policy
