#include <atomic>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>

#include "mqrl/error.hpp"
#include "mqrl/harness.hpp"

namespace mqrl::harness {

void parallel_for(std::size_t n, std::uint32_t jobs,
                  const std::function<void(std::size_t)>& fn) {
  if (n == 0) return;
  const std::size_t workers = std::min<std::size_t>(std::max<std::uint32_t>(jobs, 1), n);
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
            next = n;
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

namespace {

std::vector<RunSeries> run_all(const std::vector<RunConfig>& configs, std::uint32_t jobs) {
  std::vector<RunSeries> series(configs.size());
  parallel_for(configs.size(), jobs, [&](std::size_t i) {
    const auto record = run_experiment(configs[i]);
    auto& s = series[i];
    s.algo = method_name(record.config.method);
    s.env = env::env_name(record.config.env);
    s.seed = record.config.seed;
    s.evals = record.evals;
  });
  return series;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  std::ofstream out(path, std::ios::trunc);
  require(static_cast<bool>(out), ErrorCode::Io, "cannot write '" + path.string() + "'");
  out << j.dump(2) << '\n';
}

}  // namespace

MetricsReport run_suite(const SuiteConfig& suite) {
  require(suite.seeds >= 1, ErrorCode::Configuration, "suite needs at least one seed");
  require(!suite.envs.empty() && !suite.methods.empty(), ErrorCode::Configuration,
          "suite needs at least one environment and one algorithm");
  std::vector<RunConfig> configs;
  for (auto e : suite.envs) {
    for (auto m : suite.methods) {
      for (std::uint32_t s = 0; s < suite.seeds; ++s) {
        RunConfig c = suite.base;
        c.env = e;
        c.method = m;
        c.seed = suite.base.seed + s;
        // Per-algorithm overrides only make sense for a single algorithm.
        if (suite.methods.size() > 1) c.hyperparams = nlohmann::json::object();
        c.validate();
        configs.push_back(std::move(c));
      }
    }
  }
  const auto series = run_all(configs, suite.jobs);
  auto report = compute_metrics(series, {});
  if (!suite.base.output_dir.empty())
    write_json(suite.base.output_dir / "metrics.json", to_json(report));
  return report;
}

nlohmann::json run_sweep(const RunConfig& base, std::span<const SweepAxis> axes,
                         std::uint32_t seeds, std::uint32_t jobs) {
  require(seeds >= 1, ErrorCode::Configuration, "sweep needs at least one seed");
  require(optimizer_of(base.method).has_value(), ErrorCode::Configuration,
          "sweep needs an optimizer algorithm");
  std::size_t points = 1;
  for (const auto& a : axes) {
    require(!a.values.empty(), ErrorCode::Configuration, "sweep axis '" + a.key + "' is empty");
    points *= a.values.size();
  }

  std::vector<nlohmann::json> overrides;
  std::vector<RunConfig> configs;
  for (std::size_t p = 0; p < points; ++p) {
    nlohmann::json hp = base.hyperparams;
    std::size_t rest = p;
    for (auto it = axes.rbegin(); it != axes.rend(); ++it) {
      hp[it->key] = it->values[rest % it->values.size()];
      rest /= it->values.size();
    }
    overrides.push_back(hp);
    for (std::uint32_t s = 0; s < seeds; ++s) {
      RunConfig c = base;
      c.hyperparams = hp;
      c.seed = base.seed + s;
      if (!base.output_dir.empty()) c.output_dir = base.output_dir / ("point" + std::to_string(p));
      c.validate();
      configs.push_back(std::move(c));
    }
  }

  const auto series = run_all(configs, jobs);
  auto result = nlohmann::json::array();
  for (std::size_t p = 0; p < points; ++p) {
    std::span<const RunSeries> chunk(series.data() + p * seeds, seeds);
    nlohmann::json entry;
    entry["point"] = p;
    entry["hyperparams"] = overrides[p];
    entry["metrics"] = to_json(compute_metrics(chunk, {}));
    result.push_back(entry);
  }
  if (!base.output_dir.empty()) write_json(base.output_dir / "sweep.json", result);
  return result;
}

}  // namespace mqrl::harness
