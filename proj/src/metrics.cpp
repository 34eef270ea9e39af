#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>

#include "mqrl/error.hpp"
#include "mqrl/harness.hpp"

namespace mqrl::harness {

double learning_speed(std::span<const EvalRecord> evals, double threshold) {
  require(threshold > 0.0, ErrorCode::InvalidArgument, "learning-speed threshold must be > 0");
  for (const auto& r : evals)
    if (r.best_so_far >= threshold) return static_cast<double>(r.episodes_used) / threshold;
  return kInfinity;
}

double stability(std::span<const double> finals) {
  require(!finals.empty(), ErrorCode::InvalidArgument, "stability of an empty run list");
  const double n = static_cast<double>(finals.size());
  const double mean = std::accumulate(finals.begin(), finals.end(), 0.0) / n;
  double ss = 0.0;
  for (double f : finals) ss += (f - mean) * (f - mean);
  return std::sqrt(ss / n);
}

MaxPerformance max_performance(std::span<const double> finals) {
  require(!finals.empty(), ErrorCode::InvalidArgument, "max performance of an empty run list");
  MaxPerformance m;
  m.mean = std::accumulate(finals.begin(), finals.end(), 0.0) / static_cast<double>(finals.size());
  m.max = *std::max_element(finals.begin(), finals.end());
  return m;
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

template <class T>
T parse_number(const std::string& s, const std::filesystem::path& path, std::size_t line_no) {
  try {
    std::size_t used = 0;
    T v;
    if constexpr (std::is_same_v<T, double>) v = std::stod(s, &used);
    else v = static_cast<T>(std::stoull(s, &used));
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  fail(ErrorCode::Format, path.string() + ":" + std::to_string(line_no) + ": bad number '" + s + "'");
}

}  // namespace

RunSeries read_run_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCode::Io, "cannot open '" + path.string() + "'");
  std::string line;
  require(std::getline(in, line) && line == kCsvHeader, ErrorCode::Format,
          path.string() + ": header does not match the run CSV schema");

  RunSeries series;
  series.source = path;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split(line);
    require(f.size() == 8, ErrorCode::Format,
            path.string() + ":" + std::to_string(line_no) + ": expected 8 fields");
    EvalRecord r;
    const auto seed = parse_number<std::uint64_t>(f[2], path, line_no);
    r.eval_index = parse_number<std::uint64_t>(f[3], path, line_no);
    r.episodes_used = parse_number<std::uint64_t>(f[4], path, line_no);
    r.wall_clock_s = parse_number<double>(f[5], path, line_no);
    r.fitness = parse_number<double>(f[6], path, line_no);
    r.best_so_far = parse_number<double>(f[7], path, line_no);
    if (series.evals.empty()) {
      series.algo = f[0];
      series.env = f[1];
      series.seed = seed;
    } else {
      require(f[0] == series.algo && f[1] == series.env && seed == series.seed, ErrorCode::Format,
              path.string() + ":" + std::to_string(line_no) + ": mixed runs in one file");
    }
    series.evals.push_back(r);
  }
  return series;
}

std::vector<RunSeries> read_run_dir(const std::filesystem::path& dir) {
  require(std::filesystem::is_directory(dir), ErrorCode::Io,
          "'" + dir.string() + "' is not a directory");
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".csv") continue;
    std::ifstream in(entry.path());
    std::string header;
    if (std::getline(in, header) && header == kCsvHeader) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<RunSeries> runs;
  for (const auto& f : files) {
    auto s = read_run_csv(f);
    if (!s.evals.empty()) runs.push_back(std::move(s));
  }
  return runs;
}

MetricsReport compute_metrics(std::span<const RunSeries> runs,
                              const std::map<std::string, double>& thresholds) {
  std::map<std::pair<std::string, std::string>, std::vector<const RunSeries*>> groups;
  for (const auto& r : runs) groups[{r.env, r.algo}].push_back(&r);

  MetricsReport report;
  report.thresholds = thresholds;
  for (auto& [key, members] : groups) {
    std::sort(members.begin(), members.end(),
              [](const RunSeries* a, const RunSeries* b) { return a->seed < b->seed; });
    CellMetrics cell;
    cell.env = key.first;
    cell.algo = key.second;
    auto t = thresholds.find(cell.env);
    cell.threshold = t != thresholds.end() ? t->second : default_threshold(env::parse_env(cell.env));
    report.thresholds.emplace(cell.env, cell.threshold);

    double vl_sum = 0.0;
    for (const RunSeries* r : members) {
      cell.seeds.push_back(r->seed);
      cell.finals.push_back(r->evals.back().best_so_far);
      const double vl = learning_speed(r->evals, cell.threshold);
      cell.learning_speeds.push_back(vl);
      if (std::isfinite(vl)) {
        ++cell.reached;
        vl_sum += vl;
      }
    }
    cell.v_l = cell.reached ? vl_sum / static_cast<double>(cell.reached) : kInfinity;
    cell.sigma = stability(cell.finals);
    const auto pm = max_performance(cell.finals);
    cell.p_max = pm.mean;
    cell.p_max_best = pm.max;
    report.cells.push_back(std::move(cell));
  }
  return report;
}

namespace {

nlohmann::ordered_json num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

}  // namespace

nlohmann::json to_json(const MetricsReport& report) {
  nlohmann::ordered_json j;
  j["thresholds"] = report.thresholds;
  auto cells = nlohmann::ordered_json::array();
  for (const auto& c : report.cells) {
    nlohmann::ordered_json o;
    o["env"] = c.env;
    o["algo"] = c.algo;
    o["n_runs"] = c.finals.size();
    o["threshold"] = c.threshold;
    o["v_l"] = num(c.v_l);
    o["v_l_reached"] = c.reached;
    o["sigma"] = c.sigma;
    o["p_max"] = c.p_max;
    o["p_max_best"] = c.p_max_best;
    o["seeds"] = c.seeds;
    o["finals"] = c.finals;
    auto speeds = nlohmann::ordered_json::array();
    for (double v : c.learning_speeds) speeds.push_back(num(v));
    o["learning_speeds"] = speeds;
    cells.push_back(o);
  }
  j["cells"] = cells;
  return nlohmann::json(j);
}

}  // namespace mqrl::harness
