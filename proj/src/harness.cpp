#include "shn/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <thread>
#include <tuple>

#include <Eigen/Dense>

#include "shn/homology.hpp"
#include "shn/io.hpp"
#include "shn/metrics.hpp"
#include "shn/rng.hpp"
#include "shn/svg.hpp"
#include "shn/theory.hpp"

namespace shn {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// seed-path tags
constexpr std::uint64_t kPatternsTag = 1, kInitTag = 2, kComplexTag = 3, kQueryTag = 4, kShuffleTag = 5;

const std::vector<double> kDefaultFractions{0.05, 0.1, 0.15, 0.2, 0.3};

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

template <class T>
T field(const json& j, const char* key) {
  const auto& v = j.at(key);
  if constexpr (std::is_unsigned_v<T> && !std::is_same_v<T, bool>) {
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0)) {
      throw ConfigError(std::string("config field '") + key + "' must be a non-negative integer");
    }
  }
  try {
    return v.get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config field '") + key + "' has the wrong type: " + v.dump());
  }
}

template <class F>
auto as_config_error(const std::string& what, F&& fn) {
  try {
    return fn();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(what + ": " + e.what());
  }
}

template <class F>
void parallel_for(std::size_t count, std::size_t threads, F&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i; (i = next++) < count;) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
        next = count;
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::uint64_t trial_seed(const RunConfig& cfg, std::size_t p, std::size_t trial) {
  return derive_seed(cfg.seed, {p, trial});
}

FunctionalComplex trial_complex(const RunConfig& cfg, Condition c, std::uint64_t tseed) {
  return sample_diluted(cfg.n, dilution_spec(c, cfg.n), derive_seed(tseed, {kComplexTag, static_cast<std::uint64_t>(c)}));
}

std::string dynamics_label(const RunConfig& cfg) {
  return cfg.dynamics == "modern" ? "modern(" + cfg.interaction + ")" : "traditional";
}

InteractionFn parse_interaction(const std::string& s) {
  const auto l = lower(s);
  if (l == "exp" || l == "exponential") return InteractionFn::exponential();
  const std::string prefix = "polynomial:";
  if (l.rfind(prefix, 0) == 0) {
    try {
      return InteractionFn::polynomial(std::stoi(l.substr(prefix.size())));
    } catch (const std::logic_error&) {
    }
  }
  throw ConfigError("interaction F must be 'exponential' or 'polynomial:<n>' with n >= 2, got '" + s + "'");
}

// ---- shared binary trial -------------------------------------------------

TrialRow binary_trial(const RunConfig& cfg, const Dynamics& dyn, Condition c, std::size_t p, std::size_t t,
                      bool homology) {
  const auto tseed = trial_seed(cfg, p, t);
  const auto patterns = random_binary_patterns(p, cfg.n, derive_seed(tseed, {kPatternsTag}));
  const auto structure = trial_complex(cfg, c, tseed);
  const auto weighted = hebbian_weights(structure, patterns);
  const auto init = random_binary_state(cfg.n, derive_seed(tseed, {kInitTag}));
  const auto outcome = run_to_convergence(init, dyn, weighted, patterns, cfg.max_steps, cfg.stop_rule);
  const auto score = score_overlap(outcome.final_state, patterns);

  TrialRow row;
  row.trial_id = t;
  row.condition = std::string(to_string(c));
  row.measure = dynamics_label(cfg);
  row.P = p;
  row.seed = tseed;
  row.best_index = score.best_index;
  row.best_value = score.best_value;
  row.steps = outcome.steps_taken;
  row.stop_reason = std::string(to_string(outcome.stop_reason));
  if (homology) {
    const auto betti = betti_numbers(downward_closure(structure), 2);
    row.beta0 = betti[0];
    row.beta1 = betti[1];
    row.beta2 = betti[2];
  }
  return row;
}

using SortKey = std::tuple<std::size_t, std::size_t, std::size_t, std::size_t, std::size_t>;

std::size_t index_in(const std::vector<std::string>& names, const std::string& name) {
  return static_cast<std::size_t>(std::find(names.begin(), names.end(), name) - names.begin());
}

void sort_rows(const RunConfig& cfg, std::vector<TrialRow>& rows) {
  std::vector<std::string> conds, measures;
  for (auto c : cfg.conditions) conds.emplace_back(to_string(c));
  for (const auto& m : cfg.measures) measures.push_back(m.name());
  const auto loads = cfg.resolved_loadings();
  auto key = [&](const TrialRow& r) {
    return SortKey{index_in(conds, r.condition), index_in(measures, r.measure),
                   static_cast<std::size_t>(std::find(loads.begin(), loads.end(), r.P) - loads.begin()), r.trial_id,
                   r.query.value_or(0)};
  };
  std::stable_sort(rows.begin(), rows.end(), [&](const TrialRow& a, const TrialRow& b) { return key(a) < key(b); });
}

RunResult run_binary_like(const RunConfig& cfg, bool homology) {
  cfg.validate();
  const auto dyn = cfg.binary_dynamics();
  const auto loads = cfg.resolved_loadings();
  struct Unit {
    Condition c;
    std::size_t p, t;
  };
  std::vector<Unit> units;
  for (auto c : cfg.conditions) {
    for (auto p : loads) {
      for (std::size_t t = 0; t < cfg.trials; ++t) units.push_back({c, p, t});
    }
  }
  std::vector<TrialRow> rows(units.size());
  parallel_for(units.size(), cfg.threads,
               [&](std::size_t k) { rows[k] = binary_trial(cfg, dyn, units[k].c, units[k].p, units[k].t, homology); });
  sort_rows(cfg, rows);

  RunResult result;
  result.experiment = homology ? Experiment::HomologyCorrelation : Experiment::BinaryOverlap;
  for (std::size_t begin = 0; begin < rows.size();) {
    std::size_t end = begin;
    std::vector<double> overlaps, b1;
    while (end < rows.size() && rows[end].condition == rows[begin].condition && rows[end].P == rows[begin].P) {
      overlaps.push_back(rows[end].best_value);
      if (rows[end].beta1) b1.push_back(static_cast<double>(*rows[end].beta1));
      ++end;
    }
    const auto s = summarize(overlaps);
    SummaryRow sr{rows[begin].condition, rows[begin].measure, rows[begin].P, s.n, s.mean, s.sd, std::nullopt, homology};
    if (homology) {
      try {
        sr.pearson_r = pearson_r(overlaps, b1);
      } catch (const std::exception&) {
        // zero variance or too few trials: undefined
      }
    }
    result.summary.push_back(sr);
    begin = end;
  }
  result.rows = std::move(rows);
  return result;
}

PatternSet continuous_patterns(const RunConfig& cfg, const std::optional<PatternSet>& corpus, std::size_t p,
                               std::uint64_t tseed) {
  const auto seed = derive_seed(tseed, {kPatternsTag});
  if (corpus) {
    std::vector<std::size_t> order(corpus->num_patterns());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 rng(derive_seed(tseed, {kShuffleTag}));
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<double> data;
    data.reserve(p * corpus->width());
    for (std::size_t k = 0; k < p; ++k) {
      const auto r = corpus->row(order[k]);
      data.insert(data.end(), r.begin(), r.end());
    }
    return PatternSet(p, corpus->width(), std::move(data), PatternKind::Continuous);
  }
  switch (cfg.synthetic) {
    case SyntheticKind::Hadamard:
      return hadamard_patterns(p, cfg.n, seed);
    case SyntheticKind::Binary01:
      return random_binary01_patterns(p, cfg.n, seed);
    case SyntheticKind::Uniform:
      break;
  }
  return random_uniform_patterns(p, cfg.n, seed);
}

std::optional<PatternSet> load_dataset(const RunConfig& cfg) {
  if (!cfg.dataset) return std::nullopt;
  const auto& d = *cfg.dataset;
  if (lower(d.format) == "csv") return load_csv(d.path, d.limit);
  return load_image_corpus(d.path, parse_image_format(d.format), d.limit, d.grayscale);
}

}  // namespace

// ---- enums ---------------------------------------------------------------

std::string_view to_string(Experiment e) noexcept {
  switch (e) {
    case Experiment::BinaryOverlap:
      return "binary_overlap";
    case Experiment::ContinuousRecall:
      return "continuous_recall";
    case Experiment::HomologyCorrelation:
      return "homology_correlation";
    case Experiment::EnergyGrid:
      return "energy_grid";
    case Experiment::CapacityReport:
      return "capacity_report";
  }
  return "?";
}

Experiment parse_experiment(std::string_view name) {
  const auto n = lower(name);
  for (auto e : {Experiment::BinaryOverlap, Experiment::ContinuousRecall, Experiment::HomologyCorrelation,
                 Experiment::EnergyGrid, Experiment::CapacityReport}) {
    if (n == to_string(e)) return e;
  }
  throw ConfigError("unknown experiment '" + std::string(name) +
                    "' (binary_overlap, continuous_recall, homology_correlation, energy_grid, capacity_report)");
}

std::string_view to_string(SyntheticKind k) noexcept {
  switch (k) {
    case SyntheticKind::Hadamard:
      return "hadamard";
    case SyntheticKind::Binary01:
      return "binary01";
    case SyntheticKind::Uniform:
      return "uniform";
  }
  return "?";
}

SyntheticKind parse_synthetic_kind(std::string_view name) {
  const auto n = lower(name);
  if (n == "hadamard") return SyntheticKind::Hadamard;
  if (n == "binary01") return SyntheticKind::Binary01;
  if (n == "uniform") return SyntheticKind::Uniform;
  throw ConfigError("unknown synthetic pattern kind '" + std::string(name) + "' (hadamard, binary01, uniform)");
}

// ---- config --------------------------------------------------------------

RunConfig RunConfig::from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const std::set<std::string> known = {
      "experiment", "n",          "condition",      "conditions",      "loadings",         "loading_fractions",
      "trials",     "seed",       "threads",        "out",             "dynamics",         "F",
      "max_steps",  "stop_rule",  "record_homology", "measure",        "measures",         "inv_t",
      "noise_variance", "settle_max_steps", "settle_tolerance", "queries_per_trial", "patterns", "dataset",
      "inv_ts",     "grid_size",  "max_degrees"};
  for (const auto& [k, v] : j.items()) {
    if (!known.contains(k)) throw ConfigError("unknown config key '" + k + "'");
  }

  RunConfig c;
  if (j.contains("experiment")) c.experiment = parse_experiment(field<std::string>(j, "experiment"));
  if (c.experiment == Experiment::EnergyGrid) {
    c.n = 10;
    c.loadings = {10};
    c.synthetic = SyntheticKind::Uniform;
  } else if (c.experiment == Experiment::ContinuousRecall) {
    c.n = 256;
    c.loadings = {10, 50, 100};
  } else if (c.experiment == Experiment::CapacityReport) {
    c.loadings = {10};
  }

  if (j.contains("n")) c.n = field<std::size_t>(j, "n");
  if (j.contains("condition") && j.contains("conditions")) throw ConfigError("give either condition or conditions");
  auto parse_conds = [&](const std::vector<std::string>& names) {
    std::vector<Condition> out;
    for (const auto& s : names) out.push_back(as_config_error("condition", [&] { return parse_condition(s); }));
    return out;
  };
  if (j.contains("condition")) c.conditions = parse_conds({field<std::string>(j, "condition")});
  if (j.contains("conditions")) c.conditions = parse_conds(field<std::vector<std::string>>(j, "conditions"));

  if (j.contains("loadings") && j.contains("loading_fractions")) {
    throw ConfigError("give either loadings or loading_fractions, not both");
  }
  if (j.contains("loadings")) {
    c.loadings.clear();
    for (const auto& v : j.at("loadings")) {
      if (!v.is_number_integer() || v.get<long long>() < 1) throw ConfigError("loadings must be positive integers");
      c.loadings.push_back(v.get<std::size_t>());
    }
  }
  if (j.contains("loading_fractions")) {
    c.loadings.clear();
    c.loading_fractions = field<std::vector<double>>(j, "loading_fractions");
  }
  if (j.contains("trials")) c.trials = field<std::size_t>(j, "trials");
  if (j.contains("seed")) c.seed = field<std::uint64_t>(j, "seed");
  if (j.contains("threads")) c.threads = field<std::size_t>(j, "threads");
  if (j.contains("out")) c.out = field<std::string>(j, "out");

  if (j.contains("dynamics")) c.dynamics = lower(field<std::string>(j, "dynamics"));
  if (j.contains("F")) c.interaction = field<std::string>(j, "F");
  if (j.contains("max_steps")) c.max_steps = field<std::size_t>(j, "max_steps");
  if (j.contains("stop_rule")) {
    c.stop_rule = as_config_error("stop_rule", [&] { return parse_stop_rule(field<std::string>(j, "stop_rule")); });
  }
  if (j.contains("record_homology")) c.record_homology = field<bool>(j, "record_homology");

  if (j.contains("measure") && j.contains("measures")) throw ConfigError("give either measure or measures");
  auto parse_measures = [&](const std::vector<std::string>& names) {
    std::vector<SimilarityMeasure> out;
    for (const auto& s : names) out.push_back(as_config_error("measure", [&] { return SimilarityMeasure::parse(s); }));
    return out;
  };
  if (j.contains("measure")) c.measures = parse_measures({field<std::string>(j, "measure")});
  if (j.contains("measures")) c.measures = parse_measures(field<std::vector<std::string>>(j, "measures"));
  if (j.contains("inv_t")) c.inv_t = field<double>(j, "inv_t");
  if (j.contains("noise_variance")) c.noise_variance = field<double>(j, "noise_variance");
  if (j.contains("settle_max_steps")) c.settle_max_steps = field<std::size_t>(j, "settle_max_steps");
  if (j.contains("settle_tolerance")) c.settle_tolerance = field<double>(j, "settle_tolerance");
  if (j.contains("queries_per_trial")) c.queries_per_trial = field<std::size_t>(j, "queries_per_trial");
  if (j.contains("patterns")) c.synthetic = parse_synthetic_kind(field<std::string>(j, "patterns"));
  if (j.contains("dataset") && !j.at("dataset").is_null()) {
    const auto& d = j.at("dataset");
    if (!d.is_object() || !d.contains("path")) throw ConfigError("dataset needs an object with a path");
    for (const auto& [k, v] : d.items()) {
      if (k != "path" && k != "format" && k != "limit" && k != "grayscale") {
        throw ConfigError("unknown dataset key '" + k + "'");
      }
    }
    DatasetSpec ds;
    ds.path = field<std::string>(d, "path");
    if (d.contains("format")) ds.format = field<std::string>(d, "format");
    if (d.contains("limit")) ds.limit = field<std::size_t>(d, "limit");
    if (d.contains("grayscale")) ds.grayscale = field<bool>(d, "grayscale");
    c.dataset = ds;
  }
  if (j.contains("inv_ts")) c.inv_ts = field<std::vector<double>>(j, "inv_ts");
  if (j.contains("grid_size")) c.grid_size = field<std::size_t>(j, "grid_size");
  if (j.contains("max_degrees")) c.max_degrees = field<std::vector<int>>(j, "max_degrees");

  c.validate();
  return c;
}

json RunConfig::to_json() const {
  json j;
  j["experiment"] = std::string(to_string(experiment));
  j["n"] = n;
  std::vector<std::string> conds;
  for (auto c : conditions) conds.emplace_back(to_string(c));
  j["conditions"] = conds;
  if (!loading_fractions.empty()) {
    j["loading_fractions"] = loading_fractions;
  } else if (loadings.empty()) {
    j["loading_fractions"] = kDefaultFractions;
  } else {
    j["loadings"] = loadings;
  }
  j["trials"] = trials;
  j["seed"] = seed;
  j["threads"] = threads;
  j["out"] = out;
  j["dynamics"] = dynamics;
  j["F"] = interaction;
  j["max_steps"] = max_steps;
  j["stop_rule"] = std::string(to_string(stop_rule));
  j["record_homology"] = record_homology;
  std::vector<std::string> ms;
  for (const auto& m : measures) ms.push_back(m.name());
  j["measures"] = ms;
  j["inv_t"] = inv_t;
  j["noise_variance"] = noise_variance;
  j["settle_max_steps"] = settle_max_steps;
  j["settle_tolerance"] = settle_tolerance;
  j["queries_per_trial"] = queries_per_trial;
  j["patterns"] = std::string(to_string(synthetic));
  if (dataset) {
    j["dataset"] = {{"path", dataset->path},
                    {"format", dataset->format},
                    {"limit", dataset->limit},
                    {"grayscale", dataset->grayscale}};
  } else {
    j["dataset"] = nullptr;
  }
  j["inv_ts"] = inv_ts;
  j["grid_size"] = grid_size;
  j["max_degrees"] = max_degrees;
  return j;
}

std::vector<std::size_t> RunConfig::resolved_loadings() const {
  if (loading_fractions.empty()) {
    if (!loadings.empty()) return loadings;
    std::vector<std::size_t> out;
    for (double f : kDefaultFractions) out.push_back(static_cast<std::size_t>(std::llround(f * static_cast<double>(n))));
    return out;
  }
  std::vector<std::size_t> out;
  for (double f : loading_fractions) out.push_back(static_cast<std::size_t>(std::llround(f * static_cast<double>(n))));
  return out;
}

Dynamics RunConfig::binary_dynamics() const {
  if (dynamics == "traditional") return TraditionalDynamics{};
  if (dynamics == "modern") return ModernDynamics{parse_interaction(interaction)};
  throw ConfigError("dynamics must be 'traditional' or 'modern', got '" + dynamics + "'");
}

void RunConfig::validate() const {
  if (n < 2) throw ConfigError("n must be >= 2");
  if (trials < 1) throw ConfigError("trials must be >= 1");
  if (conditions.empty()) throw ConfigError("at least one condition is required");
  for (double f : loading_fractions) {
    if (!(f > 0.0)) throw ConfigError("loading fractions must be positive");
  }
  const auto loads = resolved_loadings();
  for (auto p : loads) {
    if (p == 0) throw ConfigError("every loading must resolve to at least one pattern");
  }
  for (auto c : conditions) {
    as_config_error("condition " + std::string(to_string(c)), [&] {
      const auto spec = dilution_spec(c, n);
      for (const auto& [dim, count] : dilution_counts(spec)) {
        if (static_cast<std::size_t>(dim) + 1 > n || count > binomial(n, static_cast<std::uint64_t>(dim) + 1)) {
          throw std::invalid_argument("needs more " + std::to_string(dim) + "-simplices than exist at N=" +
                                      std::to_string(n));
        }
      }
      return 0;
    });
  }
  switch (experiment) {
    case Experiment::BinaryOverlap:
    case Experiment::HomologyCorrelation:
      if (max_steps < 1) throw ConfigError("max_steps must be >= 1");
      (void)binary_dynamics();
      break;
    case Experiment::ContinuousRecall:
    case Experiment::EnergyGrid:
      if (!(inv_t > 0.0)) throw ConfigError("inv_t must be positive");
      if (!(noise_variance >= 0.0)) throw ConfigError("noise_variance must be non-negative");
      if (measures.empty()) throw ConfigError("at least one measure is required");
      if (settle_max_steps < 1) throw ConfigError("settle_max_steps must be >= 1");
      for (double t : inv_ts) {
        if (!(t > 0.0)) throw ConfigError("inv_ts entries must be positive");
      }
      if (experiment == Experiment::EnergyGrid && grid_size < 2) throw ConfigError("grid_size must be >= 2");
      if (dataset) {
        if (!fs::exists(dataset->path)) throw ConfigError("dataset path does not exist: " + dataset->path);
        if (lower(dataset->format) != "csv") as_config_error("dataset format", [&] { return parse_image_format(dataset->format); });
      } else if (synthetic == SyntheticKind::Hadamard) {
        if (!std::has_single_bit(n)) throw ConfigError("hadamard patterns need n to be a power of two");
        for (auto p : loads) {
          if (p >= n) throw ConfigError("hadamard patterns allow at most n - 1 patterns");
        }
      }
      break;
    case Experiment::CapacityReport:
      for (int d : max_degrees) {
        if (d < 1 || static_cast<std::size_t>(d) >= n) throw ConfigError("max_degrees entries must lie in [1, n)");
      }
      break;
  }
}

// ---- experiments -----------------------------------------------------------

RunResult run_binary_overlap(const RunConfig& cfg) { return run_binary_like(cfg, cfg.record_homology); }

RunResult run_homology_correlation(const RunConfig& cfg) { return run_binary_like(cfg, true); }

RunResult run_continuous_recall(const RunConfig& cfg) {
  cfg.validate();
  const auto corpus = load_dataset(cfg);
  const auto loads = cfg.resolved_loadings();
  if (corpus) {
    if (corpus->width() != cfg.n) {
      throw ConfigError("dataset width " + std::to_string(corpus->width()) + " != n " + std::to_string(cfg.n));
    }
    for (auto p : loads) {
      if (p > corpus->num_patterns()) {
        throw ConfigError("dataset has " + std::to_string(corpus->num_patterns()) + " rows, loading " +
                          std::to_string(p) + " requested");
      }
    }
  }

  struct Unit {
    std::size_t p, t;
  };
  std::vector<Unit> units;
  for (auto p : loads) {
    for (std::size_t t = 0; t < cfg.trials; ++t) units.push_back({p, t});
  }
  std::vector<std::vector<TrialRow>> per_unit(units.size());
  parallel_for(units.size(), cfg.threads, [&](std::size_t k) {
    const auto [p, t] = units[k];
    const auto tseed = trial_seed(cfg, p, t);
    const auto patterns = continuous_patterns(cfg, corpus, p, tseed);
    const std::size_t queries = cfg.queries_per_trial == 0 ? p : std::min(p, cfg.queries_per_trial);
    std::vector<std::vector<double>> cues;
    for (std::size_t mu = 0; mu < queries; ++mu) {
      cues.push_back(corrupt(patterns.row(mu), GaussianNoise{cfg.noise_variance}, derive_seed(tseed, {kQueryTag, mu})));
    }
    for (auto c : cfg.conditions) {
      const auto complex = trial_complex(cfg, c, tseed);
      for (const auto& m : cfg.measures) {
        if (c == Condition::K1 && (m.kind == SimilarityMeasure::Kind::Ced || m.kind == SimilarityMeasure::Kind::Cmd)) {
          continue;
        }
        for (std::size_t mu = 0; mu < queries; ++mu) {
          const auto settled = settle(cues[mu], patterns, complex, m, cfg.inv_t, cfg.settle_tolerance, cfg.settle_max_steps);
          const auto score = score_mse(settled.state, patterns);
          TrialRow row;
          row.trial_id = t;
          row.condition = std::string(to_string(c));
          row.measure = m.name();
          row.P = p;
          row.seed = tseed;
          row.query = mu;
          row.best_index = score.best_index;
          row.best_value = score.best_value;
          row.recalled = correct_recall(settled.state, patterns.row(mu));
          row.steps = settled.steps;
          row.stop_reason = settled.converged ? "converged" : "max_steps";
          per_unit[k].push_back(std::move(row));
        }
      }
    }
  });

  RunResult result;
  result.experiment = Experiment::ContinuousRecall;
  for (auto& u : per_unit) {
    for (auto& r : u) result.rows.push_back(std::move(r));
  }
  sort_rows(cfg, result.rows);

  const auto& rows = result.rows;
  for (std::size_t begin = 0; begin < rows.size();) {
    std::size_t end = begin;
    std::vector<double> fractions;
    while (end < rows.size() && rows[end].condition == rows[begin].condition &&
           rows[end].measure == rows[begin].measure && rows[end].P == rows[begin].P) {
      const std::size_t trial = rows[end].trial_id;
      std::size_t hits = 0, total = 0;
      while (end < rows.size() && rows[end].condition == rows[begin].condition &&
             rows[end].measure == rows[begin].measure && rows[end].P == rows[begin].P && rows[end].trial_id == trial) {
        hits += *rows[end].recalled ? 1 : 0;
        ++total;
        ++end;
      }
      fractions.push_back(static_cast<double>(hits) / static_cast<double>(total));
    }
    const auto s = summarize(fractions);
    result.summary.push_back({rows[begin].condition, rows[begin].measure, rows[begin].P, s.n, s.mean, s.sd, std::nullopt, false});
    begin = end;
  }
  return result;
}

RunResult run_experiment(const RunConfig& cfg) {
  switch (cfg.experiment) {
    case Experiment::BinaryOverlap:
      return run_binary_overlap(cfg);
    case Experiment::ContinuousRecall:
      return run_continuous_recall(cfg);
    case Experiment::HomologyCorrelation:
      return run_homology_correlation(cfg);
    default:
      throw ConfigError("experiment " + std::string(to_string(cfg.experiment)) + " does not produce trial rows");
  }
}

// ---- PCA energy grid -------------------------------------------------------

Pca2 principal_components(const PatternSet& patterns) {
  const std::size_t p = patterns.num_patterns(), n = patterns.width();
  if (p < 3) throw std::invalid_argument("PCA needs at least 3 patterns");
  if (n < 2) throw std::invalid_argument("PCA needs at least 2 dimensions");
  Eigen::MatrixXd x(p, n);
  for (std::size_t mu = 0; mu < p; ++mu) {
    for (std::size_t i = 0; i < n; ++i) x(mu, i) = patterns(mu, i);
  }
  const Eigen::RowVectorXd mean = x.colwise().mean();
  const Eigen::MatrixXd centred = x.rowwise() - mean;
  const Eigen::MatrixXd cov = centred.transpose() * centred / static_cast<double>(p - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigen-decomposition failed");
  const auto& vals = solver.eigenvalues();  // ascending
  const auto& vecs = solver.eigenvectors();

  Pca2 out;
  out.mean.assign(mean.data(), mean.data() + n);
  auto take = [&](Eigen::Index col) {
    std::vector<double> v(vecs.col(col).data(), vecs.col(col).data() + n);
    const auto big = std::max_element(v.begin(), v.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
    if (*big < 0) {
      for (auto& e : v) e = -e;
    }
    return v;
  };
  const auto last = static_cast<Eigen::Index>(n) - 1;
  out.pc1 = take(last);
  out.pc2 = take(last - 1);
  double total = 0.0;
  for (Eigen::Index k = last; k >= 0; --k) {
    const double v = std::max(0.0, vals(k));
    out.eigenvalues.push_back(v);
    total += v;
  }
  out.explained_variance = total > 0.0 ? (out.eigenvalues[0] + out.eigenvalues[1]) / total : 0.0;
  return out;
}

EnergyGridResult run_energy_grid(const RunConfig& cfg) {
  cfg.validate();
  const auto corpus = load_dataset(cfg);
  const std::size_t p = cfg.resolved_loadings().front();
  if (corpus && (p > corpus->num_patterns() || corpus->width() != cfg.n)) {
    throw ConfigError("dataset does not provide " + std::to_string(p) + " patterns of width " + std::to_string(cfg.n));
  }
  if (p < 3) throw ConfigError("energy grid needs at least 3 patterns");
  const auto tseed = trial_seed(cfg, p, 0);
  const auto patterns = continuous_patterns(cfg, corpus, p, tseed);
  const auto complex = trial_complex(cfg, cfg.conditions.front(), tseed);

  EnergyGridResult g;
  g.pca = principal_components(patterns);
  g.grid_size = cfg.grid_size;
  g.inv_ts = cfg.inv_ts;
  double lo1 = 1e300, hi1 = -1e300, lo2 = 1e300, hi2 = -1e300;
  for (std::size_t mu = 0; mu < p; ++mu) {
    double a = 0.0, b = 0.0;
    for (std::size_t i = 0; i < cfg.n; ++i) {
      const double d = patterns(mu, i) - g.pca.mean[i];
      a += d * g.pca.pc1[i];
      b += d * g.pca.pc2[i];
    }
    g.pattern_coords.emplace_back(a, b);
    lo1 = std::min(lo1, a);
    hi1 = std::max(hi1, a);
    lo2 = std::min(lo2, b);
    hi2 = std::max(hi2, b);
  }
  for (std::size_t k = 0; k < g.grid_size; ++k) {
    const double f = static_cast<double>(k) / static_cast<double>(g.grid_size - 1);
    g.axis1.push_back(lo1 + f * (hi1 - lo1));
    g.axis2.push_back(lo2 + f * (hi2 - lo2));
  }
  std::vector<double> state(cfg.n);
  for (double inv_t : g.inv_ts) {
    std::vector<double> e;
    for (std::size_t iy = 0; iy < g.grid_size; ++iy) {
      for (std::size_t ix = 0; ix < g.grid_size; ++ix) {
        for (std::size_t i = 0; i < cfg.n; ++i) {
          state[i] = g.pca.mean[i] + g.axis1[ix] * g.pca.pc1[i] + g.axis2[iy] * g.pca.pc2[i];
        }
        e.push_back(continuous_energy(state, patterns, complex, inv_t));
      }
    }
    g.energies.push_back(std::move(e));
  }
  return g;
}

// ---- capacity ----------------------------------------------------------------

json capacity_report(const RunConfig& cfg) {
  if (cfg.n < 2) throw ConfigError("n must be >= 2");
  json entries = json::array();
  for (int d : cfg.max_degrees) {
    if (d < 1 || static_cast<std::size_t>(d) >= cfg.n) throw ConfigError("max_degrees entries must lie in [1, n)");
    const double with_errors = capacity_mixed({cfg.n, d, true});
    const double without_errors = capacity_mixed({cfg.n, d, false});
    json per_load = json::array();
    for (auto p : cfg.resolved_loadings()) {
      per_load.push_back({{"P", p},
                          {"z_total", z_total(cfg.n, p, d)},
                          {"noise_total", noise_total(cfg.n, p, d)},
                          {"prob_stable_pattern", prob_stable_pattern(cfg.n, p, d)},
                          {"below_capacity_with_errors", static_cast<double>(p) < with_errors},
                          {"below_capacity_without_errors", static_cast<double>(p) < without_errors}});
    }
    entries.push_back({{"N", cfg.n},
                       {"D", d},
                       {"capacity_with_errors", with_errors},
                       {"capacity_without_errors", without_errors},
                       {"connections_count", connections_count(cfg.n, d).get_str()},
                       {"loadings", per_load}});
  }
  return {{"label", "asymptotic estimate"}, {"entries", entries}};
}

// ---- emission --------------------------------------------------------------

std::string rows_csv(const RunResult& result) {
  std::string s =
      "trial_id,condition,measure,P,seed,query,best_index,best_value,recalled,steps,stop_reason,beta0,beta1,beta2\n";
  auto opt = [](const std::optional<std::size_t>& v) { return v ? std::to_string(*v) : std::string(); };
  for (const auto& r : result.rows) {
    s += std::to_string(r.trial_id) + "," + r.condition + "," + r.measure + "," + std::to_string(r.P) + "," +
         std::to_string(r.seed) + "," + opt(r.query) + "," + std::to_string(r.best_index) + "," + fmt(r.best_value) +
         "," + (r.recalled ? (*r.recalled ? "1" : "0") : "") + "," + std::to_string(r.steps) + "," + r.stop_reason +
         "," + opt(r.beta0) + "," + opt(r.beta1) + "," + opt(r.beta2) + "\n";
  }
  return s;
}

std::string summary_csv(const RunResult& result) {
  std::string s = "condition,measure,P,n,mean,sd,pearson_r\n";
  for (const auto& r : result.summary) {
    std::string corr;
    if (r.has_correlation) corr = r.pearson_r ? fmt(*r.pearson_r) : "undefined";
    s += r.condition + "," + r.measure + "," + std::to_string(r.P) + "," + std::to_string(r.n) + "," + fmt(r.mean) +
         "," + fmt(r.sd) + "," + corr + "\n";
  }
  return s;
}

void emit_outputs(const RunResult& result, const RunConfig& cfg, const fs::path& dir) {
  fs::create_directories(dir);
  write_text_file(dir / "rows.csv", rows_csv(result));
  write_text_file(dir / "summary.csv", summary_csv(result));
  write_text_file(dir / "config-echo.json", cfg.to_json().dump(2) + "\n");

  if (result.experiment == Experiment::ContinuousRecall) {
    std::map<std::string, svg::Series> by_key;
    std::vector<std::string> order;
    for (const auto& s : result.summary) {
      const auto key = s.condition + " " + s.measure;
      if (!by_key.contains(key)) {
        order.push_back(key);
        by_key[key].name = key;
      }
      by_key[key].points.emplace_back(static_cast<double>(s.P), s.mean);
      by_key[key].error.push_back(s.sd);
    }
    std::vector<svg::Series> series;
    for (const auto& k : order) series.push_back(by_key[k]);
    write_text_file(dir / "recall_curve.svg",
                    svg::line_plot("Recall vs memory loading", "stored patterns", "fraction recalled", series));
    return;
  }
  std::vector<svg::BoxGroup> groups;
  for (const auto& s : result.summary) {
    svg::BoxGroup g{s.condition + " P=" + std::to_string(s.P), {}};
    for (const auto& r : result.rows) {
      if (r.condition == s.condition && r.P == s.P) g.values.push_back(r.best_value);
    }
    groups.push_back(std::move(g));
  }
  write_text_file(dir / "overlap_boxplot.svg", svg::box_plot("Final overlap", "overlap", groups));
}

void emit_energy_grid(const EnergyGridResult& g, const RunConfig& cfg, const fs::path& dir) {
  fs::create_directories(dir);
  std::string csv = "inv_t,ix,iy,pc1,pc2,energy\n";
  for (std::size_t t = 0; t < g.inv_ts.size(); ++t) {
    for (std::size_t iy = 0; iy < g.grid_size; ++iy) {
      for (std::size_t ix = 0; ix < g.grid_size; ++ix) {
        csv += fmt(g.inv_ts[t]) + "," + std::to_string(ix) + "," + std::to_string(iy) + "," + fmt(g.axis1[ix]) + "," +
               fmt(g.axis2[iy]) + "," + fmt(g.energies[t][iy * g.grid_size + ix]) + "\n";
      }
    }
  }
  write_text_file(dir / "energy_grid.csv", csv);
  json coords = json::array();
  for (const auto& [a, b] : g.pattern_coords) coords.push_back({a, b});
  write_text_file(dir / "pca.json", json{{"explained_variance", g.pca.explained_variance},
                                         {"eigenvalues", g.pca.eigenvalues},
                                         {"pattern_coords", coords}}
                                            .dump(2) +
                                        "\n");
  write_text_file(dir / "config-echo.json", cfg.to_json().dump(2) + "\n");

  const double span1 = g.axis1.back() - g.axis1.front(), span2 = g.axis2.back() - g.axis2.front();
  std::vector<std::pair<double, double>> overlay;
  for (const auto& [a, b] : g.pattern_coords) {
    overlay.emplace_back(span1 > 0 ? (a - g.axis1.front()) / span1 * static_cast<double>(g.grid_size - 1) + 0.5 : 0.5,
                         span2 > 0 ? (b - g.axis2.front()) / span2 * static_cast<double>(g.grid_size - 1) + 0.5 : 0.5);
  }
  for (std::size_t t = 0; t < g.inv_ts.size(); ++t) {
    std::vector<std::vector<double>> grid(g.grid_size, std::vector<double>(g.grid_size));
    for (std::size_t iy = 0; iy < g.grid_size; ++iy) {
      for (std::size_t ix = 0; ix < g.grid_size; ++ix) grid[iy][ix] = g.energies[t][iy * g.grid_size + ix];
    }
    write_text_file(dir / ("energy_heatmap_invT" + fmt(g.inv_ts[t]) + ".svg"),
                    svg::heatmap("Energy, inverse temperature " + fmt(g.inv_ts[t]), grid, overlay));
  }
}

}  // namespace shn
