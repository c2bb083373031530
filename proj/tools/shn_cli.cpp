#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "shn/complex.hpp"
#include "shn/harness.hpp"
#include "shn/homology.hpp"
#include "shn/io.hpp"
#include "shn/patterns.hpp"

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> n;
  std::optional<std::string> condition;
  std::optional<std::size_t> trials;
  std::optional<std::string> measure;
  std::optional<double> inv_t;
  std::optional<std::string> out;
};

void add_overrides(CLI::App* app, Overrides& o) {
  app->add_option("--config", o.config, "Run configuration (JSON)");
  app->add_option("--seed", o.seed, "Master seed");
  app->add_option("--n", o.n, "Number of neurons");
  app->add_option("--condition", o.condition, "Condition key(s), comma separated (e.g. K1,R1[2])");
  app->add_option("--trials", o.trials, "Trials per loading");
  app->add_option("--measure", o.measure, "Similarity measure(s), comma separated");
  app->add_option("--inv-t", o.inv_t, "Inverse temperature");
  app->add_option("--out", o.out, "Output directory");
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string part; std::getline(ss, part, ',');) {
    if (!part.empty()) out.push_back(part);
  }
  return out;
}

shn::RunConfig resolve_config(const Overrides& o, shn::Experiment experiment) {
  json j = json::object();
  if (!o.config.empty()) {
    try {
      j = json::parse(shn::read_text_file(o.config));
    } catch (const json::parse_error& e) {
      throw shn::ConfigError(o.config + ": " + e.what());
    } catch (const std::runtime_error& e) {
      throw shn::ConfigError(e.what());
    }
    if (!j.is_object()) throw shn::ConfigError(o.config + ": config must be a JSON object");
  }
  if (j.contains("experiment")) {
    if (!j.at("experiment").is_string()) throw shn::ConfigError("experiment must be a string");
    const auto named = shn::parse_experiment(j.at("experiment").get<std::string>());
    const bool compatible = named == experiment || (experiment == shn::Experiment::BinaryOverlap &&
                                                    named == shn::Experiment::HomologyCorrelation);
    if (!compatible) {
      throw shn::ConfigError("config experiment '" + std::string(shn::to_string(named)) +
                             "' does not match this subcommand");
    }
  } else {
    j["experiment"] = std::string(shn::to_string(experiment));
  }
  if (o.seed) j["seed"] = *o.seed;
  if (o.n) j["n"] = *o.n;
  if (o.condition) {
    j.erase("condition");
    j["conditions"] = split_commas(*o.condition);
  }
  if (o.trials) j["trials"] = *o.trials;
  if (o.measure) {
    j.erase("measure");
    j["measures"] = split_commas(*o.measure);
  }
  if (o.inv_t) j["inv_t"] = *o.inv_t;
  if (o.out) j["out"] = *o.out;
  return shn::RunConfig::from_json(j);
}

void print_summary(const shn::RunResult& r, const fs::path& dir) {
  std::cout << shn::summary_csv(r);
  std::cerr << "wrote " << (dir / "rows.csv").string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simplicial Hopfield networks: complexes, dynamics, homology and experiments"};
  app.require_subcommand(1);

  // gen-complex
  auto* gen = app.add_subcommand("gen-complex", "Sample a diluted complex and write it as JSON");
  std::size_t gen_n = 100, gen_patterns = 0;
  std::string gen_condition = "K1", gen_out;
  std::uint64_t gen_seed = 0;
  gen->add_option("--n", gen_n, "Number of vertices");
  gen->add_option("--condition", gen_condition, "Condition key");
  gen->add_option("--seed", gen_seed, "Seed");
  gen->add_option("--patterns", gen_patterns, "Embed this many random binary patterns as Hebbian weights");
  gen->add_option("--out", gen_out, "Output file (stdout when omitted)");

  Overrides bin_o, cont_o, hom_o, grid_o, cap_o;
  auto* run_bin = app.add_subcommand("run-binary", "Binary overlap experiment");
  add_overrides(run_bin, bin_o);
  auto* run_cont = app.add_subcommand("run-continuous", "Continuous recall experiment");
  add_overrides(run_cont, cont_o);

  auto* hom = app.add_subcommand("homology", "Betti numbers of complex files, or the homology correlation experiment");
  add_overrides(hom, hom_o);
  std::vector<std::string> hom_files;
  hom->add_option("--complex", hom_files, "Complex JSON file(s); prints {beta0, beta1, beta2, chi} per file");

  auto* grid = app.add_subcommand("energy-grid", "Energy over a PCA grid of the stored patterns");
  add_overrides(grid, grid_o);
  auto* cap = app.add_subcommand("capacity", "Closed-form capacity estimates");
  add_overrides(cap, cap_o);
  std::vector<int> cap_degrees;
  cap->add_option("--max-degree", cap_degrees, "Skeleton dimension(s) D");

  auto* load = app.add_subcommand("load-patterns", "Convert an image corpus to flat binary or CSV");
  std::string load_path, load_format = "idx", load_out;
  std::size_t load_limit = 0;
  bool load_gray = false;
  load->add_option("path", load_path, "Corpus file or directory")->required();
  load->add_option("--format", load_format, "idx | png-dir | flat | csv");
  load->add_option("--limit", load_limit, "Maximum number of images (0 = all)");
  load->add_flag("--grayscale", load_gray, "Average RGB channels");
  load->add_option("--out", load_out, "Output path (.csv writes CSV, anything else flat float32 + sidecar)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*gen) {
      const auto structure = shn::sample_diluted(gen_n, shn::dilution_spec(shn::parse_condition(gen_condition), gen_n), gen_seed);
      const auto complex = gen_patterns > 0
                               ? shn::hebbian_weights(structure, shn::random_binary_patterns(gen_patterns, gen_n, gen_seed + 1))
                               : structure;
      if (gen_out.empty()) {
        std::cout << shn::complex_to_json(complex).dump() << "\n";
      } else {
        shn::save_complex(gen_out, complex);
      }
    } else if (*run_bin) {
      const auto cfg = resolve_config(bin_o, shn::Experiment::BinaryOverlap);
      const auto r = shn::run_experiment(cfg);
      shn::emit_outputs(r, cfg, cfg.out);
      print_summary(r, cfg.out);
    } else if (*run_cont) {
      const auto cfg = resolve_config(cont_o, shn::Experiment::ContinuousRecall);
      const auto r = shn::run_continuous_recall(cfg);
      shn::emit_outputs(r, cfg, cfg.out);
      print_summary(r, cfg.out);
    } else if (*hom) {
      if (!hom_files.empty()) {
        for (const auto& f : hom_files) {
          const auto closed = shn::downward_closure(shn::load_complex(f));
          const auto b = shn::betti_numbers(closed, 2);
          std::cout << json{{"file", f},
                            {"beta0", b[0]},
                            {"beta1", b[1]},
                            {"beta2", b[2]},
                            {"chi", shn::functional_euler_characteristic(shn::load_complex(f))},
                            {"chi_closure", closed.euler_characteristic()}}
                           .dump()
                    << "\n";
        }
      } else {
        const auto cfg = resolve_config(hom_o, shn::Experiment::HomologyCorrelation);
        const auto r = shn::run_homology_correlation(cfg);
        shn::emit_outputs(r, cfg, cfg.out);
        print_summary(r, cfg.out);
      }
    } else if (*grid) {
      const auto cfg = resolve_config(grid_o, shn::Experiment::EnergyGrid);
      const auto g = shn::run_energy_grid(cfg);
      shn::emit_energy_grid(g, cfg, cfg.out);
      std::cout << json{{"explained_variance", g.pca.explained_variance}, {"out", cfg.out}}.dump() << "\n";
    } else if (*cap) {
      auto cfg = resolve_config(cap_o, shn::Experiment::CapacityReport);
      if (!cap_degrees.empty()) cfg.max_degrees = cap_degrees;
      std::cout << shn::capacity_report(cfg).dump(2) << "\n";
    } else if (*load) {
      const auto patterns = load_format == "csv"
                                ? shn::load_csv(load_path, load_limit)
                                : shn::load_image_corpus(load_path, shn::parse_image_format(load_format), load_limit, load_gray);
      if (fs::path(load_out).extension() == ".csv") {
        shn::save_csv(load_out, patterns);
      } else {
        shn::save_flat(load_out, patterns);
      }
      std::cout << json{{"rows", patterns.num_patterns()}, {"cols", patterns.width()}}.dump() << "\n";
    }
  } catch (const shn::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
