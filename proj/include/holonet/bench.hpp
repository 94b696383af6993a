#ifndef HOLONET_BENCH_HPP
#define HOLONET_BENCH_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace holonet {

// Configuration-driven experiment harness. Experiments: random-entropy,
// fit-state, var-evolution, tebd-bench, embed-check. Each run writes
// results.csv and manifest.json into the output directory; identical configs
// reproduce the CSV byte for byte.
struct ExperimentConfig {
  std::string experiment;
  std::uint64_t master_seed = 1;
  std::vector<int> L_values = {6};
  std::vector<std::int64_t> chi_values = {2};
  int surface = 1;  // 0 selects the midpoint floor(L/2)
  std::string model = "tfim";
  double J = 1.0, g = 1.0, h = 0.0;
  double dt = 0.25;
  double t_max = 1.0;
  int realizations = 16;
  int restarts = 50;
  double tol = 1e-10;
  std::string reference = "ghz";  // fit-state: ghz|w|matchgate|clifford|haar
  std::string initial = "plus";   // tebd-bench: plus|rainbow|random
  std::string ansatz = "holo";    // tebd-bench: holo|mps
  std::int64_t mps_chi = 4;       // var-evolution baseline
  std::string out_dir = ".";
  int jobs = 1;

  std::string canonical_json() const;  // sorted-key dump; the round-trip form
  static ExperimentConfig from_json_text(const std::string& text);
  static ExperimentConfig load(const std::string& path);
  void check() const;
};

// FNV-1a over the canonical JSON.
std::uint64_t config_hash(const std::string& canonical_json);

// Runs the experiment; returns the process exit status (0 ok, 2 invalid
// config, 3 numeric failure with partial results flushed).
int run_experiment(const ExperimentConfig& cfg);

std::string format_g17(double x);

}  // namespace holonet

#endif  // HOLONET_BENCH_HPP
