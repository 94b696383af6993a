#include "holonet/bench.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <thread>

#include "json.hpp"

#include "holonet/evolve.hpp"
#include "holonet/fit.hpp"
#include "holonet/serialize.hpp"

namespace holonet {

using nlohmann::json;

namespace {

constexpr const char* kCodeVersion = "holonet 1.0.0";

json to_json(const ExperimentConfig& c) {
  json j;
  j["experiment"] = c.experiment;
  j["master_seed"] = c.master_seed;
  j["L_values"] = c.L_values;
  j["chi_values"] = c.chi_values;
  j["surface"] = c.surface;
  j["model"] = c.model;
  j["J"] = c.J;
  j["g"] = c.g;
  j["h"] = c.h;
  j["dt"] = c.dt;
  j["t_max"] = c.t_max;
  j["realizations"] = c.realizations;
  j["restarts"] = c.restarts;
  j["tol"] = c.tol;
  j["reference"] = c.reference;
  j["initial"] = c.initial;
  j["ansatz"] = c.ansatz;
  j["mps_chi"] = c.mps_chi;
  j["out_dir"] = c.out_dir;
  j["jobs"] = c.jobs;
  return j;
}

void from_json_obj(const json& j, ExperimentConfig& c) {
  c.experiment = j.at("experiment");
  if (j.contains("master_seed")) c.master_seed = j.at("master_seed");
  if (j.contains("L_values")) c.L_values = j.at("L_values").get<std::vector<int>>();
  if (j.contains("chi_values"))
    c.chi_values = j.at("chi_values").get<std::vector<std::int64_t>>();
  if (j.contains("surface")) c.surface = j.at("surface");
  if (j.contains("model")) c.model = j.at("model");
  if (j.contains("J")) c.J = j.at("J");
  if (j.contains("g")) c.g = j.at("g");
  if (j.contains("h")) c.h = j.at("h");
  if (j.contains("dt")) c.dt = j.at("dt");
  if (j.contains("t_max")) c.t_max = j.at("t_max");
  if (j.contains("realizations")) c.realizations = j.at("realizations");
  if (j.contains("restarts")) c.restarts = j.at("restarts");
  if (j.contains("tol")) c.tol = j.at("tol");
  if (j.contains("reference")) c.reference = j.at("reference");
  if (j.contains("initial")) c.initial = j.at("initial");
  if (j.contains("ansatz")) c.ansatz = j.at("ansatz");
  if (j.contains("mps_chi")) c.mps_chi = j.at("mps_chi");
  if (j.contains("out_dir")) c.out_dir = j.at("out_dir");
  if (j.contains("jobs")) c.jobs = j.at("jobs");
}

ModelSpec model_of(const ExperimentConfig& c, int L) {
  ModelSpec spec;
  spec.kind = c.model == "kic" ? ModelKind::kic : ModelKind::tfim;
  spec.J = c.J;
  spec.g = c.g;
  spec.h = c.h;
  spec.L = L;
  return spec;
}

int surface_of(const ExperimentConfig& c, int L) { return c.surface == 0 ? L / 2 : c.surface; }

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& columns) : out_(path) {
    require(out_.good(), "io-error", "cannot open " + path);
    for (std::size_t i = 0; i < columns.size(); ++i)
      out_ << (i ? "," : "") << columns[i];
    out_ << '\n';
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << '\n';
    out_.flush();
  }

 private:
  std::ofstream out_;
};

// Deterministic parallel map: results land by task index.
template <typename Fn>
void parallel_tasks(int n_tasks, int jobs, const Fn& fn) {
  if (jobs <= 1) {
    for (int i = 0; i < n_tasks; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  const int workers = std::min(jobs, n_tasks);
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n_tasks; i = next.fetch_add(1)) fn(i);
    });
  for (auto& t : pool) t.join();
}

DenseTensor section34_pair() {
  DenseTensor pair({{"q0", 2}, {"q1", 2}});
  pair.at({0, 0}) = std::sqrt(0.2);
  pair.at({0, 1}) = std::sqrt(0.4);
  pair.at({1, 0}) = std::sqrt(0.4);
  return pair;
}

MPS plus_product(int L) {
  MPS m = product_mps(std::vector<std::int64_t>(L, 0));
  for (auto& t : m.tensors) {
    t.at({0, 0, 0}) = 1.0 / std::sqrt(2.0);
    t.at({0, 1, 0}) = 1.0 / std::sqrt(2.0);
  }
  return m;
}

StateVector reference_state(const std::string& kind, int L, Rng& rng) {
  if (kind == "ghz") return mps_to_statevector(ghz_mps(L));
  if (kind == "w") return mps_to_statevector(w_mps(L));
  if (kind == "matchgate") return random_matchgate_state(L, rng).first;
  if (kind == "clifford") return random_clifford_state(L, rng);
  if (kind == "haar") return StateVector::haar_random(L, rng);
  raise("invalid-config", "unknown fit reference '" + kind + "'");
}

// --- experiments -------------------------------------------------------------

void run_random_entropy(const ExperimentConfig& c, CsvWriter& csv, json& tasks) {
  struct Row {
    int L;
    std::int64_t chi;
    int realization;
    double s2, s2_oracle;
  };
  std::vector<std::tuple<int, std::int64_t, int>> grid;
  for (int L : c.L_values)
    for (auto chi : c.chi_values)
      for (int r = 0; r < c.realizations; ++r) grid.push_back({L, chi, r});
  std::vector<Row> rows(grid.size());

  parallel_tasks(static_cast<int>(grid.size()), c.jobs, [&](int i) {
    auto [L, chi, r] = grid[i];
    Rng rng(Rng::mix(c.master_seed, Rng::mix(L * 131 + 7, Rng::mix(chi, r))));
    NetLayout lay = build_layout(L, surface_of(c, L), chi);
    HoloNet net = random_network(lay, rng);
    const double s2 = (surface_of(c, L) == L / 2 || surface_of(c, L) == L / 2 + 1)
                          ? renyi2_midpoint(net)
                          : renyi2_dense(to_statevector(net), L / 2);
    const double s2_oracle = renyi2_dense(to_statevector(net), L / 2);
    rows[i] = {L, chi, r, s2, s2_oracle};
  });

  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& w = rows[i];
    csv.row({std::to_string(w.L), std::to_string(w.chi), std::to_string(w.realization),
             format_g17(w.s2), format_g17(w.s2_oracle), format_g17(page_value(w.L))});
    tasks.push_back({{"task", i}, {"L", w.L}, {"chi", w.chi}, {"realization", w.realization}});
  }
}

void run_fit_state(const ExperimentConfig& c, CsvWriter& csv, json& tasks) {
  struct Row {
    int L;
    std::int64_t chi;
    int instance;
    double err;
    int tries;
    bool ok;
  };
  std::vector<std::tuple<int, std::int64_t, int>> grid;
  for (int L : c.L_values)
    for (auto chi : c.chi_values)
      for (int r = 0; r < c.realizations; ++r) grid.push_back({L, chi, r});
  std::vector<Row> rows(grid.size());

  parallel_tasks(static_cast<int>(grid.size()), c.jobs, [&](int i) {
    auto [L, chi, r] = grid[i];
    Rng gen(Rng::mix(c.master_seed, Rng::mix(0x5eed, Rng::mix(L, r))));
    StateVector ref = reference_state(c.reference, L, gen);
    Rng fit_rng(Rng::mix(c.master_seed, Rng::mix(0xf17, Rng::mix(chi, r))));
    auto [net, rep] =
        fit_network_to_state(ref, build_layout(L, surface_of(c, L), chi), c.restarts, c.tol, fit_rng);
    rows[i] = {L, chi, r, rep.final_cost, rep.iterations, rep.converged};
  });

  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& w = rows[i];
    csv.row({std::to_string(w.L), std::to_string(w.chi), std::to_string(w.instance),
             format_g17(w.err), std::to_string(w.tries), w.ok ? "1" : "0"});
    tasks.push_back({{"task", i}, {"L", w.L}, {"chi", w.chi}, {"instance", w.instance}});
  }
}

void run_var_evolution(const ExperimentConfig& c, CsvWriter& csv, json& tasks) {
  const int L = c.L_values.front();
  const ModelSpec spec = model_of(c, L);
  const int steps = static_cast<int>(std::llround(c.t_max / c.dt));

  StateVector psi = c.initial == "rainbow"
                        ? to_statevector(rainbow_network(L, section34_pair(), 4))
                        : mps_to_statevector(plus_product(L));
  if (spec.kind == ModelKind::kic) psi = StateVector::zeros_state(L);

  std::vector<HoloNet> warm;
  for (int step = 1; step <= steps; ++step) {
    const double t = step * c.dt;
    psi = evolve_exact(psi, spec, c.dt);
    for (auto chi : c.chi_values) {
      Rng fit_rng(Rng::mix(c.master_seed, Rng::mix(step, chi)));
      auto [net, rep] = fit_network_to_state_warm(psi, build_layout(L, surface_of(c, L), chi),
                                                  c.restarts, c.tol, fit_rng, warm);
      warm.assign(1, net);
      csv.row({format_g17(t), "holo", std::to_string(chi), format_g17(rep.final_cost)});
    }
    auto [mps, mps_err] = fit_mps_to_state(psi, c.mps_chi, 8);
    csv.row({format_g17(t), "mps", std::to_string(c.mps_chi), format_g17(mps_err)});
    tasks.push_back({{"task", step}, {"t", t}});
  }
}

void run_tebd_bench(const ExperimentConfig& c, CsvWriter& csv, json& tasks) {
  const int L = c.L_values.front();
  const std::int64_t chi = c.chi_values.front();
  const ModelSpec spec = model_of(c, L);
  const int steps = static_cast<int>(std::llround(c.t_max / c.dt));

  Trajectory tr;
  if (c.ansatz == "mps") {
    MPS m0 = c.initial == "rainbow"
                 ? mps_from_statevector(to_statevector(rainbow_network(L, section34_pair(), 4)),
                                        TruncationSpec::unbounded())
                 : plus_product(L);
    tr = tebd_run_mps(m0, spec, c.dt, steps, chi, true);
  } else {
    HoloNet n0 = c.initial == "rainbow" ? rainbow_network(L, section34_pair(), chi)
                                        : embed_mps_boundary(plus_product(L), chi);
    TebdOptions opts;
    opts.oracle = true;
    tr = tebd_run(n0, spec, c.dt, steps, opts);
  }

  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    csv.row({format_g17(tr.times[i]), format_g17(tr.observables.at("sx")[i]),
             format_g17(tr.observables.at("sx_oracle")[i]), format_g17(tr.observables.at("s2")[i]),
             format_g17(tr.observables.at("s2_oracle")[i]), format_g17(tr.fidelity_vs_oracle[i])});
  }
  tasks.push_back({{"task", 0}, {"steps", steps}});
}

void run_embed_check(const ExperimentConfig& c, CsvWriter& csv, json& tasks) {
  int idx = 0;
  auto emit = [&](const std::string& name, int L, std::int64_t chi, double err, double extra) {
    csv.row({name, std::to_string(L), std::to_string(chi), format_g17(err), format_g17(extra)});
    tasks.push_back({{"task", idx++}, {"case", name}});
  };

  const int L = c.L_values.front();
  {
    MPS g = ghz_mps(L);
    HoloNet n = embed_mps_boundary(g, 2);
    emit("ghz-boundary", L, 2, 2.0 - 2.0 * std::abs(inner(mps_to_statevector(g), to_statevector(n))),
         0.0);
    MPS w = w_mps(L);
    HoloNet nw = embed_mps_boundary(w, 2);
    emit("w-boundary", L, 2,
         2.0 - 2.0 * std::abs(inner(mps_to_statevector(w), to_statevector(nw))), 0.0);
  }
  {
    Rng rng(Rng::mix(c.master_seed, 0xe3bed));
    MPS rm = random_mps(L, 3, rng);
    HoloNet nr = embed_mps_boundary(rm, 3);
    emit("random-mps-boundary", L, 3,
         2.0 - 2.0 * std::abs(inner(mps_to_statevector(rm), to_statevector(nr))), 0.0);
    MPS rm2 = random_mps(L, 2, rng);
    HoloNet nf = embed_mps_folded(rm2, L / 2, 4);
    emit("random-mps-folded", L, 4,
         2.0 - 2.0 * std::abs(inner(mps_to_statevector(rm2), to_statevector(nf))), 0.0);
  }
  {
    DenseTensor singlet({{"q0", 2}, {"q1", 2}});
    singlet.at({0, 1}) = 1.0 / std::sqrt(2.0);
    singlet.at({1, 0}) = -1.0 / std::sqrt(2.0);
    HoloNet rb = rainbow_network(L, singlet, 4);
    StateVector sv = to_statevector(rb);
    emit("rainbow-singlet", L, 4, std::abs(renyi2_dense(sv, L / 2) - (L / 2) * std::log(2.0)),
         renyi2_dense(sv, L / 2));
  }
  (void)c;
}

}  // namespace

std::string format_g17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string ExperimentConfig::canonical_json() const { return to_json(*this).dump(); }

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  json j = json::parse(text);
  ExperimentConfig c;
  from_json_obj(j, c);
  c.check();
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "invalid-config", "cannot open config " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return from_json_text(text);
}

void ExperimentConfig::check() const {
  const bool known = experiment == "random-entropy" || experiment == "fit-state" ||
                     experiment == "var-evolution" || experiment == "tebd-bench" ||
                     experiment == "embed-check";
  require(known, "invalid-config", "unknown experiment '" + experiment + "'");
  require(!L_values.empty() && !chi_values.empty(), "invalid-config", "empty parameter grid");
  for (int L : L_values) require(L >= 2 && L <= 20, "invalid-config", "L out of range");
  for (auto chi : chi_values) require(chi >= 1, "invalid-config", "chi must be positive");
  require(realizations >= 1 && restarts >= 1, "invalid-config", "counts must be positive");
  require(dt >= 0 && t_max >= 0, "invalid-config", "times must be nonnegative");
  require(jobs >= 1, "invalid-config", "jobs must be >= 1");
}

std::uint64_t config_hash(const std::string& canonical) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

int run_experiment(const ExperimentConfig& cfg) {
  try {
    cfg.check();
  } catch (const Error&) {
    return 2;
  }
  namespace fs = std::filesystem;
  fs::create_directories(cfg.out_dir);
  const std::string csv_path = cfg.out_dir + "/results.csv";

  json manifest;
  manifest["config"] = json::parse(cfg.canonical_json());
  manifest["config_hash"] = config_hash(cfg.canonical_json());
  manifest["code_version"] = kCodeVersion;
  json tasks = json::array();

  const auto t0 = std::chrono::steady_clock::now();
  int status = 0;
  try {
    if (cfg.experiment == "random-entropy") {
      CsvWriter csv(csv_path, {"L", "chi", "realization", "s2", "s2_oracle", "page_value"});
      run_random_entropy(cfg, csv, tasks);
    } else if (cfg.experiment == "fit-state") {
      CsvWriter csv(csv_path, {"L", "chi", "instance", "final_error", "restarts_used", "converged"});
      run_fit_state(cfg, csv, tasks);
    } else if (cfg.experiment == "var-evolution") {
      CsvWriter csv(csv_path, {"t", "ansatz", "chi", "fit_error"});
      run_var_evolution(cfg, csv, tasks);
    } else if (cfg.experiment == "tebd-bench") {
      CsvWriter csv(csv_path, {"t", "sx_tebd", "sx_oracle", "s2_tebd", "s2_oracle", "fidelity"});
      run_tebd_bench(cfg, csv, tasks);
    } else {
      CsvWriter csv(csv_path, {"case", "L", "chi", "error", "value"});
      run_embed_check(cfg, csv, tasks);
    }
  } catch (const Error& e) {
    manifest["error"] = e.what();
    status = 3;
  }
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  manifest["tasks"] = tasks;
  manifest["wall_time_seconds"] = wall;
  manifest["files"] = json::array({"results.csv"});
  std::ofstream mf(cfg.out_dir + "/manifest.json");
  mf << manifest.dump(2) << '\n';
  return status;
}

}  // namespace holonet
