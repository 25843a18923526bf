#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ppcsim/controllers.hpp"
#include "ppcsim/costing.hpp"
#include "ppcsim/model.hpp"

namespace ppcsim {

// One swept planning parameter with its level list.
struct GridParam {
  std::string name;
  std::vector<double> values;

  static GridParam from_range(std::string name, double min, double max,
                              double step);
  int levels() const { return static_cast<int>(values.size()); }
};

// Full factorial cross-product; lexicographic order with the first parameter
// slowest.
struct ParameterGrid {
  std::vector<GridParam> params;

  int64_t iterations() const;
  std::vector<double> values_at(int64_t index) const;
};

struct Environment {
  StructureKind structure;
  double load;
};

struct PlanSlice {
  Environment env;
  PpcsKind ppcs;
  ParameterGrid grid;
};

struct ExperimentPlan {
  std::string preset = "custom";
  std::vector<PlanSlice> slices;  // environment-major, then PPCS
  int replications = 10;
  int horizon_days = 400;
  int warmup_days = 150;
  uint64_t master_seed = 1;
  double mean_total_item_demand_per_day = 500.0;
  double minutes_per_day = 1440.0;

  int64_t total_iterations() const;
  int64_t total_runs() const { return total_iterations() * replications; }
  // Global iteration index -> (slice index, local grid index).
  std::pair<int, int64_t> locate(int64_t iteration) const;
};

// Presets: "paper" (the full factorial design), "reduced" (coarsened grids
// ~1/8 the size, 3 replications, 250/75-day horizon/warm-up), "smoke" (one
// mid-grid iteration per slice, 2 replications, 100/30 days).
ExperimentPlan make_preset(const std::string& name, uint64_t master_seed);

// Maps named grid values onto a controller parameter struct.
ControllerParams controller_params_for(PpcsKind ppcs, const ParameterGrid& grid,
                                       const std::vector<double>& values);

// Sets one named planning parameter; ConfigError on an unknown name.
void set_controller_param(ControllerParams& p, const std::string& name,
                          double value);

// Plan files: either {"preset": "paper"} with optional overrides, or a full
// custom plan with explicit slices and grids.
ExperimentPlan plan_from_json(const std::string& text);
ExperimentPlan load_plan(const std::filesystem::path& file);
std::string to_json_string(const ExperimentPlan& plan);
void save_plan(const ExperimentPlan& plan, const std::filesystem::path& file);

CalibratedScenario environment_scenario(const ExperimentPlan& plan,
                                        Environment env);

struct RunRecord {
  std::string structure;
  double load = 0.0;
  std::string ppcs;
  std::vector<std::pair<std::string, double>> params;
  int64_t iteration = 0;  // global index
  int replication = 0;
  uint64_t seed = 0;
  bool ok = false;
  std::string error;
  RunResult result;
  double runtime_ms = 0.0;

  std::string to_jsonl() const;
  static std::optional<RunRecord> from_jsonl(const std::string& line);
};

// Append-only JSONL store; append is thread-safe and flushes per line so an
// interrupted sweep can resume from what reached disk.
class ResultStore {
 public:
  explicit ResultStore(std::filesystem::path file);
  void append(const RunRecord& r);
  const std::filesystem::path& path() const { return path_; }

  static std::vector<RunRecord> load(const std::filesystem::path& file);
  static std::set<std::pair<int64_t, int>> completed(
      const std::vector<RunRecord>& records);

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::mutex mu_;
};

struct SweepProgress {
  int64_t done;
  int64_t total;
};

RunRecord execute_single(const ExperimentPlan& plan,
                         const CalibratedScenario& world, int slice_index,
                         int64_t iteration, int replication);

// Runs every (iteration, replication) of the plan not listed in `skip` on
// `workers` threads. Store contents are independent of worker count and of
// completion order (each run's seed depends only on its coordinates).
int64_t execute_plan(const ExperimentPlan& plan, ResultStore& store,
                     int workers,
                     const std::set<std::pair<int64_t, int>>& skip = {},
                     const std::function<void(SweepProgress)>& progress = {});

// ---------------------------------------------------------------------------

struct IterationSummary {
  std::string structure;
  double load = 0.0;
  std::string ppcs;
  int64_t iteration = 0;
  std::vector<std::pair<std::string, double>> params;
  int replications = 0;
  double mean_overall = 0.0;
  double sd_overall = 0.0;
  double stderr_overall = 0.0;
  CostBreakdown mean_per_day;
  double mean_utilization = 0.0;
  double mean_fill_on_time = 0.0;
};

struct Summary {
  std::vector<IterationSummary> iterations;  // sorted by coordinates
  std::vector<IterationSummary> best;        // argmin mean per (env, ppcs)

  const IterationSummary* find_best(const std::string& structure, double load,
                                    const std::string& ppcs) const;
};

// Means across replications per iteration plus the best iteration per
// (environment, PPCS). Throws IncompleteScopeError when any present
// iteration misses replications (failed runs count as missing).
Summary summarize(const std::vector<RunRecord>& records,
                  int expected_replications);

void write_summary_csv(const Summary& summary,
                       const std::filesystem::path& out_dir);

// One-sided Welch test: p-value for the alternative mean_a < mean_b.
double welch_one_sided_p(double mean_a, double sd_a, int n_a, double mean_b,
                         double sd_b, int n_b);

// Plain-text report of the pairwise PPCS comparisons per environment.
std::string comparisons_report(const Summary& summary);

}  // namespace ppcsim
