// ppcsim: production planning simulator and experiment harness CLI.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "ppcsim/experiment.hpp"
#include "ppcsim/json_io.hpp"
#include "ppcsim/simulation.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace ppcsim;

namespace {

json result_to_json(const RunResult& r) {
  json j;
  j["cost"] = {{"wip_component", r.per_day.wip_component},
               {"component_stock", r.per_day.component_stock},
               {"wip_item", r.per_day.wip_item},
               {"fgi", r.per_day.fgi},
               {"tardiness", r.per_day.tardiness},
               {"overall_per_day", r.overall_per_day}};
  j["total_cu"] = {{"wip_component", r.total_cu.wip_component},
                   {"component_stock", r.total_cu.component_stock},
                   {"wip_item", r.total_cu.wip_item},
                   {"fgi", r.total_cu.fgi},
                   {"tardiness", r.total_cu.tardiness},
                   {"overall", r.total_cu.total()}};
  j["measured_days"] = r.measured_days;
  const Diagnostics& d = r.diagnostics;
  j["diagnostics"] = {
      {"utilization", d.utilization},
      {"mean_utilization", d.mean_utilization},
      {"max_utilization_gap", d.max_utilization_gap},
      {"fill_on_time", d.fill_on_time},
      {"mean_production_lead_time_days", d.mean_production_lead_time_days},
      {"mean_fgi_units", d.mean_fgi_units},
      {"deliveries", d.deliveries},
      {"tardy_deliveries", d.tardy_deliveries},
      {"events", d.events_processed}};
  return j;
}

// "--cv all=0" or "--cv processing=0.1"; repeatable.
void apply_cv(Scenario& s, const std::string& spec) {
  auto eq = spec.find('=');
  if (eq == std::string::npos) throw ConfigError("--cv expects key=value");
  std::string key = spec.substr(0, eq);
  double v = std::stod(spec.substr(eq + 1));
  if (key == "all") {
    s.cv_processing = s.cv_setup = s.cv_demand_qty = s.cv_clt_variable = v;
  } else if (key == "processing") {
    s.cv_processing = v;
  } else if (key == "setup") {
    s.cv_setup = v;
  } else if (key == "demand") {
    s.cv_demand_qty = v;
  } else if (key == "clt") {
    s.cv_clt_variable = v;
  } else {
    throw ConfigError("unknown cv key: " + key);
  }
}

void write_order_trace(const Simulation& sim, const fs::path& file) {
  std::ofstream out(file);
  out << "order_id,item,arrival_day,quantity,due_day,delivered_day,tardy_days\n";
  const Structure& st = sim.world().structure();
  for (const CustomerOrder& o : sim.demand().orders()) {
    out << o.id << ',' << st.skus[o.item].id << ',' << o.arrival_day << ','
        << o.quantity << ',' << o.due_day << ','
        << (o.delivered() ? std::to_string(o.delivered_day) : "") << ','
        << o.tardy_days() << "\n";
  }
}

void write_machine_trace(const Simulation& sim,
                         const std::vector<Simulation::MachineTraceRow>& rows,
                         const fs::path& file) {
  std::ofstream out(file);
  out << "machine,order_id,start_day,setup_minutes,processing_minutes,finish_day\n";
  const Structure& st = sim.world().structure();
  for (const auto& r : rows) {
    out << st.machines[r.machine] << ',' << r.order_id << ',' << r.start_day
        << ',' << r.setup_minutes << ',' << r.processing_minutes << ','
        << r.finish_day << "\n";
  }
}

void write_planning_trace(const std::vector<PlanningTraceRow>& rows,
                          const fs::path& file) {
  std::ofstream out(file);
  out << "day,order_id,sku,quantity,planned_end,planned_start,earliest_start\n";
  for (const auto& r : rows) {
    out << r.day << ',' << r.order_id << ',' << r.sku << ',' << r.quantity
        << ',' << r.planned_end << ',' << r.planned_start << ','
        << r.earliest_start << "\n";
  }
}

int cmd_run(const std::string& scenario_file, const std::string& structure,
            double load, const std::string& ppcs_name,
            const std::vector<std::string>& param_specs,
            const std::vector<std::string>& cv_specs, uint64_t seed,
            int horizon, int warmup, double demand, const std::string& out_dir,
            const std::string& mps_policy, const std::string& trace_orders,
            const std::string& trace_machines,
            const std::string& trace_planning) {
  Scenario scenario;
  if (!scenario_file.empty()) {
    scenario = load_scenario(scenario_file);
  } else {
    scenario.structure = build_structure(parse_structure_kind(structure));
  }
  if (load > 0) scenario.planned_shop_load = load;
  if (horizon > 0) scenario.horizon_days = horizon;
  if (warmup >= 0) scenario.warmup_days = warmup;
  if (demand > 0) scenario.mean_total_item_demand_per_day = demand;
  if (seed != 0) scenario.seed = seed;
  for (const std::string& cv : cv_specs) apply_cv(scenario, cv);

  ControllerParams params;
  params.kind = parse_ppcs(ppcs_name);
  if (mps_policy == "fop") params.conwip.mps_policy = MpsPolicy::Fop;
  else if (mps_policy != "foq") throw ConfigError("--mps-policy: foq or fop");
  for (const std::string& spec : param_specs) {
    auto eq = spec.find('=');
    if (eq == std::string::npos) throw ConfigError("--param expects name=value");
    set_controller_param(params, spec.substr(0, eq),
                         std::stod(spec.substr(eq + 1)));
  }

  CalibratedScenario world = calibrate(scenario);
  Simulation sim(world, params, scenario.seed);
  std::vector<PlanningTraceRow> planning_rows;
  std::vector<Simulation::MachineTraceRow> machine_rows;
  if (!trace_planning.empty()) sim.planning_trace = &planning_rows;
  if (!trace_machines.empty()) sim.machine_trace = &machine_rows;

  RunResult result = sim.run();
  json j = result_to_json(result);
  j["structure"] = scenario.structure.name;
  j["load"] = scenario.planned_shop_load;
  j["ppcs"] = ppcs_name;
  j["seed"] = scenario.seed;
  std::cout << j.dump() << "\n";

  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    std::ofstream out(fs::path(out_dir) / "run_result.jsonl", std::ios::app);
    out << j.dump() << "\n";
  }
  if (!trace_orders.empty()) write_order_trace(sim, trace_orders);
  if (!trace_machines.empty()) write_machine_trace(sim, machine_rows, trace_machines);
  if (!trace_planning.empty()) write_planning_trace(planning_rows, trace_planning);
  return 0;
}

int cmd_sweep(const std::string& preset, const std::string& plan_file,
              uint64_t seed, int workers, const std::string& out_dir,
              bool dry_run, int replications, int horizon, int warmup) {
  ExperimentPlan plan = !plan_file.empty() ? load_plan(plan_file)
                                           : make_preset(preset, seed ? seed : 1);
  if (seed != 0) plan.master_seed = seed;
  if (replications > 0) plan.replications = replications;
  if (horizon > 0) plan.horizon_days = horizon;
  if (warmup >= 0) plan.warmup_days = warmup;
  if (plan.horizon_days <= plan.warmup_days)
    throw ConfigError("horizon must exceed warm-up");

  // Iteration counts per PPCS and structure, summed over the three loads.
  std::map<std::pair<std::string, std::string>, int64_t> counts;
  for (const PlanSlice& s : plan.slices)
    counts[{to_string(s.ppcs), to_string(s.env.structure)}] +=
        s.grid.iterations();
  std::printf("plan: %s (replications=%d, horizon=%d, warmup=%d, seed=%llu)\n",
              plan.preset.c_str(), plan.replications, plan.horizon_days,
              plan.warmup_days,
              static_cast<unsigned long long>(plan.master_seed));
  for (const char* ppcs : {"mrp", "rps", "conwip"}) {
    for (const char* st : {"flow_shop", "hybrid_shop", "job_shop"}) {
      auto it = counts.find({ppcs, st});
      if (it != counts.end())
        std::printf("%-7s %-12s %lld iterations\n", ppcs, st,
                    static_cast<long long>(it->second));
    }
  }
  std::printf("total iterations: %lld\n",
              static_cast<long long>(plan.total_iterations()));
  std::printf("total runs (%d replications per iteration): %lld\n",
              plan.replications, static_cast<long long>(plan.total_runs()));
  if (dry_run) return 0;

  fs::path dir = out_dir.empty() ? fs::path("out") : fs::path(out_dir);
  fs::create_directories(dir);
  save_plan(plan, dir / "plan.json");
  fs::path store_path = dir / "results.jsonl";

  std::set<std::pair<int64_t, int>> done =
      ResultStore::completed(ResultStore::load(store_path));
  if (!done.empty())
    std::printf("resuming: %zu runs already in %s\n", done.size(),
                store_path.string().c_str());

  ResultStore store(store_path);
  auto t0 = std::chrono::steady_clock::now();
  int64_t executed = execute_plan(
      plan, store, workers, done, [](SweepProgress p) {
        std::fprintf(stderr, "\r%lld/%lld runs",
                     static_cast<long long>(p.done),
                     static_cast<long long>(p.total));
      });
  double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  std::fprintf(stderr, "\n");
  std::printf("executed %lld runs in %.1f s -> %s\n",
              static_cast<long long>(executed), secs,
              store_path.string().c_str());
  return 0;
}

int cmd_summarize(const std::string& store_file, const std::string& out_dir,
                  int replications) {
  fs::path store_path(store_file);
  auto records = ResultStore::load(store_path);
  if (records.empty())
    throw ConfigError("no data in store: " + store_path.string());

  int expected = replications;
  if (expected <= 0) {
    fs::path plan_file = store_path.parent_path() / "plan.json";
    if (fs::exists(plan_file)) {
      expected = load_plan(plan_file).replications;
    } else {
      for (const RunRecord& r : records)
        expected = std::max(expected, r.replication + 1);
    }
  }

  Summary summary = summarize(records, expected);
  fs::path dir = out_dir.empty() ? store_path.parent_path() / "summary"
                                 : fs::path(out_dir);
  write_summary_csv(summary, dir);
  {
    std::ofstream out(dir / "comparisons.txt");
    out << comparisons_report(summary);
  }
  std::printf("%zu iterations summarized (%d replications each)\n",
              summary.iterations.size(), expected);
  std::printf("best parameters per environment:\n");
  for (const IterationSummary& s : summary.best) {
    std::printf("  %-12s load %.2f %-7s mean %.2f CU/day (se %.2f):",
                s.structure.c_str(), s.load, s.ppcs.c_str(), s.mean_overall,
                s.stderr_overall);
    for (const auto& [k, v] : s.params) std::printf(" %s=%g", k.c_str(), v);
    std::printf("\n");
  }
  for (const char* f : {"best_params.csv", "cost_table.csv", "iterations.csv",
                        "comparisons.txt"})
    std::printf("wrote %s\n", (dir / f).string().c_str());
  return 0;
}

int cmd_validate(const std::string& structure, const std::string& scenario_file,
                 const std::string& emit_defaults) {
  if (!emit_defaults.empty()) {
    fs::create_directories(emit_defaults);
    for (StructureKind kind :
         {StructureKind::FlowShop, StructureKind::HybridShop,
          StructureKind::JobShop}) {
      Structure s = build_structure(kind);
      fs::path file = fs::path(emit_defaults) / (s.name + ".json");
      save_structure(s, file);
      std::printf("wrote %s\n", file.string().c_str());
    }
    return 0;
  }

  Scenario scenario;
  if (!scenario_file.empty()) {
    scenario = load_scenario(scenario_file);
  } else {
    scenario.structure = build_structure(parse_structure_kind(structure));
  }
  CalibratedScenario world = calibrate(scenario);
  const Structure& st = world.structure();
  std::printf("structure %s: %d machines, %d planned BoM levels, %zu skus\n",
              st.name.c_str(), st.machine_count(), st.planned_bom_levels,
              st.skus.size());
  for (MachineIndex m = 0; m < st.machine_count(); ++m)
    std::printf("  %-4s planned load %.9f, mean setup %.2f min, %d skus\n",
                st.machines[m].c_str(), world.calib.planned_load[m],
                world.setup_minutes(m), world.calib.skus_per_machine[m]);
  for (SkuIndex s = 0; s < st.sku_count(); ++s) {
    const Sku& sku = st.skus[s];
    std::printf("  sku %d level %d %s demand %.2f/day", sku.id, sku.bom_level,
                sku.kind == SkuKind::Item ? "item" : "component",
                world.mean_daily_units(s));
    if (!sku.routing.empty()) {
      std::printf(" route");
      for (std::size_t k = 0; k < sku.routing.size(); ++k)
        std::printf(" %s(%.2f min/u)",
                    st.machines[sku.routing[k].machine].c_str(),
                    world.processing_minutes(s, static_cast<int>(k)));
    }
    std::printf("\n");
  }
  std::printf("validation ok\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ppcsim: multi-item multi-stage production planning simulator"};
  app.require_subcommand(1);

  std::string scenario_file, structure = "flow", ppcs = "mrp", out_dir;
  std::string mps_policy = "foq";
  std::string trace_orders, trace_machines, trace_planning;
  std::vector<std::string> params, cvs;
  double load = 0, demand = 0;
  uint64_t seed = 0;
  int horizon = 0, warmup = -1, workers = 0, replications = 0;

  auto* run = app.add_subcommand("run", "execute a single replication");
  run->add_option("--scenario", scenario_file, "scenario JSON file");
  run->add_option("--structure", structure, "flow|hybrid|job")
      ->envname("PPCSIM_STRUCTURE");
  run->add_option("--load", load, "planned shop load, e.g. 0.90");
  run->add_option("--ppcs", ppcs, "mrp|rps|conwip");
  run->add_option("--param", params,
                  "planning parameter name=value (repeatable)");
  run->add_option("--cv", cvs,
                  "coefficient of variation key=value; key in "
                  "{all,processing,setup,demand,clt}");
  run->add_option("--seed", seed, "run seed")->envname("PPCSIM_SEED");
  run->add_option("--horizon", horizon, "horizon days");
  run->add_option("--warmup", warmup, "warm-up days");
  run->add_option("--demand", demand, "mean total item demand per day");
  run->add_option("--out", out_dir, "output directory")->envname("PPCSIM_OUT");
  run->add_option("--mps-policy", mps_policy, "conwip MPS batching: foq|fop");
  run->add_option("--trace-orders", trace_orders, "customer order trace CSV");
  run->add_option("--trace-machines", trace_machines, "machine trace CSV");
  run->add_option("--trace-planning", trace_planning, "planning trace CSV");

  auto* sweep = app.add_subcommand("sweep", "run a full factorial experiment");
  std::string preset = "reduced", plan_file, format = "jsonl";
  bool dry_run = false;
  sweep->add_option("--preset", preset, "paper|reduced|smoke");
  sweep->add_option("--plan", plan_file, "plan JSON file (overrides --preset)");
  sweep->add_option("--seed", seed, "master seed")->envname("PPCSIM_SEED");
  sweep->add_option("--workers", workers, "worker threads (default: hardware)")
      ->envname("PPCSIM_WORKERS");
  sweep->add_option("--out", out_dir, "output directory (default: out)")
      ->envname("PPCSIM_OUT");
  sweep->add_flag("--dry-run", dry_run, "print iteration counts and exit");
  sweep->add_option("--replications", replications, "override replications");
  sweep->add_option("--horizon", horizon, "override horizon days");
  sweep->add_option("--warmup", warmup, "override warm-up days");
  sweep->add_option("--format", format, "result format")
      ->check(CLI::IsMember({"jsonl"}));

  auto* summ = app.add_subcommand("summarize", "aggregate a result store");
  std::string store_file;
  summ->add_option("--store", store_file, "results.jsonl path")->required();
  summ->add_option("--out", out_dir, "summary output directory")
      ->envname("PPCSIM_OUT");
  summ->add_option("--replications", replications,
                   "expected replications (default: plan.json next to store)");

  auto* val = app.add_subcommand("validate", "check a structure or scenario");
  std::string emit_defaults;
  val->add_option("--structure", structure, "flow|hybrid|job");
  val->add_option("--scenario", scenario_file, "scenario JSON file");
  val->add_option("--emit-defaults", emit_defaults,
                  "write the built-in structure files to this directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    app.exit(e);
    return 2;
  }

  try {
    if (*run)
      return cmd_run(scenario_file, structure, load, ppcs, params, cvs, seed,
                     horizon, warmup, demand, out_dir, mps_policy, trace_orders,
                     trace_machines, trace_planning);
    if (*sweep) {
      int w = workers > 0
                  ? workers
                  : static_cast<int>(std::thread::hardware_concurrency());
      return cmd_sweep(preset, plan_file, seed, w, out_dir, dry_run,
                       replications, horizon, warmup);
    }
    if (*summ) return cmd_summarize(store_file, out_dir, replications);
    if (*val) return cmd_validate(structure, scenario_file, emit_defaults);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
