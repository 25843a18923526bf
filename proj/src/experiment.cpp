#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <map>
#include <sstream>
#include <thread>

#include <boost/math/distributions/students_t.hpp>

#include "json.hpp"
#include "ppcsim/experiment.hpp"
#include "ppcsim/simulation.hpp"

namespace ppcsim {

using nlohmann::json;

GridParam GridParam::from_range(std::string name, double min, double max,
                                double step) {
  if (!(step > 0.0)) throw ConfigError("grid step must be > 0: " + name);
  GridParam p;
  p.name = std::move(name);
  int levels = static_cast<int>(std::floor((max - min) / step + 1e-9)) + 1;
  p.values.reserve(levels);
  for (int i = 0; i < levels; ++i) p.values.push_back(min + i * step);
  return p;
}

int64_t ParameterGrid::iterations() const {
  int64_t n = 1;
  for (const GridParam& p : params) n *= p.levels();
  return n;
}

std::vector<double> ParameterGrid::values_at(int64_t index) const {
  std::vector<double> out(params.size());
  for (int i = static_cast<int>(params.size()) - 1; i >= 0; --i) {
    int64_t levels = params[i].levels();
    out[i] = params[i].values[index % levels];
    index /= levels;
  }
  return out;
}

int64_t ExperimentPlan::total_iterations() const {
  int64_t n = 0;
  for (const PlanSlice& s : slices) n += s.grid.iterations();
  return n;
}

std::pair<int, int64_t> ExperimentPlan::locate(int64_t iteration) const {
  for (int i = 0; i < static_cast<int>(slices.size()); ++i) {
    int64_t n = slices[i].grid.iterations();
    if (iteration < n) return {i, iteration};
    iteration -= n;
  }
  throw ConfigError("iteration index out of range");
}

namespace {

ParameterGrid paper_mrp_grid(bool two_level) {
  ParameterGrid g;
  g.params.push_back(GridParam::from_range("plt_items", 1, 6, 1));
  g.params.push_back(GridParam::from_range("fop_items", 1, 4, 1));
  g.params.push_back(GridParam::from_range("ss_items", 0, 1.5, 0.5));
  if (two_level) {
    g.params.push_back(GridParam::from_range("plt_components", 1, 3, 1));
    g.params.push_back(GridParam::from_range("fop_components", 1, 4, 1));
    g.params.push_back(GridParam::from_range("ss_components", 0, 1.5, 0.5));
  }
  return g;
}

ParameterGrid paper_rps_grid(bool two_level) {
  ParameterGrid g;
  g.params.push_back(GridParam::from_range("rop_items", 3, 7, 0.5));
  g.params.push_back(GridParam::from_range("lot_items", 0.5, 3, 0.5));
  if (two_level) {
    g.params.push_back(GridParam::from_range("rop_components", 1, 4, 0.5));
    g.params.push_back(GridParam::from_range("lot_components", 0.5, 3, 0.5));
  }
  return g;
}

ParameterGrid paper_conwip_grid(bool two_level) {
  ParameterGrid g;
  g.params.push_back(GridParam::from_range("mps_lot", 1, 3, 0.5));
  g.params.push_back(GridParam::from_range("wip_cap", 10000, 50000, 10000));
  g.params.push_back(GridParam::from_range("lt_items", 1, 5, 1));
  if (two_level) {
    g.params.push_back(GridParam::from_range("lt_components", 1, 5, 1));
    g.params.push_back(GridParam::from_range("buffer", 0, 3, 1));
  }
  return g;
}

ParameterGrid reduced_mrp_grid(bool two_level) {
  ParameterGrid g;
  g.params.push_back({"plt_items", {1, 2, 3, 5}});
  g.params.push_back({"fop_items", {1, 2}});
  g.params.push_back({"ss_items", {0, 0.5, 1.0}});
  if (two_level) {
    g.params.push_back({"plt_components", {1, 2, 3}});
    g.params.push_back({"fop_components", {1, 2}});
    g.params.push_back({"ss_components", {0, 0.5, 1.0}});
  }
  return g;
}

ParameterGrid reduced_rps_grid(bool two_level) {
  ParameterGrid g;
  g.params.push_back({"rop_items", {3, 4, 5, 6, 7}});
  g.params.push_back({"lot_items", {1, 2}});
  if (two_level) {
    g.params.push_back({"rop_components", {1, 1.5, 2}});
    g.params.push_back({"lot_components", {1, 2}});
  }
  return g;
}

ParameterGrid reduced_conwip_grid(bool two_level) {
  ParameterGrid g;
  g.params.push_back({"mps_lot", {1, 2, 3}});
  g.params.push_back({"wip_cap", {10000, 20000, 30000, 50000}});
  g.params.push_back({"lt_items", {1, 2, 3, 5}});
  if (two_level) {
    g.params.push_back({"lt_components", {2, 3, 4, 5}});
    g.params.push_back({"buffer", {0, 1, 2}});
  }
  return g;
}

ParameterGrid smoke_mrp_grid(bool two_level) {
  ParameterGrid g;
  g.params.push_back({"plt_items", {2}});
  g.params.push_back({"fop_items", {1}});
  g.params.push_back({"ss_items", {0.5}});
  if (two_level) {
    g.params.push_back({"plt_components", {2}});
    g.params.push_back({"fop_components", {1}});
    g.params.push_back({"ss_components", {0.5}});
  }
  return g;
}

ParameterGrid smoke_rps_grid(bool two_level) {
  ParameterGrid g;
  g.params.push_back({"rop_items", {4}});
  g.params.push_back({"lot_items", {1}});
  if (two_level) {
    g.params.push_back({"rop_components", {1.5}});
    g.params.push_back({"lot_components", {1}});
  }
  return g;
}

ParameterGrid smoke_conwip_grid(bool two_level) {
  ParameterGrid g;
  g.params.push_back({"mps_lot", {1}});
  g.params.push_back({"wip_cap", {20000}});
  g.params.push_back({"lt_items", {2}});
  if (two_level) {
    g.params.push_back({"lt_components", {3}});
    g.params.push_back({"buffer", {1}});
  }
  return g;
}

}  // namespace

ExperimentPlan make_preset(const std::string& name, uint64_t master_seed) {
  ExperimentPlan plan;
  plan.preset = name;
  plan.master_seed = master_seed;
  if (name == "paper") {
    plan.replications = 10;
    plan.horizon_days = 400;
    plan.warmup_days = 150;
  } else if (name == "reduced") {
    plan.replications = 3;
    plan.horizon_days = 250;
    plan.warmup_days = 75;
  } else if (name == "smoke") {
    plan.replications = 2;
    plan.horizon_days = 100;
    plan.warmup_days = 30;
  } else {
    throw ConfigError("unknown preset: " + name);
  }

  const StructureKind structures[] = {StructureKind::FlowShop,
                                      StructureKind::HybridShop,
                                      StructureKind::JobShop};
  const double loads[] = {0.85, 0.90, 0.95};
  const PpcsKind systems[] = {PpcsKind::Mrp, PpcsKind::Rps, PpcsKind::Conwip};

  for (StructureKind st : structures) {
    bool two_level = st != StructureKind::JobShop;
    for (double load : loads) {
      for (PpcsKind ppcs : systems) {
        ParameterGrid grid;
        if (name == "paper") {
          grid = ppcs == PpcsKind::Mrp   ? paper_mrp_grid(two_level)
                 : ppcs == PpcsKind::Rps ? paper_rps_grid(two_level)
                                         : paper_conwip_grid(two_level);
        } else if (name == "reduced") {
          grid = ppcs == PpcsKind::Mrp   ? reduced_mrp_grid(two_level)
                 : ppcs == PpcsKind::Rps ? reduced_rps_grid(two_level)
                                         : reduced_conwip_grid(two_level);
        } else {
          grid = ppcs == PpcsKind::Mrp   ? smoke_mrp_grid(two_level)
                 : ppcs == PpcsKind::Rps ? smoke_rps_grid(two_level)
                                         : smoke_conwip_grid(two_level);
        }
        plan.slices.push_back({{st, load}, ppcs, std::move(grid)});
      }
    }
  }
  return plan;
}

void set_controller_param(ControllerParams& p, const std::string& name,
                          double v) {
  if (p.kind == PpcsKind::Mrp) {
    if (name == "plt_items") p.mrp.planned_lead_time_items = static_cast<int>(v);
    else if (name == "fop_items") p.mrp.fop_lot_size_items = static_cast<int>(v);
    else if (name == "ss_items") p.mrp.safety_stock_items = v;
    else if (name == "plt_components") p.mrp.planned_lead_time_components = static_cast<int>(v);
    else if (name == "fop_components") p.mrp.fop_lot_size_components = static_cast<int>(v);
    else if (name == "ss_components") p.mrp.safety_stock_components = v;
    else throw ConfigError("unknown mrp parameter: " + name);
  } else if (p.kind == PpcsKind::Rps) {
    if (name == "rop_items") p.rps.reorder_point_items = v;
    else if (name == "lot_items") p.rps.foq_lot_items = v;
    else if (name == "rop_components") p.rps.reorder_point_components = v;
    else if (name == "lot_components") p.rps.foq_lot_components = v;
    else throw ConfigError("unknown rps parameter: " + name);
  } else {
    if (name == "mps_lot") p.conwip.mps_foq_lot = v;
    else if (name == "wip_cap") p.conwip.wip_cap = v;
    else if (name == "lt_items") p.conwip.estimated_lead_time_items = static_cast<int>(v);
    else if (name == "lt_components") p.conwip.estimated_lead_time_components = static_cast<int>(v);
    else if (name == "buffer") p.conwip.work_ahead_buffer = static_cast<int>(v);
    else throw ConfigError("unknown conwip parameter: " + name);
  }
}

ControllerParams controller_params_for(PpcsKind ppcs, const ParameterGrid& grid,
                                       const std::vector<double>& values) {
  ControllerParams p;
  p.kind = ppcs;
  for (std::size_t i = 0; i < grid.params.size(); ++i)
    set_controller_param(p, grid.params[i].name, values[i]);
  return p;
}

CalibratedScenario environment_scenario(const ExperimentPlan& plan,
                                        Environment env) {
  Scenario s;
  s.structure = build_structure(env.structure);
  s.planned_shop_load = env.load;
  s.minutes_per_day = plan.minutes_per_day;
  s.mean_total_item_demand_per_day = plan.mean_total_item_demand_per_day;
  s.horizon_days = plan.horizon_days;
  s.warmup_days = plan.warmup_days;
  s.seed = plan.master_seed;
  return calibrate(s);
}

// --------------------------------------------------------------------------

std::string RunRecord::to_jsonl() const {
  json j;
  j["structure"] = structure;
  j["load"] = load;
  j["ppcs"] = ppcs;
  json jp;
  for (const auto& [k, v] : params) jp[k] = v;
  j["params"] = std::move(jp);
  j["iteration"] = iteration;
  j["replication"] = replication;
  j["seed"] = seed;
  j["ok"] = ok;
  if (!ok) {
    j["error"] = error;
    return j.dump();
  }
  j["cost"] = {{"wip_component", result.per_day.wip_component},
               {"component_stock", result.per_day.component_stock},
               {"wip_item", result.per_day.wip_item},
               {"fgi", result.per_day.fgi},
               {"tardiness", result.per_day.tardiness},
               {"overall_per_day", result.overall_per_day}};
  const Diagnostics& d = result.diagnostics;
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
  j["measured_days"] = result.measured_days;
  j["runtime_ms"] = runtime_ms;
  return j.dump();
}

std::optional<RunRecord> RunRecord::from_jsonl(const std::string& line) {
  if (line.empty()) return std::nullopt;
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception&) {
    return std::nullopt;  // torn tail line from an interrupted sweep
  }
  try {
    RunRecord r;
    r.structure = j.at("structure").get<std::string>();
    r.load = j.at("load").get<double>();
    r.ppcs = j.at("ppcs").get<std::string>();
    for (auto it = j.at("params").begin(); it != j.at("params").end(); ++it)
      r.params.emplace_back(it.key(), it.value().get<double>());
    r.iteration = j.at("iteration").get<int64_t>();
    r.replication = j.at("replication").get<int>();
    r.seed = j.at("seed").get<uint64_t>();
    r.ok = j.at("ok").get<bool>();
    if (!r.ok) {
      r.error = j.value("error", "");
      return r;
    }
    const json& c = j.at("cost");
    r.result.per_day.wip_component = c.at("wip_component").get<double>();
    r.result.per_day.component_stock = c.at("component_stock").get<double>();
    r.result.per_day.wip_item = c.at("wip_item").get<double>();
    r.result.per_day.fgi = c.at("fgi").get<double>();
    r.result.per_day.tardiness = c.at("tardiness").get<double>();
    r.result.overall_per_day = c.at("overall_per_day").get<double>();
    r.result.measured_days = j.value("measured_days", 0);
    const json& d = j.at("diagnostics");
    Diagnostics& di = r.result.diagnostics;
    di.utilization = d.at("utilization").get<std::vector<double>>();
    di.mean_utilization = d.at("mean_utilization").get<double>();
    di.max_utilization_gap = d.at("max_utilization_gap").get<double>();
    di.fill_on_time = d.at("fill_on_time").get<double>();
    di.mean_production_lead_time_days =
        d.at("mean_production_lead_time_days").get<double>();
    di.mean_fgi_units = d.at("mean_fgi_units").get<double>();
    di.deliveries = d.at("deliveries").get<int64_t>();
    di.tardy_deliveries = d.at("tardy_deliveries").get<int64_t>();
    di.events_processed = d.at("events").get<uint64_t>();
    r.runtime_ms = j.value("runtime_ms", 0.0);
    return r;
  } catch (const json::exception&) {
    return std::nullopt;
  }
}

ResultStore::ResultStore(std::filesystem::path file) : path_(std::move(file)) {
  if (path_.has_parent_path())
    std::filesystem::create_directories(path_.parent_path());
  out_.open(path_, std::ios::app);
  if (!out_) throw ConfigError("cannot open result store " + path_.string());
}

void ResultStore::append(const RunRecord& r) {
  std::lock_guard<std::mutex> lock(mu_);
  out_ << r.to_jsonl() << '\n';
  out_.flush();
}

std::vector<RunRecord> ResultStore::load(const std::filesystem::path& file) {
  std::vector<RunRecord> out;
  std::ifstream in(file);
  if (!in) return out;
  std::string line;
  while (std::getline(in, line)) {
    if (auto r = RunRecord::from_jsonl(line)) out.push_back(std::move(*r));
  }
  return out;
}

std::set<std::pair<int64_t, int>> ResultStore::completed(
    const std::vector<RunRecord>& records) {
  std::set<std::pair<int64_t, int>> done;
  for (const RunRecord& r : records)
    if (r.ok) done.insert({r.iteration, r.replication});
  return done;
}

RunRecord execute_single(const ExperimentPlan& plan,
                         const CalibratedScenario& world, int slice_index,
                         int64_t iteration, int replication) {
  const PlanSlice& slice = plan.slices[slice_index];
  std::vector<double> values = slice.grid.values_at(plan.locate(iteration).second);
  ControllerParams params = controller_params_for(slice.ppcs, slice.grid, values);

  RunRecord rec;
  rec.structure = to_string(slice.env.structure);
  rec.load = slice.env.load;
  rec.ppcs = to_string(slice.ppcs);
  for (std::size_t i = 0; i < values.size(); ++i)
    rec.params.emplace_back(slice.grid.params[i].name, values[i]);
  rec.iteration = iteration;
  rec.replication = replication;
  rec.seed = mix_seed(plan.master_seed, static_cast<uint64_t>(iteration),
                      static_cast<uint64_t>(replication));

  auto t0 = std::chrono::steady_clock::now();
  try {
    Simulation sim(world, params, rec.seed);
    rec.result = sim.run();
    rec.ok = true;
  } catch (const std::exception& e) {
    rec.ok = false;
    rec.error = e.what();
  }
  rec.runtime_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - t0)
                       .count();
  return rec;
}

int64_t execute_plan(const ExperimentPlan& plan, ResultStore& store,
                     int workers,
                     const std::set<std::pair<int64_t, int>>& skip,
                     const std::function<void(SweepProgress)>& progress) {
  if (workers < 1) workers = 1;

  // Calibrate each environment once; runs share them read-only.
  std::map<std::pair<int, int>, CalibratedScenario> environments;
  std::vector<const CalibratedScenario*> slice_world(plan.slices.size());
  for (std::size_t i = 0; i < plan.slices.size(); ++i) {
    const Environment& env = plan.slices[i].env;
    std::pair<int, int> key{static_cast<int>(env.structure),
                            static_cast<int>(std::lround(env.load * 100))};
    auto it = environments.find(key);
    if (it == environments.end())
      it = environments.emplace(key, environment_scenario(plan, env)).first;
    slice_world[i] = &it->second;
  }

  const int64_t total = plan.total_runs();
  std::atomic<int64_t> cursor{0};
  std::atomic<int64_t> executed{0};
  std::atomic<int64_t> done{static_cast<int64_t>(skip.size())};
  std::mutex progress_mu;

  auto worker = [&]() {
    for (;;) {
      int64_t r = cursor.fetch_add(1);
      if (r >= total) break;
      int64_t iteration = r / plan.replications;
      int replication = static_cast<int>(r % plan.replications);
      if (skip.count({iteration, replication})) continue;
      auto [slice_index, local] = plan.locate(iteration);
      (void)local;
      RunRecord rec = execute_single(plan, *slice_world[slice_index],
                                     slice_index, iteration, replication);
      store.append(rec);
      executed.fetch_add(1);
      int64_t d = done.fetch_add(1) + 1;
      if (progress && (d % 64 == 0 || d == total)) {
        std::lock_guard<std::mutex> lock(progress_mu);
        progress({d, total});
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (int i = 1; i < workers; ++i) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  return executed.load();
}

// --------------------------------------------------------------------------

namespace {

json grid_to_json(const ParameterGrid& g) {
  json out = json::array();
  for (const GridParam& p : g.params)
    out.push_back({{"name", p.name}, {"values", p.values}});
  return out;
}

ParameterGrid grid_from_json(const json& j) {
  ParameterGrid g;
  for (const json& jp : j) {
    std::string name = jp.at("name").get<std::string>();
    if (jp.contains("values")) {
      GridParam p;
      p.name = name;
      p.values = jp.at("values").get<std::vector<double>>();
      if (p.values.empty()) throw ConfigError("empty grid for " + name);
      g.params.push_back(std::move(p));
    } else {
      g.params.push_back(GridParam::from_range(name, jp.at("min").get<double>(),
                                               jp.at("max").get<double>(),
                                               jp.at("step").get<double>()));
    }
  }
  return g;
}

}  // namespace

ExperimentPlan plan_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("plan json: ") + e.what());
  }
  try {
    std::string preset = j.value("preset", std::string("custom"));
    ExperimentPlan plan;
    if (preset != "custom") {
      plan = make_preset(preset, j.value("master_seed", uint64_t{1}));
      if (j.contains("replications")) plan.replications = j.at("replications").get<int>();
      if (j.contains("horizon_days")) plan.horizon_days = j.at("horizon_days").get<int>();
      if (j.contains("warmup_days")) plan.warmup_days = j.at("warmup_days").get<int>();
    } else {
      plan.preset = "custom";
      plan.replications = j.value("replications", 10);
      plan.horizon_days = j.value("horizon_days", 400);
      plan.warmup_days = j.value("warmup_days", 150);
      plan.master_seed = j.value("master_seed", uint64_t{1});
      for (const json& js : j.at("slices")) {
        PlanSlice slice;
        slice.env.structure =
            parse_structure_kind(js.at("structure").get<std::string>());
        slice.env.load = js.at("load").get<double>();
        slice.ppcs = parse_ppcs(js.at("ppcs").get<std::string>());
        slice.grid = grid_from_json(js.at("grid"));
        plan.slices.push_back(std::move(slice));
      }
    }
    plan.mean_total_item_demand_per_day = j.value(
        "mean_total_item_demand_per_day", plan.mean_total_item_demand_per_day);
    plan.minutes_per_day = j.value("minutes_per_day", plan.minutes_per_day);
    if (plan.horizon_days <= plan.warmup_days)
      throw ConfigError("plan horizon must exceed warm-up");
    if (plan.replications < 1) throw ConfigError("plan needs >= 1 replication");
    return plan;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("plan json: ") + e.what());
  }
}

ExperimentPlan load_plan(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot open plan " + file.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return plan_from_json(ss.str());
}

std::string to_json_string(const ExperimentPlan& plan) {
  json j;
  j["preset"] = plan.preset;
  j["replications"] = plan.replications;
  j["horizon_days"] = plan.horizon_days;
  j["warmup_days"] = plan.warmup_days;
  j["master_seed"] = plan.master_seed;
  j["mean_total_item_demand_per_day"] = plan.mean_total_item_demand_per_day;
  j["minutes_per_day"] = plan.minutes_per_day;
  json slices = json::array();
  for (const PlanSlice& s : plan.slices) {
    slices.push_back({{"structure", to_string(s.env.structure)},
                      {"load", s.env.load},
                      {"ppcs", to_string(s.ppcs)},
                      {"grid", grid_to_json(s.grid)}});
  }
  j["slices"] = std::move(slices);
  return j.dump(2) + "\n";
}

void save_plan(const ExperimentPlan& plan, const std::filesystem::path& file) {
  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
  std::ofstream out(file);
  if (!out) throw ConfigError("cannot write plan " + file.string());
  out << to_json_string(plan);
}

Summary summarize(const std::vector<RunRecord>& records,
                  int expected_replications) {
  struct Key {
    std::string structure;
    double load;
    std::string ppcs;
    int64_t iteration;
    bool operator<(const Key& o) const {
      return std::tie(structure, load, ppcs, iteration) <
             std::tie(o.structure, o.load, o.ppcs, o.iteration);
    }
  };
  std::map<Key, std::vector<const RunRecord*>> groups;
  for (const RunRecord& r : records) {
    if (!r.ok) continue;
    groups[{r.structure, r.load, r.ppcs, r.iteration}].push_back(&r);
  }
  if (groups.empty()) throw IncompleteScopeError("result store has no runs");

  Summary summary;
  std::string missing;
  int missing_count = 0;
  for (auto& [key, runs] : groups) {
    std::set<int> reps;
    for (const RunRecord* r : runs) reps.insert(r->replication);
    if (static_cast<int>(reps.size()) < expected_replications) {
      for (int rep = 0; rep < expected_replications; ++rep) {
        if (!reps.count(rep)) {
          if (missing_count < 8) {
            missing += " (iteration " + std::to_string(key.iteration) +
                       ", replication " + std::to_string(rep) + ")";
          }
          ++missing_count;
        }
      }
      continue;
    }

    IterationSummary s;
    s.structure = key.structure;
    s.load = key.load;
    s.ppcs = key.ppcs;
    s.iteration = key.iteration;
    s.params = runs.front()->params;
    s.replications = static_cast<int>(runs.size());
    double sum = 0.0;
    for (const RunRecord* r : runs) sum += r->result.overall_per_day;
    s.mean_overall = sum / runs.size();
    double ss = 0.0;
    for (const RunRecord* r : runs) {
      double d = r->result.overall_per_day - s.mean_overall;
      ss += d * d;
    }
    s.sd_overall = runs.size() > 1 ? std::sqrt(ss / (runs.size() - 1)) : 0.0;
    s.stderr_overall = s.sd_overall / std::sqrt(static_cast<double>(runs.size()));
    for (const RunRecord* r : runs) {
      s.mean_per_day.wip_component += r->result.per_day.wip_component;
      s.mean_per_day.component_stock += r->result.per_day.component_stock;
      s.mean_per_day.wip_item += r->result.per_day.wip_item;
      s.mean_per_day.fgi += r->result.per_day.fgi;
      s.mean_per_day.tardiness += r->result.per_day.tardiness;
      s.mean_utilization += r->result.diagnostics.mean_utilization;
      s.mean_fill_on_time += r->result.diagnostics.fill_on_time;
    }
    double n = static_cast<double>(runs.size());
    s.mean_per_day.wip_component /= n;
    s.mean_per_day.component_stock /= n;
    s.mean_per_day.wip_item /= n;
    s.mean_per_day.fgi /= n;
    s.mean_per_day.tardiness /= n;
    s.mean_utilization /= n;
    s.mean_fill_on_time /= n;
    summary.iterations.push_back(std::move(s));
  }
  if (missing_count > 0)
    throw IncompleteScopeError("missing " + std::to_string(missing_count) +
                               " replications:" + missing);

  std::map<std::tuple<std::string, double, std::string>, const IterationSummary*>
      best;
  for (const IterationSummary& s : summary.iterations) {
    auto key = std::make_tuple(s.structure, s.load, s.ppcs);
    auto it = best.find(key);
    // Ties on the mean go to the lower iteration index; the vector is
    // already iteration-ordered within a group.
    if (it == best.end() || s.mean_overall < it->second->mean_overall)
      best[key] = &s;
  }
  for (auto& [key, s] : best) summary.best.push_back(*s);
  return summary;
}

const IterationSummary* Summary::find_best(const std::string& structure,
                                           double load,
                                           const std::string& ppcs) const {
  for (const IterationSummary& s : best) {
    if (s.structure == structure && std::abs(s.load - load) < 1e-9 &&
        s.ppcs == ppcs)
      return &s;
  }
  return nullptr;
}

double welch_one_sided_p(double mean_a, double sd_a, int n_a, double mean_b,
                         double sd_b, int n_b) {
  double va = sd_a * sd_a / n_a;
  double vb = sd_b * sd_b / n_b;
  double se = std::sqrt(va + vb);
  if (se == 0.0) return mean_a < mean_b ? 0.0 : 1.0;
  double t = (mean_b - mean_a) / se;
  double df = (va + vb) * (va + vb) /
              (va * va / (n_a - 1) + vb * vb / (n_b - 1));
  if (df < 1.0) df = 1.0;
  boost::math::students_t dist(df);
  return boost::math::cdf(boost::math::complement(dist, t));
}

namespace {

std::string csv_quote(const std::string& s) {
  if (s.find(',') == std::string::npos && s.find('"') == std::string::npos)
    return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

void write_summary_csv(const Summary& summary,
                       const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);

  // Union of parameter names, stable order of first appearance.
  std::vector<std::string> param_names;
  for (const IterationSummary& s : summary.iterations)
    for (const auto& [k, v] : s.params)
      if (std::find(param_names.begin(), param_names.end(), k) ==
          param_names.end())
        param_names.push_back(k);

  auto write_rows = [&](const std::filesystem::path& file,
                        const std::vector<IterationSummary>& rows) {
    std::ofstream out(file);
    if (!out) throw ConfigError("cannot write " + file.string());
    out << "structure,load,ppcs,iteration,replications,mean_overall_cu_per_day,"
           "stderr,wip_component,component_stock,wip_item,fgi,tardiness,"
           "mean_utilization,fill_on_time";
    for (const std::string& p : param_names) out << ",param_" << p;
    out << "\n";
    for (const IterationSummary& s : rows) {
      out << csv_quote(s.structure) << ',' << s.load << ',' << s.ppcs << ','
          << s.iteration << ',' << s.replications << ',' << s.mean_overall
          << ',' << s.stderr_overall << ',' << s.mean_per_day.wip_component
          << ',' << s.mean_per_day.component_stock << ','
          << s.mean_per_day.wip_item << ',' << s.mean_per_day.fgi << ','
          << s.mean_per_day.tardiness << ',' << s.mean_utilization << ','
          << s.mean_fill_on_time;
      for (const std::string& p : param_names) {
        out << ',';
        for (const auto& [k, v] : s.params)
          if (k == p) {
            out << v;
            break;
          }
      }
      out << "\n";
    }
  };

  write_rows(out_dir / "iterations.csv", summary.iterations);
  write_rows(out_dir / "best_params.csv", summary.best);

  // Stacked cost components of the best iteration per environment and PPCS.
  std::ofstream out(out_dir / "cost_table.csv");
  if (!out) throw ConfigError("cannot write cost_table.csv");
  out << "structure,load,ppcs,wip_component,component_stock,wip_item,fgi,"
         "tardiness,overall_cu_per_day\n";
  for (const IterationSummary& s : summary.best) {
    out << s.structure << ',' << s.load << ',' << s.ppcs << ','
        << s.mean_per_day.wip_component << ',' << s.mean_per_day.component_stock
        << ',' << s.mean_per_day.wip_item << ',' << s.mean_per_day.fgi << ','
        << s.mean_per_day.tardiness << ',' << s.mean_overall << "\n";
  }
}

std::string comparisons_report(const Summary& summary) {
  std::ostringstream out;
  out << "pairwise best-mean comparisons (one-sided Welch p for a < b)\n";
  std::set<std::pair<std::string, double>> envs;
  for (const IterationSummary& s : summary.best) envs.insert({s.structure, s.load});
  for (const auto& [structure, load] : envs) {
    const IterationSummary* mrp = summary.find_best(structure, load, "mrp");
    const IterationSummary* rps = summary.find_best(structure, load, "rps");
    const IterationSummary* conwip = summary.find_best(structure, load, "conwip");
    out << structure << " load " << load << ":";
    auto emit = [&out](const char* label, const IterationSummary* a,
                       const IterationSummary* b) {
      if (!a || !b) return;
      double p = welch_one_sided_p(a->mean_overall, a->sd_overall,
                                   a->replications, b->mean_overall,
                                   b->sd_overall, b->replications);
      out << "  " << label << " p=" << p;
    };
    if (mrp && rps && conwip) {
      out << " best mrp=" << mrp->mean_overall << " rps=" << rps->mean_overall
          << " conwip=" << conwip->mean_overall;
      emit("mrp<rps", mrp, rps);
      emit("conwip<rps", conwip, rps);
      emit("conwip<mrp", conwip, mrp);
      emit("mrp<conwip", mrp, conwip);
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace ppcsim
