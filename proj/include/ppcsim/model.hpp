#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ppcsim/errors.hpp"

namespace ppcsim {

using SkuId = int32_t;       // external label, e.g. 101..108, 201, 301
using SkuIndex = int32_t;    // dense index into Structure::skus
using MachineIndex = int32_t;

enum class SkuKind : uint8_t { Item, Component };

struct RoutingStep {
  MachineIndex machine = -1;
  // Relative processing minutes per unit; calibration rescales these per
  // machine so every machine hits the planned shop load.
  double weight = 1.0;
};

struct Sku {
  SkuId id = 0;
  SkuKind kind = SkuKind::Component;
  int bom_level = 0;      // 0 = finished item; the highest level is raw material
  SkuIndex child = -1;    // single required component one level down; -1 = none
  double demand_share = 0.0;  // items only; components derive theirs
  std::vector<RoutingStep> routing;  // empty for raw material
};

enum class StructureKind : uint8_t { FlowShop, HybridShop, JobShop };

const char* to_string(StructureKind k);
StructureKind parse_structure_kind(const std::string& name);  // ConfigError

// A production system: machines, SKUs with their one-child BoM chains, and
// per-SKU routings. Levels [0, planned_bom_levels) are produced; SKUs at
// level == planned_bom_levels are raw material (always available, never
// planned).
struct Structure {
  std::string name;
  std::vector<std::string> machines;
  int planned_bom_levels = 0;
  std::vector<Sku> skus;  // stable order: by (bom_level, id)

  SkuIndex index_of(SkuId id) const;  // UnknownSkuError
  MachineIndex machine_index(const std::string& name) const;
  bool is_raw(SkuIndex s) const {
    return skus[s].bom_level >= planned_bom_levels;
  }
  std::vector<SkuIndex> items() const;
  int machine_count() const { return static_cast<int>(machines.size()); }
  int sku_count() const { return static_cast<int>(skus.size()); }

  // Checks all structural invariants; throws ConfigError on violation.
  void validate() const;
};

// Built-in default structures.
Structure build_structure(StructureKind kind);

// Sum of demand shares of items whose child chain passes through `component`.
double component_demand_share(const Structure& s, SkuId component);

struct CostRates {
  double wip_component = 0.5;   // CU per unit per day, components in process
  double component_stock = 1.0; // CU per unit per day, finished component stock
  double wip_item = 1.0;        // CU per unit per day, items in process
  double fgi = 2.0;             // CU per unit per day, finished goods inventory
  double tardiness = 38.0;      // CU per unit per day late
};

struct Scenario {
  Structure structure;
  double planned_shop_load = 0.90;  // target utilization incl. setup
  double minutes_per_day = 1440.0;
  double mean_total_item_demand_per_day = 500.0;
  double setup_share = 0.10;  // fraction of daily capacity spent on setups
  double cv_processing = 0.2;
  double cv_setup = 0.2;
  double cv_demand_qty = 0.2;
  double cv_clt_variable = 0.5;
  double clt_fixed_days = 10.0;         // fixed part of customer required lead time
  double clt_variable_mean_days = 5.0;  // mean of the lognormal variable part
  CostRates cost_rates;
  int horizon_days = 400;
  int warmup_days = 150;
  uint64_t seed = 1;
};

// Everything calibration derives from a Scenario: per-SKU mean daily units,
// per-step mean processing minutes, per-machine mean setup minutes.
struct Calibration {
  std::vector<double> mean_daily_units;             // per sku
  std::vector<std::vector<double>> step_minutes;    // [sku][step], minutes/unit
  std::vector<double> setup_minutes;                // per machine, per changeover
  std::vector<int> skus_per_machine;                // per machine
  std::vector<double> planned_load;                 // per machine; all == load
};

class CalibratedScenario {
 public:
  Scenario scenario;
  Calibration calib;

  double mean_daily_units(SkuIndex s) const { return calib.mean_daily_units[s]; }
  double processing_minutes(SkuIndex s, int step) const {
    return calib.step_minutes[s][step];
  }
  double setup_minutes(MachineIndex m) const { return calib.setup_minutes[m]; }

  // Standard workload of an order over its whole route: processing plus one
  // setup per step, all at standard (mean) times.
  double order_workload_minutes(SkuIndex s, double quantity) const;

  const Structure& structure() const { return scenario.structure; }
};

// Sets mean order quantities and the processing-time matrix so that every
// machine's planned load equals scenario.planned_shop_load exactly.
// Throws BadLoadError / InfeasibleError.
CalibratedScenario calibrate(const Scenario& scenario);

}  // namespace ppcsim
