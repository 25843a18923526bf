#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "ppcsim/demand.hpp"
#include "ppcsim/model.hpp"
#include "ppcsim/orders.hpp"

namespace ppcsim {

class Simulation;

enum class PpcsKind : uint8_t { Mrp, Rps, Conwip };

const char* to_string(PpcsKind k);
PpcsKind parse_ppcs(const std::string& name);  // ConfigError

// Lead times and lot windows in days; safety stocks as a proportion of mean
// daily demand (items) or of the summed demand of items requiring the
// component.
struct MrpParams {
  int planned_lead_time_items = 2;
  int fop_lot_size_items = 1;
  double safety_stock_items = 0.5;
  int planned_lead_time_components = 2;
  int fop_lot_size_components = 1;
  double safety_stock_components = 0.5;
};

// Reorder points and lots as proportions of mean daily demand.
struct RpsParams {
  double reorder_point_items = 3.0;
  double foq_lot_items = 1.0;
  double reorder_point_components = 1.0;
  double foq_lot_components = 1.0;
};

enum class MpsPolicy : uint8_t { Foq, Fop };

struct ConwipParams {
  double mps_foq_lot = 1.0;       // proportion of mean daily item demand
  double wip_cap = 20000.0;       // workload minutes, identical for both loops
  int estimated_lead_time_items = 2;
  int estimated_lead_time_components = 3;  // two-loop structures only
  int work_ahead_buffer = 1;               // days, two-loop structures only
  MpsPolicy mps_policy = MpsPolicy::Foq;   // Fop batches by time window instead
};

struct ControllerParams {
  PpcsKind kind = PpcsKind::Mrp;
  MrpParams mrp;
  RpsParams rps;
  ConwipParams conwip;
};

// ---------------------------------------------------------------------------
// Pure planning kernels (unit-testable in isolation).

// Per-period net requirements. `available` starts at on-hand minus safety
// stock plus scheduled receipts and rolls forward over the gross buckets in
// period order.
std::map<int, double> net_requirements(const std::map<int, double>& gross,
                                       double available);

// Fixed-order-period batching: consecutive `window_days`-wide windows
// anchored at the first net requirement; each non-empty window becomes one
// order due at its earliest requirement period.
std::vector<std::pair<int, double>> fop_batches(
    const std::map<int, double>& nets, int window_days);

// Smallest multiple of `lot` that lifts `ip` to at least `rop`; 0 when the
// inventory position has not fallen below the reorder point.
double rps_order_quantity(double ip, double rop, double lot);

// ---------------------------------------------------------------------------

struct PlanningTraceRow {
  int day;
  int32_t order_id;
  SkuId sku;
  double quantity;
  double planned_end;
  double planned_start;
  double earliest_start;
};

enum class DispatchRule : uint8_t { Fifo, Fisfo };

// A planning/release engine driven by the simulation at daily planning runs
// and at release checks (daily and after completions).
class Controller {
 public:
  virtual ~Controller() = default;
  virtual void on_customer_order(Simulation& sim, const CustomerOrder& o);
  virtual void planning_run(Simulation& sim, int day) = 0;
  virtual void release_check(Simulation& sim) = 0;
  virtual void on_order_completed(Simulation& sim, ProductionOrder& order);
  virtual DispatchRule dispatch_rule() const { return DispatchRule::Fifo; }
};

std::unique_ptr<Controller> make_controller(const ControllerParams& params,
                                            const CalibratedScenario& world);

// --------------------------- MRP ------------------------------------------

class MrpController : public Controller {
 public:
  MrpController(const MrpParams& p, const CalibratedScenario& world);
  void planning_run(Simulation& sim, int day) override;
  void release_check(Simulation& sim) override;

 private:
  MrpParams p_;
  std::vector<double> safety_stock_abs_;  // per sku
  std::vector<int32_t> todays_releases_;  // planned orders awaiting material
};

// --------------------------- RPS ------------------------------------------

class RpsController : public Controller {
 public:
  RpsController(const RpsParams& p, const CalibratedScenario& world);
  void planning_run(Simulation& sim, int day) override;
  void release_check(Simulation& sim) override;

  // Inventory position as the controller sees it; exposed for the identity
  // oracle in tests.
  double inventory_position(const Simulation& sim, SkuIndex s) const;
  double internal_backorders(SkuIndex s) const {
    return material_wait_qty_[s];
  }
  double reorder_point_abs(SkuIndex s) const { return rop_abs_[s]; }
  double lot_abs(SkuIndex s) const { return lot_abs_[s]; }

 private:
  void try_release_waiting(Simulation& sim);

  std::vector<double> rop_abs_;   // per sku
  std::vector<double> lot_abs_;   // per sku
  std::vector<int32_t> waiting_;  // created orders blocked on material
  std::vector<double> material_wait_qty_;  // per component sku: blocked demand
};

// --------------------------- ConWIP ---------------------------------------

class ConwipController : public Controller {
 public:
  ConwipController(const ConwipParams& p, const CalibratedScenario& world);
  void on_customer_order(Simulation& sim, const CustomerOrder& o) override;
  void planning_run(Simulation& sim, int day) override;
  void release_check(Simulation& sim) override;
  void on_order_completed(Simulation& sim, ProductionOrder& order) override;
  DispatchRule dispatch_rule() const override { return DispatchRule::Fisfo; }

  bool single_loop() const { return single_loop_; }
  double loop_wip(LoopId loop) const {
    return loop == LoopId::ItemLoop ? item_wip_ : component_wip_;
  }
  double wip_cap() const { return p_.wip_cap; }

 private:
  struct Quantum {  // unbatched gross requirement
    double due_day;
    double remaining;
    int32_t customer_order;
  };

  void run_mps(Simulation& sim, int day);
  bool window_open(const ProductionOrder& o, double now_day) const;

  ConwipParams p_;
  bool single_loop_ = false;
  std::vector<double> lot_abs_;              // per item sku
  std::vector<std::vector<Quantum>> pools_;  // per item sku, EDD order
  std::vector<int32_t> unreleased_;          // created, not yet released
  double item_wip_ = 0.0;       // released workload minutes, item loop
  double component_wip_ = 0.0;  // released workload minutes, component loop
};

}  // namespace ppcsim
