#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "ppcsim/calendar.hpp"
#include "ppcsim/controllers.hpp"
#include "ppcsim/costing.hpp"
#include "ppcsim/demand.hpp"
#include "ppcsim/model.hpp"
#include "ppcsim/orders.hpp"
#include "ppcsim/rng.hpp"
#include "ppcsim/shopfloor.hpp"

namespace ppcsim {

// One replication: deterministic single-threaded discrete-event run of a
// calibrated scenario under one planning controller. Instances share nothing
// mutable, so any number of them may run on different threads.
class Simulation {
 public:
  Simulation(const CalibratedScenario& world, const ControllerParams& params,
             uint64_t run_seed);

  // Runs to the horizon and returns the finalized result.
  RunResult run();

  // Stepping interface for tests.
  void run_to(SimTime t);
  RunResult finalize();  // IncompleteRunError before the horizon

  // --- state access -------------------------------------------------------
  const CalibratedScenario& world() const { return world_; }
  const SimTime& now() const { return calendar_.now(); }
  double now_days() const {
    return calendar_.now().as_days(world_.scenario.minutes_per_day);
  }
  int today() const { return calendar_.now().day; }

  DemandBook& demand() { return demand_; }
  const DemandBook& demand() const { return demand_; }

  // FGI for items, finished component stock for components.
  double stock(SkuIndex s) const { return stock_[s]; }
  // Quantity of created-and-incomplete production orders per sku.
  double open_total_qty(SkuIndex s) const { return open_total_[s]; }
  // Quantity of released-and-incomplete production orders per sku.
  double open_released_qty(SkuIndex s) const { return open_released_[s]; }

  std::vector<ProductionOrder>& production_orders() { return orders_; }
  const std::vector<ProductionOrder>& production_orders() const { return orders_; }
  ProductionOrder& order(int32_t id) { return orders_[id]; }

  ProductionOrder& create_order(SkuIndex sku, double quantity, int created_day,
                                double planned_end, double planned_start,
                                double earliest_start, LoopId loop);
  void cancel_order(ProductionOrder& o);

  bool material_available(const ProductionOrder& o) const;
  // Consumes the child component stock and puts the order on the floor.
  // Returns false (no state change) when material is short.
  bool try_release(ProductionOrder& o);

  void schedule_release_check();  // at the current instant

  const MachineState& machine(MachineIndex m) const { return machines_[m]; }
  const CostLedger& ledger() const { return ledger_; }
  const std::vector<Delivery>& deliveries() const { return deliveries_; }
  Controller& controller() { return *controller_; }

  double released_units(SkuIndex s) const { return released_units_[s]; }
  double completed_units(SkuIndex s) const { return completed_units_[s]; }

  // --- instrumentation ----------------------------------------------------
  std::function<void(const Event&)> observer;  // invoked after each event
  bool record_event_trace = false;
  std::vector<Event> event_trace;
  std::vector<PlanningTraceRow>* planning_trace = nullptr;

  struct MachineTraceRow {
    MachineIndex machine;
    int32_t order_id;
    double start_day;
    double setup_minutes;
    double processing_minutes;
    double finish_day;
  };
  std::vector<MachineTraceRow>* machine_trace = nullptr;

  uint64_t events_processed() const { return events_processed_; }

 private:
  void handle(const Event& e);
  void on_period_start(int day);
  void on_order_arrival(SkuIndex item);
  void on_due_date(int32_t customer_order);
  void on_machine_start(MachineIndex m);
  void on_machine_finish(MachineIndex m, int32_t order_id);
  void complete_order(ProductionOrder& o);
  void deliver_ready(SkuIndex item);
  void enqueue_at(MachineIndex m, int32_t order_id);

  const CalibratedScenario& world_;
  std::unique_ptr<Controller> controller_;
  EventCalendar calendar_;
  RngStream rng_demand_qty_, rng_demand_clt_, rng_proc_, rng_setup_;
  DemandBook demand_;
  std::vector<double> stock_;
  std::vector<double> open_total_, open_released_;
  std::vector<double> released_units_, completed_units_;
  std::vector<ProductionOrder> orders_;
  std::vector<MachineState> machines_;
  CostLedger ledger_;
  std::vector<Delivery> deliveries_;
  uint64_t enqueue_seq_ = 0;
  uint64_t events_processed_ = 0;
  double lead_time_day_sum_ = 0.0;
  int64_t lead_time_count_ = 0;
  int64_t deliveries_measured_ = 0, tardy_measured_ = 0;
  bool horizon_reached_ = false;
};

}  // namespace ppcsim
