#include <algorithm>
#include <cmath>

#include "ppcsim/simulation.hpp"

namespace ppcsim {

namespace {

SimTime time_from_days(double days, double minutes_per_day) {
  auto whole = static_cast<int32_t>(std::floor(days));
  double minute = (days - whole) * minutes_per_day;
  if (minute >= minutes_per_day) {
    ++whole;
    minute = 0.0;
  }
  return SimTime{whole, minute};
}

}  // namespace

Simulation::Simulation(const CalibratedScenario& world,
                       const ControllerParams& params, uint64_t run_seed)
    : world_(world),
      controller_(make_controller(params, world)),
      rng_demand_qty_(run_seed, "demand-qty"),
      rng_demand_clt_(run_seed, "demand-clt"),
      rng_proc_(run_seed, "proc-time"),
      rng_setup_(run_seed, "setup-time"),
      demand_(world.structure().sku_count()),
      ledger_(world.scenario.cost_rates,
              static_cast<double>(world.scenario.warmup_days),
              static_cast<double>(world.scenario.horizon_days)) {
  const int n = world_.structure().sku_count();
  stock_.assign(n, 0.0);
  open_total_.assign(n, 0.0);
  open_released_.assign(n, 0.0);
  released_units_.assign(n, 0.0);
  completed_units_.assign(n, 0.0);
  machines_.resize(world_.structure().machine_count());

  for (int d = 0; d < world_.scenario.horizon_days; ++d)
    calendar_.schedule(EventKind::PeriodStart, SimTime::day_start(d), d);
  calendar_.schedule(EventKind::HorizonEnd,
                     SimTime::day_start(world_.scenario.horizon_days));
}

void Simulation::run_to(SimTime t) {
  events_processed_ += calendar_.run_until(t, [this](const Event& e) {
    handle(e);
    if (record_event_trace) event_trace.push_back(e);
    if (observer) observer(e);
  });
}

RunResult Simulation::run() {
  run_to(SimTime::day_start(world_.scenario.horizon_days));
  return finalize();
}

void Simulation::handle(const Event& e) {
  switch (e.kind) {
    case EventKind::PeriodStart:
      on_period_start(e.arg0);
      break;
    case EventKind::OrderArrival:
      on_order_arrival(e.arg0);
      break;
    case EventKind::PlanningRun:
      controller_->planning_run(*this, today());
      break;
    case EventKind::ReleaseCheck:
      controller_->release_check(*this);
      break;
    case EventKind::MachineStart:
      on_machine_start(e.arg0);
      break;
    case EventKind::MachineFinish:
      on_machine_finish(e.arg0, e.arg1);
      break;
    case EventKind::DueDate:
      on_due_date(e.arg0);
      break;
    case EventKind::CostSampling:
      break;  // holding costs integrate continuously; nothing to sample
    case EventKind::HorizonEnd:
      ledger_.finalize(static_cast<double>(world_.scenario.horizon_days));
      horizon_reached_ = true;
      break;
  }
}

void Simulation::on_period_start(int day) {
  const SimTime t = SimTime::day_start(day);
  for (SkuIndex item : world_.structure().items())
    calendar_.schedule(EventKind::OrderArrival, t, item);
  calendar_.schedule(EventKind::PlanningRun, t);
  calendar_.schedule(EventKind::ReleaseCheck, t);
}

void Simulation::on_order_arrival(SkuIndex item) {
  const Scenario& sc = world_.scenario;
  double qty = rng_demand_qty_.lognormal(world_.mean_daily_units(item),
                                         sc.cv_demand_qty);
  double variable = sc.clt_variable_mean_days > 0.0
                        ? rng_demand_clt_.lognormal(sc.clt_variable_mean_days,
                                                    sc.cv_clt_variable)
                        : 0.0;
  CustomerOrder& o =
      demand_.generate(item, today(), qty, sc.clt_fixed_days + variable);
  calendar_.schedule(EventKind::DueDate,
                     time_from_days(o.due_day, sc.minutes_per_day), o.id);
  controller_->on_customer_order(*this, o);
}

void Simulation::on_due_date(int32_t customer_order) {
  deliver_ready(demand_.order(customer_order).item);
}

void Simulation::deliver_ready(SkuIndex item) {
  std::vector<Delivery> out;
  demand_.attempt_deliveries(item, now_days(), stock_[item], out);
  const double warmup = world_.scenario.warmup_days;
  for (const Delivery& d : out) {
    ledger_.fgi_change(now_days(), -d.quantity);
    ledger_.book_tardiness(d.delivered_day, d.quantity, d.tardy_days);
    if (!ledger_.closed() && d.delivered_day >= warmup) {
      ++deliveries_measured_;
      if (d.tardy_days > 0.0) ++tardy_measured_;
    }
    deliveries_.push_back(d);
  }
}

ProductionOrder& Simulation::create_order(SkuIndex sku, double quantity,
                                          int created_day, double planned_end,
                                          double planned_start,
                                          double earliest_start, LoopId loop) {
  ProductionOrder o;
  o.id = static_cast<int32_t>(orders_.size());
  o.sku = sku;
  o.quantity = quantity;
  o.created_day = created_day;
  o.planned_end_day = planned_end;
  o.planned_start_day = planned_start;
  o.earliest_start_day = earliest_start;
  o.workload_minutes = world_.order_workload_minutes(sku, quantity);
  o.loop = loop;
  orders_.push_back(o);
  open_total_[sku] += quantity;
  if (planning_trace)
    planning_trace->push_back({created_day, o.id, world_.structure().skus[sku].id,
                               quantity, planned_end, planned_start,
                               earliest_start});
  return orders_.back();
}

void Simulation::cancel_order(ProductionOrder& o) {
  o.state = OrderState::Cancelled;
  open_total_[o.sku] -= o.quantity;
}

bool Simulation::material_available(const ProductionOrder& o) const {
  const Structure& st = world_.structure();
  SkuIndex child = st.skus[o.sku].child;
  if (child < 0 || st.is_raw(child)) return true;
  return stock_[child] + 1e-9 >= o.quantity;
}

bool Simulation::try_release(ProductionOrder& o) {
  if (o.state != OrderState::Planned)
    throw SimError("try_release on a non-planned order");
  if (!material_available(o)) return false;

  const Structure& st = world_.structure();
  const double t = now_days();
  SkuIndex child = st.skus[o.sku].child;
  if (child >= 0 && !st.is_raw(child)) {
    stock_[child] -= o.quantity;
    if (stock_[child] < 0.0) stock_[child] = 0.0;
    ledger_.component_stock_change(t, -o.quantity);
  }

  o.state = OrderState::Released;
  o.released_at = now();
  o.system_entry_day = t;
  open_released_[o.sku] += o.quantity;
  released_units_[o.sku] += o.quantity;
  if (st.skus[o.sku].kind == SkuKind::Item)
    ledger_.wip_item_change(t, o.quantity);
  else
    ledger_.wip_component_change(t, o.quantity);

  enqueue_at(st.skus[o.sku].routing.front().machine, o.id);
  return true;
}

void Simulation::enqueue_at(MachineIndex m, int32_t order_id) {
  machines_[m].queue.push_back({order_id, now(), enqueue_seq_++});
  calendar_.schedule(EventKind::MachineStart, now(), m);
}

void Simulation::on_machine_start(MachineIndex m) {
  MachineState& ms = machines_[m];
  if (!ms.idle() || ms.queue.empty()) return;

  int pick = pick_next(ms.queue, orders_, controller_->dispatch_rule());
  int32_t order_id = ms.queue[pick].order_id;
  ms.queue.erase(ms.queue.begin() + pick);
  ProductionOrder& o = orders_[order_id];

  const Scenario& sc = world_.scenario;
  double setup = rng_setup_.lognormal(world_.setup_minutes(m), sc.cv_setup);
  double mean_batch =
      o.quantity * world_.processing_minutes(o.sku, o.route_position);
  double processing = rng_proc_.lognormal(mean_batch, sc.cv_processing);
  double duration = setup + processing;

  ms.in_service = order_id;
  ms.busy_until = now().plus_minutes(duration, sc.minutes_per_day);

  double t0 = now().total_minutes(sc.minutes_per_day);
  double lo = std::max(t0, world_.scenario.warmup_days * sc.minutes_per_day);
  double hi = std::min(t0 + duration,
                       world_.scenario.horizon_days * sc.minutes_per_day);
  if (hi > lo) ms.measured_busy_minutes += hi - lo;

  if (machine_trace)
    machine_trace->push_back({m, order_id, now_days(), setup, processing,
                              ms.busy_until.as_days(sc.minutes_per_day)});

  calendar_.schedule(EventKind::MachineFinish, ms.busy_until, m, order_id);
}

void Simulation::on_machine_finish(MachineIndex m, int32_t order_id) {
  machines_[m].in_service = -1;
  ProductionOrder& o = orders_[order_id];
  ++o.route_position;
  const auto& routing = world_.structure().skus[o.sku].routing;
  if (o.route_position < static_cast<int32_t>(routing.size())) {
    enqueue_at(routing[o.route_position].machine, order_id);
  } else {
    complete_order(o);
  }
  calendar_.schedule(EventKind::MachineStart, now(), m);
}

void Simulation::complete_order(ProductionOrder& o) {
  const Structure& st = world_.structure();
  const double t = now_days();
  o.state = OrderState::Completed;
  o.completed_at = now();
  open_total_[o.sku] -= o.quantity;
  open_released_[o.sku] -= o.quantity;
  completed_units_[o.sku] += o.quantity;
  stock_[o.sku] += o.quantity;

  bool item = st.skus[o.sku].kind == SkuKind::Item;
  if (item) {
    ledger_.wip_item_change(t, -o.quantity);
    ledger_.fgi_change(t, o.quantity);
  } else {
    ledger_.wip_component_change(t, -o.quantity);
    ledger_.component_stock_change(t, o.quantity);
  }

  if (!ledger_.closed() && t >= world_.scenario.warmup_days) {
    lead_time_day_sum_ += t - o.system_entry_day;
    ++lead_time_count_;
  }

  controller_->on_order_completed(*this, o);
  if (item) deliver_ready(o.sku);
  schedule_release_check();
}

void Simulation::schedule_release_check() {
  calendar_.schedule(EventKind::ReleaseCheck, now());
}

RunResult Simulation::finalize() {
  if (!horizon_reached_)
    throw IncompleteRunError("run has not reached the horizon");

  const Scenario& sc = world_.scenario;
  RunResult r;
  r.total_cu = ledger_.totals();
  r.measured_days = sc.horizon_days - sc.warmup_days;
  const double days = static_cast<double>(r.measured_days);
  r.per_day.wip_component = r.total_cu.wip_component / days;
  r.per_day.component_stock = r.total_cu.component_stock / days;
  r.per_day.wip_item = r.total_cu.wip_item / days;
  r.per_day.fgi = r.total_cu.fgi / days;
  r.per_day.tardiness = r.total_cu.tardiness / days;
  r.overall_per_day = r.total_cu.total() / days;

  Diagnostics& d = r.diagnostics;
  d.utilization.reserve(machines_.size());
  const double measured_minutes = days * sc.minutes_per_day;
  for (const MachineState& ms : machines_)
    d.utilization.push_back(ms.measured_busy_minutes / measured_minutes);
  double sum = 0.0, lo = 1e300, hi = -1e300;
  for (double u : d.utilization) {
    sum += u;
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  d.mean_utilization = sum / static_cast<double>(d.utilization.size());
  d.max_utilization_gap = hi - lo;
  d.deliveries = deliveries_measured_;
  d.tardy_deliveries = tardy_measured_;
  d.fill_on_time =
      deliveries_measured_ > 0
          ? 1.0 - static_cast<double>(tardy_measured_) / deliveries_measured_
          : 1.0;
  d.mean_production_lead_time_days =
      lead_time_count_ > 0 ? lead_time_day_sum_ / lead_time_count_ : 0.0;
  d.mean_fgi_units = ledger_.fgi_unit_days() / days;
  d.events_processed = events_processed_;
  return r;
}

}  // namespace ppcsim
