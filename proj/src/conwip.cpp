#include <algorithm>
#include <cmath>

#include "ppcsim/controllers.hpp"
#include "ppcsim/simulation.hpp"

namespace ppcsim {

ConwipController::ConwipController(const ConwipParams& p,
                                   const CalibratedScenario& world)
    : p_(p) {
  const Structure& st = world.structure();
  single_loop_ = st.planned_bom_levels == 1;
  lot_abs_.assign(st.sku_count(), 0.0);
  pools_.resize(st.sku_count());
  for (SkuIndex s : st.items())
    lot_abs_[s] = p_.mps_foq_lot * world.mean_daily_units(s);
}

void ConwipController::on_customer_order(Simulation&, const CustomerOrder& o) {
  auto& pool = pools_[o.item];
  Quantum q{o.due_day, o.quantity, o.id};
  auto pos = std::upper_bound(pool.begin(), pool.end(), q,
                              [](const Quantum& a, const Quantum& b) {
                                if (a.due_day != b.due_day)
                                  return a.due_day < b.due_day;
                                return a.customer_order < b.customer_order;
                              });
  pool.insert(pos, q);
}

// MPS: batch the unbatched gross requirements per item, then backward
// schedule. With two loops the whole component chain of an item order is
// scheduled ahead of it, one estimated component lead time per BoM level;
// component orders inherit the item due date for EDD purposes.
void ConwipController::run_mps(Simulation& sim, int day) {
  const Structure& st = sim.world().structure();
  auto create_chain = [&](SkuIndex item, double qty, double due) {
    double item_start = due - p_.estimated_lead_time_items;
    double earliest = single_loop_ ? item_start : item_start - p_.work_ahead_buffer;
    ProductionOrder& io = sim.create_order(item, qty, day, due, item_start,
                                           earliest, LoopId::ItemLoop);
    unreleased_.push_back(io.id);
    if (single_loop_) return;
    int depth = 1;
    for (SkuIndex c = st.skus[item].child; c >= 0 && !st.is_raw(c);
         c = st.skus[c].child, ++depth) {
      double cstart = item_start - depth * p_.estimated_lead_time_components;
      ProductionOrder& co =
          sim.create_order(c, qty, day, due, cstart, cstart, LoopId::ComponentLoop);
      unreleased_.push_back(co.id);
    }
  };

  for (SkuIndex item : st.items()) {
    auto& pool = pools_[item];
    if (p_.mps_policy == MpsPolicy::Foq) {
      double pooled = 0.0;
      for (const Quantum& q : pool) pooled += q.remaining;
      while (pooled >= lot_abs_[item] - 1e-9) {
        double need = lot_abs_[item];
        double due = pool.front().due_day;
        while (need > 1e-9 && !pool.empty()) {
          Quantum& q = pool.front();
          double take = std::min(q.remaining, need);
          q.remaining -= take;
          need -= take;
          if (q.remaining <= 1e-9) pool.erase(pool.begin());
        }
        pooled -= lot_abs_[item];
        create_chain(item, lot_abs_[item], due);
      }
    } else {
      // FOP variant: consecutive windows (the lot parameter read as days)
      // anchored at the earliest due period; one order per non-empty window.
      if (pool.empty()) continue;
      int window = std::max(1, static_cast<int>(std::lround(p_.mps_foq_lot)));
      int anchor = static_cast<int>(std::floor(pool.front().due_day));
      int current = -1;
      double qty = 0.0, due = 0.0;
      for (const Quantum& q : pool) {
        int w = (static_cast<int>(std::floor(q.due_day)) - anchor) / window;
        if (w != current) {
          if (qty > 0.0) create_chain(item, qty, due);
          current = w;
          qty = 0.0;
          due = q.due_day;
        }
        qty += q.remaining;
      }
      if (qty > 0.0) create_chain(item, qty, due);
      pool.clear();
    }
  }
}

void ConwipController::planning_run(Simulation& sim, int day) {
  run_mps(sim, day);
  release_check(sim);
}

bool ConwipController::window_open(const ProductionOrder& o, double now_day) const {
  if (o.loop == LoopId::ComponentLoop) return o.planned_start_day <= now_day;
  if (single_loop_) {
    // The estimated item lead time doubles as the work-ahead-window: release
    // only once the due date falls inside it.
    return o.planned_end_day <= now_day + p_.estimated_lead_time_items;
  }
  return o.earliest_start_day <= now_day;
}

// Centralized release: ready orders (window open, material on hand) go out in
// EDD order while the loop's released workload sits below the WIP-cap.
void ConwipController::release_check(Simulation& sim) {
  double t = sim.now_days();

  std::erase_if(unreleased_, [&sim](int32_t id) {
    return sim.order(id).state != OrderState::Planned;
  });

  std::vector<int32_t> ready;
  ready.reserve(unreleased_.size());
  for (int32_t id : unreleased_) {
    const ProductionOrder& o = sim.order(id);
    if (window_open(o, t) && sim.material_available(o)) ready.push_back(id);
  }
  std::sort(ready.begin(), ready.end(), [&sim](int32_t a, int32_t b) {
    const ProductionOrder& oa = sim.order(a);
    const ProductionOrder& ob = sim.order(b);
    if (oa.planned_end_day != ob.planned_end_day)
      return oa.planned_end_day < ob.planned_end_day;
    return oa.id < ob.id;
  });

  bool item_blocked = false, component_blocked = false;
  for (int32_t id : ready) {
    ProductionOrder& o = sim.order(id);
    double& wip = o.loop == LoopId::ItemLoop ? item_wip_ : component_wip_;
    bool& blocked = o.loop == LoopId::ItemLoop ? item_blocked : component_blocked;
    if (blocked) continue;
    if (!(wip < p_.wip_cap)) {  // at or above the cap: nothing further releases
      blocked = true;
      continue;
    }
    if (sim.try_release(o)) wip += o.workload_minutes;
    // A failed release here means an earlier release in this pass consumed
    // the component stock; the order stays planned.
  }
}

void ConwipController::on_order_completed(Simulation&, ProductionOrder& o) {
  double& wip = o.loop == LoopId::ItemLoop ? item_wip_ : component_wip_;
  wip -= o.workload_minutes;
  if (wip < 0.0 && wip > -1e-6) wip = 0.0;
}

}  // namespace ppcsim
