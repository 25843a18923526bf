#include <algorithm>

#include "ppcsim/controllers.hpp"
#include "ppcsim/simulation.hpp"

namespace ppcsim {

RpsController::RpsController(const RpsParams& p, const CalibratedScenario& world) {
  const Structure& st = world.structure();
  rop_abs_.assign(st.sku_count(), 0.0);
  lot_abs_.assign(st.sku_count(), 0.0);
  material_wait_qty_.assign(st.sku_count(), 0.0);
  for (SkuIndex s = 0; s < st.sku_count(); ++s) {
    if (st.is_raw(s)) continue;
    bool item = st.skus[s].kind == SkuKind::Item;
    double units = world.mean_daily_units(s);
    rop_abs_[s] = (item ? p.reorder_point_items : p.reorder_point_components) * units;
    lot_abs_[s] = (item ? p.foq_lot_items : p.foq_lot_components) * units;
  }
}

// IP = on hand + open production orders - backorders. Items count past-due
// undelivered customer demand; components count withdrawals blocked on them.
double RpsController::inventory_position(const Simulation& sim, SkuIndex s) const {
  const Structure& st = sim.world().structure();
  double backorders = st.skus[s].kind == SkuKind::Item
                          ? sim.demand().past_due_quantity(s, sim.now_days())
                          : material_wait_qty_[s];
  return sim.stock(s) + sim.open_total_qty(s) - backorders;
}

// Decentralized daily review, one sku at a time, items before components so
// fresh withdrawals are visible one level down in the same run. Orders
// release immediately; only missing material holds them back.
void RpsController::planning_run(Simulation& sim, int day) {
  const Structure& st = sim.world().structure();
  for (SkuIndex s = 0; s < st.sku_count(); ++s) {
    if (st.is_raw(s)) continue;
    double ip = inventory_position(sim, s);
    double qty = rps_order_quantity(ip, rop_abs_[s], lot_abs_[s]);
    if (qty <= 0.0) continue;
    ProductionOrder& o = sim.create_order(s, qty, day, static_cast<double>(day),
                                          static_cast<double>(day),
                                          static_cast<double>(day), LoopId::None);
    if (!sim.try_release(o)) {
      waiting_.push_back(o.id);
      material_wait_qty_[st.skus[s].child] += qty;
    }
  }
}

void RpsController::release_check(Simulation& sim) { try_release_waiting(sim); }

void RpsController::try_release_waiting(Simulation& sim) {
  const Structure& st = sim.world().structure();
  auto it = waiting_.begin();
  while (it != waiting_.end()) {
    ProductionOrder& o = sim.order(*it);
    if (sim.try_release(o)) {
      material_wait_qty_[st.skus[o.sku].child] -= o.quantity;
      it = waiting_.erase(it);
    } else {
      ++it;
    }
  }
}

}  // namespace ppcsim
