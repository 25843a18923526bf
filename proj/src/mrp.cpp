#include <algorithm>

#include "ppcsim/controllers.hpp"
#include "ppcsim/simulation.hpp"

namespace ppcsim {

MrpController::MrpController(const MrpParams& p, const CalibratedScenario& world)
    : p_(p) {
  const Structure& st = world.structure();
  safety_stock_abs_.assign(st.sku_count(), 0.0);
  for (SkuIndex s = 0; s < st.sku_count(); ++s) {
    if (st.is_raw(s)) continue;
    double prop = st.skus[s].kind == SkuKind::Item ? p_.safety_stock_items
                                                   : p_.safety_stock_components;
    safety_stock_abs_[s] = prop * world.mean_daily_units(s);
  }
}

// Regenerative daily planning: netting, FOP lot-sizing, backward scheduling
// and BoM explosion from the items down to the deepest planned level.
// Unreleased orders from the previous run are replaced wholesale; released
// orders are frozen and enter netting as scheduled receipts.
void MrpController::planning_run(Simulation& sim, int day) {
  for (int32_t id : todays_releases_) {
    ProductionOrder& stale = sim.order(id);
    if (stale.state == OrderState::Planned) sim.cancel_order(stale);
  }
  todays_releases_.clear();

  const Structure& st = sim.world().structure();
  std::vector<std::map<int, double>> exploded(st.sku_count());

  for (SkuIndex s = 0; s < st.sku_count(); ++s) {
    if (st.is_raw(s)) continue;  // skus are sorted by level, items first
    const Sku& sku = st.skus[s];

    std::map<int, double> gross;
    if (sku.kind == SkuKind::Item) {
      for (const CustomerOrder* o : sim.demand().open_orders(s)) {
        int period = std::max(day, static_cast<int>(std::floor(o->due_day)));
        gross[period] += o->quantity;
      }
    } else {
      gross = std::move(exploded[s]);
    }
    if (gross.empty()) continue;

    double available =
        sim.stock(s) - safety_stock_abs_[s] + sim.open_released_qty(s);
    auto nets = net_requirements(gross, available);
    if (nets.empty()) continue;

    bool item = sku.kind == SkuKind::Item;
    int window = item ? p_.fop_lot_size_items : p_.fop_lot_size_components;
    int lead = item ? p_.planned_lead_time_items : p_.planned_lead_time_components;

    for (const auto& [due, qty] : fop_batches(nets, window)) {
      int start = due - lead;
      SkuIndex child = sku.child;
      if (child >= 0 && !st.is_raw(child))
        exploded[child][std::max(day, start)] += qty;
      if (start <= day) {
        // Due for release now (possibly already late); material-gated below.
        ProductionOrder& o = sim.create_order(s, qty, day, due, start, start,
                                              LoopId::None);
        todays_releases_.push_back(o.id);
      }
      // Orders with a future start stay on paper; tomorrow's run recreates
      // them from the same requirements.
    }
  }

  std::sort(todays_releases_.begin(), todays_releases_.end(),
            [&sim](int32_t a, int32_t b) {
              const ProductionOrder& oa = sim.order(a);
              const ProductionOrder& ob = sim.order(b);
              if (oa.planned_end_day != ob.planned_end_day)
                return oa.planned_end_day < ob.planned_end_day;
              return oa.id < ob.id;
            });
}

// Push release: no WIP limit, but an order only leaves the planning board
// once its child component stock covers it (raw material is always there).
// Orders blocked on material retry on every check until the next run
// replaces them.
void MrpController::release_check(Simulation& sim) {
  auto it = todays_releases_.begin();
  while (it != todays_releases_.end()) {
    ProductionOrder& o = sim.order(*it);
    if (o.state != OrderState::Planned || sim.try_release(o)) {
      it = todays_releases_.erase(it);
    } else {
      ++it;
    }
  }
}

}  // namespace ppcsim
