#include <cmath>

#include "ppcsim/model.hpp"

namespace ppcsim {

double CalibratedScenario::order_workload_minutes(SkuIndex s, double quantity) const {
  const Sku& sku = scenario.structure.skus[s];
  double total = 0.0;
  for (std::size_t step = 0; step < sku.routing.size(); ++step) {
    total += quantity * calib.step_minutes[s][step];
    total += calib.setup_minutes[sku.routing[step].machine];
  }
  return total;
}

CalibratedScenario calibrate(const Scenario& scenario) {
  const Structure& st = scenario.structure;
  st.validate();

  if (!(scenario.planned_shop_load > scenario.setup_share) ||
      !(scenario.planned_shop_load < 1.0))
    throw BadLoadError("planned shop load must lie in (setup_share, 1)");
  if (scenario.horizon_days <= scenario.warmup_days)
    throw ConfigError("horizon must exceed warm-up");

  Calibration c;
  const int n_sku = st.sku_count();
  const int n_mach = st.machine_count();
  c.mean_daily_units.assign(n_sku, 0.0);
  c.step_minutes.assign(n_sku, {});
  c.setup_minutes.assign(n_mach, 0.0);
  c.skus_per_machine.assign(n_mach, 0);
  c.planned_load.assign(n_mach, 0.0);

  // Mean daily units: items get share x total demand; every component on an
  // item's child chain inherits that item's units (BoM quantity is 1:1).
  for (SkuIndex i : st.items()) {
    double units = st.skus[i].demand_share * scenario.mean_total_item_demand_per_day;
    c.mean_daily_units[i] += units;
    for (SkuIndex ch = st.skus[i].child; ch >= 0; ch = st.skus[ch].child)
      c.mean_daily_units[ch] += units;
  }

  // Raw per-machine load from the relative weights, then one scale factor per
  // machine so that processing consumes (load - setup_share) of the day.
  std::vector<double> raw_minutes(n_mach, 0.0);
  for (SkuIndex s = 0; s < n_sku; ++s) {
    for (const RoutingStep& step : st.skus[s].routing) {
      raw_minutes[step.machine] += c.mean_daily_units[s] * step.weight;
      c.skus_per_machine[step.machine] += 1;
    }
  }
  const double processing_target =
      (scenario.planned_shop_load - scenario.setup_share) * scenario.minutes_per_day;
  std::vector<double> scale(n_mach, 0.0);
  for (MachineIndex m = 0; m < n_mach; ++m) {
    if (raw_minutes[m] <= 0.0)
      throw InfeasibleError("machine " + st.machines[m] + " has no routed sku");
    scale[m] = processing_target / raw_minutes[m];
    // One batch per sku per day is the baseline, so the setup budget splits
    // evenly over the skus crossing the machine.
    c.setup_minutes[m] =
        scenario.setup_share * scenario.minutes_per_day / c.skus_per_machine[m];
  }
  for (SkuIndex s = 0; s < n_sku; ++s) {
    c.step_minutes[s].reserve(st.skus[s].routing.size());
    for (const RoutingStep& step : st.skus[s].routing)
      c.step_minutes[s].push_back(step.weight * scale[step.machine]);
  }

  // Re-derive the planned load per machine and insist on equality: no
  // bottleneck machine may exist.
  for (MachineIndex m = 0; m < n_mach; ++m) {
    double proc = 0.0;
    for (SkuIndex s = 0; s < n_sku; ++s) {
      const Sku& sku = st.skus[s];
      for (std::size_t k = 0; k < sku.routing.size(); ++k)
        if (sku.routing[k].machine == m)
          proc += c.mean_daily_units[s] * c.step_minutes[s][k];
    }
    double setup = c.skus_per_machine[m] * c.setup_minutes[m];
    c.planned_load[m] = (proc + setup) / scenario.minutes_per_day;
    if (std::abs(c.planned_load[m] - scenario.planned_shop_load) > 1e-9)
      throw InfeasibleError("calibration failed to equalize machine loads");
  }

  CalibratedScenario out;
  out.scenario = scenario;
  out.calib = std::move(c);
  return out;
}

}  // namespace ppcsim
