#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "ppcsim/errors.hpp"
#include "ppcsim/model.hpp"

namespace ppcsim {

// Piecewise-constant level whose time integral is accumulated only inside a
// measurement window [win_start, win_end] (days). Exact: no sampling.
class LevelIntegrator {
 public:
  void reset(double win_start, double win_end) {
    win_start_ = win_start;
    win_end_ = win_end;
    level_ = 0.0;
    last_t_ = 0.0;
    integral_ = 0.0;
    finalized_ = false;
  }

  void add(double t, double delta) {
    advance(t);
    level_ += delta;
  }

  void finalize(double t) {
    advance(t);
    finalized_ = true;
  }

  double level() const { return level_; }
  double integral() const { return integral_; }  // unit-days inside the window

 private:
  void advance(double t) {
    if (finalized_) return;
    double lo = std::max(last_t_, win_start_);
    double hi = std::min(t, win_end_);
    if (hi > lo) integral_ += level_ * (hi - lo);
    if (t > last_t_) last_t_ = t;
  }

  double win_start_ = 0.0, win_end_ = 0.0;
  double level_ = 0.0, last_t_ = 0.0, integral_ = 0.0;
  bool finalized_ = false;
};

struct CostBreakdown {
  double wip_component = 0.0;
  double component_stock = 0.0;
  double wip_item = 0.0;
  double fgi = 0.0;
  double tardiness = 0.0;

  double total() const {
    return wip_component + component_stock + wip_item + fgi + tardiness;
  }
};

// Accrues the five cost components over the post-warm-up horizon. Holding
// costs integrate the unit levels continuously; tardiness books at delivery.
class CostLedger {
 public:
  CostLedger(const CostRates& rates, double warmup_day, double horizon_day)
      : rates_(rates), warmup_(warmup_day), horizon_(horizon_day) {
    wip_component_.reset(warmup_day, horizon_day);
    component_stock_.reset(warmup_day, horizon_day);
    wip_item_.reset(warmup_day, horizon_day);
    fgi_.reset(warmup_day, horizon_day);
  }

  void wip_component_change(double t, double dq) { wip_component_.add(t, dq); }
  void component_stock_change(double t, double dq) { component_stock_.add(t, dq); }
  void wip_item_change(double t, double dq) { wip_item_.add(t, dq); }
  void fgi_change(double t, double dq) { fgi_.add(t, dq); }

  void book_tardiness(double delivery_day, double quantity, double tardy_days) {
    if (closed_ || delivery_day < warmup_) return;
    tardiness_cu_ += rates_.tardiness * quantity * tardy_days;
  }

  void finalize(double t) {
    wip_component_.finalize(t);
    component_stock_.finalize(t);
    wip_item_.finalize(t);
    fgi_.finalize(t);
    closed_ = true;
  }

  bool closed() const { return closed_; }

  CostBreakdown totals() const {
    CostBreakdown b;
    b.wip_component = rates_.wip_component * wip_component_.integral();
    b.component_stock = rates_.component_stock * component_stock_.integral();
    b.wip_item = rates_.wip_item * wip_item_.integral();
    b.fgi = rates_.fgi * fgi_.integral();
    b.tardiness = tardiness_cu_;
    return b;
  }

  // Raw unit-day integrals, for diagnostics and tests.
  double fgi_unit_days() const { return fgi_.integral(); }
  double wip_item_units() const { return wip_item_.level(); }
  double wip_component_units() const { return wip_component_.level(); }
  double component_stock_units() const { return component_stock_.level(); }
  double fgi_units_level() const { return fgi_.level(); }

 private:
  CostRates rates_;
  double warmup_, horizon_;
  LevelIntegrator wip_component_, component_stock_, wip_item_, fgi_;
  double tardiness_cu_ = 0.0;
  bool closed_ = false;
};

struct Diagnostics {
  std::vector<double> utilization;  // busy fraction per machine, measured window
  double mean_utilization = 0.0;
  double max_utilization_gap = 0.0;  // max pairwise difference
  double fill_on_time = 0.0;         // on-time fraction of measured deliveries
  double mean_production_lead_time_days = 0.0;
  double mean_fgi_units = 0.0;
  int64_t deliveries = 0;
  int64_t tardy_deliveries = 0;
  uint64_t events_processed = 0;
};

struct RunResult {
  CostBreakdown total_cu;   // over the measured horizon
  CostBreakdown per_day;
  double overall_per_day = 0.0;
  int measured_days = 0;
  Diagnostics diagnostics;
};

}  // namespace ppcsim
