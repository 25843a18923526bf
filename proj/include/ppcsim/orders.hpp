#pragma once

#include <cstdint>

#include "ppcsim/model.hpp"
#include "ppcsim/sim_time.hpp"

namespace ppcsim {

enum class LoopId : uint8_t { None, ItemLoop, ComponentLoop };

enum class OrderState : uint8_t {
  Planned,    // exists on paper only
  Released,   // material consumed, on the shop floor
  Completed,
  Cancelled,  // unreleased plan superseded by the next planning run
};

struct ProductionOrder {
  int32_t id = -1;
  SkuIndex sku = -1;
  double quantity = 0.0;
  int32_t created_day = 0;
  double planned_end_day = 0.0;    // due date of the order
  double planned_start_day = 0.0;  // end minus planned/estimated lead time
  double earliest_start_day = 0.0; // start minus work-ahead buffer (ConWIP items)
  // Standard workload over the whole route: quantity x mean processing plus
  // one mean setup per step. Fixed at creation; the WIP-cap currency.
  double workload_minutes = 0.0;
  LoopId loop = LoopId::None;
  OrderState state = OrderState::Planned;
  SimTime released_at{-1, 0.0};
  SimTime completed_at{-1, 0.0};
  double system_entry_day = -1.0;  // release instant in days; FISFO key
  int32_t route_position = 0;      // next routing step to process
};

}  // namespace ppcsim
