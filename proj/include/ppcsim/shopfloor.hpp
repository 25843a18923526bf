#pragma once

#include <cstdint>
#include <vector>

#include "ppcsim/controllers.hpp"
#include "ppcsim/orders.hpp"
#include "ppcsim/sim_time.hpp"

namespace ppcsim {

struct QueuedOrder {
  int32_t order_id;
  SimTime arrival;       // when the order joined this queue
  uint64_t arrival_seq;  // global enqueue counter, FIFO tie-break
};

// A machine is a single server with one queue.
struct MachineState {
  std::vector<QueuedOrder> queue;
  int32_t in_service = -1;  // order id, -1 when idle
  SimTime busy_until{0, 0.0};
  double measured_busy_minutes = 0.0;  // setup+processing inside the window

  bool idle() const { return in_service < 0; }
};

// Index into `queue` of the order to serve next under the dispatch rule:
// FIFO by queue arrival, FISFO by system entry (release time). Ties break by
// enqueue counter / order id. Returns -1 on an empty queue.
int pick_next(const std::vector<QueuedOrder>& queue,
              const std::vector<ProductionOrder>& orders, DispatchRule rule);

}  // namespace ppcsim
