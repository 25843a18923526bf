#include "ppcsim/shopfloor.hpp"

namespace ppcsim {

int pick_next(const std::vector<QueuedOrder>& queue,
              const std::vector<ProductionOrder>& orders, DispatchRule rule) {
  if (queue.empty()) return -1;
  int best = 0;
  for (int i = 1; i < static_cast<int>(queue.size()); ++i) {
    const QueuedOrder& a = queue[i];
    const QueuedOrder& b = queue[best];
    bool earlier;
    if (rule == DispatchRule::Fifo) {
      earlier = a.arrival != b.arrival ? a.arrival < b.arrival
                                       : a.arrival_seq < b.arrival_seq;
    } else {
      double ea = orders[a.order_id].system_entry_day;
      double eb = orders[b.order_id].system_entry_day;
      earlier = ea != eb ? ea < eb : a.order_id < b.order_id;
    }
    if (earlier) best = i;
  }
  return best;
}

}  // namespace ppcsim
