#pragma once

#include <cstdint>
#include <queue>
#include <vector>

#include "ppcsim/errors.hpp"
#include "ppcsim/sim_time.hpp"

namespace ppcsim {

enum class EventKind : uint8_t {
  PeriodStart,
  OrderArrival,
  PlanningRun,
  ReleaseCheck,
  MachineStart,
  MachineFinish,
  DueDate,
  CostSampling,
  HorizonEnd,
};

inline const char* to_string(EventKind k) {
  switch (k) {
    case EventKind::PeriodStart: return "PeriodStart";
    case EventKind::OrderArrival: return "OrderArrival";
    case EventKind::PlanningRun: return "PlanningRun";
    case EventKind::ReleaseCheck: return "ReleaseCheck";
    case EventKind::MachineStart: return "MachineStart";
    case EventKind::MachineFinish: return "MachineFinish";
    case EventKind::DueDate: return "DueDate";
    case EventKind::CostSampling: return "CostSampling";
    case EventKind::HorizonEnd: return "HorizonEnd";
  }
  return "?";
}

struct Event {
  SimTime time;
  uint64_t sequence = 0;
  EventKind kind = EventKind::PeriodStart;
  int32_t arg0 = -1;  // kind-specific id: sku, machine or order index
  int32_t arg1 = -1;
};

// Time-ordered event calendar. Ties on time break by a strictly increasing
// insertion sequence, so simultaneous events dequeue in scheduling order and
// a run is a total order over events.
class EventCalendar {
 public:
  const SimTime& now() const { return clock_; }
  std::size_t pending() const { return heap_.size(); }
  bool empty() const { return heap_.empty(); }

  uint64_t schedule(EventKind kind, SimTime t, int32_t arg0 = -1, int32_t arg1 = -1) {
    if (t < clock_) throw PastEventError("event scheduled before current clock");
    Event e{t, next_sequence_++, kind, arg0, arg1};
    heap_.push(e);
    return e.sequence;
  }

  // Processes events with time <= end in (time, sequence) order. The clock
  // finishes at `end` even if the calendar drained early.
  template <typename Handler>
  uint64_t run_until(SimTime end, Handler&& handle) {
    uint64_t processed = 0;
    while (!heap_.empty() && !(end < heap_.top().time)) {
      Event e = heap_.top();
      heap_.pop();
      clock_ = e.time;
      ++processed;
      handle(e);
    }
    if (clock_ < end) clock_ = end;
    return processed;
  }

 private:
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      if (a.time != b.time) return b.time < a.time;
      return a.sequence > b.sequence;
    }
  };

  std::priority_queue<Event, std::vector<Event>, Later> heap_;
  SimTime clock_{0, 0.0};
  uint64_t next_sequence_ = 0;
};

}  // namespace ppcsim
