#pragma once

#include <cstdint>
#include <vector>

#include "ppcsim/model.hpp"

namespace ppcsim {

struct CustomerOrder {
  int32_t id = -1;
  SkuIndex item = -1;
  int32_t arrival_day = 0;
  double quantity = 0.0;
  double due_day = 0.0;        // arrival + fixed CLT + lognormal variable part
  double delivered_day = -1.0; // < 0 while undelivered

  bool delivered() const { return delivered_day >= 0.0; }
  double tardy_days() const {
    return delivered() ? std::max(0.0, delivered_day - due_day) : 0.0;
  }
};

struct Delivery {
  int32_t order_id;
  double delivered_day;
  double tardy_days;
  double quantity;
};

// All customer orders of a run, with one earliest-due-date queue per item.
// Stock is allocated strictly in EDD order: an order ships complete, never
// early, and an unfillable due order blocks later ones of the same item.
class DemandBook {
 public:
  explicit DemandBook(int item_count) : queues_(item_count) {}

  CustomerOrder& generate(SkuIndex item, int32_t arrival_day, double quantity,
                          double customer_lead_time_days);

  // Ships every due order the FGI level covers, in EDD order. `fgi_units` is
  // decremented in place; deliveries are appended to `out`.
  void attempt_deliveries(SkuIndex item, double now_day, double& fgi_units,
                          std::vector<Delivery>& out);

  // Quantity of past-due undelivered orders (the RPS backorder notion).
  double past_due_quantity(SkuIndex item, double now_day) const;

  // Undelivered orders of one item in EDD order.
  std::vector<const CustomerOrder*> open_orders(SkuIndex item) const;

  const CustomerOrder& order(int32_t id) const { return orders_[id]; }
  const std::vector<CustomerOrder>& orders() const { return orders_; }
  std::size_t size() const { return orders_.size(); }

 private:
  struct ItemQueue {
    std::vector<int32_t> by_due;  // order ids sorted by (due_day, id)
    std::size_t head = 0;         // ids before head are delivered
  };

  std::vector<CustomerOrder> orders_;
  std::vector<ItemQueue> queues_;
};

}  // namespace ppcsim
