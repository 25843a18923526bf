#include <algorithm>

#include "ppcsim/demand.hpp"

namespace ppcsim {

CustomerOrder& DemandBook::generate(SkuIndex item, int32_t arrival_day,
                                    double quantity,
                                    double customer_lead_time_days) {
  CustomerOrder o;
  o.id = static_cast<int32_t>(orders_.size());
  o.item = item;
  o.arrival_day = arrival_day;
  o.quantity = quantity;
  o.due_day = arrival_day + customer_lead_time_days;
  orders_.push_back(o);

  ItemQueue& q = queues_[item];
  auto pos = std::upper_bound(
      q.by_due.begin() + q.head, q.by_due.end(), o.id,
      [this](int32_t a, int32_t b) {
        const CustomerOrder& oa = orders_[a];
        const CustomerOrder& ob = orders_[b];
        if (oa.due_day != ob.due_day) return oa.due_day < ob.due_day;
        return oa.id < ob.id;
      });
  q.by_due.insert(pos, o.id);
  return orders_.back();
}

void DemandBook::attempt_deliveries(SkuIndex item, double now_day,
                                    double& fgi_units,
                                    std::vector<Delivery>& out) {
  ItemQueue& q = queues_[item];
  while (q.head < q.by_due.size()) {
    CustomerOrder& o = orders_[q.by_due[q.head]];
    if (o.due_day > now_day) break;        // never ship early
    if (o.quantity > fgi_units + 1e-9) break;  // complete shipment only
    fgi_units -= o.quantity;
    if (fgi_units < 0.0) fgi_units = 0.0;
    o.delivered_day = now_day;
    out.push_back({o.id, o.delivered_day, o.tardy_days(), o.quantity});
    ++q.head;
  }
}

double DemandBook::past_due_quantity(SkuIndex item, double now_day) const {
  const ItemQueue& q = queues_[item];
  double total = 0.0;
  for (std::size_t i = q.head; i < q.by_due.size(); ++i) {
    const CustomerOrder& o = orders_[q.by_due[i]];
    if (o.due_day > now_day) break;
    total += o.quantity;
  }
  return total;
}

std::vector<const CustomerOrder*> DemandBook::open_orders(SkuIndex item) const {
  const ItemQueue& q = queues_[item];
  std::vector<const CustomerOrder*> out;
  out.reserve(q.by_due.size() - q.head);
  for (std::size_t i = q.head; i < q.by_due.size(); ++i)
    out.push_back(&orders_[q.by_due[i]]);
  return out;
}

}  // namespace ppcsim
