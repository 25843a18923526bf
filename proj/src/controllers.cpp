#include "ppcsim/controllers.hpp"

#include "ppcsim/simulation.hpp"

namespace ppcsim {

const char* to_string(PpcsKind k) {
  switch (k) {
    case PpcsKind::Mrp: return "mrp";
    case PpcsKind::Rps: return "rps";
    case PpcsKind::Conwip: return "conwip";
  }
  return "?";
}

PpcsKind parse_ppcs(const std::string& name) {
  if (name == "mrp") return PpcsKind::Mrp;
  if (name == "rps" || name == "rop") return PpcsKind::Rps;
  if (name == "conwip") return PpcsKind::Conwip;
  throw ConfigError("unknown ppcs: " + name);
}

std::map<int, double> net_requirements(const std::map<int, double>& gross,
                                       double available) {
  std::map<int, double> nets;
  double avail = available;
  for (const auto& [period, g] : gross) {
    if (g <= 0.0) continue;
    double net = g - avail;
    if (net > 0.0) nets[period] = net;
    avail = std::max(0.0, avail - g);
  }
  return nets;
}

std::vector<std::pair<int, double>> fop_batches(
    const std::map<int, double>& nets, int window_days) {
  std::vector<std::pair<int, double>> out;
  if (nets.empty()) return out;
  if (window_days < 1) window_days = 1;
  const int anchor = nets.begin()->first;
  int current_window = -1;
  for (const auto& [period, qty] : nets) {
    int w = (period - anchor) / window_days;
    if (w != current_window) {
      out.emplace_back(period, 0.0);  // due at the window's first requirement
      current_window = w;
    }
    out.back().second += qty;
  }
  return out;
}

double rps_order_quantity(double ip, double rop, double lot) {
  if (ip >= rop) return 0.0;
  double lots = std::ceil((rop - ip) / lot);
  return lots * lot;
}

void Controller::on_customer_order(Simulation&, const CustomerOrder&) {}
void Controller::on_order_completed(Simulation&, ProductionOrder&) {}

std::unique_ptr<Controller> make_controller(const ControllerParams& params,
                                            const CalibratedScenario& world) {
  switch (params.kind) {
    case PpcsKind::Mrp:
      return std::make_unique<MrpController>(params.mrp, world);
    case PpcsKind::Rps:
      return std::make_unique<RpsController>(params.rps, world);
    case PpcsKind::Conwip:
      return std::make_unique<ConwipController>(params.conwip, world);
  }
  throw ConfigError("bad ppcs kind");
}

}  // namespace ppcsim
