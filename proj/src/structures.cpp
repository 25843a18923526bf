#include <algorithm>
#include <cmath>
#include <set>

#include "ppcsim/model.hpp"

namespace ppcsim {

const char* to_string(StructureKind k) {
  switch (k) {
    case StructureKind::FlowShop: return "flow_shop";
    case StructureKind::HybridShop: return "hybrid_shop";
    case StructureKind::JobShop: return "job_shop";
  }
  return "?";
}

StructureKind parse_structure_kind(const std::string& name) {
  if (name == "flow_shop" || name == "flow") return StructureKind::FlowShop;
  if (name == "hybrid_shop" || name == "hybrid") return StructureKind::HybridShop;
  if (name == "job_shop" || name == "job") return StructureKind::JobShop;
  throw ConfigError("unknown structure name: " + name);
}

SkuIndex Structure::index_of(SkuId id) const {
  for (SkuIndex i = 0; i < sku_count(); ++i) {
    if (skus[i].id == id) return i;
  }
  throw UnknownSkuError("unknown sku id: " + std::to_string(id));
}

MachineIndex Structure::machine_index(const std::string& mname) const {
  for (MachineIndex m = 0; m < machine_count(); ++m) {
    if (machines[m] == mname) return m;
  }
  throw ConfigError("unknown machine: " + mname);
}

std::vector<SkuIndex> Structure::items() const {
  std::vector<SkuIndex> out;
  for (SkuIndex i = 0; i < sku_count(); ++i) {
    if (skus[i].kind == SkuKind::Item) out.push_back(i);
  }
  return out;
}

void Structure::validate() const {
  if (machines.empty()) throw ConfigError(name + ": no machines");
  if (planned_bom_levels < 1) throw ConfigError(name + ": nothing planned");

  double share_sum = 0.0;
  for (SkuIndex i = 0; i < sku_count(); ++i) {
    const Sku& s = skus[i];
    if (s.kind == SkuKind::Item) {
      if (s.bom_level != 0) throw ConfigError(name + ": item not at level 0");
      if (!(s.demand_share > 0.0 && s.demand_share < 1.0))
        throw ConfigError(name + ": item demand share out of (0,1)");
      share_sum += s.demand_share;
    }
    if (is_raw(i)) {
      if (!s.routing.empty())
        throw ConfigError(name + ": raw material must not have a routing");
      if (s.child >= 0)
        throw ConfigError(name + ": raw material must not have a child");
      continue;
    }
    if (s.routing.empty())
      throw ConfigError(name + ": produced sku " + std::to_string(s.id) +
                        " has no routing");
    std::set<MachineIndex> seen;
    for (const RoutingStep& st : s.routing) {
      if (st.machine < 0 || st.machine >= machine_count())
        throw ConfigError(name + ": routing references unknown machine");
      if (!(st.weight > 0.0))
        throw ConfigError(name + ": routing weight must be > 0");
      if (!seen.insert(st.machine).second)
        throw ConfigError(name + ": routing repeats machine");
    }
    // Child chain must descend exactly one level and end at raw material.
    if (s.child < 0)
      throw ConfigError(name + ": produced sku " + std::to_string(s.id) +
                        " has no child");
    const Sku& c = skus[s.child];
    if (c.bom_level != s.bom_level + 1)
      throw ConfigError(name + ": child must sit one BoM level deeper");
  }
  if (std::abs(share_sum - 1.0) > 1e-9)
    throw ConfigError(name + ": item demand shares must sum to 1");

  // Every machine must serve at least one SKU, otherwise calibration is
  // infeasible.
  std::vector<int> used(machines.size(), 0);
  for (const Sku& s : skus)
    for (const RoutingStep& st : s.routing) used[st.machine] = 1;
  for (std::size_t m = 0; m < machines.size(); ++m)
    if (!used[m]) throw ConfigError(name + ": machine " + machines[m] +
                                    " has no routed sku");
}

namespace {

constexpr double kItemShares[8] = {0.100, 0.075, 0.200, 0.125,
                                   0.075, 0.150, 0.150, 0.125};

struct SkuSpec {
  SkuId id;
  SkuKind kind;
  int level;
  SkuId child;  // 0 = none
  double share;
  std::vector<std::pair<const char*, double>> route;
};

Structure assemble(const char* name, std::vector<std::string> machines,
                   int planned_levels, const std::vector<SkuSpec>& specs) {
  Structure s;
  s.name = name;
  s.machines = std::move(machines);
  s.planned_bom_levels = planned_levels;
  for (const SkuSpec& sp : specs) {
    Sku sku;
    sku.id = sp.id;
    sku.kind = sp.kind;
    sku.bom_level = sp.level;
    sku.demand_share = sp.share;
    sku.child = -1;  // resolved below
    for (auto& [mach, w] : sp.route)
      sku.routing.push_back({s.machine_index(mach), w});
    s.skus.push_back(std::move(sku));
  }
  std::sort(s.skus.begin(), s.skus.end(), [](const Sku& a, const Sku& b) {
    return std::tie(a.bom_level, a.id) < std::tie(b.bom_level, b.id);
  });
  // Resolve child links once the final sku order is fixed.
  for (Sku& sku : s.skus) {
    for (const SkuSpec& sp : specs) {
      if (sp.id == sku.id) {
        sku.child = sp.child != 0 ? s.index_of(sp.child) : -1;
        break;
      }
    }
  }
  s.validate();
  return s;
}

// Flow shop: 4 machines, 4 BoM levels. One machine per production level,
// with level 1 split across two machines (component 201 on M2, 202 on M3).
// Items 101-104 consume 201, items 105-108 consume 202; both chains join at
// component 301 (M1) over raw material 401.
Structure make_flow_shop() {
  std::vector<SkuSpec> specs = {
      {101, SkuKind::Item, 0, 201, kItemShares[0], {{"M4", 1.00}}},
      {102, SkuKind::Item, 0, 201, kItemShares[1], {{"M4", 1.30}}},
      {103, SkuKind::Item, 0, 201, kItemShares[2], {{"M4", 0.80}}},
      {104, SkuKind::Item, 0, 201, kItemShares[3], {{"M4", 1.10}}},
      {105, SkuKind::Item, 0, 202, kItemShares[4], {{"M4", 1.50}}},
      {106, SkuKind::Item, 0, 202, kItemShares[5], {{"M4", 0.90}}},
      {107, SkuKind::Item, 0, 202, kItemShares[6], {{"M4", 1.20}}},
      {108, SkuKind::Item, 0, 202, kItemShares[7], {{"M4", 1.40}}},
      {201, SkuKind::Component, 1, 301, 0.0, {{"M2", 1.00}}},
      {202, SkuKind::Component, 1, 301, 0.0, {{"M3", 1.00}}},
      {301, SkuKind::Component, 2, 401, 0.0, {{"M1", 1.00}}},
      {401, SkuKind::Component, 3, 0, 0.0, {}},
  };
  return assemble("flow_shop", {"M1", "M2", "M3", "M4"}, 3, specs);
}

// Hybrid shop: 6 machines, same BoM as the flow shop. Levels 2..1 keep the
// flow line (M1..M3); level 0 turns into a job shop over M4..M6 with
// item-specific sequences and omitted machines.
Structure make_hybrid_shop() {
  std::vector<SkuSpec> specs = {
      {101, SkuKind::Item, 0, 201, kItemShares[0], {{"M4", 1.00}, {"M5", 1.20}}},
      {102, SkuKind::Item, 0, 201, kItemShares[1], {{"M5", 0.90}, {"M4", 1.40}}},
      {103, SkuKind::Item, 0, 201, kItemShares[2], {{"M4", 1.10}, {"M6", 0.80}, {"M5", 1.00}}},
      {104, SkuKind::Item, 0, 201, kItemShares[3], {{"M6", 1.30}, {"M4", 0.90}}},
      {105, SkuKind::Item, 0, 202, kItemShares[4], {{"M5", 1.10}, {"M6", 1.40}}},
      {106, SkuKind::Item, 0, 202, kItemShares[5], {{"M6", 1.00}, {"M5", 0.80}, {"M4", 1.20}}},
      {107, SkuKind::Item, 0, 202, kItemShares[6], {{"M4", 1.30}}},
      {108, SkuKind::Item, 0, 202, kItemShares[7], {{"M6", 0.90}, {"M5", 1.30}}},
      {201, SkuKind::Component, 1, 301, 0.0, {{"M2", 1.00}}},
      {202, SkuKind::Component, 1, 301, 0.0, {{"M3", 1.00}}},
      {301, SkuKind::Component, 2, 401, 0.0, {{"M1", 1.00}}},
      {401, SkuKind::Component, 3, 0, 0.0, {}},
  };
  return assemble("hybrid_shop", {"M1", "M2", "M3", "M4", "M5", "M6"}, 3, specs);
}

// Job shop: 4 machines, 2 BoM levels. Level 1 is raw material; the 8 items
// have individual sequences of 2 to 4 machines.
Structure make_job_shop() {
  std::vector<SkuSpec> specs = {
      {101, SkuKind::Item, 0, 201, kItemShares[0],
       {{"M1", 1.00}, {"M2", 1.20}, {"M3", 0.90}, {"M4", 1.10}}},
      {102, SkuKind::Item, 0, 201, kItemShares[1], {{"M2", 1.30}, {"M4", 0.80}}},
      {103, SkuKind::Item, 0, 201, kItemShares[2], {{"M3", 1.00}, {"M1", 1.40}, {"M4", 1.00}}},
      {104, SkuKind::Item, 0, 201, kItemShares[3],
       {{"M4", 0.90}, {"M3", 1.20}, {"M2", 1.00}, {"M1", 1.30}}},
      {105, SkuKind::Item, 0, 201, kItemShares[4], {{"M1", 1.10}, {"M3", 1.30}}},
      {106, SkuKind::Item, 0, 201, kItemShares[5], {{"M2", 0.80}, {"M1", 1.00}, {"M4", 1.20}}},
      {107, SkuKind::Item, 0, 201, kItemShares[6], {{"M4", 1.40}, {"M2", 1.10}}},
      {108, SkuKind::Item, 0, 201, kItemShares[7], {{"M3", 1.10}, {"M4", 1.30}, {"M1", 0.90}}},
      {201, SkuKind::Component, 1, 0, 0.0, {}},
  };
  return assemble("job_shop", {"M1", "M2", "M3", "M4"}, 1, specs);
}

}  // namespace

Structure build_structure(StructureKind kind) {
  switch (kind) {
    case StructureKind::FlowShop: return make_flow_shop();
    case StructureKind::HybridShop: return make_hybrid_shop();
    case StructureKind::JobShop: return make_job_shop();
  }
  throw ConfigError("bad structure kind");
}

double component_demand_share(const Structure& s, SkuId component) {
  SkuIndex target = s.index_of(component);
  double total = 0.0;
  for (SkuIndex i : s.items()) {
    for (SkuIndex c = s.skus[i].child; c >= 0; c = s.skus[c].child) {
      if (c == target) {
        total += s.skus[i].demand_share;
        break;
      }
    }
  }
  return total;
}

}  // namespace ppcsim
