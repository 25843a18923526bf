#include <fstream>
#include <sstream>

#include "json.hpp"
#include "ppcsim/json_io.hpp"

namespace ppcsim {

using nlohmann::json;

namespace {

json structure_to_json(const Structure& s) {
  json j;
  j["name"] = s.name;
  j["machines"] = s.machines;
  j["planned_bom_levels"] = s.planned_bom_levels;
  json skus = json::array();
  for (const Sku& sku : s.skus) {
    json js;
    js["id"] = sku.id;
    js["kind"] = sku.kind == SkuKind::Item ? "item" : "component";
    js["level"] = sku.bom_level;
    if (sku.child >= 0) js["child"] = s.skus[sku.child].id;
    if (sku.kind == SkuKind::Item) js["share"] = sku.demand_share;
    if (!sku.routing.empty()) {
      json route = json::array();
      for (const RoutingStep& st : sku.routing)
        route.push_back({{"machine", s.machines[st.machine]},
                         {"weight", st.weight}});
      js["routing"] = std::move(route);
    }
    skus.push_back(std::move(js));
  }
  j["skus"] = std::move(skus);
  return j;
}

Structure structure_from(const json& j) {
  try {
    Structure s;
    s.name = j.at("name").get<std::string>();
    s.machines = j.at("machines").get<std::vector<std::string>>();
    s.planned_bom_levels = j.at("planned_bom_levels").get<int>();
    std::vector<SkuId> children;
    for (const json& js : j.at("skus")) {
      Sku sku;
      sku.id = js.at("id").get<SkuId>();
      std::string kind = js.at("kind").get<std::string>();
      if (kind == "item")
        sku.kind = SkuKind::Item;
      else if (kind == "component")
        sku.kind = SkuKind::Component;
      else
        throw ConfigError("bad sku kind: " + kind);
      sku.bom_level = js.at("level").get<int>();
      if (sku.kind == SkuKind::Item)
        sku.demand_share = js.at("share").get<double>();
      if (js.contains("routing")) {
        for (const json& jr : js.at("routing"))
          sku.routing.push_back(
              {s.machine_index(jr.at("machine").get<std::string>()),
               jr.at("weight").get<double>()});
      }
      children.push_back(js.contains("child") ? js.at("child").get<SkuId>() : 0);
      s.skus.push_back(std::move(sku));
    }
    for (std::size_t i = 0; i < s.skus.size(); ++i)
      s.skus[i].child = children[i] != 0 ? s.index_of(children[i]) : -1;
    s.validate();
    return s;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("structure json: ") + e.what());
  }
}

json scenario_to_json(const Scenario& s) {
  json j;
  j["structure"] = structure_to_json(s.structure);
  j["planned_shop_load"] = s.planned_shop_load;
  j["minutes_per_day"] = s.minutes_per_day;
  j["mean_total_item_demand_per_day"] = s.mean_total_item_demand_per_day;
  j["setup_share"] = s.setup_share;
  j["cv_processing"] = s.cv_processing;
  j["cv_setup"] = s.cv_setup;
  j["cv_demand_qty"] = s.cv_demand_qty;
  j["cv_clt_variable"] = s.cv_clt_variable;
  j["clt_fixed_days"] = s.clt_fixed_days;
  j["clt_variable_mean_days"] = s.clt_variable_mean_days;
  j["cost_rates"] = {{"wip_component", s.cost_rates.wip_component},
                     {"component_stock", s.cost_rates.component_stock},
                     {"wip_item", s.cost_rates.wip_item},
                     {"fgi", s.cost_rates.fgi},
                     {"tardiness", s.cost_rates.tardiness}};
  j["horizon_days"] = s.horizon_days;
  j["warmup_days"] = s.warmup_days;
  j["seed"] = s.seed;
  return j;
}

Scenario scenario_from(const json& j, const std::filesystem::path& base_dir) {
  try {
    Scenario s;
    const json& js = j.at("structure");
    if (js.is_string()) {
      std::string name = js.get<std::string>();
      bool builtin = false;
      for (const char* b : {"flow", "flow_shop", "hybrid", "hybrid_shop",
                            "job", "job_shop"}) {
        if (name == b) {
          s.structure = build_structure(parse_structure_kind(name));
          builtin = true;
          break;
        }
      }
      if (!builtin) s.structure = load_structure(base_dir / name);
    } else {
      s.structure = structure_from(js);
    }
    auto get = [&j](const char* key, auto fallback) {
      using T = decltype(fallback);
      return j.contains(key) ? j.at(key).get<T>() : fallback;
    };
    s.planned_shop_load = get("planned_shop_load", s.planned_shop_load);
    s.minutes_per_day = get("minutes_per_day", s.minutes_per_day);
    s.mean_total_item_demand_per_day =
        get("mean_total_item_demand_per_day", s.mean_total_item_demand_per_day);
    s.setup_share = get("setup_share", s.setup_share);
    s.cv_processing = get("cv_processing", s.cv_processing);
    s.cv_setup = get("cv_setup", s.cv_setup);
    s.cv_demand_qty = get("cv_demand_qty", s.cv_demand_qty);
    s.cv_clt_variable = get("cv_clt_variable", s.cv_clt_variable);
    s.clt_fixed_days = get("clt_fixed_days", s.clt_fixed_days);
    s.clt_variable_mean_days =
        get("clt_variable_mean_days", s.clt_variable_mean_days);
    if (j.contains("cost_rates")) {
      const json& cr = j.at("cost_rates");
      auto rate = [&cr](const char* key, double fallback) {
        return cr.contains(key) ? cr.at(key).get<double>() : fallback;
      };
      s.cost_rates.wip_component = rate("wip_component", s.cost_rates.wip_component);
      s.cost_rates.component_stock =
          rate("component_stock", s.cost_rates.component_stock);
      s.cost_rates.wip_item = rate("wip_item", s.cost_rates.wip_item);
      s.cost_rates.fgi = rate("fgi", s.cost_rates.fgi);
      s.cost_rates.tardiness = rate("tardiness", s.cost_rates.tardiness);
    }
    s.horizon_days = get("horizon_days", s.horizon_days);
    s.warmup_days = get("warmup_days", s.warmup_days);
    s.seed = get("seed", s.seed);
    return s;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("scenario json: ") + e.what());
  }
}

json parse_or_throw(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("json parse: ") + e.what());
  }
}

std::string read_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot open " + file.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& file, const std::string& text) {
  std::ofstream out(file);
  if (!out) throw ConfigError("cannot write " + file.string());
  out << text;
}

}  // namespace

std::string to_json_string(const Structure& s) {
  return structure_to_json(s).dump(2) + "\n";
}

Structure structure_from_json(const std::string& text) {
  return structure_from(parse_or_throw(text));
}

Structure load_structure(const std::filesystem::path& file) {
  return structure_from_json(read_file(file));
}

void save_structure(const Structure& s, const std::filesystem::path& file) {
  write_file(file, to_json_string(s));
}

std::string to_json_string(const Scenario& s) {
  return scenario_to_json(s).dump(2) + "\n";
}

Scenario scenario_from_json(const std::string& text,
                            const std::filesystem::path& base_dir) {
  return scenario_from(parse_or_throw(text), base_dir);
}

Scenario load_scenario(const std::filesystem::path& file) {
  return scenario_from(parse_or_throw(read_file(file)),
                       file.has_parent_path() ? file.parent_path()
                                              : std::filesystem::path("."));
}

void save_scenario(const Scenario& s, const std::filesystem::path& file) {
  write_file(file, to_json_string(s));
}

}  // namespace ppcsim
