#include "nibsim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace nibsim {

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void pfail(const std::string& msg) {
  throw ScenarioError(ScenarioError::Kind::Parse, "parse error: " + msg);
}

[[noreturn]] void vfail(const std::string& msg) {
  throw ScenarioError(ScenarioError::Kind::Validation,
                      "validation error: " + msg);
}

const json& member(const json& obj, const std::string& ctx, const char* key) {
  if (!obj.is_object()) pfail(ctx + " must be an object");
  auto it = obj.find(key);
  if (it == obj.end()) pfail("missing field: " + ctx + "." + key);
  return *it;
}

double num(const json& obj, const std::string& ctx, const char* key) {
  const json& v = member(obj, ctx, key);
  if (!v.is_number()) pfail("field is not a number: " + ctx + "." + key);
  return v.get<double>();
}

double num_or(const json& obj, const std::string& ctx, const char* key,
              double fallback) {
  if (!obj.is_object() || !obj.contains(key)) return fallback;
  return num(obj, ctx, key);
}

Position parse_position(const json& v, const std::string& ctx) {
  return Position{num(v, ctx, "x_km"), num(v, ctx, "y_km")};
}

NetworkKind parse_kind(const json& v, const std::string& ctx) {
  const json& k = member(v, ctx, "kind");
  if (!k.is_string()) pfail("field is not a string: " + ctx + ".kind");
  std::string s = k.get<std::string>();
  if (s == "satellite") return NetworkKind::Satellite;
  if (s == "cellular") return NetworkKind::Cellular;
  if (s == "shipborne_wifi") return NetworkKind::ShipborneWifi;
  pfail("unknown network kind '" + s + "' in " + ctx);
}

const char* kind_name(NetworkKind k) {
  switch (k) {
    case NetworkKind::Satellite: return "satellite";
    case NetworkKind::Cellular: return "cellular";
    case NetworkKind::ShipborneWifi: return "shipborne_wifi";
  }
  return "?";
}

ChannelModel parse_channel(const json& node, const std::string& ctx,
                           NetworkKind kind) {
  const json& ch = member(node, ctx, "channel");
  const json& var = member(ch, ctx + ".channel", "variant");
  if (!var.is_string()) pfail("field is not a string: " + ctx + ".channel.variant");
  std::string v = var.get<std::string>();
  ChannelModel model;
  if (v == "free_space") {
    model = ChannelModel::free_space();
  } else if (v == "log_distance") {
    double d0_default = kind == NetworkKind::ShipborneWifi ? 0.001 : 1.0;
    model = ChannelModel::log_distance(
        num(ch, ctx + ".channel", "exponent_n"),
        num_or(ch, ctx + ".channel", "ref_distance_km", d0_default));
  } else {
    pfail("unknown channel variant '" + v + "' in " + ctx);
  }
  return model;
}

FerryRoute parse_ferry(const json& node, const std::string& ctx) {
  const json& fr = member(node, ctx, "ferry_route");
  const json& poly = member(fr, ctx + ".ferry_route", "polyline");
  if (!poly.is_array()) pfail(ctx + ".ferry_route.polyline must be an array");
  FerryRoute route;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    route.polyline.push_back(parse_position(
        poly[i], ctx + ".ferry_route.polyline[" + std::to_string(i) + "]"));
  }
  route.speed_kmh = num(fr, ctx + ".ferry_route", "speed_kmh");
  route.start_t_s = num_or(fr, ctx + ".ferry_route", "start_t_s", 0.0);
  return route;
}

// true when a/b is an integer to within 1e-9 relative.
bool divides_evenly(double a, double b) {
  if (!(b > 0.0)) return false;
  double q = a / b;
  return std::abs(q - std::round(q)) <= 1e-9 * std::max(1.0, std::abs(q));
}

void validate(const Scenario& s) {
  if (!(s.region.max_x_km > s.region.min_x_km) ||
      !(s.region.max_y_km > s.region.min_y_km)) {
    vfail("region must have positive extent");
  }
  if (s.networks.empty()) vfail("networks must be non-empty");
  std::set<int> ids;
  for (const auto& n : s.networks) {
    std::string ctx = "network id " + std::to_string(n.id);
    if (!ids.insert(n.id).second) vfail("duplicate network id " + std::to_string(n.id));
    if (!(n.bandwidth_hz > 0.0)) vfail(ctx + ": bandwidth_hz must be positive");
    if (!(n.carrier_ghz > 0.0)) vfail(ctx + ": carrier_ghz must be positive");
    switch (n.kind) {
      case NetworkKind::Satellite:
        if (n.position || n.ferry_route)
          vfail(ctx + ": satellite node must not carry a position or ferry_route");
        break;
      case NetworkKind::Cellular:
        if (!n.position || n.ferry_route)
          vfail(ctx + ": cellular node requires a fixed position only");
        break;
      case NetworkKind::ShipborneWifi:
        if (!n.ferry_route || n.position)
          vfail(ctx + ": shipborne_wifi node requires a ferry_route only");
        break;
    }
    if (n.ferry_route) {
      if (n.ferry_route->polyline.size() < 2)
        vfail(ctx + ": ferry polyline needs at least 2 points");
      if (!(n.ferry_route->speed_kmh > 0.0))
        vfail(ctx + ": ferry speed_kmh must be positive");
    }
    if (n.channel.variant == ChannelVariant::LogDistance) {
      if (!(n.channel.exponent_n >= 1.0)) vfail(ctx + ": exponent_n must be >= 1");
      if (!(n.channel.ref_distance_km > 0.0))
        vfail(ctx + ": ref_distance_km must be positive");
    }
    if (n.max_range_km && !(*n.max_range_km > 0.0))
      vfail(ctx + ": max_range_km must be positive");
    if (!(n.slant_range_km > 0.0)) vfail("geo_slant_range_km must be positive");
  }
  if (!s.region.contains(s.start)) vfail("start outside region");
  if (!s.region.contains(s.end)) vfail("end outside region");
  double dwell_total = 0.0;
  for (const auto& w : s.waypoints) {
    if (!s.region.contains(w.position)) vfail("waypoint outside region");
    if (w.dwell_s < 0.0) vfail("dwell_s must be non-negative");
    dwell_total += w.dwell_s;
  }
  if (!(s.total_time_s > dwell_total))
    vfail("total_time_s must exceed total dwell time");
  if (!(s.v_max_kmh > 0.0)) vfail("v_max_kmh must be positive");
  if (!(s.grid.cell_km > 0.0)) vfail("grid cell_km must be positive");
  if (!(s.grid.dt_s > 0.0)) vfail("grid dt_s must be positive");
  if (!divides_evenly(s.total_time_s, s.grid.dt_s))
    vfail("dt_s must divide total_time_s evenly");
  for (const auto& w : s.waypoints) {
    if (!divides_evenly(w.dwell_s, s.grid.dt_s))
      vfail("dt_s must divide dwell_s evenly");
  }
}

}  // namespace

Scenario load_scenario(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ScenarioError(ScenarioError::Kind::Parse,
                        std::string("parse error: ") + e.what());
  }
  if (!doc.is_object()) pfail("top level must be an object");

  Scenario s;
  const json& region = member(doc, "scenario", "region");
  s.region = Region{num(region, "region", "min_x_km"),
                    num(region, "region", "min_y_km"),
                    num(region, "region", "max_x_km"),
                    num(region, "region", "max_y_km")};

  const json& nets = member(doc, "scenario", "networks");
  if (!nets.is_array()) pfail("networks must be an array");
  for (std::size_t i = 0; i < nets.size(); ++i) {
    const json& jn = nets[i];
    std::string ctx = "networks[" + std::to_string(i) + "]";
    NetworkNode n;
    const json& id = member(jn, ctx, "id");
    if (!id.is_number_integer()) pfail("field is not an integer: " + ctx + ".id");
    n.id = id.get<int>();
    n.kind = parse_kind(jn, ctx);
    n.tx_power_dbm = num(jn, ctx, "tx_power_dbm");
    n.tx_gain_dbi = num(jn, ctx, "tx_gain_dbi");
    n.rx_gain_dbi = num(jn, ctx, "rx_gain_dbi");
    n.carrier_ghz = num(jn, ctx, "carrier_ghz");
    n.bandwidth_hz = num(jn, ctx, "bandwidth_hz");
    n.channel = parse_channel(jn, ctx, n.kind);
    if (jn.contains("position"))
      n.position = parse_position(jn["position"], ctx + ".position");
    if (jn.contains("ferry_route")) n.ferry_route = parse_ferry(jn, ctx);
    if (jn.contains("max_range_km")) n.max_range_km = num(jn, ctx, "max_range_km");
    s.networks.push_back(std::move(n));
  }

  const json& mission = member(doc, "scenario", "mission");
  s.start = parse_position(member(mission, "mission", "start"), "mission.start");
  s.end = parse_position(member(mission, "mission", "end"), "mission.end");
  if (mission.contains("waypoints")) {
    const json& wps = mission["waypoints"];
    if (!wps.is_array()) pfail("mission.waypoints must be an array");
    for (std::size_t i = 0; i < wps.size(); ++i) {
      std::string ctx = "mission.waypoints[" + std::to_string(i) + "]";
      Waypoint w;
      w.position = parse_position(member(wps[i], ctx, "position"), ctx + ".position");
      w.dwell_s = num(wps[i], ctx, "dwell_s");
      s.waypoints.push_back(w);
    }
  }
  s.total_time_s = num(mission, "mission", "total_time_s");
  s.v_max_kmh = num(mission, "mission", "v_max_kmh");

  s.noise_figure_db = num_or(doc, "scenario", "noise_figure_db", 0.0);
  if (doc.contains("grid")) {
    if (!doc["grid"].is_object()) pfail("grid must be an object");
    s.grid.cell_km = num_or(doc["grid"], "grid", "cell_km", 1.0);
    s.grid.dt_s = num_or(doc["grid"], "grid", "dt_s", 60.0);
  }
  s.geo_slant_range_km = num_or(doc, "scenario", "geo_slant_range_km",
                                kDefaultGeoSlantRangeKm);

  // Canonical order, then the satellite slant range applies to every
  // satellite node.
  std::sort(s.networks.begin(), s.networks.end(),
            [](const NetworkNode& a, const NetworkNode& b) { return a.id < b.id; });
  for (auto& n : s.networks) {
    n.slant_range_km = s.geo_slant_range_km;
  }

  validate(s);
  return s;
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open scenario file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw std::ios_base::failure("cannot read scenario file: " + path);
  return load_scenario(buf.str());
}

namespace {

json position_json(const Position& p) {
  return json{{"x_km", p.x_km}, {"y_km", p.y_km}};
}

}  // namespace

std::string serialize_scenario(const Scenario& s) {
  json doc;
  doc["region"] = {{"min_x_km", s.region.min_x_km},
                   {"min_y_km", s.region.min_y_km},
                   {"max_x_km", s.region.max_x_km},
                   {"max_y_km", s.region.max_y_km}};
  doc["networks"] = json::array();
  for (const auto& n : s.networks) {
    json jn;
    jn["id"] = n.id;
    jn["kind"] = kind_name(n.kind);
    jn["tx_power_dbm"] = n.tx_power_dbm;
    jn["tx_gain_dbi"] = n.tx_gain_dbi;
    jn["rx_gain_dbi"] = n.rx_gain_dbi;
    jn["carrier_ghz"] = n.carrier_ghz;
    jn["bandwidth_hz"] = n.bandwidth_hz;
    if (n.channel.variant == ChannelVariant::FreeSpace) {
      jn["channel"] = {{"variant", "free_space"}};
    } else {
      jn["channel"] = {{"variant", "log_distance"},
                       {"exponent_n", n.channel.exponent_n},
                       {"ref_distance_km", n.channel.ref_distance_km}};
    }
    if (n.position) jn["position"] = position_json(*n.position);
    if (n.ferry_route) {
      json poly = json::array();
      for (const auto& p : n.ferry_route->polyline) poly.push_back(position_json(p));
      jn["ferry_route"] = {{"polyline", poly},
                           {"speed_kmh", n.ferry_route->speed_kmh},
                           {"start_t_s", n.ferry_route->start_t_s}};
    }
    if (n.max_range_km) jn["max_range_km"] = *n.max_range_km;
    doc["networks"].push_back(std::move(jn));
  }
  json wps = json::array();
  for (const auto& w : s.waypoints) {
    wps.push_back({{"position", position_json(w.position)}, {"dwell_s", w.dwell_s}});
  }
  doc["mission"] = {{"start", position_json(s.start)},
                    {"end", position_json(s.end)},
                    {"waypoints", wps},
                    {"total_time_s", s.total_time_s},
                    {"v_max_kmh", s.v_max_kmh}};
  doc["noise_figure_db"] = s.noise_figure_db;
  doc["grid"] = {{"cell_km", s.grid.cell_km}, {"dt_s", s.grid.dt_s}};
  doc["geo_slant_range_km"] = s.geo_slant_range_km;
  return doc.dump(2) + "\n";
}

Scenario reference_scenario() {
  Scenario s;
  s.region = Region{0.0, 0.0, 60.0, 60.0};

  NetworkNode sat;
  sat.id = 0;
  sat.kind = NetworkKind::Satellite;
  sat.tx_power_dbm = 49.0;
  sat.tx_gain_dbi = 52.0;
  sat.rx_gain_dbi = 30.0;
  sat.carrier_ghz = 20.0;
  sat.bandwidth_hz = 5e6;
  sat.channel = ChannelModel::free_space();

  NetworkNode coast;
  coast.id = 1;
  coast.kind = NetworkKind::Cellular;
  coast.position = Position{10.0, 0.0};
  coast.tx_power_dbm = 43.0;
  coast.tx_gain_dbi = 15.0;
  coast.rx_gain_dbi = 0.0;
  coast.carrier_ghz = 2.0;
  coast.bandwidth_hz = 5e6;
  coast.channel = ChannelModel::log_distance(3.4, 1.0);

  NetworkNode island = coast;
  island.id = 2;
  island.position = Position{30.0, 30.0};

  NetworkNode wifi;
  wifi.id = 3;
  wifi.kind = NetworkKind::ShipborneWifi;
  wifi.ferry_route =
      FerryRoute{{Position{2.5, 16.3}, Position{58.5, 16.3}}, 40.0, 1200.0};
  wifi.tx_power_dbm = 20.0;
  wifi.tx_gain_dbi = 10.0;
  wifi.rx_gain_dbi = 10.0;
  wifi.carrier_ghz = 2.4;
  wifi.bandwidth_hz = 20e6;
  wifi.channel = ChannelModel::log_distance(2.0, 0.001);
  wifi.max_range_km = 5.0;

  s.networks = {sat, coast, island, wifi};
  s.start = Position{10.5, 10.5};
  s.end = Position{30.5, 10.5};
  s.waypoints = {Waypoint{Position{15.5, 10.5}, 1200.0},
                 Waypoint{Position{25.5, 10.5}, 1200.0}};
  s.total_time_s = 7200.0;
  s.v_max_kmh = 30.0;
  s.noise_figure_db = 0.0;
  s.grid = PlanGrid{1.0, 240.0};
  s.geo_slant_range_km = kDefaultGeoSlantRangeKm;
  return s;
}

}  // namespace nibsim
