#include "nibsim/link_budget.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "nibsim/propagation.hpp"

namespace nibsim {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double received_power(const NetworkNode& node, double path_loss_db) {
  return node.tx_power_dbm + node.tx_gain_dbi + node.rx_gain_dbi - path_loss_db;
}

double noise_power(double bandwidth_hz, double noise_figure_db) {
  if (!(bandwidth_hz > 0.0)) {
    throw std::domain_error("noise_power needs bandwidth_hz > 0");
  }
  return -174.0 + 10.0 * std::log10(bandwidth_hz) + noise_figure_db;
}

double shannon_rate(double bandwidth_hz, double snr_db) {
  if (!(bandwidth_hz > 0.0)) {
    throw std::domain_error("shannon_rate needs bandwidth_hz > 0");
  }
  return bandwidth_hz * std::log2(1.0 + std::pow(10.0, snr_db / 10.0));
}

LinkSample sample_link(const NetworkNode& node, const Position& fleet_pos,
                       double t_s, double noise_figure_db) {
  LinkSample out;
  out.network_id = node.id;
  out.noise_dbm = noise_power(node.bandwidth_hz, noise_figure_db);

  double d_km;
  if (node.kind == NetworkKind::Satellite) {
    // GEO link: range is the (fixed) slant range, independent of the
    // fleet's position inside the region.
    d_km = node.slant_range_km;
  } else if (node.ferry_route.has_value()) {
    d_km = distance(ferry_position_at(*node.ferry_route, t_s), fleet_pos);
  } else if (node.position.has_value()) {
    d_km = distance(*node.position, fleet_pos);
  } else {
    throw std::domain_error("node has neither a position nor a ferry route");
  }
  out.distance_km = d_km;

  if (d_km <= 0.0) throw std::domain_error("link distance is zero");
  if (node.max_range_km.has_value() && d_km > *node.max_range_km) {
    // Out of range: dead link, but keep snr == prx - noise true.
    out.path_loss_db = kInf;
    out.prx_dbm = -kInf;
    out.snr_db = out.prx_dbm - out.noise_dbm;
    out.rate_bps = 0.0;
    return out;
  }

  out.path_loss_db = path_loss(node.channel, d_km, node.carrier_ghz);
  out.prx_dbm = received_power(node, out.path_loss_db);
  out.snr_db = out.prx_dbm - out.noise_dbm;
  out.rate_bps = shannon_rate(node.bandwidth_hz, out.snr_db);
  return out;
}

std::vector<NetworkNode> filter_networks(std::span<const NetworkNode> nodes,
                                         const NetworkFilter& filter) {
  std::vector<NetworkNode> out;
  out.reserve(nodes.size());
  for (const auto& n : nodes) {
    if (!filter.has_value() || filter->contains(n.kind)) out.push_back(n);
  }
  return out;
}

LinkChoice best_link(std::span<const NetworkNode> nodes,
                     const Position& fleet_pos, double t_s,
                     double noise_figure_db) {
  if (nodes.empty()) throw std::invalid_argument("best_link needs >= 1 network");
  LinkChoice out;
  out.all.reserve(nodes.size());
  for (const auto& n : nodes) {
    out.all.push_back(sample_link(n, fleet_pos, t_s, noise_figure_db));
  }
  // Highest rate wins; ties go to the lowest network id.
  const LinkSample* best = &out.all.front();
  for (const auto& s : out.all) {
    if (s.rate_bps > best->rate_bps ||
        (s.rate_bps == best->rate_bps && s.network_id < best->network_id)) {
      best = &s;
    }
  }
  out.chosen = *best;
  return out;
}

}  // namespace nibsim
