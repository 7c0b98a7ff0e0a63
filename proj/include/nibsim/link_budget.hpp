// Received power, noise, SNR, Shannon rate and best-network selection.
#pragma once

#include <optional>
#include <set>
#include <span>
#include <vector>

#include "nibsim/geometry.hpp"
#include "nibsim/propagation.hpp"

namespace nibsim {

enum class NetworkKind { Satellite, Cellular, ShipborneWifi };

inline constexpr double kDefaultGeoSlantRangeKm = 35786.0;

/// One radio network with its full link-budget parameter set.
/// Location form depends on kind: satellite has none (distance is the
/// fixed slant range), cellular has a fixed position, shipborne WiFi
/// rides a ferry route.
struct NetworkNode {
  int id = 0;
  NetworkKind kind = NetworkKind::Satellite;
  std::optional<Position> position;       // cellular
  std::optional<FerryRoute> ferry_route;  // shipborne WiFi
  double tx_power_dbm = 0.0;
  double tx_gain_dbi = 0.0;
  double rx_gain_dbi = 0.0;
  double carrier_ghz = 0.0;
  double bandwidth_hz = 0.0;
  ChannelModel channel;
  std::optional<double> max_range_km;
  double slant_range_km = kDefaultGeoSlantRangeKm;  // satellite only

  bool operator==(const NetworkNode&) const = default;
};

/// Link-budget outcome for one network at one fleet position and time.
/// Out-of-range links carry rate 0 with prx/snr at -infinity so that
/// snr_db == prx_dbm - noise_dbm holds for every sample.
struct LinkSample {
  int network_id = 0;
  double distance_km = 0.0;
  double path_loss_db = 0.0;
  double prx_dbm = 0.0;
  double noise_dbm = 0.0;
  double snr_db = 0.0;
  double rate_bps = 0.0;

  bool operator==(const LinkSample&) const = default;
};

/// tx_power + tx_gain + rx_gain - path_loss, in dBm.
double received_power(const NetworkNode& node, double path_loss_db);

/// Thermal noise floor: -174 + 10 log10(B) + NF, in dBm.
/// Throws std::domain_error for non-positive bandwidth.
double noise_power(double bandwidth_hz, double noise_figure_db);

/// B * log2(1 + 10^(snr_db/10)), in bits per second.
double shannon_rate(double bandwidth_hz, double snr_db);

/// Full link budget for one network: distance (slant range, fixed
/// position, or ferry position at t), path loss, received power, noise,
/// SNR, Shannon rate. A set max_range_km cuts the link to rate 0 beyond it.
LinkSample sample_link(const NetworkNode& node, const Position& fleet_pos,
                       double t_s, double noise_figure_db);

struct LinkChoice {
  LinkSample chosen;
  std::vector<LinkSample> all;  // one per node, input order
};

/// Maximum-rate link among the nodes; rate ties break to the lowest id.
/// Throws std::invalid_argument on an empty node set.
LinkChoice best_link(std::span<const NetworkNode> nodes,
                     const Position& fleet_pos, double t_s,
                     double noise_figure_db);

/// Empty optional means "all kinds".
using NetworkFilter = std::optional<std::set<NetworkKind>>;

std::vector<NetworkNode> filter_networks(std::span<const NetworkNode> nodes,
                                         const NetworkFilter& filter);

}  // namespace nibsim
