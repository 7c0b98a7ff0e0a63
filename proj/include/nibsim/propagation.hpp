// Deterministic path-loss models: free space and log-distance.
#pragma once

namespace nibsim {

enum class ChannelVariant { FreeSpace, LogDistance };

/// Path-loss model selector. exponent_n / ref_distance_km are only
/// meaningful for LogDistance; they stay at their canonical values (2, 1)
/// for FreeSpace so value comparison works.
struct ChannelModel {
  ChannelVariant variant = ChannelVariant::FreeSpace;
  double exponent_n = 2.0;
  double ref_distance_km = 1.0;

  static ChannelModel free_space() { return {}; }
  static ChannelModel log_distance(double exponent_n, double ref_distance_km) {
    return {ChannelVariant::LogDistance, exponent_n, ref_distance_km};
  }

  bool operator==(const ChannelModel&) const = default;
};

/// 92.45 + 20 log10(d_km) + 20 log10(f_ghz), in dB.
/// Throws std::domain_error for non-positive distance or frequency.
double free_space_path_loss(double d_km, double f_ghz);

/// Free-space loss at the reference distance plus 10 n log10(d/d0), in dB.
/// Distances below d0 clamp to d0 (near-field guard); d <= 0 is a domain error.
double log_distance_path_loss(double d_km, const ChannelModel& model,
                              double f_ghz);

/// Dispatch on the model variant.
double path_loss(const ChannelModel& model, double d_km, double f_ghz);

}  // namespace nibsim
