#include "nibsim/propagation.hpp"

#include <cmath>
#include <stdexcept>

namespace nibsim {

double free_space_path_loss(double d_km, double f_ghz) {
  if (!(d_km > 0.0) || !(f_ghz > 0.0)) {
    throw std::domain_error("free_space_path_loss needs d_km > 0, f_ghz > 0");
  }
  return 92.45 + 20.0 * std::log10(d_km) + 20.0 * std::log10(f_ghz);
}

double log_distance_path_loss(double d_km, const ChannelModel& model,
                              double f_ghz) {
  if (!(model.ref_distance_km > 0.0)) {
    throw std::domain_error("log_distance_path_loss needs ref_distance_km > 0");
  }
  if (!(d_km > 0.0) || !(f_ghz > 0.0)) {
    throw std::domain_error("log_distance_path_loss needs d_km > 0, f_ghz > 0");
  }
  // Inside the reference distance the model would predict a gain over the
  // d0 loss; clamp to the free-space value at d0 instead.
  double pl0 = free_space_path_loss(model.ref_distance_km, f_ghz);
  if (d_km <= model.ref_distance_km) return pl0;
  return pl0 + 10.0 * model.exponent_n * std::log10(d_km / model.ref_distance_km);
}

double path_loss(const ChannelModel& model, double d_km, double f_ghz) {
  switch (model.variant) {
    case ChannelVariant::FreeSpace:
      return free_space_path_loss(d_km, f_ghz);
    case ChannelVariant::LogDistance:
      return log_distance_path_loss(d_km, model, f_ghz);
  }
  throw std::domain_error("unknown channel variant");
}

}  // namespace nibsim
