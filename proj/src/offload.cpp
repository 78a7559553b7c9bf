#include "edgeflight/offload.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "edgeflight/errors.hpp"

namespace edgeflight {

void OffloadConfig::validate() const {
  if (!(frame_bits > 0.0)) throw ConfigError("offload.frame_bits must be positive");
  if (!(frames_per_meter > 0.0)) throw ConfigError("offload.frames_per_meter must be positive");
  if (!(feedback_bits >= 0.0)) throw ConfigError("offload.feedback_bits must be >= 0");
  if (!(remote_proc_s_per_frame >= 0.0)) throw ConfigError("offload.remote_proc_s_per_frame must be >= 0");
  if (!(local_fps >= 0.0)) throw ConfigError("offload.local_fps must be >= 0");
  if (!(v_max_mps > 0.0)) throw ConfigError("offload.v_max_mps must be positive");
}

std::string_view to_string(ProcessingMode m) {
  return m == ProcessingMode::Remote ? "Remote" : "Local";
}

double remote_update_rate(double uplink_bps, double downlink_bps, const OffloadConfig& oc) {
  if (!(uplink_bps > 0.0) || !(downlink_bps > 0.0)) return 0.0;
  // x / inf == 0, so infinite links drop out of the sum.
  const double per_frame_s = oc.frame_bits / uplink_bps + oc.remote_proc_s_per_frame + oc.feedback_bits / downlink_bps;
  if (per_frame_s <= 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / per_frame_s;
}

ModeChoice select_mode(double remote_fps, double local_fps) {
  if (remote_fps >= local_fps) return {ProcessingMode::Remote, remote_fps};
  return {ProcessingMode::Local, local_fps};
}

double speed_limit(double effective_fps, const OffloadConfig& oc) {
  if (!(effective_fps > 0.0)) return 0.0;
  return std::min(effective_fps / oc.frames_per_meter, oc.v_max_mps);
}

Governor govern(double uplink_bps, double downlink_bps, const OffloadConfig& oc) {
  Governor g;
  g.choice = select_mode(remote_update_rate(uplink_bps, downlink_bps, oc), oc.local_fps);
  g.speed_limit_mps = speed_limit(g.choice.effective_fps, oc);
  return g;
}

}  // namespace edgeflight
