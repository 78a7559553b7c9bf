#pragma once

#include <string_view>

namespace edgeflight {

struct OffloadConfig {
  double frame_bits = 1.0e6;
  double frames_per_meter = 2.0;
  double feedback_bits = 5.0e4;
  double remote_proc_s_per_frame = 0.02;
  double local_fps = 2.0;
  double v_max_mps = 15.0;

  void validate() const;
};

enum class ProcessingMode { Remote, Local };

std::string_view to_string(ProcessingMode m);

/// Frames per second through the serial offload pipeline: uplink transfer,
/// edge processing, feedback on the downlink. Zero if either link is down.
/// Infinite rates are allowed and contribute zero delay.
double remote_update_rate(double uplink_bps, double downlink_bps, const OffloadConfig& oc);

struct ModeChoice {
  ProcessingMode mode = ProcessingMode::Remote;
  double effective_fps = 0.0;

  friend bool operator==(const ModeChoice&, const ModeChoice&) = default;
};

/// Picks the faster mode; ties go to Remote.
ModeChoice select_mode(double remote_fps, double local_fps);

/// min(effective_fps / frames_per_meter, v_max).
double speed_limit(double effective_fps, const OffloadConfig& oc);

/// Full governor: link rates -> mode -> speed limit.
struct Governor {
  ModeChoice choice;
  double speed_limit_mps = 0.0;
};

Governor govern(double uplink_bps, double downlink_bps, const OffloadConfig& oc);

}  // namespace edgeflight
