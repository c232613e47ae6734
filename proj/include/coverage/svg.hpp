#pragma once

// Static SVG snapshots of a logged state: region outline, partition bars,
// agents and sub-region centroids.

#include <stdexcept>
#include <string>
#include <vector>

#include "coverage/simulate.hpp"

namespace coverage {

class SnapshotRangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Index of the logged record nearest each requested time. Throws
/// SnapshotRangeError for times outside [t_first, t_last].
std::vector<std::size_t> select_snapshots(const TrajectoryLog& log,
                                          const std::vector<double>& times);

struct SvgStyle {
  double pixels = 600.0;
  int outline_samples = 360;
};

/// Record must carry centroids (see complete_records).
std::string render_snapshot(const AnnularRegion& region, const TrajectoryRecord& record,
                            const SvgStyle& style = {});

/// File name for a snapshot at time t, e.g. "snapshot_t4.svg".
std::string snapshot_name(double t);

}  // namespace coverage
