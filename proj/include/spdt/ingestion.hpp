#pragma once

#include <cstdint>
#include <vector>

#include "spdt/core.hpp"
#include "spdt/estimator.hpp"

namespace spdt {

enum class CoordMode { meters, degrees };

// One location report. `user` is a dense node id (raw log ids are remapped
// at parse time); x/y are planar meters or lon/lat degrees per the mode.
struct LocationUpdate {
  NodeId user = 0;
  double x = 0.0;
  double y = 0.0;
  double t = 0.0;  // epoch seconds
};

// A maximal run of one user's updates that stays within radius_m of the run's
// first update with consecutive gaps <= max_gap_s.
struct ProximityVisit {
  NodeId user = 0;
  double anchor_x = 0.0;  // location of the first update
  double anchor_y = 0.0;
  double t_first = 0.0;
  double t_last = 0.0;
  std::int32_t n_updates = 0;
};

// Meters between two points; Euclidean for planar input, haversine on the
// mean-Earth sphere for degree input (x = lon, y = lat).
double coordinate_distance_m(CoordMode mode, double x1, double y1, double x2, double y2);

// Greedy visit extraction over one user's time-sorted updates.
std::vector<ProximityVisit> extract_visits(const std::vector<LocationUpdate>& user_updates,
                                           CoordMode mode, double radius_m = 20.0,
                                           double max_gap_s = 1800.0);

struct RealGraph {
  TemporalGraph graph;
  CipSamples cip;
  double origin_sec = 0.0;  // midnight before the earliest update
  std::size_t n_visits = 0;
};

// Builds the temporal graph and CIP samples from visits (all users, sorted by
// (user, t_first)). A visit of host v spanning [t1, tk] gains a link from
// each other user's visit with >= 2 updates, anchor within radius_m, arrival
// t1' in [t1, tk + delta_sec], and positive span. Times are discretized onto
// the step grid afterwards, so the delta window is exact in seconds.
RealGraph build_real_graph(const std::vector<ProximityVisit>& visits, CoordMode mode,
                           NodeId n_users, double delta_sec = 10800.0,
                           int step_seconds = 300, double radius_m = 20.0);

// Fills every host's empty days by copying all copies+links of one of its
// uniformly chosen active days, shifted by whole days. Hosts with no
// activity stay empty. Requires step_seconds to divide a day evenly.
TemporalGraph densify(const TemporalGraph& g, int horizon_days, std::uint64_t seed);

}  // namespace spdt
