#include "spdt/ingestion.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "spdt/rng.hpp"

namespace spdt {

namespace {

constexpr double kEarthRadiusM = 6371000.0;
constexpr double kMetersPerDegLat = 111320.0;

double haversine_m(double lon1, double lat1, double lon2, double lat2) {
  const double to_rad = std::acos(-1.0) / 180.0;
  const double phi1 = lat1 * to_rad, phi2 = lat2 * to_rad;
  const double dphi = (lat2 - lat1) * to_rad;
  const double dlambda = (lon2 - lon1) * to_rad;
  const double s1 = std::sin(dphi / 2.0), s2 = std::sin(dlambda / 2.0);
  const double a = s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2;
  return 2.0 * kEarthRadiusM * std::asin(std::min(1.0, std::sqrt(a)));
}

}  // namespace

double coordinate_distance_m(CoordMode mode, double x1, double y1, double x2, double y2) {
  if (mode == CoordMode::meters)
    return std::hypot(x2 - x1, y2 - y1);
  return haversine_m(x1, y1, x2, y2);
}

std::vector<ProximityVisit> extract_visits(const std::vector<LocationUpdate>& user_updates,
                                           CoordMode mode, double radius_m, double max_gap_s) {
  std::vector<ProximityVisit> visits;
  if (user_updates.empty()) return visits;
  for (std::size_t i = 1; i < user_updates.size(); ++i) {
    if (user_updates[i].t < user_updates[i - 1].t)
      throw std::invalid_argument("extract_visits: updates must be sorted by time");
    if (user_updates[i].user != user_updates[0].user)
      throw std::invalid_argument("extract_visits: updates must belong to one user");
  }

  ProximityVisit open;
  auto start_visit = [&](const LocationUpdate& u) {
    open.user = u.user;
    open.anchor_x = u.x;
    open.anchor_y = u.y;
    open.t_first = u.t;
    open.t_last = u.t;
    open.n_updates = 1;
  };
  start_visit(user_updates[0]);
  for (std::size_t i = 1; i < user_updates.size(); ++i) {
    const LocationUpdate& u = user_updates[i];
    const bool near = coordinate_distance_m(mode, open.anchor_x, open.anchor_y, u.x, u.y) <= radius_m;
    const bool soon = u.t - open.t_last <= max_gap_s;
    if (near && soon) {
      open.t_last = u.t;
      ++open.n_updates;
    } else {
      visits.push_back(open);
      start_visit(u);
    }
  }
  visits.push_back(open);
  return visits;
}

namespace {

// Spatial hash over visit anchors; cell side ~40 m so a 20 m radius never
// reaches past the 3x3 neighborhood. Degree mode sizes cells from the
// dataset's mean latitude (city-scale assumption).
class AnchorGrid {
 public:
  AnchorGrid(const std::vector<ProximityVisit>& visits, CoordMode mode) {
    double cell_x = 40.0, cell_y = 40.0;
    if (mode == CoordMode::degrees) {
      double mean_lat = 0.0;
      for (const ProximityVisit& v : visits) mean_lat += v.anchor_y;
      if (!visits.empty()) mean_lat /= static_cast<double>(visits.size());
      const double cos_lat = std::max(0.2, std::cos(mean_lat * std::acos(-1.0) / 180.0));
      cell_y = 40.0 / kMetersPerDegLat;
      cell_x = 40.0 / (kMetersPerDegLat * cos_lat);
    }
    inv_x_ = 1.0 / cell_x;
    inv_y_ = 1.0 / cell_y;
    for (std::size_t i = 0; i < visits.size(); ++i)
      cells_[key_of(visits[i].anchor_x, visits[i].anchor_y)].push_back(static_cast<std::uint32_t>(i));
  }

  template <typename Fn>
  void for_each_near(double x, double y, Fn&& fn) const {
    const auto cx = static_cast<std::int64_t>(std::floor(x * inv_x_));
    const auto cy = static_cast<std::int64_t>(std::floor(y * inv_y_));
    for (std::int64_t dx = -1; dx <= 1; ++dx)
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        const auto it = cells_.find(key(cx + dx, cy + dy));
        if (it == cells_.end()) continue;
        for (std::uint32_t idx : it->second) fn(idx);
      }
  }

 private:
  static std::uint64_t key(std::int64_t cx, std::int64_t cy) {
    return (static_cast<std::uint64_t>(cx) << 32) ^ static_cast<std::uint32_t>(cy);
  }
  std::uint64_t key_of(double x, double y) const {
    return key(static_cast<std::int64_t>(std::floor(x * inv_x_)),
               static_cast<std::int64_t>(std::floor(y * inv_y_)));
  }

  double inv_x_ = 1.0, inv_y_ = 1.0;
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> cells_;
};

}  // namespace

RealGraph build_real_graph(const std::vector<ProximityVisit>& visits, CoordMode mode,
                           NodeId n_users, double delta_sec, int step_seconds,
                           double radius_m) {
  if (step_seconds <= 0) throw std::invalid_argument("build_real_graph: step_seconds must be > 0");
  if (!(delta_sec >= 0.0)) throw std::invalid_argument("build_real_graph: delta_sec must be >= 0");
  for (std::size_t i = 1; i < visits.size(); ++i)
    if (visits[i].user < visits[i - 1].user ||
        (visits[i].user == visits[i - 1].user && visits[i].t_first < visits[i - 1].t_first))
      throw std::invalid_argument("build_real_graph: visits must be sorted by (user, time)");
  for (const ProximityVisit& v : visits)
    if (v.user >= n_users) throw std::invalid_argument("build_real_graph: visit user out of range");

  RealGraph out;
  out.n_visits = visits.size();
  TemporalGraph& g = out.graph;
  g.n_nodes = n_users;
  g.step_seconds = step_seconds;
  g.delta_steps = delta_to_steps(delta_sec, step_seconds);

  double t_min = 0.0, t_max = 0.0;
  if (!visits.empty()) {
    t_min = visits[0].t_first;
    t_max = visits[0].t_last;
    for (const ProximityVisit& v : visits) {
      t_min = std::min(t_min, v.t_first);
      t_max = std::max(t_max, v.t_last);
    }
  }
  out.origin_sec = std::floor(t_min / 86400.0) * 86400.0;
  const double span_days = visits.empty() ? 1.0 : std::ceil((t_max - out.origin_sec) / 86400.0);
  const int observation_days = std::max(1, static_cast<int>(span_days));
  g.horizon = (static_cast<Step>(observation_days) * 86400 + step_seconds - 1) / step_seconds;

  // Discretize visits into copies; per-user monotonic fix-up keeps copies of
  // one host separated even when rounding would overlap adjacent visits.
  g.copies.reserve(visits.size());
  std::vector<std::uint32_t> copy_of_visit(visits.size());
  {
    NodeId current_user = 0;
    std::uint32_t copy_id = 0;
    Step prev_t_l = -2;
    for (std::size_t i = 0; i < visits.size(); ++i) {
      const ProximityVisit& v = visits[i];
      if (i == 0 || v.user != current_user) {
        current_user = v.user;
        copy_id = 0;
        prev_t_l = -2;
      }
      Step t_s = static_cast<Step>(std::floor((v.t_first - out.origin_sec) / step_seconds));
      t_s = std::max(t_s, prev_t_l + 1);
      Step t_l = static_cast<Step>(std::ceil((v.t_last - out.origin_sec) / step_seconds));
      t_l = std::max(t_l, t_s + 1);
      prev_t_l = t_l;
      copy_of_visit[i] = static_cast<std::uint32_t>(g.copies.size());
      g.copies.push_back(ActiveCopy{v.user, copy_id++, t_s, t_l});
    }
  }

  CipSamples& cip = out.cip;
  cip.observation_days = observation_days;
  cip.delta_sec = delta_sec;
  auto visit_duration_sec = [&](const ProximityVisit& v) {
    const double span = v.t_last - v.t_first;
    return span > 0.0 ? span : static_cast<double>(step_seconds);
  };

  const AnchorGrid grid(visits, mode);
  struct Candidate {
    double t_arrive, t_leave;
    NodeId user;
    std::uint32_t visit;
  };
  std::vector<Candidate> candidates;
  std::vector<double> activations(n_users, 0.0);

  for (std::size_t hv = 0; hv < visits.size(); ++hv) {
    const ProximityVisit& host = visits[hv];
    const ActiveCopy& copy = g.copies[copy_of_visit[hv]];
    cip.active_durations.push_back(visit_duration_sec(host));
    if (copy.t_s > 0) activations[host.user] += 1.0;

    candidates.clear();
    grid.for_each_near(host.anchor_x, host.anchor_y, [&](std::uint32_t idx) {
      const ProximityVisit& other = visits[idx];
      if (other.user == host.user) return;
      if (other.n_updates < 2) return;                       // susceptible side needs 2 updates
      if (other.t_last <= other.t_first) return;             // positive stay required
      if (other.t_first < host.t_first) return;              // arrival window, in seconds
      if (other.t_first > host.t_last + delta_sec) return;
      if (coordinate_distance_m(mode, host.anchor_x, host.anchor_y,
                                other.anchor_x, other.anchor_y) > radius_m)
        return;
      candidates.push_back(Candidate{other.t_first, other.t_last, other.user, idx});
    });
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
      if (a.t_arrive != b.t_arrive) return a.t_arrive < b.t_arrive;
      if (a.user != b.user) return a.user < b.user;
      return a.t_leave < b.t_leave;
    });

    for (const Candidate& c : candidates) {
      SpdtLink link;
      link.copy_index = copy_of_visit[hv];
      link.neighbor = c.user;
      link.t_s_prime = static_cast<Step>(std::floor((c.t_arrive - out.origin_sec) / step_seconds));
      link.t_s_prime = std::max(link.t_s_prime, copy.t_s);
      link.t_l_prime = static_cast<Step>(std::ceil((c.t_leave - out.origin_sec) / step_seconds));
      link.t_l_prime = std::max(link.t_l_prime, link.t_s_prime + 1);
      link.component = classify_link(copy.t_l, link.t_s_prime, link.t_l_prime);
      g.links.push_back(link);

      cip.creation_delays.push_back(c.t_arrive - host.t_first);
      cip.creation_delay_durations.push_back(visit_duration_sec(host));
      cip.link_durations.push_back(c.t_leave - c.t_arrive);
    }
    const std::size_t degree = candidates.size();
    if (degree > 0) cip.degrees.push_back(static_cast<std::int64_t>(degree));
  }

  cip.activation_frequencies.resize(n_users);
  for (NodeId v = 0; v < n_users; ++v)
    cip.activation_frequencies[v] = activations[v] / static_cast<double>(observation_days);
  return out;
}

TemporalGraph densify(const TemporalGraph& g, int horizon_days, std::uint64_t seed) {
  if (horizon_days < 1) throw std::invalid_argument("densify: horizon_days must be >= 1");
  if (g.step_seconds <= 0 || 86400 % g.step_seconds != 0)
    throw std::invalid_argument("densify: step_seconds must divide a day evenly");
  const Step steps_per_day = 86400 / g.step_seconds;
  const Step target = static_cast<Step>(horizon_days) * steps_per_day;
  if (g.horizon > target)
    throw std::invalid_argument("densify: graph horizon exceeds horizon_days");

  const std::vector<std::size_t> offsets = g.copy_link_offsets();

  // Group copies per host (copies are host-sorted already).
  struct HostSpan { std::size_t begin = 0, end = 0; };
  std::vector<HostSpan> hosts(g.n_nodes);
  for (std::size_t c = 0; c < g.copies.size(); ++c) {
    HostSpan& span = hosts[g.copies[c].host];
    if (span.end == 0) span.begin = c;
    span.end = c + 1;
  }

  TemporalGraph out;
  out.n_nodes = g.n_nodes;
  out.step_seconds = g.step_seconds;
  out.delta_steps = g.delta_steps;
  out.lambdas = g.lambdas;
  out.horizon = target;

  struct Placed {
    std::size_t source_copy;
    Step shift;
  };
  std::vector<Placed> placed;
  std::vector<Step> days_with_activity;

  for (NodeId host = 0; host < g.n_nodes; ++host) {
    const HostSpan span = hosts[host];
    if (span.end == span.begin) continue;  // no active days: left empty

    days_with_activity.clear();
    for (std::size_t c = span.begin; c < span.end; ++c) {
      const Step day = g.copies[c].t_s / steps_per_day;
      if (days_with_activity.empty() || days_with_activity.back() != day)
        days_with_activity.push_back(day);
    }

    placed.clear();
    for (std::size_t c = span.begin; c < span.end; ++c)
      placed.push_back(Placed{c, 0});

    RandomSource rng(seed, make_stream(stream_phase::densify, host));
    std::size_t next_active = 0;
    for (Step day = 0; day < horizon_days; ++day) {
      if (next_active < days_with_activity.size() && days_with_activity[next_active] == day) {
        ++next_active;
        continue;
      }
      const Step source_day =
          days_with_activity[rng.uniform_below(days_with_activity.size())];
      const Step shift = (day - source_day) * steps_per_day;
      for (std::size_t c = span.begin; c < span.end; ++c)
        if (g.copies[c].t_s / steps_per_day == source_day)
          placed.push_back(Placed{c, shift});
    }

    std::sort(placed.begin(), placed.end(), [&](const Placed& a, const Placed& b) {
      const Step ta = g.copies[a.source_copy].t_s + a.shift;
      const Step tb = g.copies[b.source_copy].t_s + b.shift;
      if (ta != tb) return ta < tb;
      return a.source_copy < b.source_copy;
    });

    // Emit with a monotonic fix-up: a copy that straddles midnight can
    // collide with the following day's content; shifting the whole copy
    // (links included) preserves every duration and delay.
    Step prev_t_l = -2;
    std::uint32_t copy_id = 0;
    for (const Placed& p : placed) {
      const ActiveCopy& src = g.copies[p.source_copy];
      Step shift = p.shift;
      if (src.t_s + shift <= prev_t_l) shift = prev_t_l + 1 - src.t_s;
      const auto new_index = static_cast<std::uint32_t>(out.copies.size());
      out.copies.push_back(ActiveCopy{host, copy_id++, src.t_s + shift, src.t_l + shift});
      prev_t_l = src.t_l + shift;
      out.horizon = std::max(out.horizon, src.t_l + shift);
      for (std::size_t k = offsets[p.source_copy]; k < offsets[p.source_copy + 1]; ++k) {
        SpdtLink link = g.links[k];
        link.copy_index = new_index;
        link.t_s_prime += shift;
        link.t_l_prime += shift;
        out.links.push_back(link);
      }
    }
  }
  return out;
}

}  // namespace spdt
