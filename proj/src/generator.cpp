#include "spdt/generator.hpp"

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <string>

#include "spdt/parallel.hpp"

namespace spdt {

ActivityTimeline generate_timeline(const SpdtParams& params, Step horizon, RandomSource& rng) {
  if (horizon < 1) throw std::invalid_argument("generate_timeline: horizon must be >= 1");
  const double rho_step = per_step_probability(params.rho_per_sec, params.step_seconds);
  const double q_step = per_step_probability(params.q_per_sec, params.step_seconds);
  const double pi_active = q_step / (q_step + rho_step);  // equilibrium occupancy

  ActivityTimeline timeline;
  bool active = rng.uniform() < pi_active;
  timeline.initial_active = active;
  Step remaining = horizon;
  while (remaining > 0) {
    Step duration = sample_geometric(active ? rho_step : q_step, rng);
    if (duration > remaining) duration = remaining;
    timeline.periods.push_back(duration);
    remaining -= duration;
    active = !active;
  }
  return timeline;
}

std::vector<ActiveCopy> timeline_to_copies(const ActivityTimeline& timeline) {
  std::vector<ActiveCopy> copies;
  bool active = timeline.initial_active;
  Step t = 0;
  std::uint32_t copy_id = 0;
  for (Step duration : timeline.periods) {
    if (active)
      copies.push_back(ActiveCopy{timeline.node, copy_id++, t, t + duration});
    t += duration;
    active = !active;
  }
  return copies;
}

std::vector<double> assign_lambdas(NodeId n_nodes, const SpdtParams& params, RandomSource& rng) {
  std::vector<double> lambdas(n_nodes);
  for (NodeId v = 0; v < n_nodes; ++v)
    lambdas[v] = sample_bounded_power_law(params.alpha, params.xi, params.psi, rng);
  return lambdas;
}

NeighborSelector::NeighborSelector(const std::vector<double>& lambdas) {
  cumulative_.resize(lambdas.size());
  double total = 0.0;
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    if (!(lambdas[i] > 0.0))
      throw std::invalid_argument("NeighborSelector: lambdas must be positive");
    total += lambdas[i];
    cumulative_[i] = total;
  }
}

void NeighborSelector::select(NodeId host, std::int64_t d, ContactHistory& history,
                              double eta, RandomSource& rng, Scratch& scratch,
                              std::vector<NodeId>& out) const {
  const NodeId n = n_nodes();
  if (host >= n) throw std::invalid_argument("select: host out of range");
  if (d < 1) throw std::invalid_argument("select: d must be >= 1");
  if (d > static_cast<std::int64_t>(n) - 1)
    throw std::runtime_error("select: population exhausted (d = " + std::to_string(d) +
                             " with " + std::to_string(n - 1) + " available nodes)");
  if (!(eta > 0.0)) throw std::invalid_argument("select: eta must be > 0");

  if (scratch.history_stamp.size() < n) {
    scratch.history_stamp.assign(n, 0);
    scratch.copy_stamp.assign(n, 0);
    scratch.current_host_stamp = 0;
    scratch.epoch = 0;
  }
  // Marks are keyed to the host; a host switch re-marks its (usually empty)
  // existing history so scratch can be shared across hosts on one worker.
  if (scratch.current_host_stamp != host + 1) {
    scratch.current_host_stamp = host + 1;
    for (NodeId c : history.contacts) scratch.history_stamp[c] = host + 1;
  }
  const std::uint64_t copy_epoch = ++scratch.epoch;
  const double total = cumulative_.back();

  out.clear();
  out.reserve(static_cast<std::size_t>(d));
  for (std::int64_t slot = 0; slot < d; ++slot) {
    for (;;) {
      const double n_t = static_cast<double>(history.contacts.size());
      const bool repeat = rng.uniform() < n_t / (n_t + eta);
      if (repeat) {
        const NodeId pick =
            history.contacts[rng.uniform_below(history.contacts.size())];
        if (scratch.copy_stamp[pick] == copy_epoch) continue;  // already in this copy
        scratch.copy_stamp[pick] = copy_epoch;
        out.push_back(pick);
        break;
      }
      // New contact: lambda-weighted over all nodes, rejecting the host,
      // known contacts, and same-copy duplicates.
      const double point = rng.uniform() * total;
      const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), point);
      NodeId pick = static_cast<NodeId>(
          it == cumulative_.end() ? n - 1 : it - cumulative_.begin());
      if (pick == host || scratch.history_stamp[pick] == host + 1 ||
          scratch.copy_stamp[pick] == copy_epoch)
        continue;
      scratch.history_stamp[pick] = host + 1;
      scratch.copy_stamp[pick] = copy_epoch;
      history.contacts.push_back(pick);
      out.push_back(pick);
      break;
    }
  }
}

std::vector<NodeId> select_neighbors(NodeId host, std::int64_t d, ContactHistory& history,
                                     const std::vector<double>& lambdas, double eta,
                                     RandomSource& rng) {
  NeighborSelector selector(lambdas);
  NeighborSelector::Scratch scratch;
  std::vector<NodeId> out;
  selector.select(host, d, history, eta, rng, scratch, out);
  return out;
}

std::vector<SpdtLink> generate_links(const ActiveCopy& copy, std::uint32_t copy_index,
                                     const std::vector<NodeId>& neighbors,
                                     const SpdtParams& params, RandomSource& rng) {
  if (neighbors.empty()) throw std::invalid_argument("generate_links: neighbors must be nonempty");
  if (copy.t_s >= copy.t_l) throw std::invalid_argument("generate_links: copy needs t_s < t_l");
  const double pc_step = per_step_probability(params.p_c_per_sec, params.step_seconds);
  const double pb_step = per_step_probability(params.p_b_per_sec, params.step_seconds);
  const Step t_max = (copy.t_l - copy.t_s) + delta_to_steps(params.delta_sec, params.step_seconds);

  std::vector<SpdtLink> links;
  links.reserve(neighbors.size());
  for (NodeId neighbor : neighbors) {
    const Step t_c = sample_truncated_geometric(pc_step, t_max, rng);
    const Step t_d = sample_geometric(pb_step, rng);
    SpdtLink link;
    link.copy_index = copy_index;
    link.neighbor = neighbor;
    link.t_s_prime = copy.t_s + t_c;
    link.t_l_prime = link.t_s_prime + t_d;
    link.component = classify_link(copy.t_l, link.t_s_prime, link.t_l_prime);
    links.push_back(link);
  }
  return links;
}

namespace {

struct NodeRealization {
  std::vector<ActiveCopy> copies;
  std::vector<SpdtLink> links;  // copy_index local to the node until merge
};

}  // namespace

TemporalGraph synthesize_graph(const SpdtParams& params, NodeId n_nodes, Step horizon,
                               std::uint64_t seed, int workers) {
  validate_params(params);
  if (n_nodes < 2) throw std::invalid_argument("synthesize_graph: n_nodes must be >= 2");
  if (horizon < 1) throw std::invalid_argument("synthesize_graph: horizon must be >= 1");

  // Pass 1: lambdas. Each node's lambda is the first draw of its own stream,
  // so pass 2 can reproduce it by re-opening the stream.
  std::vector<double> lambdas(n_nodes);
  parallel_for(n_nodes, workers, [&](std::size_t v) {
    RandomSource rng(seed, make_stream(stream_phase::generator, v));
    lambdas[v] = sample_bounded_power_law(params.alpha, params.xi, params.psi, rng);
  });

  const NeighborSelector selector(lambdas);
  const int worker_count = std::max(1, workers);
  std::vector<NeighborSelector::Scratch> scratches(worker_count);
  std::vector<NodeRealization> nodes(n_nodes);

  // Pass 2: per node, re-draw lambda then timeline, degrees, neighbors,
  // links. A lambda of exactly 1.0 (possible only when psi == 1) is nudged
  // below 1 so the geometric degree law stays proper.
  parallel_for_workers(n_nodes, workers, [&](std::size_t v, std::size_t w) {
    RandomSource rng(seed, make_stream(stream_phase::generator, v));
    double lambda = sample_bounded_power_law(params.alpha, params.xi, params.psi, rng);
    if (lambda >= 1.0) lambda = 1.0 - 1e-12;

    ActivityTimeline timeline = generate_timeline(params, horizon, rng);
    timeline.node = static_cast<NodeId>(v);
    NodeRealization& result = nodes[v];
    result.copies = timeline_to_copies(timeline);

    ContactHistory history;
    std::vector<NodeId> neighbors;
    for (std::uint32_t c = 0; c < result.copies.size(); ++c) {
      const std::int64_t d = sample_activation_degree(lambda, rng);
      selector.select(static_cast<NodeId>(v), d, history, params.eta, rng,
                      scratches[w], neighbors);
      std::vector<SpdtLink> links = generate_links(result.copies[c], c, neighbors, params, rng);
      result.links.insert(result.links.end(), links.begin(), links.end());
    }
  });

  TemporalGraph graph;
  graph.n_nodes = n_nodes;
  graph.horizon = horizon;
  graph.step_seconds = params.step_seconds;
  graph.delta_steps = delta_to_steps(params.delta_sec, params.step_seconds);
  graph.lambdas = std::move(lambdas);

  std::size_t total_copies = 0, total_links = 0;
  for (const NodeRealization& node : nodes) {
    total_copies += node.copies.size();
    total_links += node.links.size();
  }
  graph.copies.reserve(total_copies);
  graph.links.reserve(total_links);
  for (const NodeRealization& node : nodes) {
    const auto base = static_cast<std::uint32_t>(graph.copies.size());
    graph.copies.insert(graph.copies.end(), node.copies.begin(), node.copies.end());
    for (SpdtLink link : node.links) {
      link.copy_index += base;
      graph.links.push_back(link);
    }
  }
  return graph;
}

TemporalGraph clip_to_spst(const TemporalGraph& g) {
  TemporalGraph clipped;
  clipped.n_nodes = g.n_nodes;
  clipped.horizon = g.horizon;
  clipped.step_seconds = g.step_seconds;
  clipped.delta_steps = g.delta_steps;
  clipped.copies = g.copies;
  clipped.lambdas = g.lambdas;
  clipped.links.reserve(g.links.size());
  for (SpdtLink link : g.links) {
    if (link.component == LinkComponent::indirect_only) continue;
    if (link.component == LinkComponent::both) {
      link.t_l_prime = g.copies[link.copy_index].t_l;
      link.component = LinkComponent::direct_only;
    }
    clipped.links.push_back(link);
  }
  return clipped;
}

Step detail::badn_chunk_steps(Step horizon, int step_seconds) {
  if (step_seconds > 0 && 86400 % step_seconds == 0) {
    const Step per_day = 86400 / step_seconds;
    if (per_day < horizon) return per_day;
  }
  return horizon;
}

TemporalGraph generate_badn(NodeId n_nodes, double activation_p, int m, Step horizon,
                            int step_seconds, std::uint64_t seed, int workers) {
  if (!(activation_p > 0.0) || !(activation_p < 1.0))
    throw std::invalid_argument("generate_badn: activation_p must lie in (0,1)");
  if (m < 1) throw std::invalid_argument("generate_badn: m must be >= 1");
  if (static_cast<NodeId>(m) >= n_nodes)
    throw std::invalid_argument("generate_badn: need n_nodes > m");
  if (horizon < 1) throw std::invalid_argument("generate_badn: horizon must be >= 1");
  if (step_seconds <= 0) throw std::invalid_argument("generate_badn: step_seconds must be > 0");

  const Step chunk = detail::badn_chunk_steps(horizon, step_seconds);
  std::vector<NodeRealization> nodes(n_nodes);
  parallel_for(n_nodes, workers, [&](std::size_t v) {
    NodeRealization& result = nodes[v];
    std::vector<NodeId> scratch;
    std::uint32_t copy_id = 0;
    for (Step start = 0, index = 0; start < horizon; start += chunk, ++index) {
      const Step end = std::min<Step>(start + chunk, horizon);
      detail::walk_badn_chunk(
          static_cast<NodeId>(v), n_nodes, activation_p, m, start, end, seed,
          static_cast<std::uint64_t>(index), scratch,
          [&](Step t, const std::vector<NodeId>& chosen) {
            result.copies.push_back(ActiveCopy{static_cast<NodeId>(v), copy_id, t, t + 1});
            for (NodeId neighbor : chosen) {
              SpdtLink link;
              link.copy_index = copy_id;
              link.neighbor = neighbor;
              link.t_s_prime = t;
              link.t_l_prime = t + 1;
              link.component = LinkComponent::direct_only;
              result.links.push_back(link);
            }
            ++copy_id;
          });
    }
  });

  TemporalGraph graph;
  graph.n_nodes = n_nodes;
  graph.horizon = horizon;
  graph.step_seconds = step_seconds;
  graph.delta_steps = 0;

  std::size_t total_copies = 0, total_links = 0;
  for (const NodeRealization& node : nodes) {
    total_copies += node.copies.size();
    total_links += node.links.size();
  }
  graph.copies.reserve(total_copies);
  graph.links.reserve(total_links);
  for (const NodeRealization& node : nodes) {
    const auto base = static_cast<std::uint32_t>(graph.copies.size());
    graph.copies.insert(graph.copies.end(), node.copies.begin(), node.copies.end());
    for (SpdtLink link : node.links) {
      link.copy_index += base;
      graph.links.push_back(link);
    }
  }
  return graph;
}

}  // namespace spdt
