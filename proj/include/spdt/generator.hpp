#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "spdt/core.hpp"
#include "spdt/distributions.hpp"
#include "spdt/rng.hpp"

namespace spdt {

// A node's full-horizon activity pattern: alternating period durations in
// steps, starting in the state given by initial_active. Durations are >= 1
// and sum exactly to the horizon (the last period is truncated).
struct ActivityTimeline {
  NodeId node = 0;
  bool initial_active = false;
  std::vector<Step> periods;
};

// Draw sequence per call: one uniform for the initial state (P(active) =
// q/(q+rho) in per-step probabilities), then one geometric draw per period.
ActivityTimeline generate_timeline(const SpdtParams& params, Step horizon, RandomSource& rng);

// Active periods of the timeline as copies with sequential copy_id.
std::vector<ActiveCopy> timeline_to_copies(const ActivityTimeline& timeline);

// One bounded-power-law draw per node, in node order.
std::vector<double> assign_lambdas(NodeId n_nodes, const SpdtParams& params, RandomSource& rng);

// Nodes a host has ever contacted, in first-contact order.
struct ContactHistory {
  std::vector<NodeId> contacts;
  std::size_t n_t() const { return contacts.size(); }
};

// Samples neighbors for active copies: each slot repeats a known contact
// with probability n_t/(n_t + eta), otherwise picks a new node with
// probability proportional to its lambda (host, history, and same-copy
// duplicates rejected and redrawn). Construction cost is one prefix-sum
// pass; selection is binary search plus expected-O(1) rejections.
class NeighborSelector {
 public:
  explicit NeighborSelector(const std::vector<double>& lambdas);

  // Per-worker scratch; reusable across hosts and selector instances.
  struct Scratch {
    std::vector<std::uint32_t> history_stamp;
    std::vector<std::uint64_t> copy_stamp;
    std::uint32_t current_host_stamp = 0;
    std::uint64_t epoch = 0;
  };

  void select(NodeId host, std::int64_t d, ContactHistory& history, double eta,
              RandomSource& rng, Scratch& scratch, std::vector<NodeId>& out) const;

  NodeId n_nodes() const { return static_cast<NodeId>(cumulative_.size()); }

 private:
  std::vector<double> cumulative_;  // prefix sums of lambda
};

// Convenience wrapper with the same draw sequence as NeighborSelector.
std::vector<NodeId> select_neighbors(NodeId host, std::int64_t d, ContactHistory& history,
                                     const std::vector<double>& lambdas, double eta,
                                     RandomSource& rng);

// Per neighbor, in order: one truncated-geometric draw for the creation
// delay t_c over [0, t_a + delta], one geometric draw for the duration t_d.
std::vector<SpdtLink> generate_links(const ActiveCopy& copy, std::uint32_t copy_index,
                                     const std::vector<NodeId>& neighbors,
                                     const SpdtParams& params, RandomSource& rng);

// Full synthesis: per node (own RNG stream, so results are identical for
// every worker count): lambda, timeline, then per copy an activation degree,
// neighbors, and links.
TemporalGraph synthesize_graph(const SpdtParams& params, NodeId n_nodes, Step horizon,
                               std::uint64_t seed, int workers = 1);

// Same-place-same-time reduction: drops indirect-only links and truncates
// "both" links at the host's departure. Idempotent.
TemporalGraph clip_to_spst(const TemporalGraph& g);

// Basic activity-driven baseline: per step each node activates with
// probability activation_p and links to m uniformly random distinct other
// nodes for exactly one step. delta is 0; lambdas are absent.
TemporalGraph generate_badn(NodeId n_nodes, double activation_p, int m, Step horizon,
                            int step_seconds, std::uint64_t seed, int workers = 1);

namespace detail {

// BADN activity is generated in per-(node, chunk) RNG streams so the same
// realization can be walked day-by-day without materializing the graph
// (the diffusion module streams it into its link table) or all at once
// (generate_badn). A chunk is one day when step_seconds divides a day
// evenly, otherwise the whole horizon.
Step badn_chunk_steps(Step horizon, int step_seconds);

// Invokes emit(t, scratch) for each activation of `node` within
// [chunk_start, chunk_end); scratch then holds m distinct neighbors != node.
// Activation gaps are geometric(p), equivalent to per-step Bernoulli(p).
template <typename Emit>
void walk_badn_chunk(NodeId node, NodeId n_nodes, double activation_p, int m,
                     Step chunk_start, Step chunk_end, std::uint64_t seed,
                     std::uint64_t chunk_index, std::vector<NodeId>& scratch,
                     Emit&& emit) {
  if (m < 1 || static_cast<NodeId>(m) >= n_nodes)
    throw std::invalid_argument("walk_badn_chunk: need 1 <= m < n_nodes");
  RandomSource rng(seed, make_stream(stream_phase::badn, (chunk_index << 32) ^ node));
  Step t = chunk_start - 1;
  for (;;) {
    t += sample_geometric(activation_p, rng);
    if (t >= chunk_end) break;
    scratch.clear();
    while (scratch.size() < static_cast<std::size_t>(m)) {
      NodeId candidate = static_cast<NodeId>(rng.uniform_below(n_nodes - 1));
      if (candidate >= node) ++candidate;  // skip the host
      bool duplicate = false;
      for (NodeId chosen : scratch) duplicate |= (chosen == candidate);
      if (!duplicate) scratch.push_back(candidate);
    }
    emit(t, scratch);
  }
}

}  // namespace detail

}  // namespace spdt
