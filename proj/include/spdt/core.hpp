#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace spdt {

using NodeId = std::uint32_t;
using Step = std::int64_t;

// Model parameters. Rates are per second; sampling happens on a discrete
// grid of step_seconds, so every rate is converted with
// per_step_probability() at the point of use.
struct SpdtParams {
  double rho_per_sec = 2.83e-4;   // active-period closure rate
  double q_per_sec = 2.23e-5;     // activation rate while inactive
  double alpha = 2.98;            // power-law exponent of the λ distribution
  double xi = 0.25;               // lower bound of λ
  double psi = 0.999;             // upper bound of λ
  double p_c_per_sec = 9.33e-5;   // link-creation delay rate
  double p_b_per_sec = 2.83e-4;   // link-breaking rate (paper ties it to ρ)
  double delta_sec = 10800.0;     // indirect-transmission window after departure
  double eta = 1.0;               // reinforcement constant
  int step_seconds = 300;
};

// The fitted values published for the Beijing dataset; used as CLI defaults.
SpdtParams default_params();

// min(rate × step, 1 − 1e-9); throws if inputs are non-positive.
double per_step_probability(double rate_per_sec, double step_seconds);

// Returns p unchanged iff every invariant holds; otherwise throws
// std::invalid_argument naming the first offending field.
SpdtParams validate_params(const SpdtParams& p);

// delta_sec rounded to the nearest whole number of steps.
Step delta_to_steps(double delta_sec, int step_seconds);

// Which transmission components a link carries, determined by the overlap of
// the neighbor's presence [t_s', t_l') with the host's presence [t_s, t_l).
enum class LinkComponent : std::uint8_t {
  direct_only,    // neighbor leaves while the host is still present
  indirect_only,  // neighbor arrives after the host left
  both,           // arrives during presence, stays past departure
};

LinkComponent classify_link(Step t_l, Step t_s_prime, Step t_l_prime);
const char* to_string(LinkComponent c);

// One active period of a host at some location.
struct ActiveCopy {
  NodeId host = 0;
  std::uint32_t copy_id = 0;  // ordinal among this host's copies
  Step t_s = 0;               // first active step
  Step t_l = 0;               // first step after activity; duration = t_l - t_s
};

// One neighbor joining an active copy. Times are absolute steps.
struct SpdtLink {
  std::uint32_t copy_index = 0;  // index into TemporalGraph::copies
  NodeId neighbor = 0;
  Step t_s_prime = 0;
  Step t_l_prime = 0;
  LinkComponent component = LinkComponent::direct_only;
};

struct TemporalGraph {
  NodeId n_nodes = 0;
  Step horizon = 0;
  int step_seconds = 300;
  Step delta_steps = 0;
  std::vector<ActiveCopy> copies;  // sorted by (host, copy_id)
  std::vector<SpdtLink> links;     // grouped by ascending copy_index
  std::vector<double> lambdas;     // per-node λ; empty for ingested graphs

  // Prefix offsets into `links` per copy (size copies.size() + 1).
  std::vector<std::size_t> copy_link_offsets() const;

  // Throws std::runtime_error describing the first violated invariant.
  void validate() const;
};

}  // namespace spdt
