#include "spdt/core.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace spdt {

SpdtParams default_params() { return SpdtParams{}; }

double per_step_probability(double rate_per_sec, double step_seconds) {
  if (!(rate_per_sec > 0.0))
    throw std::invalid_argument("per_step_probability: rate must be > 0");
  if (!(step_seconds > 0.0))
    throw std::invalid_argument("per_step_probability: step_seconds must be > 0");
  const double p = rate_per_sec * step_seconds;
  return p < 1.0 - 1e-9 ? p : 1.0 - 1e-9;
}

namespace {

void check_rate(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value))
    throw std::invalid_argument(std::string("validate_params: ") + name + " must be a positive finite rate");
}

void check_step_prob(double rate, int step_seconds, const char* name) {
  const double p = rate * step_seconds;
  if (!(p < 1.0))
    throw std::invalid_argument(std::string("validate_params: ") + name +
                                " times step_seconds must stay below 1 (got " + std::to_string(p) + ")");
}

}  // namespace

SpdtParams validate_params(const SpdtParams& p) {
  check_rate(p.rho_per_sec, "rho_per_sec");
  check_rate(p.q_per_sec, "q_per_sec");
  check_rate(p.p_c_per_sec, "p_c_per_sec");
  check_rate(p.p_b_per_sec, "p_b_per_sec");
  if (!(p.alpha > 0.0) || !std::isfinite(p.alpha))
    throw std::invalid_argument("validate_params: alpha must be > 0");
  if (!(p.xi > 0.0) || !(p.xi < p.psi) || !(p.psi <= 1.0))
    throw std::invalid_argument("validate_params: need 0 < xi < psi <= 1");
  if (!(p.delta_sec >= 0.0) || !std::isfinite(p.delta_sec))
    throw std::invalid_argument("validate_params: delta_sec must be >= 0");
  if (!(p.eta > 0.0) || !std::isfinite(p.eta))
    throw std::invalid_argument("validate_params: eta must be > 0");
  if (p.step_seconds <= 0)
    throw std::invalid_argument("validate_params: step_seconds must be a positive integer");
  check_step_prob(p.rho_per_sec, p.step_seconds, "rho_per_sec");
  check_step_prob(p.q_per_sec, p.step_seconds, "q_per_sec");
  check_step_prob(p.p_c_per_sec, p.step_seconds, "p_c_per_sec");
  check_step_prob(p.p_b_per_sec, p.step_seconds, "p_b_per_sec");
  return p;
}

Step delta_to_steps(double delta_sec, int step_seconds) {
  if (!(delta_sec >= 0.0))
    throw std::invalid_argument("delta_to_steps: delta_sec must be >= 0");
  if (step_seconds <= 0)
    throw std::invalid_argument("delta_to_steps: step_seconds must be > 0");
  return static_cast<Step>(std::llround(delta_sec / step_seconds));
}

LinkComponent classify_link(Step t_l, Step t_s_prime, Step t_l_prime) {
  if (t_s_prime >= t_l_prime)
    throw std::invalid_argument("classify_link: neighbor interval must have t_s_prime < t_l_prime");
  if (t_l_prime <= t_l) return LinkComponent::direct_only;
  if (t_s_prime >= t_l) return LinkComponent::indirect_only;
  return LinkComponent::both;
}

const char* to_string(LinkComponent c) {
  switch (c) {
    case LinkComponent::direct_only: return "direct";
    case LinkComponent::indirect_only: return "indirect";
    case LinkComponent::both: return "both";
  }
  return "unknown";
}

std::vector<std::size_t> TemporalGraph::copy_link_offsets() const {
  std::vector<std::size_t> offsets(copies.size() + 1, 0);
  for (const SpdtLink& link : links) {
    if (link.copy_index >= copies.size())
      throw std::runtime_error("copy_link_offsets: link references copy " +
                               std::to_string(link.copy_index) + " out of " +
                               std::to_string(copies.size()));
    ++offsets[link.copy_index + 1];
  }
  for (std::size_t i = 1; i < offsets.size(); ++i) offsets[i] += offsets[i - 1];
  return offsets;
}

void TemporalGraph::validate() const {
  auto fail = [](const std::string& what) { throw std::runtime_error("TemporalGraph::validate: " + what); };
  if (step_seconds <= 0) fail("step_seconds must be positive");
  if (delta_steps < 0) fail("delta_steps must be >= 0");
  if (!lambdas.empty() && lambdas.size() != n_nodes)
    fail("lambdas must be empty or one entry per node");
  for (std::size_t i = 0; i < copies.size(); ++i) {
    const ActiveCopy& c = copies[i];
    if (c.host >= n_nodes) fail("copy " + std::to_string(i) + " host out of range");
    if (c.t_s < 0 || c.t_s >= c.t_l) fail("copy " + std::to_string(i) + " needs 0 <= t_s < t_l");
    if (c.t_l > horizon) fail("copy " + std::to_string(i) + " extends past the horizon");
    if (i > 0) {
      const ActiveCopy& prev = copies[i - 1];
      if (c.host < prev.host || (c.host == prev.host && c.copy_id <= prev.copy_id))
        fail("copies must be sorted by (host, copy_id)");
      if (c.host == prev.host && c.t_s <= prev.t_l)
        fail("consecutive copies of host " + std::to_string(c.host) + " must be separated by >= 1 inactive step");
    }
  }
  std::uint32_t prev_copy = 0;
  for (std::size_t i = 0; i < links.size(); ++i) {
    const SpdtLink& l = links[i];
    if (l.copy_index >= copies.size()) fail("link " + std::to_string(i) + " copy_index out of range");
    if (i > 0 && l.copy_index < prev_copy) fail("links must be grouped by ascending copy_index");
    prev_copy = l.copy_index;
    const ActiveCopy& c = copies[l.copy_index];
    if (l.neighbor >= n_nodes) fail("link " + std::to_string(i) + " neighbor out of range");
    if (l.neighbor == c.host) fail("link " + std::to_string(i) + " is a self-link");
    if (l.t_s_prime < c.t_s) fail("link " + std::to_string(i) + " starts before its copy");
    if (l.t_s_prime > c.t_l + delta_steps)
      fail("link " + std::to_string(i) + " starts after the copy expired");
    if (l.t_s_prime >= l.t_l_prime) fail("link " + std::to_string(i) + " needs t_s_prime < t_l_prime");
    if (l.component != classify_link(c.t_l, l.t_s_prime, l.t_l_prime))
      fail("link " + std::to_string(i) + " has a mislabeled component");
  }
}

}  // namespace spdt
