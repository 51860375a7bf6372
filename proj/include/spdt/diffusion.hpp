#pragma once

// Airborne exposure over SPDT links and the daily-batch SIR process.
//
// The simulation consumes a DailyLinkTable: links bucketed by (day, host)
// with precomputed doses, so each day's exposure pass is a flat scan over
// the infected hosts' buckets. Tables come from a materialized graph
// (build_link_table) or stream directly from the BADN walk at scales where
// materializing the graph would not fit in memory (build_badn_link_table);
// both constructions are equivalence-tested.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "spdt/core.hpp"

namespace spdt {

struct DiseaseParams {
  double sigma = 0.33;            // infectiousness per PFU
  double g = 0.304;               // particle generation rate, PFU/s
  double p_pulmonary = 1.25e-4;   // breathing rate, m^3/s (7.5 L/min)
  double V = 2512.0;              // proximity volume, m^3
  double r = 1.0 / 3600.0;        // particle removal rate, 1/s
  int infectious_days_min = 3;
  int infectious_days_max = 5;
  int n_seeds = 500;
  int horizon_days = 32;
  // Attribute a midnight-spanning link to each day it overlaps (clipped)
  // instead of wholly to the day containing t_s'.
  bool split_midnight = false;
};

// Throws std::invalid_argument when a field is out of range.
void validate_disease(const DiseaseParams& dp);

// One link with absolute times in seconds: host present over [t_s, t_l],
// neighbor over [t_s_prime, t_l_prime], with t_s <= t_s_prime (links only
// form at or after the host's arrival).
struct LinkInterval {
  double t_s = 0.0;
  double t_l = 0.0;
  double t_s_prime = 0.0;
  double t_l_prime = 0.0;
};

LinkInterval link_interval(const ActiveCopy& copy, const SpdtLink& link, int step_seconds);

// Inhaled dose (PFU) for one link under the two-phase well-mixed-room model:
// concentration grows toward g/(Vr) while the host is present and decays
// exponentially after departure; the neighbor inhales at rate p_pulmonary.
double link_exposure(const LinkInterval& link, const DiseaseParams& dp);

// Eq.-9 dose response, P = 1 - exp(-sigma * e_t). Negative e_t is an error.
double infection_probability(double e_t, double sigma);

// Links bucketed by (day, host): bucket b = day * n_nodes + host holds the
// entries [offsets[b], offsets[b+1]).
struct DailyLinkTable {
  NodeId n_nodes = 0;
  int horizon_days = 0;
  std::vector<std::uint64_t> offsets;
  std::vector<NodeId> neighbors;
  std::vector<double> exposures;

  std::size_t bucket(int day, NodeId host) const {
    return static_cast<std::size_t>(day) * n_nodes + host;
  }
};

DailyLinkTable build_link_table(const TemporalGraph& g, const DiseaseParams& dp,
                                int workers = 1);

// Streams the BADN realization identified by (n_nodes, activation_p, m,
// horizon, step_seconds, seed) into a table without materializing the graph;
// produces byte-identical results to build_link_table(generate_badn(...)).
DailyLinkTable build_badn_link_table(NodeId n_nodes, double activation_p, int m,
                                     Step horizon, int step_seconds, std::uint64_t seed,
                                     const DiseaseParams& dp, int workers = 1);

struct EpidemicTimeSeries {
  int run_index = 0;
  std::vector<std::int64_t> susceptible;
  std::vector<std::int64_t> infected;       // prevalence I_p per day
  std::vector<std::int64_t> recovered;
  std::vector<std::int64_t> new_infections; // day 0 entry counts the seeds

  std::int64_t total_infected() const;
  std::int64_t peak_prevalence() const;
  int peak_day() const;
};

// Daily-batch SIR over the table: recoveries and pending infections apply at
// day starts; each day every susceptible's dose is summed over links from
// currently infected hosts whose exposure starts that day, and infection is
// decided by P_I at the next day boundary. One RNG stream per run, so results
// are byte-identical for any worker count.
std::vector<EpidemicTimeSeries> run_sir(const DailyLinkTable& table, const DiseaseParams& dp,
                                        std::uint64_t sim_seed, int runs, int workers = 1);
std::vector<EpidemicTimeSeries> run_sir(const TemporalGraph& g, const DiseaseParams& dp,
                                        std::uint64_t sim_seed, int runs, int workers = 1);

}  // namespace spdt
