#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "eeebundle/analytic.hpp"
#include "eeebundle/bundle_sim.hpp"
#include "eeebundle/types.hpp"

namespace eeebundle::experiments {

// Numeric CSV formatting: 9 significant digits, text-exact across reruns.
std::string format_g9(double v);

enum class TrafficKind { Poisson, Pareto };

struct TrafficGen {
    TrafficKind kind = TrafficKind::Poisson;
    double pareto_shape = 2.5;
    std::uint32_t pkt_size_bytes = 1000;
};

struct RunSetup {
    LinkParams link;
    GovernorSpec governor;
    TrafficGen traffic;
    // When set, this stream is replayed instead of generating traffic; the
    // requested rate and seed are ignored.
    const TraceStream* trace = nullptr;
    double duration = 10.0;
    double warmup = 1.0;
    std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
};

// E(rho) and T_off(rho) curves; one row per (pkt, rho) with a regime tag.
void write_model_csv(std::ostream& os, const GovernorSpec& gov, const LinkParams& link,
                     const std::vector<double>& loads, const std::vector<double>& pkt_sizes);

// 2-link bundle: for each aggregate load (fraction of one link capacity) and
// second-link share of the total, seeds are run and mean/stdev energy emitted
// next to the analytic value.
void write_share_sweep_csv(std::ostream& os, const RunSetup& setup,
                           const std::vector<double>& agg_loads,
                           const std::vector<double>& shares);

// N-link bundle, strategy comparison over an aggregate-load grid (fraction
// of total bundle capacity).
void write_bundle_sweep_csv(std::ostream& os, const RunSetup& setup, std::size_t n_links,
                            const std::vector<double>& agg_loads,
                            const std::vector<Strategy>& strategies,
                            double dynamic_target_delay);

// Dynamic dispatcher: one row per target delay with measured delay and energy.
void write_delay_sweep_csv(std::ostream& os, const RunSetup& setup, std::size_t n_links,
                           double agg_load, const std::vector<double>& targets);

// Per-link carried rates for a 4-link bundle at the given aggregate rates:
// equitable and capped water-fill rows from arithmetic, dynamic rows from
// simulation.
void write_table(std::ostream& os, const RunSetup& setup, const std::vector<double>& rates_gbps,
                 double max_utilization, double dyn_frame_delay, double dyn_burst_delay);

// Concavity margin of every model variant over the standard grid; one row
// per (curve, pkt, rho).
void write_concavity_csv(std::ostream& os, const LinkParams& link, const GovernorSpec& burst_gov,
                         const std::vector<double>& pkt_sizes, const std::vector<double>& loads);

const char* strategy_name(Strategy s);
Strategy strategy_from_name(const std::string& name);

}  // namespace eeebundle::experiments
