#pragma once

#include <cstddef>
#include <vector>

#include "eeebundle/allocator.hpp"
#include "eeebundle/link_sim.hpp"
#include "eeebundle/traffic.hpp"
#include "eeebundle/types.hpp"

namespace eeebundle {

enum class Strategy { Equitable, StaticWaterfill, CappedWaterfill, DynamicWaterfill };

struct DispatcherConfig {
    Strategy strategy = Strategy::StaticWaterfill;
    double expected_delay = 0.0;  // d_e, DynamicWaterfill only
    double beta = 0.1;            // EWMA gain
    // Update d_av with the chosen queue's delay after adding the new frame
    // instead of before (sensitivity variant).
    bool ewma_post_enqueue = false;

    void validate() const {
        if (strategy == Strategy::DynamicWaterfill) {
            if (expected_delay <= 0.0)
                throw std::invalid_argument("DispatcherConfig: expected_delay must be > 0");
            if (beta <= 0.0 || beta >= 1.0)
                throw std::invalid_argument("DispatcherConfig: beta must be in (0,1)");
        }
    }
};

struct DispatcherState {
    double d_av = 0.0;                 // EWMA of sampled queue delays
    std::vector<double> queue_delays;  // q_i, in fill order
    std::vector<double> capacities_bps;  // only needed for the post-enqueue variant
};

// Dynamic water-filling selection: queue 1 while d_av < d_e, otherwise the
// first queue with q_i < d_e, otherwise the last one. Updates d_av once.
std::size_t dispatch_frame(DispatcherState& state, const DispatcherConfig& config,
                           const FrameEvent& frame);

struct SimReport {
    std::vector<double> per_link_energy;    // normalized, original link order
    double bundle_energy_normalized = 0.0;  // mean over links
    std::vector<double> per_link_carried;   // bits/s actually transmitted
    double mean_delay = 0.0;                // seconds, over transmitted frames
    double offered_bytes = 0.0;
    double transmitted_bytes = 0.0;
    double residual_backlog_bytes = 0.0;
    DispatcherConfig config_echo;
};

// Simulate the whole bundle under the configured dispatch strategy.
// Static strategies realize their AllocationVector with a seeded
// rate-weighted random pick per frame (Poisson-preserving thinning); the
// dynamic strategy decides per arrival.
// Statistics collected over [warmup, duration].
SimReport run_bundle(const TraceStream& stream, const BundleSpec& bundle,
                     const GovernorSpec& gov, const DispatcherConfig& config, double duration,
                     double warmup = 0.0);

// Static split with explicit per-link target rates (original link order).
SimReport run_bundle_static(const TraceStream& stream, const BundleSpec& bundle,
                            const GovernorSpec& gov, const std::vector<double>& rates,
                            double duration, double warmup = 0.0);

// One dynamic run per target delay; returns (target, measured mean delay).
std::vector<std::pair<double, double>> measure_delay_tracking(
    const TraceStream& stream, const BundleSpec& bundle, const GovernorSpec& gov,
    const std::vector<double>& targets, double duration, double warmup = 0.0, double beta = 0.1);

}  // namespace eeebundle
