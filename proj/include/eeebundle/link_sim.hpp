#pragma once

#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <utility>

#include "eeebundle/traffic.hpp"
#include "eeebundle/types.hpp"

namespace eeebundle {

enum class LinkMode { Active, Sleeping, Idle, Waking };

// Time spent in each mode. Transitions (Sleeping/Waking) draw full power;
// only Idle draws sigma_off.
struct EnergyAccumulator {
    double active_time = 0.0;
    double sleeping_time = 0.0;
    double idle_time = 0.0;
    double waking_time = 0.0;
    std::uint64_t idle_periods = 0;

    double total() const { return active_time + sleeping_time + idle_time + waking_time; }
    double normalized_energy(double sigma_off) const {
        const double t = total();
        if (t <= 0.0) return sigma_off;
        return (active_time + sleeping_time + waking_time + sigma_off * idle_time) / t;
    }
    double mean_idle_period() const {
        return idle_periods ? idle_time / static_cast<double>(idle_periods) : 0.0;
    }
};

// Per-frame wait is transmission-start time minus arrival time.
struct DelayAccumulator {
    double total_wait = 0.0;
    std::uint64_t frames = 0;

    double mean() const { return frames ? total_wait / static_cast<double>(frames) : 0.0; }
};

// Wake rule evaluated while Idle. Frame: any queued frame. Burst: qw frames
// queued, or tmax elapsed since the first arrival of this sleep cycle.
bool governor_wake_decision(std::size_t queue_len, std::optional<double> first_arrival,
                            double now, const GovernorSpec& gov);

// One EEE link: FIFO queue, transmitter and the sleep state machine
// Active -> Sleeping(Ts) -> Idle -> Waking(Tw) -> Active. Driven externally
// by run_until / enqueue so several links can share a bundle clock.
class LinkMachine {
  public:
    static constexpr std::size_t kMaxBacklogFrames = 1'000'000;

    LinkMachine(const LinkParams& params, const GovernorSpec& gov);

    // Time of the next internal transition; +inf when quiescent.
    double next_event_time() const;

    // Process internal events up to and including t, then account time to t.
    void run_until(double t);

    // Hand an arrival to this link. run_until(f.timestamp) must have been
    // called first so mode changes at equal timestamps happen before it.
    void enqueue(const FrameEvent& f);

    // Queued plus in-flight backlog at time t >= now, in seconds at line rate.
    double backlog_seconds(double t) const;

    // Warm-up boundary: zero all statistics, keep the machine state.
    void reset_accounting();

    double now() const { return now_; }
    LinkMode mode() const { return mode_; }
    std::size_t queued_frames() const { return queue_.size(); }
    double queued_bytes() const { return queued_bits_ / 8.0; }
    double transmitted_bytes() const { return transmitted_bytes_; }
    const EnergyAccumulator& energy() const { return energy_; }
    const DelayAccumulator& delay() const { return delay_; }
    const LinkParams& params() const { return params_; }

  private:
    void handle_event(double t);
    void start_transmission(double t);
    void enter_sleep(double t);
    void begin_wake(double t);
    void account(double dt);

    LinkParams params_;
    GovernorSpec gov_;
    double now_ = 0.0;
    LinkMode mode_ = LinkMode::Sleeping;
    double mode_end_ = 0.0;    // Sleeping/Waking completion
    double busy_until_ = 0.0;  // Active: current transmission end
    std::deque<FrameEvent> queue_;
    double queued_bits_ = 0.0;
    std::optional<double> first_arrival_;  // first arrival of the current sleep cycle
    double transmitted_bytes_ = 0.0;
    EnergyAccumulator energy_;
    DelayAccumulator delay_;
};

// Run one link over a full stream. Arrivals at or beyond duration are rejected.
std::pair<EnergyAccumulator, DelayAccumulator> simulate_link(const TraceStream& stream,
                                                             const LinkParams& params,
                                                             const GovernorSpec& gov,
                                                             double duration);

}  // namespace eeebundle
