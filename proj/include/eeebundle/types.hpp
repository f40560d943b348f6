#pragma once

#include <cstdint>
#include <stdexcept>

namespace eeebundle {

// Hardware profile of a single EEE link. Defaults correspond to a
// 10GBASE-T interface (Ts/Tw from the 802.3az estimates).
struct LinkParams {
    double capacity_bps = 10e9;
    double ts = 2.88e-6;      // sleep transition, seconds
    double tw = 4.48e-6;      // wake transition, seconds
    double sigma_off = 0.1;   // idle power relative to active

    void validate() const {
        if (capacity_bps <= 0.0) throw std::invalid_argument("LinkParams: capacity_bps must be > 0");
        if (ts <= 0.0) throw std::invalid_argument("LinkParams: ts must be > 0");
        if (tw <= 0.0) throw std::invalid_argument("LinkParams: tw must be > 0");
        if (sigma_off < 0.0 || sigma_off >= 1.0)
            throw std::invalid_argument("LinkParams: sigma_off must be in [0,1)");
    }

    // b = Ts + Tw, the combined transition overhead of one sleep cycle.
    double transition_time() const { return ts + tw; }
};

enum class GovernorKind { Frame, Burst };

// Sleep-governor configuration. Frame transmission sleeps as soon as the
// queue drains and wakes on the first arrival. Burst transmission coalesces
// up to qw frames, bounded by the tmax timer since the first arrival.
struct GovernorSpec {
    GovernorKind kind = GovernorKind::Frame;
    int qw = 20;
    double tmax = 100e-6;

    static GovernorSpec frame() { return GovernorSpec{GovernorKind::Frame, 0, 0.0}; }
    static GovernorSpec burst(int qw, double tmax) {
        GovernorSpec g{GovernorKind::Burst, qw, tmax};
        g.validate();
        return g;
    }

    void validate() const {
        if (kind == GovernorKind::Burst) {
            if (qw < 1) throw std::invalid_argument("GovernorSpec: burst requires qw >= 1");
            if (tmax <= 0.0) throw std::invalid_argument("GovernorSpec: burst requires tmax > 0");
        }
    }
};

enum class Distribution { PoissonExact, GeneralApprox };

// Offered traffic as seen by the analytic model: mu is the reciprocal of
// the mean packet transmission time, load is the normalized rate x/C.
struct TrafficSpec {
    double mean_service_rate = 0.0;   // packets per second
    double load = 0.0;                // in [0, 1]
    Distribution distribution = Distribution::PoissonExact;

    void validate() const {
        if (mean_service_rate <= 0.0)
            throw std::invalid_argument("TrafficSpec: mean_service_rate must be > 0");
        if (load < 0.0 || load > 1.0)
            throw std::invalid_argument("TrafficSpec: load must be in [0,1]");
    }
};

// mu for a fixed packet size: C / (8 * pkt_size).
inline double service_rate_for(double capacity_bps, double pkt_size_bytes) {
    return capacity_bps / (8.0 * pkt_size_bytes);
}

// One packet arrival; the unit of every traffic stream.
struct FrameEvent {
    double timestamp = 0.0;   // seconds since stream start
    std::uint32_t size = 0;   // bytes
};

}  // namespace eeebundle
