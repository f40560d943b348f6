#pragma once

#include <functional>
#include <vector>

#include "eeebundle/types.hpp"

namespace eeebundle {

// Mean idle-state sojourn time under the frame-transmission governor.
// PoissonExact: e^{-mu rho Ts} / (mu rho). GeneralApprox: (1/(mu rho) - Ts)^+.
double toff_frame(const TrafficSpec& spec, const LinkParams& params);

// Burst governor, low-load (timer-driven) regime: 1/(mu rho) + Tmax - Ts.
// The approximation is exact for Poisson arrivals.
double toff_burst_low(const TrafficSpec& spec, const GovernorSpec& gov, const LinkParams& params);

// Burst governor, high-load (count-driven) regime.
// GeneralApprox: (Qw/(mu rho) - Ts)^+. PoissonExact:
//   [Gamma(Qw+1, mu rho Ts) - mu rho Ts Gamma(Qw, mu rho Ts)] / (mu rho Gamma(Qw)).
double toff_burst_high(const TrafficSpec& spec, const GovernorSpec& gov, const LinkParams& params);

// Load threshold separating the burst regimes: (Qw - 1)/(mu Tmax), clamped to [0,1].
double rho_star(const GovernorSpec& gov, const TrafficSpec& spec);

// Regime dispatcher: frame, burst-low if rho < rho*, burst-high otherwise.
double toff(const TrafficSpec& spec, const GovernorSpec& gov, const LinkParams& params);

// Normalized link power E(rho) = 1 - (1 - sigma_off)(1 - rho) T/(T + Ts + Tw).
// The rho = 0 limit (sigma_off) and rho = 1 are handled internally.
double link_energy(const TrafficSpec& spec, const GovernorSpec& gov, const LinkParams& params);

struct BundleEnergy {
    double raw = 0.0;        // sum over links
    double per_link = 0.0;   // raw / N
};

// Analytic bundle energy for identical links carrying the given per-link
// rates (bits/s). mu is derived from pkt_size_bytes.
BundleEnergy bundle_energy(const std::vector<double>& rates_bps, const GovernorSpec& gov,
                           const LinkParams& params, double pkt_size_bytes);

// Heterogeneous-capacity variant: one LinkParams per rate.
BundleEnergy bundle_energy(const std::vector<double>& rates_bps, const GovernorSpec& gov,
                           const std::vector<LinkParams>& links, double pkt_size_bytes);

// Smooth T_off branches used for derivative work. These deliberately omit
// the positive-part clamps so that finite differences see the analytic curve.
enum class ToffCurve { FramePoisson, FrameApprox, BurstLow, BurstHighApprox, BurstHighPoisson };

double toff_curve(ToffCurve curve, double mu, double rho, const GovernorSpec& gov,
                  const LinkParams& params);

// Sufficient-condition margin f''(x)(f(x) + b) - 2 f'(x)^2; a positive value
// certifies concavity of the link cost at x.
double concavity_margin(double f, double fprime, double fsecond, double b);

// Finite-difference variant with central differences of step h.
inline constexpr double kFdStep = 1e-4;
double concavity_margin_fd(const std::function<double(double)>& f, double b, double x,
                           double h = kFdStep);

// Central-difference second derivative of h(rho) = T/(T + Ts + Tw) on a
// (pkt_size x load) grid; result[i][j] pairs pkt_sizes[i] with loads[j].
std::vector<std::vector<double>> energy_second_derivative_grid(
    ToffCurve curve, const GovernorSpec& gov, const LinkParams& params,
    const std::vector<double>& pkt_sizes_bytes, const std::vector<double>& loads,
    double h = kFdStep);

}  // namespace eeebundle
