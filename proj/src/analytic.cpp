#include "eeebundle/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "eeebundle/gamma.hpp"

namespace eeebundle {

namespace {

void require_positive_load(const TrafficSpec& spec) {
    spec.validate();
    if (spec.load <= 0.0)
        throw std::domain_error("toff: load must be > 0 (use link_energy for the rho=0 limit)");
}

}  // namespace

double toff_frame(const TrafficSpec& spec, const LinkParams& params) {
    require_positive_load(spec);
    params.validate();
    const double lambda = spec.mean_service_rate * spec.load;
    if (spec.distribution == Distribution::PoissonExact)
        return std::exp(-lambda * params.ts) / lambda;
    return std::max(0.0, 1.0 / lambda - params.ts);
}

double toff_burst_low(const TrafficSpec& spec, const GovernorSpec& gov, const LinkParams& params) {
    require_positive_load(spec);
    params.validate();
    if (gov.kind != GovernorKind::Burst)
        throw std::invalid_argument("toff_burst_low: burst governor required");
    gov.validate();
    const double lambda = spec.mean_service_rate * spec.load;
    return std::max(0.0, 1.0 / lambda + gov.tmax - params.ts);
}

double toff_burst_high(const TrafficSpec& spec, const GovernorSpec& gov, const LinkParams& params) {
    require_positive_load(spec);
    params.validate();
    if (gov.kind != GovernorKind::Burst)
        throw std::invalid_argument("toff_burst_high: burst governor required");
    gov.validate();
    const double lambda = spec.mean_service_rate * spec.load;
    if (spec.distribution == Distribution::GeneralApprox)
        return std::max(0.0, gov.qw / lambda - params.ts);
    const double z = lambda * params.ts;
    const double qw = static_cast<double>(gov.qw);
    const double num = gamma_upper(qw + 1.0, z) - z * gamma_upper(qw, z);
    return std::max(0.0, num / (lambda * std::tgamma(qw)));
}

double rho_star(const GovernorSpec& gov, const TrafficSpec& spec) {
    if (gov.kind != GovernorKind::Burst)
        throw std::invalid_argument("rho_star: burst governor required");
    gov.validate();
    if (spec.mean_service_rate <= 0.0)
        throw std::invalid_argument("rho_star: mean_service_rate must be > 0");
    const double r = (gov.qw - 1.0) / (spec.mean_service_rate * gov.tmax);
    return std::clamp(r, 0.0, 1.0);
}

double toff(const TrafficSpec& spec, const GovernorSpec& gov, const LinkParams& params) {
    if (gov.kind == GovernorKind::Frame) return toff_frame(spec, params);
    // Strict inequality: rho == rho* falls in the high-load regime.
    if (spec.load < rho_star(gov, spec)) return toff_burst_low(spec, gov, params);
    return toff_burst_high(spec, gov, params);
}

double link_energy(const TrafficSpec& spec, const GovernorSpec& gov, const LinkParams& params) {
    spec.validate();
    params.validate();
    gov.validate();
    // T_off -> infinity as rho -> 0 for every governor, so E -> sigma_off.
    if (spec.load == 0.0) return params.sigma_off;
    const double t = toff(spec, gov, params);
    const double h = t / (t + params.transition_time());
    return 1.0 - (1.0 - params.sigma_off) * (1.0 - spec.load) * h;
}

BundleEnergy bundle_energy(const std::vector<double>& rates_bps, const GovernorSpec& gov,
                           const LinkParams& params, double pkt_size_bytes) {
    return bundle_energy(rates_bps, gov, std::vector<LinkParams>(rates_bps.size(), params),
                         pkt_size_bytes);
}

BundleEnergy bundle_energy(const std::vector<double>& rates_bps, const GovernorSpec& gov,
                           const std::vector<LinkParams>& links, double pkt_size_bytes) {
    if (rates_bps.size() != links.size())
        throw std::invalid_argument("bundle_energy: rates/links size mismatch");
    if (rates_bps.empty()) throw std::invalid_argument("bundle_energy: empty bundle");
    if (pkt_size_bytes <= 0.0) throw std::invalid_argument("bundle_energy: pkt_size must be > 0");
    BundleEnergy e;
    for (std::size_t i = 0; i < rates_bps.size(); ++i) {
        const double c = links[i].capacity_bps;
        if (rates_bps[i] < 0.0 || rates_bps[i] > c * (1.0 + 1e-9))
            throw std::invalid_argument("bundle_energy: rate outside [0, C]");
        TrafficSpec spec;
        spec.mean_service_rate = service_rate_for(c, pkt_size_bytes);
        spec.load = std::min(1.0, rates_bps[i] / c);
        e.raw += link_energy(spec, gov, links[i]);
    }
    e.per_link = e.raw / static_cast<double>(rates_bps.size());
    return e;
}

double toff_curve(ToffCurve curve, double mu, double rho, const GovernorSpec& gov,
                  const LinkParams& params) {
    if (mu <= 0.0 || rho <= 0.0)
        throw std::domain_error("toff_curve: mu and rho must be > 0");
    const double lambda = mu * rho;
    switch (curve) {
        case ToffCurve::FramePoisson:
            return std::exp(-lambda * params.ts) / lambda;
        case ToffCurve::FrameApprox:
            return 1.0 / lambda - params.ts;
        case ToffCurve::BurstLow:
            return 1.0 / lambda + gov.tmax - params.ts;
        case ToffCurve::BurstHighApprox:
            return gov.qw / lambda - params.ts;
        case ToffCurve::BurstHighPoisson: {
            const double z = lambda * params.ts;
            const double qw = static_cast<double>(gov.qw);
            return (gamma_upper(qw + 1.0, z) - z * gamma_upper(qw, z)) /
                   (lambda * std::tgamma(qw));
        }
    }
    throw std::logic_error("toff_curve: unknown curve");
}

double concavity_margin(double f, double fprime, double fsecond, double b) {
    return fsecond * (f + b) - 2.0 * fprime * fprime;
}

double concavity_margin_fd(const std::function<double(double)>& f, double b, double x, double h) {
    if (h <= 0.0) throw std::invalid_argument("concavity_margin_fd: h must be > 0");
    if (x - 2.0 * h <= 0.0 || x + 2.0 * h >= 1.0)
        throw std::domain_error("concavity_margin_fd: x within 2h of the domain edge");
    const double fm = f(x - h);
    const double f0 = f(x);
    const double fp = f(x + h);
    const double d1 = (fp - fm) / (2.0 * h);
    const double d2 = (fp - 2.0 * f0 + fm) / (h * h);
    return concavity_margin(f0, d1, d2, b);
}

std::vector<std::vector<double>> energy_second_derivative_grid(
    ToffCurve curve, const GovernorSpec& gov, const LinkParams& params,
    const std::vector<double>& pkt_sizes_bytes, const std::vector<double>& loads, double h) {
    params.validate();
    const double b = params.transition_time();
    std::vector<std::vector<double>> out;
    out.reserve(pkt_sizes_bytes.size());
    for (double pkt : pkt_sizes_bytes) {
        if (pkt < 64.0 || pkt > 9000.0)
            throw std::invalid_argument("energy_second_derivative_grid: pkt size outside [64, 9000]");
        const double mu = service_rate_for(params.capacity_bps, pkt);
        std::vector<double> row;
        row.reserve(loads.size());
        for (double rho : loads) {
            if (rho <= 0.0 || rho >= 1.0)
                throw std::invalid_argument("energy_second_derivative_grid: load outside (0,1)");
            if (rho - 2.0 * h <= 0.0 || rho + 2.0 * h >= 1.0)
                throw std::domain_error("energy_second_derivative_grid: load within 2h of edge");
            auto hfun = [&](double r) {
                const double t = toff_curve(curve, mu, r, gov, params);
                return t / (t + b);
            };
            row.push_back((hfun(rho + h) - 2.0 * hfun(rho) + hfun(rho - h)) / (h * h));
        }
        out.push_back(std::move(row));
    }
    return out;
}

}  // namespace eeebundle
