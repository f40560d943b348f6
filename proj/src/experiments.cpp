#include "eeebundle/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "eeebundle/traffic.hpp"

namespace eeebundle::experiments {

std::string format_g9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

const char* strategy_name(Strategy s) {
    switch (s) {
        case Strategy::Equitable: return "equitable";
        case Strategy::StaticWaterfill: return "waterfill";
        case Strategy::CappedWaterfill: return "capped";
        case Strategy::DynamicWaterfill: return "dynamic";
    }
    return "?";
}

Strategy strategy_from_name(const std::string& name) {
    if (name == "equitable") return Strategy::Equitable;
    if (name == "waterfill") return Strategy::StaticWaterfill;
    if (name == "capped") return Strategy::CappedWaterfill;
    if (name == "dynamic") return Strategy::DynamicWaterfill;
    throw std::invalid_argument("unknown strategy: " + name);
}

namespace {

struct Stats {
    double mean = 0.0;
    double stdev = 0.0;
};

Stats stats_of(const std::vector<double>& xs) {
    Stats s;
    if (xs.empty()) return s;
    for (double x : xs) s.mean += x;
    s.mean /= static_cast<double>(xs.size());
    if (xs.size() > 1) {
        double acc = 0.0;
        for (double x : xs) acc += (x - s.mean) * (x - s.mean);
        s.stdev = std::sqrt(acc / static_cast<double>(xs.size() - 1));
    }
    return s;
}

TraceStream make_stream(const RunSetup& setup, double rate_bps, std::uint64_t seed) {
    if (setup.trace) return *setup.trace;
    const TrafficGen& gen = setup.traffic;
    if (gen.kind == TrafficKind::Poisson)
        return gen_poisson(rate_bps, gen.pkt_size_bytes, setup.duration, seed);
    return gen_pareto(rate_bps, gen.pkt_size_bytes, gen.pareto_shape, setup.duration, seed);
}

}  // namespace

void write_model_csv(std::ostream& os, const GovernorSpec& gov, const LinkParams& link,
                     const std::vector<double>& loads, const std::vector<double>& pkt_sizes) {
    os << "pkt_bytes,rho,toff_s,energy,regime\n";
    for (double pkt : pkt_sizes) {
        TrafficSpec spec;
        spec.mean_service_rate = service_rate_for(link.capacity_bps, pkt);
        spec.distribution = Distribution::PoissonExact;
        for (double rho : loads) {
            spec.load = rho;
            const char* regime = "frame";
            if (gov.kind == GovernorKind::Burst)
                regime = (rho > 0.0 && rho < rho_star(gov, spec)) ? "burst_low" : "burst_high";
            const double t = rho > 0.0 ? toff(spec, gov, link)
                                       : std::numeric_limits<double>::infinity();
            const double e = link_energy(spec, gov, link);
            os << format_g9(pkt) << ',' << format_g9(rho) << ',' << format_g9(t) << ','
               << format_g9(e) << ',' << regime << '\n';
        }
    }
}

void write_share_sweep_csv(std::ostream& os, const RunSetup& setup,
                           const std::vector<double>& agg_loads,
                           const std::vector<double>& shares) {
    const double c = setup.link.capacity_bps;
    const BundleSpec bundle(std::vector<LinkParams>(2, setup.link));
    os << "agg_load,share2,x1_bps,x2_bps,n_seeds,energy_mean,energy_stdev,model_energy\n";
    for (double load : agg_loads) {
        const double demand = load * c;
        if (demand > 2.0 * c)
            throw std::invalid_argument("share sweep: aggregate load exceeds bundle capacity");
        // Clamp each share so the first link stays within capacity; the
        // leftmost feasible point is the water-fill extreme.
        const double min_share = std::max(0.0, (demand - c) / demand);
        std::vector<std::vector<double>> energies(shares.size());
        for (std::uint64_t seed : setup.seeds) {
            const TraceStream stream = make_stream(setup, demand, seed);
            for (std::size_t si = 0; si < shares.size(); ++si) {
                const double s = std::max(shares[si], min_share);
                const double x2 = s * demand;
                const double x1 = demand - x2;
                const SimReport rep = run_bundle_static(stream, bundle, setup.governor,
                                                        {x1, x2}, setup.duration, setup.warmup);
                energies[si].push_back(rep.bundle_energy_normalized);
            }
        }
        for (std::size_t si = 0; si < shares.size(); ++si) {
            const double s = std::max(shares[si], min_share);
            const double x2 = s * demand;
            const double x1 = demand - x2;
            const Stats st = stats_of(energies[si]);
            const double model =
                bundle_energy({x1, x2}, setup.governor, setup.link, setup.traffic.pkt_size_bytes)
                    .per_link;
            os << format_g9(load) << ',' << format_g9(s) << ',' << format_g9(x1) << ','
               << format_g9(x2) << ',' << energies[si].size() << ',' << format_g9(st.mean) << ','
               << format_g9(st.stdev) << ',' << format_g9(model) << '\n';
        }
    }
}

void write_bundle_sweep_csv(std::ostream& os, const RunSetup& setup, std::size_t n_links,
                            const std::vector<double>& agg_loads,
                            const std::vector<Strategy>& strategies,
                            double dynamic_target_delay) {
    const BundleSpec bundle(std::vector<LinkParams>(n_links, setup.link));
    const double total = bundle.total_capacity();
    os << "n_links,agg_load,strategy,n_seeds,energy_mean,energy_stdev,delay_mean_s,model_energy\n";
    for (double load : agg_loads) {
        const double demand = load * total;
        std::vector<std::vector<double>> energies(strategies.size());
        std::vector<std::vector<double>> delays(strategies.size());
        for (std::uint64_t seed : setup.seeds) {
            const TraceStream stream = make_stream(setup, demand, seed);
            for (std::size_t si = 0; si < strategies.size(); ++si) {
                DispatcherConfig config;
                config.strategy = strategies[si];
                config.expected_delay = dynamic_target_delay;
                const SimReport rep =
                    run_bundle(stream, bundle, setup.governor, config, setup.duration, setup.warmup);
                energies[si].push_back(rep.bundle_energy_normalized);
                delays[si].push_back(rep.mean_delay);
            }
        }
        for (std::size_t si = 0; si < strategies.size(); ++si) {
            const Stats es = stats_of(energies[si]);
            const Stats ds = stats_of(delays[si]);
            double model = std::numeric_limits<double>::quiet_NaN();
            if (strategies[si] != Strategy::DynamicWaterfill) {
                AllocationVector alloc;
                switch (strategies[si]) {
                    case Strategy::Equitable: alloc = equitable(bundle, demand); break;
                    case Strategy::StaticWaterfill: alloc = waterfill(bundle, demand); break;
                    case Strategy::CappedWaterfill: alloc = waterfill_capped(bundle, demand); break;
                    case Strategy::DynamicWaterfill: break;
                }
                model = bundle_energy(alloc.rates, setup.governor, setup.link,
                                      setup.traffic.pkt_size_bytes)
                            .per_link;
            }
            os << n_links << ',' << format_g9(load) << ',' << strategy_name(strategies[si]) << ','
               << energies[si].size() << ',' << format_g9(es.mean) << ',' << format_g9(es.stdev)
               << ',' << format_g9(ds.mean) << ',' << format_g9(model) << '\n';
        }
    }
}

void write_delay_sweep_csv(std::ostream& os, const RunSetup& setup, std::size_t n_links,
                           double agg_load, const std::vector<double>& targets) {
    const BundleSpec bundle(std::vector<LinkParams>(n_links, setup.link));
    const double demand = agg_load * bundle.total_capacity();
    os << "target_s,n_seeds,measured_delay_s,energy_mean\n";
    for (double target : targets) {
        std::vector<double> delays, energies;
        for (std::uint64_t seed : setup.seeds) {
            const TraceStream stream = make_stream(setup, demand, seed);
            DispatcherConfig config;
            config.strategy = Strategy::DynamicWaterfill;
            config.expected_delay = target;
            const SimReport rep =
                run_bundle(stream, bundle, setup.governor, config, setup.duration, setup.warmup);
            delays.push_back(rep.mean_delay);
            energies.push_back(rep.bundle_energy_normalized);
        }
        os << format_g9(target) << ',' << delays.size() << ',' << format_g9(stats_of(delays).mean)
           << ',' << format_g9(stats_of(energies).mean) << '\n';
    }
}

void write_table(std::ostream& os, const RunSetup& setup, const std::vector<double>& rates_gbps,
                 double max_utilization, double dyn_frame_delay, double dyn_burst_delay) {
    const BundleSpec bundle(std::vector<LinkParams>(4, setup.link), max_utilization);
    char buf[160];
    os << "Bundle  Strategy          Link#1  Link#2  Link#3  Link#4  (Gb/s)\n";
    auto row = [&](const char* bundle_rate, const char* name, const std::vector<double>& rates) {
        std::snprintf(buf, sizeof buf, "%-7s %-16s %6.2f  %6.2f  %6.2f  %6.2f\n", bundle_rate,
                      name, rates[0] / 1e9, rates[1] / 1e9, rates[2] / 1e9, rates[3] / 1e9);
        os << buf;
    };
    for (double gbps : rates_gbps) {
        const double demand = gbps * 1e9;
        char head[32];
        std::snprintf(head, sizeof head, "%.2f", gbps);
        row(head, "Equitable", equitable(bundle, demand).rates);
        row("", "Naive Water-fill", waterfill_capped(bundle, demand).rates);
        for (int burst = 0; burst < 2; ++burst) {
            const GovernorSpec gov = burst ? GovernorSpec::burst(20, 100e-6) : GovernorSpec::frame();
            DispatcherConfig config;
            config.strategy = Strategy::DynamicWaterfill;
            config.expected_delay = burst ? dyn_burst_delay : dyn_frame_delay;
            const TraceStream stream = make_stream(setup, demand, setup.seeds.at(0));
            const SimReport rep =
                run_bundle(stream, bundle, gov, config, setup.duration, setup.warmup);
            row("", burst ? "Dyn. Burst" : "Dyn. Frame", rep.per_link_carried);
        }
        os << '\n';
    }
}

void write_concavity_csv(std::ostream& os, const LinkParams& link, const GovernorSpec& burst_gov,
                         const std::vector<double>& pkt_sizes, const std::vector<double>& loads) {
    static const std::pair<ToffCurve, const char*> curves[] = {
        {ToffCurve::FramePoisson, "frame_poisson"},
        {ToffCurve::FrameApprox, "frame_approx"},
        {ToffCurve::BurstLow, "burst_low"},
        {ToffCurve::BurstHighApprox, "burst_high_approx"},
        {ToffCurve::BurstHighPoisson, "burst_high_poisson"},
    };
    const double b = link.transition_time();
    os << "curve,pkt_bytes,rho,margin\n";
    for (const auto& [curve, name] : curves) {
        for (double pkt : pkt_sizes) {
            const double mu = service_rate_for(link.capacity_bps, pkt);
            for (double rho : loads) {
                auto f = [&](double r) { return toff_curve(curve, mu, r, burst_gov, link); };
                const double m = concavity_margin_fd(f, b, rho);
                os << name << ',' << format_g9(pkt) << ',' << format_g9(rho) << ','
                   << format_g9(m) << '\n';
            }
        }
    }
}

}  // namespace eeebundle::experiments
