#include "eeebundle/bundle_sim.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace eeebundle {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Seeded rate-weighted random pick. Independent per-frame selection thins a
// Poisson stream into independent Poisson streams, which is what the analytic
// per-link model assumes; a deterministic round-robin would feed each link a
// more regular process and bias its idle periods short. The fixed seed keeps
// runs reproducible.
class WeightedPicker {
  public:
    WeightedPicker(std::vector<double> rates, std::size_t fallback)
        : rates_(std::move(rates)), fallback_(fallback), rng_(0x9e3779b97f4a7c15ULL) {
        for (std::size_t i = 0; i < rates_.size(); ++i)
            if (rates_[i] > 0.0) {
                total_ += rates_[i];
                last_positive_ = i;
            }
    }

    std::size_t pick(std::uint32_t /*size*/) {
        if (total_ <= 0.0) return fallback_;
        const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53 * total_;
        double acc = 0.0;
        for (std::size_t i = 0; i < rates_.size(); ++i) {
            if (rates_[i] <= 0.0) continue;
            acc += rates_[i];
            if (u < acc) return i;
        }
        return last_positive_;
    }

  private:
    std::vector<double> rates_;
    std::size_t fallback_;
    std::size_t last_positive_ = 0;
    double total_ = 0.0;
    std::mt19937_64 rng_;
};

}  // namespace

std::size_t dispatch_frame(DispatcherState& state, const DispatcherConfig& config,
                           const FrameEvent& frame) {
    const std::size_t n = state.queue_delays.size();
    if (n == 0) throw std::invalid_argument("dispatch_frame: no links");
    std::size_t sel = 0;
    if (state.d_av >= config.expected_delay) {
        sel = n - 1;
        for (std::size_t i = 0; i < n; ++i) {
            if (state.queue_delays[i] < config.expected_delay) {
                sel = i;
                break;
            }
        }
    }
    double q = state.queue_delays[sel];
    if (config.ewma_post_enqueue) {
        if (state.capacities_bps.size() != n)
            throw std::invalid_argument("dispatch_frame: post-enqueue update needs capacities");
        q += 8.0 * frame.size / state.capacities_bps[sel];
    }
    state.d_av = config.beta * q + (1.0 - config.beta) * state.d_av;
    return sel;
}

namespace {

SimReport run_core(const TraceStream& stream, const BundleSpec& bundle, const GovernorSpec& gov,
                   const DispatcherConfig& config, const std::vector<double>* static_rates,
                   double duration, double warmup) {
    if (duration <= 0.0) throw std::invalid_argument("run_bundle: duration must be > 0");
    if (warmup < 0.0 || warmup >= duration)
        throw std::invalid_argument("run_bundle: warmup must be in [0, duration)");
    config.validate();
    const std::size_t n = bundle.size();
    const auto& order = bundle.fill_order();
    const bool dynamic = static_rates == nullptr;

    std::vector<LinkMachine> machines;
    machines.reserve(n);
    for (const auto& l : bundle.links()) machines.emplace_back(l, gov);

    DispatcherState st;
    st.queue_delays.assign(n, 0.0);
    st.capacities_bps.resize(n);
    for (std::size_t k = 0; k < n; ++k)
        st.capacities_bps[k] = bundle.links()[order[k]].capacity_bps;

    WeightedPicker rr(dynamic ? std::vector<double>() : *static_rates, order[0]);

    double offered_bytes = 0.0;
    std::size_t ai = 0;
    bool warm_done = warmup <= 0.0;
    for (;;) {
        double tev = kInf;
        std::size_t iev = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double e = machines[i].next_event_time();
            if (e < tev) {
                tev = e;
                iev = i;
            }
        }
        const double tarr = ai < stream.events.size() ? stream.events[ai].timestamp : kInf;
        const double tnext = std::min(tev, tarr);
        if (!warm_done && tnext >= warmup) {
            for (auto& m : machines) m.run_until(warmup);
            for (auto& m : machines) m.reset_accounting();
            warm_done = true;
            continue;
        }
        if (tnext >= duration) break;
        if (tev <= tarr) {
            machines[iev].run_until(tev);
            continue;
        }
        const FrameEvent& f = stream.events[ai++];
        if (f.timestamp >= duration)
            throw std::invalid_argument("run_bundle: arrival beyond duration");
        std::size_t target;
        if (dynamic) {
            for (auto& m : machines) m.run_until(tarr);
            for (std::size_t k = 0; k < n; ++k)
                st.queue_delays[k] = machines[order[k]].backlog_seconds(tarr);
            target = order[dispatch_frame(st, config, f)];
        } else {
            target = rr.pick(f.size);
            machines[target].run_until(tarr);
        }
        machines[target].enqueue(f);
        if (warm_done) offered_bytes += f.size;
    }
    for (auto& m : machines) m.run_until(duration);

    SimReport r;
    r.config_echo = config;
    const double window = duration - (warmup > 0.0 ? warmup : 0.0);
    double wait = 0.0, energy_sum = 0.0;
    std::uint64_t frames = 0;
    for (const auto& m : machines) {
        const double e = m.energy().normalized_energy(m.params().sigma_off);
        r.per_link_energy.push_back(e);
        energy_sum += e;
        r.per_link_carried.push_back(8.0 * m.transmitted_bytes() / window);
        wait += m.delay().total_wait;
        frames += m.delay().frames;
        r.transmitted_bytes += m.transmitted_bytes();
        r.residual_backlog_bytes += m.queued_bytes();
    }
    r.bundle_energy_normalized = energy_sum / static_cast<double>(n);
    r.mean_delay = frames ? wait / static_cast<double>(frames) : 0.0;
    r.offered_bytes = offered_bytes;
    return r;
}

}  // namespace

SimReport run_bundle(const TraceStream& stream, const BundleSpec& bundle, const GovernorSpec& gov,
                     const DispatcherConfig& config, double duration, double warmup) {
    if (config.strategy == Strategy::DynamicWaterfill)
        return run_core(stream, bundle, gov, config, nullptr, duration, warmup);
    const double demand = stream.mean_rate_bps();
    AllocationVector alloc;
    switch (config.strategy) {
        case Strategy::Equitable: alloc = equitable(bundle, demand); break;
        case Strategy::StaticWaterfill: alloc = waterfill(bundle, demand); break;
        case Strategy::CappedWaterfill: alloc = waterfill_capped(bundle, demand); break;
        case Strategy::DynamicWaterfill: break;  // handled above
    }
    return run_core(stream, bundle, gov, config, &alloc.rates, duration, warmup);
}

SimReport run_bundle_static(const TraceStream& stream, const BundleSpec& bundle,
                            const GovernorSpec& gov, const std::vector<double>& rates,
                            double duration, double warmup) {
    if (rates.size() != bundle.size())
        throw std::invalid_argument("run_bundle_static: rates size mismatch");
    DispatcherConfig config;
    config.strategy = Strategy::StaticWaterfill;  // echoed only; rates are explicit
    return run_core(stream, bundle, gov, config, &rates, duration, warmup);
}

std::vector<std::pair<double, double>> measure_delay_tracking(
    const TraceStream& stream, const BundleSpec& bundle, const GovernorSpec& gov,
    const std::vector<double>& targets, double duration, double warmup, double beta) {
    std::vector<std::pair<double, double>> out;
    out.reserve(targets.size());
    for (double target : targets) {
        if (target <= 0.0)
            throw std::invalid_argument("measure_delay_tracking: targets must be > 0");
        DispatcherConfig config;
        config.strategy = Strategy::DynamicWaterfill;
        config.expected_delay = target;
        config.beta = beta;
        const SimReport rep = run_bundle(stream, bundle, gov, config, duration, warmup);
        out.emplace_back(target, rep.mean_delay);
    }
    return out;
}

}  // namespace eeebundle
