#include "eeebundle/allocator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "eeebundle/analytic.hpp"

namespace eeebundle {

BundleSpec::BundleSpec(std::vector<LinkParams> links, double max_utilization)
    : links_(std::move(links)), max_utilization_(max_utilization) {
    if (links_.empty()) throw std::invalid_argument("BundleSpec: at least one link required");
    if (max_utilization_ <= 0.0 || max_utilization_ > 1.0)
        throw std::invalid_argument("BundleSpec: max_utilization must be in (0,1]");
    for (const auto& l : links_) l.validate();
    fill_order_.resize(links_.size());
    std::iota(fill_order_.begin(), fill_order_.end(), std::size_t{0});
    std::stable_sort(fill_order_.begin(), fill_order_.end(), [&](std::size_t a, std::size_t b) {
        return links_[a].capacity_bps > links_[b].capacity_bps;
    });
}

double BundleSpec::total_capacity() const {
    double c = 0.0;
    for (const auto& l : links_) c += l.capacity_bps;
    return c;
}

namespace {

AllocationVector waterfill_effective(const BundleSpec& bundle, double demand, double cap_factor) {
    if (demand < 0.0) throw std::invalid_argument("waterfill: demand must be >= 0");
    const double total = bundle.total_capacity() * cap_factor;
    if (demand > total * (1.0 + 1e-9))
        throw std::invalid_argument("waterfill: demand exceeds total capacity");
    AllocationVector alloc;
    alloc.demand = demand;
    alloc.rates.assign(bundle.size(), 0.0);
    double remaining = demand;
    for (std::size_t idx : bundle.fill_order()) {
        const double cap = bundle.links()[idx].capacity_bps * cap_factor;
        const double x = std::min(cap, remaining);
        alloc.rates[idx] = x;
        remaining -= x;
        if (remaining <= 0.0) break;
    }
    return alloc;
}

}  // namespace

AllocationVector waterfill(const BundleSpec& bundle, double demand_bps) {
    return waterfill_effective(bundle, demand_bps, 1.0);
}

AllocationVector waterfill_capped(const BundleSpec& bundle, double demand_bps) {
    return waterfill_effective(bundle, demand_bps, bundle.max_utilization());
}

AllocationVector equitable(const BundleSpec& bundle, double demand_bps) {
    if (demand_bps < 0.0) throw std::invalid_argument("equitable: demand must be >= 0");
    const double total = bundle.total_capacity();
    if (demand_bps > total * (1.0 + 1e-9))
        throw std::invalid_argument("equitable: demand exceeds total capacity");
    AllocationVector alloc;
    alloc.demand = demand_bps;
    alloc.rates.reserve(bundle.size());
    for (const auto& l : bundle.links())
        alloc.rates.push_back(demand_bps * l.capacity_bps / total);
    return alloc;
}

double allocation_energy(const BundleSpec& bundle, const std::vector<double>& rates,
                         const GovernorSpec& gov, double pkt_size_bytes) {
    return bundle_energy(rates, gov, bundle.links(), pkt_size_bytes).raw;
}

AllocationVector brute_force_min(const BundleSpec& bundle, double demand_bps,
                                 const GovernorSpec& gov, double pkt_size_bytes,
                                 double step_bps) {
    const std::size_t n = bundle.size();
    if (n > 3) throw std::invalid_argument("brute_force_min: N > 3 unsupported");
    if (step_bps <= 0.0) throw std::invalid_argument("brute_force_min: step must be > 0");
    if (demand_bps < 0.0 || demand_bps > bundle.total_capacity() * (1.0 + 1e-9))
        throw std::invalid_argument("brute_force_min: demand infeasible");

    // Work in fill order so the lexicographic tie-break loads large links first.
    const auto& order = bundle.fill_order();
    std::vector<double> caps(n);
    for (std::size_t i = 0; i < n; ++i) caps[i] = bundle.links()[order[i]].capacity_bps;

    double best_energy = 0.0;
    std::vector<double> best;
    auto consider = [&](const std::vector<double>& rates) {
        const double e = [&] {
            std::vector<LinkParams> links(n);
            for (std::size_t i = 0; i < n; ++i) links[i] = bundle.links()[order[i]];
            return bundle_energy(rates, gov, links, pkt_size_bytes).raw;
        }();
        // Strict improvement only: iterating coordinates in descending order
        // makes the first minimum the lexicographically largest one.
        if (best.empty() || e < best_energy - 1e-15) {
            best_energy = e;
            best = rates;
        }
    };

    const auto feasible = [](double x, double cap) {
        return x >= -1e-9 && x <= cap * (1.0 + 1e-9);
    };
    const auto clamp_rate = [](double x, double cap) { return std::clamp(x, 0.0, cap); };

    // Grid multiples of step plus the saturation vertex, descending, so the
    // first minimum seen is the lexicographically largest.
    auto candidates = [&](double cap, double rem) {
        std::vector<double> v;
        const double top = std::min(cap, std::max(0.0, rem));
        v.push_back(top);
        for (long k = static_cast<long>(std::floor(top / step_bps)); k >= 0; --k) {
            const double x = k * step_bps;
            if (x < top - 1e-12 * std::max(1.0, top)) v.push_back(x);
        }
        return v;
    };

    if (n == 1) {
        consider({clamp_rate(demand_bps, caps[0])});
    } else if (n == 2) {
        for (double x1 : candidates(caps[0], demand_bps)) {
            const double x2 = demand_bps - x1;
            if (!feasible(x2, caps[1])) continue;
            consider({x1, clamp_rate(x2, caps[1])});
        }
    } else {
        for (double x1 : candidates(caps[0], demand_bps)) {
            const double rem1 = demand_bps - x1;
            if (rem1 < -1e-9 || rem1 > caps[1] + caps[2] + 1e-9) continue;
            for (double x2 : candidates(caps[1], rem1)) {
                const double x3 = rem1 - x2;
                if (!feasible(x3, caps[2])) continue;
                consider({x1, x2, clamp_rate(x3, caps[2])});
            }
        }
    }

    if (best.empty()) throw std::runtime_error("brute_force_min: no feasible grid point");
    AllocationVector alloc;
    alloc.demand = demand_bps;
    alloc.rates.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) alloc.rates[order[i]] = best[i];
    return alloc;
}

}  // namespace eeebundle
