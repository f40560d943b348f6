#pragma once

#include <cstddef>
#include <vector>

#include "eeebundle/types.hpp"

namespace eeebundle {

// Per-link offered rates (bits/s), kept in the bundle's original link order.
struct AllocationVector {
    std::vector<double> rates;
    double demand = 0.0;
};

// A bundle of links sharing Ts/Tw/sigma_off; capacities may differ. The fill
// order is by non-increasing capacity (stable, so ties keep original index
// order) while the original order is retained for reporting.
class BundleSpec {
  public:
    explicit BundleSpec(std::vector<LinkParams> links, double max_utilization = 1.0);

    const std::vector<LinkParams>& links() const { return links_; }
    const std::vector<std::size_t>& fill_order() const { return fill_order_; }
    std::size_t size() const { return links_.size(); }
    double max_utilization() const { return max_utilization_; }
    double total_capacity() const;

  private:
    std::vector<LinkParams> links_;
    std::vector<std::size_t> fill_order_;
    double max_utilization_;
};

// Sequential fill in non-increasing capacity order: x_i = min{C_i, X - sum_{j<i} x_j}.
AllocationVector waterfill(const BundleSpec& bundle, double demand_bps);

// Water-fill against effective capacities max_utilization * C_i.
AllocationVector waterfill_capped(const BundleSpec& bundle, double demand_bps);

// Even spread: rates proportional to capacity, so every link carries equal load.
AllocationVector equitable(const BundleSpec& bundle, double demand_bps);

// Grid-search minimizer of the analytic bundle energy over the feasible
// simplex; the optimality oracle for the water-filling result. N <= 3 only.
// Ties break toward the lexicographically largest vector in fill order.
AllocationVector brute_force_min(const BundleSpec& bundle, double demand_bps,
                                 const GovernorSpec& gov, double pkt_size_bytes,
                                 double step_bps);

// Analytic bundle energy of an allocation over this bundle's links (raw sum).
double allocation_energy(const BundleSpec& bundle, const std::vector<double>& rates,
                         const GovernorSpec& gov, double pkt_size_bytes);

}  // namespace eeebundle
