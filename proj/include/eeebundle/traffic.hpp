#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "eeebundle/types.hpp"

namespace eeebundle {

// A timestamp-ordered packet stream. duration is the stream horizon: the
// last arrival timestamp for loaded traces, the requested length for
// generated streams.
struct TraceStream {
    std::vector<FrameEvent> events;
    double duration = 0.0;

    double total_bytes() const;
    double mean_rate_bps() const;    // 8 * total_bytes / duration, 0 if empty
    double mean_size_bytes() const;  // 0 if empty

    void check_sorted() const;  // throws on non-monotonic timestamps
};

// Poisson arrivals of fixed-size packets: exponential inter-arrival times
// with mean 8 * pkt_size / rate. Reproducible for a fixed seed.
TraceStream gen_poisson(double rate_bps, std::uint32_t pkt_size_bytes, double duration_s,
                        std::uint64_t seed);

// Pareto(shape, x_m) inter-arrivals with x_m chosen so the mean matches the
// target rate. shape must exceed 2 (finite variance).
TraceStream gen_pareto(double rate_bps, std::uint32_t pkt_size_bytes, double shape,
                       double duration_s, std::uint64_t seed);

// Plain-text trace, one "timestamp_seconds,size_bytes" event per line.
// Files ending in ".gz" are read through zlib.
TraceStream load_trace(const std::string& path);

// Concatenate `copies` back-to-back repetitions, then compress time by
// `factor`: the mean rate multiplies by factor, relative order is untouched.
TraceStream scale_trace(const TraceStream& stream, double factor, int copies);

}  // namespace eeebundle
