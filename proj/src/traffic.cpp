#include "eeebundle/traffic.hpp"

#include <zlib.h>

#include <cerrno>
#include <cmath>
#include <cstring>
#include <fstream>
#include <functional>
#include <random>
#include <stdexcept>

namespace eeebundle {

double TraceStream::total_bytes() const {
    double b = 0.0;
    for (const auto& e : events) b += e.size;
    return b;
}

double TraceStream::mean_rate_bps() const {
    if (events.empty() || duration <= 0.0) return 0.0;
    return 8.0 * total_bytes() / duration;
}

double TraceStream::mean_size_bytes() const {
    if (events.empty()) return 0.0;
    return total_bytes() / static_cast<double>(events.size());
}

void TraceStream::check_sorted() const {
    for (std::size_t i = 1; i < events.size(); ++i)
        if (events[i].timestamp < events[i - 1].timestamp)
            throw std::runtime_error("TraceStream: timestamps not non-decreasing at event " +
                                     std::to_string(i));
}

namespace {

// Uniform in [0, 1) from the top 53 bits; kept explicit so streams are
// bit-identical across standard library implementations.
class UniformSource {
  public:
    explicit UniformSource(std::uint64_t seed) : rng_(seed) {}
    double next() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

  private:
    std::mt19937_64 rng_;
};

}  // namespace

TraceStream gen_poisson(double rate_bps, std::uint32_t pkt_size_bytes, double duration_s,
                        std::uint64_t seed) {
    if (rate_bps <= 0.0) throw std::invalid_argument("gen_poisson: rate must be > 0");
    if (pkt_size_bytes == 0) throw std::invalid_argument("gen_poisson: pkt_size must be > 0");
    if (duration_s < 0.0) throw std::invalid_argument("gen_poisson: duration must be >= 0");
    TraceStream s;
    s.duration = duration_s;
    const double mean_ia = 8.0 * pkt_size_bytes / rate_bps;
    s.events.reserve(static_cast<std::size_t>(duration_s / mean_ia * 1.01) + 16);
    UniformSource u(seed);
    double t = 0.0;
    for (;;) {
        t += -mean_ia * std::log1p(-u.next());
        if (t >= duration_s) break;
        s.events.push_back({t, pkt_size_bytes});
    }
    return s;
}

TraceStream gen_pareto(double rate_bps, std::uint32_t pkt_size_bytes, double shape,
                       double duration_s, std::uint64_t seed) {
    if (rate_bps <= 0.0) throw std::invalid_argument("gen_pareto: rate must be > 0");
    if (pkt_size_bytes == 0) throw std::invalid_argument("gen_pareto: pkt_size must be > 0");
    if (duration_s < 0.0) throw std::invalid_argument("gen_pareto: duration must be >= 0");
    if (shape <= 2.0) throw std::invalid_argument("gen_pareto: shape must be > 2");
    TraceStream s;
    s.duration = duration_s;
    const double mean_ia = 8.0 * pkt_size_bytes / rate_bps;
    const double xm = (shape - 1.0) / shape * mean_ia;
    s.events.reserve(static_cast<std::size_t>(duration_s / mean_ia * 1.01) + 16);
    UniformSource u(seed);
    double t = 0.0;
    for (;;) {
        t += xm * std::pow(1.0 - u.next(), -1.0 / shape);
        if (t >= duration_s) break;
        s.events.push_back({t, pkt_size_bytes});
    }
    return s;
}

namespace {

TraceStream parse_trace_lines(const std::string& path,
                              const std::function<bool(std::string&)>& next_line) {
    TraceStream s;
    std::string line;
    std::size_t lineno = 0;
    while (next_line(line)) {
        ++lineno;
        while (!line.empty() && (line.back() == '\n' || line.back() == '\r')) line.pop_back();
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": expected 'timestamp,size'");
        char* end = nullptr;
        errno = 0;
        const double ts = std::strtod(line.c_str(), &end);
        if (end != line.c_str() + comma || errno != 0 || ts < 0.0)
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": bad timestamp");
        const char* size_begin = line.c_str() + comma + 1;
        const long sz = std::strtol(size_begin, &end, 10);
        if (end == size_begin || *end != '\0' || sz <= 0)
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": bad size");
        if (!s.events.empty() && ts < s.events.back().timestamp)
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": non-monotonic timestamp");
        s.events.push_back({ts, static_cast<std::uint32_t>(sz)});
    }
    s.duration = s.events.empty() ? 0.0 : s.events.back().timestamp;
    return s;
}

}  // namespace

TraceStream load_trace(const std::string& path) {
    const bool gz = path.size() > 3 && path.compare(path.size() - 3, 3, ".gz") == 0;
    if (gz) {
        gzFile f = gzopen(path.c_str(), "rb");
        if (!f) throw std::runtime_error("load_trace: cannot open " + path);
        char buf[4096];
        auto stream = parse_trace_lines(path, [&](std::string& line) {
            line.clear();
            // gzgets stops at newline; loop in case a line exceeds the buffer
            for (;;) {
                if (gzgets(f, buf, sizeof buf) == nullptr) return !line.empty();
                line += buf;
                if (!line.empty() && line.back() == '\n') return true;
            }
        });
        gzclose(f);
        return stream;
    }
    std::ifstream f(path);
    if (!f) throw std::runtime_error("load_trace: cannot open " + path);
    return parse_trace_lines(path, [&](std::string& line) {
        return static_cast<bool>(std::getline(f, line));
    });
}

TraceStream scale_trace(const TraceStream& stream, double factor, int copies) {
    if (factor < 1.0) throw std::invalid_argument("scale_trace: factor must be >= 1");
    if (copies < 1) throw std::invalid_argument("scale_trace: copies must be >= 1");
    TraceStream out;
    out.events.reserve(stream.events.size() * static_cast<std::size_t>(copies));
    for (int c = 0; c < copies; ++c) {
        const double offset = c * stream.duration;
        for (const auto& e : stream.events)
            out.events.push_back({(e.timestamp + offset) / factor, e.size});
    }
    out.duration = stream.duration * copies / factor;
    return out;
}

}  // namespace eeebundle
