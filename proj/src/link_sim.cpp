#include "eeebundle/link_sim.hpp"

#include <cmath>
#include <stdexcept>

namespace eeebundle {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

bool governor_wake_decision(std::size_t queue_len, std::optional<double> first_arrival,
                            double now, const GovernorSpec& gov) {
    if (gov.kind == GovernorKind::Frame) return queue_len > 0;
    if (queue_len >= static_cast<std::size_t>(gov.qw)) return true;
    return first_arrival.has_value() && *first_arrival + gov.tmax <= now;
}

LinkMachine::LinkMachine(const LinkParams& params, const GovernorSpec& gov)
    : params_(params), gov_(gov) {
    params_.validate();
    gov_.validate();
    // Starts Active and empty, so the governor puts it to sleep at t = 0.
    mode_ = LinkMode::Sleeping;
    mode_end_ = params_.ts;
}

double LinkMachine::next_event_time() const {
    switch (mode_) {
        case LinkMode::Active:
            return busy_until_;
        case LinkMode::Sleeping:
        case LinkMode::Waking:
            return mode_end_;
        case LinkMode::Idle:
            if (gov_.kind == GovernorKind::Burst && first_arrival_)
                return *first_arrival_ + gov_.tmax;
            return kInf;
    }
    return kInf;
}

void LinkMachine::account(double dt) {
    switch (mode_) {
        case LinkMode::Active: energy_.active_time += dt; break;
        case LinkMode::Sleeping: energy_.sleeping_time += dt; break;
        case LinkMode::Idle: energy_.idle_time += dt; break;
        case LinkMode::Waking: energy_.waking_time += dt; break;
    }
}

void LinkMachine::start_transmission(double t) {
    const FrameEvent f = queue_.front();
    queue_.pop_front();
    queued_bits_ -= 8.0 * f.size;
    delay_.total_wait += t - f.timestamp;
    delay_.frames += 1;
    transmitted_bytes_ += f.size;
    busy_until_ = t + 8.0 * f.size / params_.capacity_bps;
}

void LinkMachine::enter_sleep(double t) {
    mode_ = LinkMode::Sleeping;
    mode_end_ = t + params_.ts;
    first_arrival_.reset();
}

void LinkMachine::begin_wake(double t) {
    mode_ = LinkMode::Waking;
    mode_end_ = t + params_.tw;
}

void LinkMachine::handle_event(double t) {
    switch (mode_) {
        case LinkMode::Active:
            if (!queue_.empty()) {
                start_transmission(t);
            } else {
                enter_sleep(t);
            }
            break;
        case LinkMode::Sleeping:
            mode_ = LinkMode::Idle;
            energy_.idle_periods += 1;
            if (governor_wake_decision(queue_.size(), first_arrival_, t, gov_)) begin_wake(t);
            break;
        case LinkMode::Idle:
            // Burst coalescing timer expiry.
            begin_wake(t);
            break;
        case LinkMode::Waking:
            mode_ = LinkMode::Active;
            if (!queue_.empty()) {
                start_transmission(t);
            } else {
                enter_sleep(t);
            }
            break;
    }
}

void LinkMachine::run_until(double t) {
    if (t < now_) throw std::logic_error("LinkMachine: time going backwards");
    for (;;) {
        const double e = next_event_time();
        if (e > t) break;
        account(e - now_);
        now_ = e;
        handle_event(e);
    }
    account(t - now_);
    now_ = t;
}

void LinkMachine::enqueue(const FrameEvent& f) {
    if (queue_.size() >= kMaxBacklogFrames)
        throw std::runtime_error("LinkMachine: backlog exceeded 1e6 frames");
    queue_.push_back(f);
    queued_bits_ += 8.0 * f.size;
    if (!first_arrival_ && (mode_ == LinkMode::Sleeping || mode_ == LinkMode::Idle))
        first_arrival_ = f.timestamp;
    if (mode_ == LinkMode::Idle &&
        governor_wake_decision(queue_.size(), first_arrival_, now_, gov_))
        begin_wake(now_);
}

double LinkMachine::backlog_seconds(double t) const {
    double bits = queued_bits_;
    if (mode_ == LinkMode::Active && busy_until_ > t)
        bits += (busy_until_ - t) * params_.capacity_bps;
    return bits / params_.capacity_bps;
}

void LinkMachine::reset_accounting() {
    energy_ = EnergyAccumulator{};
    delay_ = DelayAccumulator{};
    transmitted_bytes_ = 0.0;
}

std::pair<EnergyAccumulator, DelayAccumulator> simulate_link(const TraceStream& stream,
                                                             const LinkParams& params,
                                                             const GovernorSpec& gov,
                                                             double duration) {
    if (duration <= 0.0) throw std::invalid_argument("simulate_link: duration must be > 0");
    LinkMachine link(params, gov);
    for (const auto& f : stream.events) {
        if (f.timestamp >= duration)
            throw std::invalid_argument("simulate_link: arrival beyond duration");
        link.run_until(f.timestamp);
        link.enqueue(f);
    }
    link.run_until(duration);
    return {link.energy(), link.delay()};
}

}  // namespace eeebundle
