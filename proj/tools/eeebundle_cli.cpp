// Command-line front end: model curves, allocations, simulation sweeps and
// table reproduction, all emitted as tidy CSV (plotting is left to external
// tools).

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "eeebundle/allocator.hpp"
#include "eeebundle/experiments.hpp"
#include "eeebundle/traffic.hpp"

namespace fs = std::filesystem;
using namespace eeebundle;
namespace ex = eeebundle::experiments;

namespace {

struct CommonOpts {
    double capacity = 10e9;
    double ts = 2.88e-6;
    double tw = 4.48e-6;
    double sigma_off = 0.1;
    std::string governor = "frame";
    int qw = 20;
    double tmax = 100e-6;
    std::string traffic = "poisson";
    double pareto_shape = 2.5;
    std::uint32_t pkt_size = 1000;
    double duration = 10.0;
    double warmup = 1.0;
    bool no_warmup = false;
    std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
    std::string trace_path;
    double trace_scale = 1.0;
    int trace_copies = 1;
    std::string output;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--capacity", o.capacity, "Link capacity, bits/s");
    cmd->add_option("--ts", o.ts, "Sleep transition time Ts, seconds");
    cmd->add_option("--tw", o.tw, "Wake transition time Tw, seconds");
    cmd->add_option("--sigma-off", o.sigma_off, "Idle power fraction");
    cmd->add_option("--governor", o.governor, "Sleep governor: frame | burst");
    cmd->add_option("--qw", o.qw, "Burst size Qw, frames");
    cmd->add_option("--tmax", o.tmax, "Coalescing timer Tmax, seconds");
    cmd->add_option("--traffic", o.traffic, "Generator: poisson | pareto");
    cmd->add_option("--pareto-shape", o.pareto_shape, "Pareto shape alpha (> 2)");
    cmd->add_option("--pkt-size", o.pkt_size, "Frame size, bytes");
    cmd->add_option("--duration", o.duration, "Simulated seconds per run");
    cmd->add_option("--warmup", o.warmup, "Warm-up seconds excluded from statistics");
    cmd->add_flag("--no-warmup", o.no_warmup, "Disable the warm-up exclusion");
    cmd->add_option("--seeds", o.seeds, "Random seeds, one run each");
    cmd->add_option("--trace", o.trace_path, "Replay a trace file instead of generating traffic");
    cmd->add_option("--trace-scale", o.trace_scale, "Inter-arrival compression factor (>= 1)");
    cmd->add_option("--trace-copies", o.trace_copies, "Back-to-back repetitions before scaling");
    cmd->add_option("-o,--output", o.output, "Output file ('-' or empty: stdout)");
}

LinkParams link_of(const CommonOpts& o) {
    LinkParams p;
    p.capacity_bps = o.capacity;
    p.ts = o.ts;
    p.tw = o.tw;
    p.sigma_off = o.sigma_off;
    p.validate();
    return p;
}

GovernorSpec governor_of(const CommonOpts& o) {
    if (o.governor == "frame") return GovernorSpec::frame();
    if (o.governor == "burst") return GovernorSpec::burst(o.qw, o.tmax);
    throw CLI::ValidationError("--governor", "must be 'frame' or 'burst'");
}

// Holds the optional replay trace alive for the duration of a command.
struct SetupBundle {
    ex::RunSetup setup;
    std::unique_ptr<TraceStream> trace;
};

SetupBundle setup_of(const CommonOpts& o) {
    SetupBundle sb;
    sb.setup.link = link_of(o);
    sb.setup.governor = governor_of(o);
    if (o.traffic == "poisson") {
        sb.setup.traffic.kind = ex::TrafficKind::Poisson;
    } else if (o.traffic == "pareto") {
        sb.setup.traffic.kind = ex::TrafficKind::Pareto;
        sb.setup.traffic.pareto_shape = o.pareto_shape;
    } else {
        throw CLI::ValidationError("--traffic", "must be 'poisson' or 'pareto'");
    }
    sb.setup.traffic.pkt_size_bytes = o.pkt_size;
    sb.setup.duration = o.duration;
    sb.setup.warmup = o.no_warmup ? 0.0 : o.warmup;
    sb.setup.seeds = o.seeds;
    if (!o.trace_path.empty()) {
        sb.trace = std::make_unique<TraceStream>(
            scale_trace(load_trace(o.trace_path), o.trace_scale, o.trace_copies));
        sb.setup.trace = sb.trace.get();
        // Leave room past the last arrival so it is simulated, not rejected.
        sb.setup.duration = sb.trace->duration + 1e-3;
        sb.setup.warmup = o.no_warmup ? 0.0 : std::min(o.warmup, sb.setup.duration / 10.0);
    }
    return sb;
}

// Relative outputs land in $EEEBUNDLE_OUTDIR when it is set.
fs::path resolve_output(const std::string& out) {
    fs::path p(out);
    if (p.is_relative()) {
        if (const char* dir = std::getenv("EEEBUNDLE_OUTDIR")) p = fs::path(dir) / p;
    }
    return p;
}

int emit(const std::string& out, const std::ostringstream& body) {
    if (out.empty() || out == "-") {
        std::cout << body.str();
        return 0;
    }
    const fs::path path = resolve_output(out);
    std::ofstream f(path);
    if (!f) {
        std::cerr << "error: cannot open output file " << path << "\n";
        return 2;
    }
    f << body.str();
    if (!f.good()) {
        std::cerr << "error: write failed for " << path << "\n";
        return 2;
    }
    return 0;
}

std::vector<double> default_loads() {
    std::vector<double> v;
    for (int i = 0; i <= 20; ++i) v.push_back(i * 0.05);
    return v;
}

std::vector<double> concavity_loads() {
    std::vector<double> v;
    for (int i = 1; i <= 99; ++i) v.push_back(i * 0.01);
    return v;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Energy model, allocator and simulator for bundled EEE links"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Flat key=value config file; flags override");

    CommonOpts o;

    auto* model = app.add_subcommand("model", "Analytic E(rho) / T_off(rho) curves");
    std::vector<double> model_loads = default_loads();
    std::vector<double> model_pkts = {1000.0};
    add_common(model, o);
    model->add_option("--loads", model_loads, "Load grid (rho)");
    model->add_option("--pkt-sizes", model_pkts, "Packet size grid, bytes");

    auto* alloc_cmd = app.add_subcommand("allocate", "Static allocation of a demand");
    std::size_t alloc_links = 4;
    double alloc_demand = 0.0;
    double alloc_cap = 0.9;
    std::string alloc_strategy = "waterfill";
    add_common(alloc_cmd, o);
    alloc_cmd->add_option("--links", alloc_links, "Number of links");
    alloc_cmd->add_option("--demand", alloc_demand, "Aggregate demand, bits/s")->required();
    alloc_cmd->add_option("--strategy", alloc_strategy, "equitable | waterfill | capped");
    alloc_cmd->add_option("--max-utilization", alloc_cap, "Per-link cap for 'capped'");

    auto* share = app.add_subcommand("share-sweep", "2-link share sweep vs the model");
    std::vector<double> share_loads = {0.25, 0.75, 1.25, 1.75};
    std::vector<double> share_shares = {0.0, 0.125, 0.25, 0.375, 0.5};
    add_common(share, o);
    share->add_option("--loads", share_loads, "Aggregate loads, fraction of one link capacity");
    share->add_option("--shares", share_shares, "Second-link share of the total (<= 0.5)");

    auto* bundle = app.add_subcommand("bundle-sweep", "Strategy comparison over a load grid");
    std::size_t bundle_links = 4;
    std::vector<double> bundle_loads = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    std::vector<std::string> bundle_strategies = {"equitable", "waterfill", "dynamic"};
    double bundle_target = 10e-6;
    add_common(bundle, o);
    bundle->add_option("--links", bundle_links, "Number of links");
    bundle->add_option("--loads", bundle_loads, "Aggregate loads, fraction of bundle capacity");
    bundle->add_option("--strategies", bundle_strategies,
                       "equitable | waterfill | capped | dynamic");
    bundle->add_option("--target-delay", bundle_target, "d_e for the dynamic strategy, seconds");

    auto* delay = app.add_subcommand("delay-sweep", "Dynamic dispatcher delay/energy curve");
    std::size_t delay_links = 4;
    double delay_load = 0.6;
    std::vector<double> delay_targets = {5e-6, 10e-6, 20e-6, 50e-6, 100e-6};
    add_common(delay, o);
    delay->add_option("--links", delay_links, "Number of links");
    delay->add_option("--load", delay_load, "Aggregate load, fraction of bundle capacity");
    delay->add_option("--targets", delay_targets, "Expected delays d_e, seconds");

    auto* table = app.add_subcommand("table", "Per-link carried rates for a 4-link bundle");
    std::vector<double> table_rates = {6.21, 12.60, 18.81, 25.08, 31.40};
    double table_cap = 0.9;
    double table_dyn_frame = 10e-6;
    double table_dyn_burst = 20e-6;
    add_common(table, o);
    table->add_option("--rates", table_rates, "Bundle rates, Gb/s");
    table->add_option("--max-utilization", table_cap, "Water-fill per-link cap");
    table->add_option("--dyn-frame-delay", table_dyn_frame, "d_e for Dyn. Frame, seconds");
    table->add_option("--dyn-burst-delay", table_dyn_burst, "d_e for Dyn. Burst, seconds");

    auto* concavity = app.add_subcommand("validate-concavity", "Concavity margins on a grid");
    std::vector<double> conc_pkts = {64, 128, 256, 512, 1024, 1500, 4500, 9000};
    add_common(concavity, o);
    concavity->add_option("--pkt-sizes", conc_pkts, "Packet size grid, bytes");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        std::ostringstream body;
        if (*model) {
            ex::write_model_csv(body, governor_of(o), link_of(o), model_loads, model_pkts);
        } else if (*alloc_cmd) {
            const BundleSpec b(std::vector<LinkParams>(alloc_links, link_of(o)), alloc_cap);
            AllocationVector av;
            if (alloc_strategy == "equitable") av = equitable(b, alloc_demand);
            else if (alloc_strategy == "waterfill") av = waterfill(b, alloc_demand);
            else if (alloc_strategy == "capped") av = waterfill_capped(b, alloc_demand);
            else throw std::invalid_argument("unknown strategy: " + alloc_strategy);
            body << "link,rate_bps\n";
            for (std::size_t i = 0; i < av.rates.size(); ++i)
                body << (i + 1) << ',' << ex::format_g9(av.rates[i]) << '\n';
        } else if (*share) {
            const auto sb = setup_of(o);
            ex::write_share_sweep_csv(body, sb.setup, share_loads, share_shares);
        } else if (*bundle) {
            const auto sb = setup_of(o);
            std::vector<Strategy> strategies;
            for (const auto& s : bundle_strategies)
                strategies.push_back(ex::strategy_from_name(s));
            ex::write_bundle_sweep_csv(body, sb.setup, bundle_links, bundle_loads, strategies,
                                       bundle_target);
        } else if (*delay) {
            const auto sb = setup_of(o);
            ex::write_delay_sweep_csv(body, sb.setup, delay_links, delay_load, delay_targets);
        } else if (*table) {
            const auto sb = setup_of(o);
            ex::write_table(body, sb.setup, table_rates, table_cap, table_dyn_frame,
                            table_dyn_burst);
        } else if (*concavity) {
            ex::write_concavity_csv(body, link_of(o), GovernorSpec::burst(o.qw, o.tmax),
                                    conc_pkts, concavity_loads());
        }
        return emit(o.output, body);
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
