#include "scldpc/cli.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "scldpc/builders.hpp"
#include "scldpc/de_awgn.hpp"
#include "scldpc/de_bec.hpp"
#include "scldpc/lift.hpp"
#include "scldpc/parallel.hpp"
#include "scldpc/protograph.hpp"
#include "scldpc/schedule.hpp"
#include "scldpc/simulate.hpp"
#include "scldpc/wenum.hpp"

namespace scldpc {

namespace {

constexpr const char* kVersion = "scldpc 0.1.0";

// collects output paths so a failed run leaves nothing behind and every
// output gets a sidecar manifest
struct RunContext {
    std::string subcommand;
    std::vector<std::string> args;
    std::uint64_t seed = 0;
    std::vector<std::string> outputs;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    std::ofstream open(const std::string& path) {
        std::ofstream f(path);
        if (!f) throw std::runtime_error("cannot open " + path + " for writing");
        outputs.push_back(path);
        return f;
    }

    void write_manifests() {
        auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - start)
                      .count();
        for (const auto& out : outputs) {
            nlohmann::json j;
            j["subcommand"] = subcommand;
            j["args"] = args;
            j["seed"] = seed;
            j["tool_version"] = kVersion;
            j["outputs"] = outputs;
            j["wall_ms"] = ms;
            std::ofstream f(out + ".manifest.json");
            f << j.dump(1) << '\n';
        }
    }

    void cleanup() {
        for (const auto& out : outputs) std::remove(out.c_str());
    }
};

Protograph resolve_protograph(const std::string& arg) {
    if (std::filesystem::exists(arg)) return load_protograph(arg);
    try {
        return make_ensemble(arg);
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error("'" + arg + "' is neither a protograph file nor a valid " +
                                 "ensemble spec (" + e.what() + ")");
    }
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, ',')) out.push_back(std::stod(part));
    if (out.empty()) throw std::runtime_error("empty list '" + s + "'");
    return out;
}

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    for (double v : parse_list(s)) out.push_back(static_cast<int>(v));
    return out;
}

// "lo:hi:count" inclusive linear grid
std::vector<double> parse_grid(const std::string& s) {
    double lo, hi;
    int count;
    if (std::sscanf(s.c_str(), "%lf:%lf:%d", &lo, &hi, &count) != 3 || count < 1)
        throw std::runtime_error("grid must look like lo:hi:count, got '" + s + "'");
    std::vector<double> out;
    for (int i = 0; i < count; ++i)
        out.push_back(count == 1 ? lo : lo + (hi - lo) * i / (count - 1));
    return out;
}

void emit_json(RunContext& ctx, const nlohmann::json& j, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << j.dump(1) << '\n';
    } else {
        auto f = ctx.open(out_path);
        f << j.dump(1) << '\n';
    }
}

int run_reproduce(RunContext& ctx, const std::string& table, const std::string& out_dir,
                  int workers);

}  // namespace

int cli_main(int argc, char** argv) {
    CLI::App app{"connected spatially coupled LDPC ensemble toolkit"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    RunContext ctx;
    for (int i = 1; i < argc; ++i) ctx.args.push_back(argv[i]);

    std::string proto_arg, out_path, grid_str, channel_str = "awgn", table;
    std::uint64_t seed = 1;
    int workers = 0;
    double tol = -1.0, theta = 1e-2, pbmax = 1e-5, eps = 0.488;
    int lift_factor = 256, max_iters = 0;
    long long min_fe = 100, max_frames = 1000000;
    bool girth6 = false, random_perms = false;
    std::string iter_list = "1,6,11,16,21,26,31,36";
    std::string points_str, hfile;

    auto add_common = [&](CLI::App* sub, bool needs_proto = true) {
        if (needs_proto)
            sub->add_option("protograph", proto_arg,
                            "protograph file or ensemble spec (e.g. loop:3,6,15,h=5)")
                ->required();
        sub->add_option("--out", out_path, "output file");
        sub->add_option("--seed", seed, "random seed");
        sub->add_option("--workers", workers, "worker thread cap");
    };

    auto* c_build = app.add_subcommand("build", "write a protograph file from an ensemble spec");
    add_common(c_build);
    auto* c_rate = app.add_subcommand("rate", "design rate of an ensemble");
    add_common(c_rate);
    auto* c_tbec = app.add_subcommand("threshold-bec", "BEC iterative decoding threshold");
    add_common(c_tbec);
    c_tbec->add_option("--tol", tol, "bisection tolerance (default 1e-4)");
    auto* c_tawgn = app.add_subcommand("threshold-awgn", "AWGN decoding threshold (Eb/N0, dB)");
    add_common(c_tawgn);
    c_tawgn->add_option("--tol", tol, "bisection tolerance in dB (default 0.01)");
    c_tawgn->add_option("--grid", grid_str, "LLR grid as dq,range (default 0.01,30)");
    c_tawgn->add_option("--max-iters", max_iters, "DE iteration cap per probe");
    auto* c_trace = app.add_subcommand("de-trace", "per-position bit erasure probability trace");
    add_common(c_trace);
    c_trace->add_option("--eps", eps, "channel erasure probability")->required();
    c_trace->add_option("--iterations", iter_list, "comma-separated iteration numbers");
    auto* c_cplx = app.add_subcommand("complexity", "selective-schedule complexity sweep");
    add_common(c_cplx);
    c_cplx->add_option("--grid", grid_str, "epsilon grid lo:hi:count")->required();
    c_cplx->add_option("--theta", theta, "improvement parameter (default 1e-2)");
    c_cplx->add_option("--pbmax", pbmax, "target bit erasure probability (default 1e-5)");
    auto* c_growth = app.add_subcommand("growth-rate", "weight enumerator growth rate and delta_min");
    add_common(c_growth);
    c_growth->add_option("--grid", grid_str, "delta grid lo:hi:count (geometric)");
    auto* c_lift = app.add_subcommand("lift", "lift a protograph to a parity-check matrix");
    add_common(c_lift);
    c_lift->add_option("--M", lift_factor, "lift factor")->required();
    c_lift->add_flag("--girth6", girth6, "forbid 4-cycles");
    c_lift->add_flag("--random-perms", random_perms, "full random permutations instead of circulants");
    auto* c_sim = app.add_subcommand("simulate", "Monte Carlo BP decoding simulation");
    add_common(c_sim);
    c_sim->add_option("--M", lift_factor, "lift factor");
    c_sim->add_option("--H", hfile, "read a lifted matrix instead of lifting");
    c_sim->add_flag("--girth6", girth6, "forbid 4-cycles when lifting");
    c_sim->add_option("--channel", channel_str, "bec or awgn (default awgn)");
    c_sim->add_option("--points", points_str, "channel parameters (eps or Eb/N0 dB)")->required();
    c_sim->add_option("--min-fe", min_fe, "frame errors per point (default 100)");
    c_sim->add_option("--max-frames", max_frames, "frame cap per point");
    c_sim->add_option("--max-iters", max_iters, "BP iterations per frame (default 200)");
    auto* c_rep = app.add_subcommand("reproduce", "re-run a published table sweep");
    c_rep->add_option("table", table, "table1|table2|table3|table5|table6|growth")->required();
    c_rep->add_option("--out", out_path, "output directory (default .)");
    c_rep->add_option("--workers", workers, "worker thread cap");
    c_rep->add_option("--seed", seed, "random seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    ctx.seed = seed;
    if (workers > 0) set_default_workers(workers);

    try {
        if (c_build->parsed()) {
            ctx.subcommand = "build";
            Protograph pg = make_ensemble(proto_arg);
            if (out_path.empty()) out_path = pg.name() + ".json";
            auto f = ctx.open(out_path);
            write_protograph(pg, f);
            std::cerr << "wrote " << out_path << '\n';
        } else if (c_rate->parsed()) {
            ctx.subcommand = "rate";
            Protograph pg = resolve_protograph(proto_arg);
            DesignRate r = design_rate(pg);
            emit_json(ctx,
                      {{"ensemble", pg.name()},
                       {"rate", r.value},
                       {"rate_num", r.num},
                       {"rate_den", r.den}},
                      out_path);
        } else if (c_tbec->parsed()) {
            ctx.subcommand = "threshold-bec";
            Protograph pg = resolve_protograph(proto_arg);
            BecThresholdResult r = threshold_bec(pg, tol > 0 ? tol : 1e-4);
            emit_json(ctx,
                      {{"ensemble", pg.name()},
                       {"epsilon_star", r.epsilon_star},
                       {"tol", r.tol},
                       {"iterations", r.total_iterations}},
                      out_path);
        } else if (c_tawgn->parsed()) {
            ctx.subcommand = "threshold-awgn";
            Protograph pg = resolve_protograph(proto_arg);
            AwgnThresholdOptions opt;
            if (tol > 0) opt.tol_db = tol;
            if (!grid_str.empty()) {
                auto parts = parse_list(grid_str);
                if (parts.size() != 2) throw std::runtime_error("--grid needs dq,range");
                opt.grid = make_grid(parts[0], parts[1]);
            } else {
                opt.grid = make_grid(0.01, 30.0);
            }
            if (max_iters > 0) opt.run.max_iters = max_iters;
            AwgnThresholdResult r = threshold_awgn(pg, opt);
            emit_json(ctx,
                      {{"ensemble", pg.name()},
                       {"ebn0_star_db", r.ebn0_star_db},
                       {"tol_db", r.tol_db},
                       {"grid", {{"dq", r.grid.dq}, {"range", r.grid.range}}},
                       {"iterations", r.total_iterations}},
                      out_path);
        } else if (c_trace->parsed()) {
            ctx.subcommand = "de-trace";
            Protograph pg = resolve_protograph(proto_arg);
            auto iters = parse_int_list(iter_list);
            if (out_path.empty()) {
                de_trace_csv(pg, eps, iters, std::cout);
            } else {
                auto f = ctx.open(out_path);
                de_trace_csv(pg, eps, iters, f);
            }
        } else if (c_cplx->parsed()) {
            ctx.subcommand = "complexity";
            Protograph pg = resolve_protograph(proto_arg);
            ScheduleConfig cfg;
            cfg.theta = theta;
            cfg.pb_max = pbmax;
            auto rows = complexity_sweep(pg, parse_grid(grid_str), cfg);
            std::ostream* os = &std::cout;
            std::ofstream f;
            if (!out_path.empty()) {
                f = ctx.open(out_path);
                os = &f;
            }
            *os << "epsilon,i_eff,converged,sweeps\n";
            for (const auto& r : rows.rows)
                *os << r.eps << ',' << r.i_eff << ',' << (r.converged ? 1 : 0) << ',' << r.sweeps
                    << '\n';
            std::cerr << "scheduled threshold (largest converged grid point): "
                      << (rows.any_converged ? std::to_string(rows.scheduled_threshold) : "none")
                      << '\n';
        } else if (c_growth->parsed()) {
            ctx.subcommand = "growth-rate";
            Protograph pg = resolve_protograph(proto_arg);
            GrowthConfig cfg;
            cfg.seed = seed;
            DeltaMinResult r = min_distance_growth(pg, cfg);
            if (!out_path.empty()) {
                auto f = ctx.open(out_path);
                f << "delta,r_delta_bits,converged\n";
                for (const auto& s : r.curve.samples)
                    f << s.delta << ',' << s.r_bits << ',' << (s.converged ? 1 : 0) << '\n';
            }
            emit_json(ctx,
                      {{"ensemble", pg.name()},
                       {"delta_min", r.delta_min},
                       {"asymptotically_good", r.asymptotically_good}},
                      out_path.empty() ? "" : out_path + ".summary.json");
        } else if (c_lift->parsed()) {
            ctx.subcommand = "lift";
            Protograph pg = resolve_protograph(proto_arg);
            LiftOptions opt;
            opt.girth6 = girth6;
            opt.quasi_cyclic = !random_perms;
            SparseParityCheck h = lift(pg, lift_factor, seed, opt);
            if (out_path.empty()) {
                write_sparse(h, std::cout);
            } else {
                auto f = ctx.open(out_path);
                write_sparse(h, f);
            }
        } else if (c_sim->parsed()) {
            ctx.subcommand = "simulate";
            SparseParityCheck h;
            if (!hfile.empty()) {
                std::ifstream f(hfile);
                if (!f) throw std::runtime_error("cannot open " + hfile);
                h = read_sparse(f);
            } else {
                Protograph pg = resolve_protograph(proto_arg);
                LiftOptions opt;
                opt.girth6 = girth6;
                h = lift(pg, lift_factor, seed, opt);
            }
            SimChannel ch;
            if (channel_str == "bec") ch = SimChannel::bec;
            else if (channel_str == "awgn") ch = SimChannel::awgn;
            else throw std::runtime_error("--channel must be bec or awgn");
            SimOptions opt;
            opt.min_frame_errors = min_fe;
            opt.max_frames = max_frames;
            if (max_iters > 0) opt.max_iters = max_iters;
            if (workers > 0) opt.workers = workers;
            SimReport rep = simulate(h, ch, parse_list(points_str), seed, opt);
            if (out_path.empty()) {
                write_sim_csv(rep, std::cout);
            } else {
                auto f = ctx.open(out_path);
                write_sim_csv(rep, f);
            }
        } else if (c_rep->parsed()) {
            ctx.subcommand = "reproduce";
            return run_reproduce(ctx, table, out_path.empty() ? "." : out_path, workers);
        }
        ctx.write_manifests();
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        ctx.cleanup();
        return 1;
    }
}

namespace {

int run_reproduce(RunContext& ctx, const std::string& table, const std::string& out_dir,
                  int workers) {
    std::filesystem::create_directories(out_dir);
    auto path = [&](const std::string& name) { return out_dir + "/" + name; };

    if (table == "table1") {
        auto f = ctx.open(path("table1_loop_vs_chain_bec.csv"));
        f << "ensemble,rate,epsilon_star\n";
        for (int len : {12, 15, 18}) {
            for (auto pg : {build_loop(3, 6, len), build_chain(3, 6, len)}) {
                auto r = threshold_bec(pg);
                f << pg.name() << ',' << design_rate(pg).value << ',' << r.epsilon_star << '\n';
                f.flush();
            }
        }
    } else if (table == "table2") {
        auto f = ctx.open(path("table2_loop_vs_chain_awgn.csv"));
        f << "ensemble,rate,ebn0_star_db\n";
        for (int len : {12, 15, 18}) {
            for (auto pg : {build_loop(3, 6, len), build_chain(3, 6, len)}) {
                AwgnThresholdOptions opt;
                opt.grid = make_grid(0.01, 30.0);
                auto r = threshold_awgn(pg, opt);
                f << pg.name() << ',' << design_rate(pg).value << ',' << r.ebn0_star_db << '\n';
                f.flush();
            }
        }
    } else if (table == "table3") {
        auto f = ctx.open(path("table3_square_vs_chain_bec.csv"));
        f << "ensemble,rate,epsilon_star\n";
        for (auto [ls, lc] : {std::pair{8, 6}, {12, 9}, {16, 12}, {20, 15}, {24, 18}}) {
            for (auto pg : {build_square(ls), build_chain(3, 6, lc)}) {
                auto r = threshold_bec(pg);
                f << pg.name() << ',' << design_rate(pg).value << ',' << r.epsilon_star << '\n';
                f.flush();
            }
        }
    } else if (table == "table5") {
        auto f = ctx.open(path("table5_39_loops_bec.csv"));
        f << "ensemble,rate,epsilon_star\n";
        for (int len : {6, 8, 12, 100}) {
            for (auto pg : {build_loop(3, 9, len), build_chain(3, 9, len)}) {
                auto r = threshold_bec(pg);
                f << pg.name() << ',' << design_rate(pg).value << ',' << r.epsilon_star << '\n';
                f.flush();
            }
        }
    } else if (table == "table6") {
        auto f = ctx.open(path("table6_h_sweep_bec.csv"));
        f << "h,epsilon_star\n";
        for (int h = 2; h <= 9; ++h) {
            auto r = threshold_bec(build_loop(3, 6, 15, h));
            f << h << ',' << r.epsilon_star << '\n';
            f.flush();
        }
    } else if (table == "growth") {
        auto f = ctx.open(path("growth_rates.csv"));
        f << "ensemble,rate,delta_min\n";
        std::vector<Protograph> pgs;
        for (int len : {8, 10, 12, 14, 16, 18, 20, 24}) pgs.push_back(build_square(len));
        for (int len : {12, 15, 18}) pgs.push_back(build_loop(3, 6, len));
        for (const auto& pg : pgs) {
            GrowthConfig cfg;
            cfg.seed = ctx.seed;
            auto r = min_distance_growth(pg, cfg);
            f << pg.name() << ',' << design_rate(pg).value << ',' << r.delta_min << '\n';
            f.flush();
        }
    } else {
        throw std::runtime_error("unknown table '" + table +
                                 "' (use table1|table2|table3|table5|table6|growth)");
    }
    (void)workers;
    ctx.write_manifests();
    return 0;
}

}  // namespace

}  // namespace scldpc
