// Command-line front end: bound curves, scheme simulation, database
// encoding and querying. Every command writes CSV plus a JSON manifest
// describing the full parameter set, so runs can be reproduced exactly.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "sqid/bounds.hpp"
#include "sqid/engine.hpp"
#include "sqid/errors.hpp"
#include "sqid/rng.hpp"
#include "sqid/version.hpp"

using json = nlohmann::json;
using namespace sqid;

namespace {

std::string fmt(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("cannot write " + path, 0);
    out << text;
}

void write_manifest(const std::string& out_path, const std::string& command,
                    const json& params, std::uint64_t seed) {
    json m;
    m["command"] = command;
    m["params"] = params;
    m["seed"] = seed;
    m["tool_version"] = kToolVersion;
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char ts[32];
    std::strftime(ts, sizeof ts, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    m["timestamp"] = ts;
    write_text(out_path + ".manifest.json", m.dump(2) + "\n");
}

LatticeSpec select_lattice(const std::string& name, int n, double scale) {
    LatticeSpec base;
    if (name == "leech") {
        if (n != 25)
            throw std::domain_error("--lattice leech requires --n 25 (lattice dim 24)");
        base = LatticeSpec::leech();
    } else if (name == "zn") {
        base = LatticeSpec::zn(n - 1);
    } else if (name.rfind("file:", 0) == 0) {
        base = load_lattice_file(name.substr(5));
        if (base.dim != n - 1)
            throw std::domain_error("custom lattice dimension must be n - 1");
    } else {
        throw std::domain_error("unknown lattice '" + name + "' (leech|zn|file:PATH)");
    }
    return rescale(base, scale);
}

std::vector<int> parse_grid(const std::string& csv) {
    std::vector<int> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) out.push_back(std::stoi(tok));
    }
    return out;
}

struct BoundsArgs {
    std::string kind = "achievability";
    int n = 25;
    double D = 0.1;
    double rate_min = 0.5, rate_max = 3.0, rate_step = 0.25;
    std::string levels_grid = "1,2,4,8,16,32";
    std::string out = "bounds.csv";
};

int run_bounds(const BoundsArgs& a) {
    std::ostringstream csv;
    csv << "n,R,R_G,R_S,D,value,log2_value,status\n";
    const std::vector<int> grid = parse_grid(a.levels_grid);

    auto emit = [&](double R, double rg, double rs, double log2v, const char* status) {
        csv << a.n << ',' << fmt(R) << ',' << fmt(rg) << ',' << fmt(rs) << ',' << fmt(a.D)
            << ',' << fmt(std::exp2(log2v)) << ',' << fmt(log2v) << ',' << status << '\n';
    };
    auto emit_bad = [&](double R, const char* status) {
        csv << a.n << ',' << fmt(R) << ",,," << fmt(a.D) << ",,," << status << '\n';
    };

    if (a.kind == "idrate") {
        const double v = id_rate(a.D);
        csv << a.n << ",,,," << fmt(a.D) << ',' << fmt(v) << ','
            << fmt(std::isinf(v) ? v : std::log2(v)) << ",ok\n";
    } else if (a.kind != "achievability" && a.kind != "genie" && a.kind != "converse" &&
               a.kind != "exponent") {
        throw std::domain_error("unknown bound kind '" + a.kind + "'");
    } else {
        for (double R = a.rate_min; R <= a.rate_max + 1e-12; R += a.rate_step) {
            try {
                if (a.kind == "achievability") {
                    const RateSplit split = best_rate_split(a.n, R, a.D, grid);
                    emit(R, split.rate_gain, split.rate_shape, split.log2_bound, "ok");
                } else if (a.kind == "genie") {
                    const double theta = dumer_theta_for_rate(a.n, R);
                    emit(R, 0.0, R, log2_genie_bound(a.n, a.D, theta), "ok");
                } else if (a.kind == "converse") {
                    const ConverseResult res = converse_bound(a.n, R, a.D);
                    if (!res.feasible) {
                        emit_bad(R, "infeasible");
                    } else {
                        emit(R, 0.0, R, res.log2_value, "ok");
                    }
                } else {
                    const double e = id_exponent(R, a.D);
                    csv << a.n << ',' << fmt(R) << ",,," << fmt(a.D) << ',' << fmt(e)
                        << ',' << (e > 0 ? fmt(std::log2(e)) : "-inf") << ",ok\n";
                }
            } catch (const std::domain_error&) {
                emit_bad(R, "infeasible");
            }
        }
    }
    write_text(a.out, csv.str());
    write_manifest(a.out, "bounds",
                   json{{"kind", a.kind},
                        {"n", a.n},
                        {"D", a.D},
                        {"rate_min", a.rate_min},
                        {"rate_max", a.rate_max},
                        {"rate_step", a.rate_step},
                        {"gain_levels_grid", a.levels_grid}},
                   0);
    return 0;
}

struct SimArgs {
    int n = 25;
    double D = 0.1;
    int samples = 1000;
    std::uint64_t seed = 1;
    std::string lattice = "leech";
    double scale = 0.5;
    int gain_levels = 8;
    std::string mode = "bound";
    int workers = 2;
    std::string out = "simulate.csv";
};

struct SimResult {
    double mean = 0.0;
    double std_err = 0.0;
    double rate_shape = 0.0;
};

SimResult run_semi_mc(const SchemeConfig& cfg, int samples, std::uint64_t seed,
                      bool use_bound, int workers) {
    std::vector<double> p(samples);
    const int n = cfg.n;
    std::vector<std::thread> pool;
    const int w = std::max(1, workers);
    for (int t = 0; t < w; ++t) {
        pool.emplace_back([&, t] {
            for (int i = t; i < samples; i += w) {
                Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(i));
                Eigen::VectorXd x(n);
                for (int j = 0; j < n; ++j) x(j) = rng.gaussian();
                const double r = x.norm();
                const int k = quantize_gain(cfg.gain, r);
                const Eigen::VectorXd s = x / r;
                const ShapeCodeword cw = quantize_shape(cfg.shape, s);
                const double theta = use_bound
                                         ? covering_angle_bound(cfg.shape, cw).angle
                                         : angle_between(s, cw.s_hat);
                const double r1 = cfg.gain.boundaries[k - 1];
                const double r2 = std::min(cfg.gain.boundaries[k], cfg.gain.quad_radius);
                p[i] = prob_thick_cap_expansion(r1, r2, theta, n, cfg.D);
            }
        });
    }
    for (auto& th : pool) th.join();
    double mean = 0.0;
    for (double v : p) mean += v;
    mean /= samples;
    double var = 0.0;
    for (double v : p) var += (v - mean) * (v - mean);
    var /= std::max(1, samples - 1);
    SimResult res;
    res.mean = mean;
    res.std_err = std::sqrt(var / samples);
    res.rate_shape = shape_rate(cfg.shape).bits_per_dim;
    return res;
}

int run_simulate(const SimArgs& a) {
    if (a.samples < 1) throw std::domain_error("--samples must be >= 1");
    if (a.mode != "bound" && a.mode != "true-angle")
        throw std::domain_error("--mode must be bound or true-angle");
    const SchemeConfig cfg =
        make_scheme(a.n, a.D, a.gain_levels, select_lattice(a.lattice, a.n, a.scale));
    const SimResult res = run_semi_mc(cfg, a.samples, a.seed, a.mode == "bound", a.workers);
    const double rg = std::log2(static_cast<double>(a.gain_levels)) / a.n;
    std::ostringstream csv;
    csv << "n,R,R_G,R_S,D,scale,samples,mode,seed,p_maybe,log2_p_maybe,std_err\n";
    csv << a.n << ',' << fmt(rg + res.rate_shape) << ',' << fmt(rg) << ','
        << fmt(res.rate_shape) << ',' << fmt(a.D) << ',' << fmt(a.scale) << ','
        << a.samples << ',' << a.mode << ',' << a.seed << ',' << fmt(res.mean) << ','
        << fmt(std::log2(res.mean)) << ',' << fmt(res.std_err) << '\n';
    write_text(a.out, csv.str());
    write_manifest(a.out, "simulate",
                   json{{"n", a.n},
                        {"D", a.D},
                        {"samples", a.samples},
                        {"lattice", a.lattice},
                        {"scale", a.scale},
                        {"gain_levels", a.gain_levels},
                        {"mode", a.mode},
                        {"workers", a.workers}},
                   a.seed);
    return 0;
}

struct GenArgs {
    int n = 25;
    int count = 1000;
    std::uint64_t seed = 1;
    std::string out = "vectors.sqid";
};

int run_gen(const GenArgs& a) {
    std::vector<Eigen::VectorXd> xs(a.count);
    for (int i = 0; i < a.count; ++i) {
        Rng rng = Rng::substream(a.seed, static_cast<std::uint64_t>(i));
        Eigen::VectorXd x(a.n);
        for (int j = 0; j < a.n; ++j) x(j) = rng.gaussian();
        xs[i] = std::move(x);
    }
    write_vector_file(a.out, xs);
    write_manifest(a.out, "gen", json{{"n", a.n}, {"count", a.count}}, a.seed);
    return 0;
}

struct CodecArgs {
    std::string in;
    std::string signatures;
    std::string query;
    int query_index = 0;
    int n = 25;
    double D = 0.1;
    int gain_levels = 8;
    std::string lattice = "leech";
    double scale = 0.5;
    int annuli = 0;
    std::string layout = "structured";
    int workers = 2;
    std::uint64_t seed = 0;
    std::string out;
};

json codec_params(const CodecArgs& a) {
    return json{{"n", a.n},
                {"D", a.D},
                {"gain_levels", a.gain_levels},
                {"lattice", a.lattice},
                {"scale", a.scale},
                {"annuli", a.annuli},
                {"layout", a.layout}};
}

int run_encode(const CodecArgs& a) {
    const SchemeConfig cfg = make_scheme(
        a.n, a.D, a.gain_levels, select_lattice(a.lattice, a.n, a.scale), a.annuli);
    const SignatureLayout layout =
        a.layout == "flat" ? SignatureLayout::kFlat : SignatureLayout::kStructured;
    encode_database(cfg, a.in, a.out, layout, a.workers);
    json params = codec_params(a);
    params["in"] = a.in;
    write_manifest(a.out, "encode", params, a.seed);
    return 0;
}

int run_query(const CodecArgs& a) {
    const SchemeConfig cfg = make_scheme(
        a.n, a.D, a.gain_levels, select_lattice(a.lattice, a.n, a.scale), a.annuli);
    const auto queries = read_vector_file(a.query);
    if (a.query_index < 0 || static_cast<std::size_t>(a.query_index) >= queries.size())
        throw std::domain_error("--query-index out of range");
    std::ostringstream csv;
    const ScanStats stats =
        scan_query(cfg, a.signatures, queries[a.query_index], a.D, csv, a.workers);
    write_text(a.out, csv.str());
    std::cerr << "records=" << stats.records << " maybes=" << stats.maybes
              << " maybe_rate="
              << (stats.records ? static_cast<double>(stats.maybes) / stats.records : 0.0)
              << "\n";
    json params = codec_params(a);
    params["signatures"] = a.signatures;
    params["query"] = a.query;
    params["query_index"] = a.query_index;
    write_manifest(a.out, "query", params, a.seed);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Compression for quadratic similarity identification on Gaussian data"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    BoundsArgs ba;
    auto* bounds = app.add_subcommand("bounds", "Evaluate analytic bound curves to CSV");
    bounds->add_option("--kind", ba.kind, "achievability|genie|converse|exponent|idrate");
    bounds->add_option("--n", ba.n, "blocklength");
    bounds->add_option("--similarity", ba.D, "similarity threshold D");
    bounds->add_option("--rate-min", ba.rate_min);
    bounds->add_option("--rate-max", ba.rate_max);
    bounds->add_option("--rate-step", ba.rate_step);
    bounds->add_option("--gain-levels-grid", ba.levels_grid,
                       "comma-separated gain level counts for the rate split");
    bounds->add_option("--out", ba.out, "output CSV path");

    SimArgs sa;
    auto* sim =
        app.add_subcommand("simulate", "Semi-Monte-Carlo of the wrapped-code scheme");
    sim->add_option("--n", sa.n);
    sim->add_option("--similarity", sa.D);
    sim->add_option("--samples", sa.samples);
    sim->add_option("--seed", sa.seed);
    sim->add_option("--lattice", sa.lattice, "leech|zn|file:PATH");
    sim->add_option("--scale", sa.scale);
    sim->add_option("--rate-gain-levels", sa.gain_levels);
    sim->add_option("--mode", sa.mode, "bound|true-angle");
    sim->add_option("--workers", sa.workers);
    sim->add_option("--out", sa.out);

    GenArgs ga;
    auto* gen = app.add_subcommand("gen", "Generate a Gaussian vector file");
    gen->add_option("--n", ga.n);
    gen->add_option("--count", ga.count);
    gen->add_option("--seed", ga.seed);
    gen->add_option("--out", ga.out);

    CodecArgs ea;
    auto* enc = app.add_subcommand("encode", "Compress a vector file into signatures");
    enc->add_option("--in", ea.in)->required();
    enc->add_option("--out", ea.out)->required();
    enc->add_option("--n", ea.n);
    enc->add_option("--similarity", ea.D);
    enc->add_option("--rate-gain-levels", ea.gain_levels);
    enc->add_option("--lattice", ea.lattice);
    enc->add_option("--scale", ea.scale);
    enc->add_option("--annuli", ea.annuli, "override annulus count (0 = automatic)");
    enc->add_option("--layout", ea.layout, "structured|flat");
    enc->add_option("--workers", ea.workers);
    enc->add_option("--seed", ea.seed);

    CodecArgs qa;
    auto* qry = app.add_subcommand("query", "Scan a signature file with a query vector");
    qry->add_option("--signatures", qa.signatures)->required();
    qry->add_option("--query", qa.query)->required();
    qry->add_option("--query-index", qa.query_index);
    qry->add_option("--out", qa.out)->required();
    qry->add_option("--n", qa.n);
    qry->add_option("--similarity", qa.D);
    qry->add_option("--rate-gain-levels", qa.gain_levels);
    qry->add_option("--lattice", qa.lattice);
    qry->add_option("--scale", qa.scale);
    qry->add_option("--annuli", qa.annuli);
    qry->add_option("--workers", qa.workers);
    qry->add_option("--seed", qa.seed);

    try {
        app.parse(argc, argv);
        if (bounds->parsed()) return run_bounds(ba);
        if (sim->parsed()) return run_simulate(sa);
        if (gen->parsed()) return run_gen(ga);
        if (enc->parsed()) return run_encode(ea);
        if (qry->parsed()) return run_query(qa);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const FormatError& e) {
        std::cerr << "format error: " << e.what() << "\n";
        return 3;
    } catch (const ResourceError& e) {
        std::cerr << "resource error: " << e.what() << "\n";
        return 4;
    } catch (const std::domain_error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
