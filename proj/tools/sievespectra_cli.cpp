// Command-line front end: one subcommand per computation, CSV/JSON artifacts,
// and a reproducible run manifest per invocation.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sievespectra/errors.hpp"
#include "sievespectra/gram.hpp"
#include "sievespectra/latver.hpp"
#include "sievespectra/limit.hpp"
#include "sievespectra/ntheory.hpp"
#include "sievespectra/smooth.hpp"
#include "sievespectra/spectra.hpp"

namespace {

using nlohmann::json;
using namespace sievespectra;

constexpr const char* kVersion = "0.1.0";

// Round to 12 significant digits through the decimal representation so that
// identical argv on an identical build serializes byte-identically.
double round12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::strtod(buf, nullptr);
}

struct RunContext {
    std::string subcommand;
    std::filesystem::path out_dir = ".";
    json params = json::object();
    std::vector<std::string> artifacts;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    std::filesystem::path path(const std::string& name) {
        artifacts.push_back(name);
        return out_dir / name;
    }

    void write_json(const std::string& name, const json& doc) {
        std::ofstream out(path(name), std::ios::trunc);
        if (!out) throw validation_error("cannot open " + name);
        out << doc.dump(2) << '\n';
    }

    void finish() {
        json manifest;
        manifest["subcommand"] = subcommand;
        manifest["parameters"] = params;
        manifest["artifacts"] = artifacts;
        manifest["tool_version"] = kVersion;
        manifest["wall_time_s"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::ofstream out(out_dir / ("manifest_" + subcommand + ".json"), std::ios::trunc);
        if (!out) throw validation_error("cannot open manifest for " + subcommand);
        out << manifest.dump(2) << '\n';
    }
};

// "--n farey" sets N = |F_Q|; otherwise a positive integer.
std::int64_t resolve_n(const std::string& n_arg, std::int64_t Q) {
    if (n_arg == "farey") return farey_size(Q);
    std::size_t pos = 0;
    std::int64_t n = 0;
    try {
        n = std::stoll(n_arg, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != n_arg.size() || n < 1)
        throw validation_error("--n must be a positive integer or 'farey'");
    return n;
}

json moment_json(const MomentReport& r) {
    return {{"ell", r.ell},         {"value", round12(r.value)}, {"method", to_string(r.method)},
            {"Q", r.Q},             {"N", r.N},                  {"alpha", round12(r.alpha)}};
}

int run_cli(int argc, char** argv) {
    CLI::App app{"Spectral laboratory for large-sieve Gram matrices over Farey fractions"};
    app.require_subcommand(1);
    app.fallthrough(); // global flags usable after the subcommand

    std::filesystem::path out_dir = ".";
    int threads = 0;
    std::uint64_t seed = 0;
    app.add_option("--out-dir", out_dir, "directory for artifacts")->capture_default_str();
    app.add_option("--threads", threads, "worker threads (0 = hardware)")->capture_default_str();
    app.add_option("--seed", seed, "RNG seed for randomized checks")->capture_default_str();

    std::int64_t Q = 1;
    std::string n_arg = "farey";
    int ell = 2;
    double alpha = 1.0;
    double delta = 0.1;
    double bin_width = 0.01;
    std::optional<double> omit_below;
    double cutoff = 1000.0;
    QuadratureConfig qcfg;
    std::string method = "all";
    std::vector<double> deltas = {0.2, 0.1, 0.05};
    std::vector<std::int64_t> q_grid = {10, 20, 40};
    int instances = 100;
    bool with_ledger = false;

    auto add_q = [&](CLI::App* sub) {
        sub->add_option("--Q", Q, "Farey order")->required()->check(CLI::PositiveNumber);
    };
    auto add_n = [&](CLI::App* sub) {
        sub->add_option("--n", n_arg, "frequency count N, or 'farey' for |F_Q|")
            ->capture_default_str();
    };
    auto add_quad = [&](CLI::App* sub) {
        sub->add_option("--pair-tol", qcfg.pair_tol)->capture_default_str();
        sub->add_option("--max-depth", qcfg.max_depth)->capture_default_str();
        sub->add_option("--r-start", qcfg.r_start)->capture_default_str();
        sub->add_option("--r-cap", qcfg.r_cap)->capture_default_str();
        sub->add_option("--cauchy-tol", qcfg.cauchy_tol)->capture_default_str();
    };

    CLI::App* farey_cmd = app.add_subcommand("farey", "enumerate F_Q and report its size");
    add_q(farey_cmd);

    CLI::App* gram_cmd = app.add_subcommand("gram", "build the Gram matrix first row");
    add_q(gram_cmd);
    add_n(gram_cmd);

    CLI::App* spectrum_cmd = app.add_subcommand("spectrum", "full Gram spectrum");
    add_q(spectrum_cmd);
    add_n(spectrum_cmd);

    CLI::App* moments_cmd = app.add_subcommand("moments", "empirical moments by route");
    add_q(moments_cmd);
    add_n(moments_cmd);
    moments_cmd->add_option("--ell", ell, "highest moment")->capture_default_str();
    moments_cmd->add_option("--method", method, "spectral|trace|dual|all")->capture_default_str();

    CLI::App* hist_cmd = app.add_subcommand("histogram", "empirical spectral histogram");
    add_q(hist_cmd);
    add_n(hist_cmd);
    hist_cmd->add_option("--bin-width", bin_width)->capture_default_str();
    hist_cmd->add_option("--omit-below", omit_below, "drop atoms below this value");

    CLI::App* limit_cmd = app.add_subcommand("limit-moment", "limiting moment M_ell(alpha)");
    limit_cmd->add_option("--ell", ell)->required();
    limit_cmd->add_option("--alpha", alpha)->required()->check(CLI::PositiveNumber);
    limit_cmd->add_flag("--ledger", with_ledger, "write the per-pair CSV ledger");
    add_quad(limit_cmd);

    CLI::App* m2_cmd = app.add_subcommand("m2", "second moment via the g2 integral");
    m2_cmd->add_option("--alpha", alpha)->required()->check(CLI::PositiveNumber);
    m2_cmd->add_option("--cutoff", cutoff)->capture_default_str();

    CLI::App* smooth_cmd = app.add_subcommand("smooth-check", "smoothed-moment comparison");
    add_q(smooth_cmd);
    add_n(smooth_cmd);
    smooth_cmd->add_option("--ell", ell)->capture_default_str();
    smooth_cmd->add_option("--deltas", deltas, "transition widths")->capture_default_str();

    CLI::App* conv_cmd = app.add_subcommand("converge", "empirical vs limiting moments on a Q grid");
    conv_cmd->add_option("--ell", ell)->capture_default_str();
    conv_cmd->add_option("--q-grid", q_grid, "Farey orders")->capture_default_str();
    add_quad(conv_cmd);

    CLI::App* verify_cmd = app.add_subcommand("verify", "counting-lemma and tail-decay checks");
    verify_cmd->add_option("--instances", instances)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e); // prints help or the offending flag
        return code == 0 ? 0 : 2;
    }

    if (threads > 0) qcfg.threads = threads;

    RunContext ctx;
    ctx.out_dir = out_dir;
    std::filesystem::create_directories(out_dir);

    if (farey_cmd->parsed()) {
        ctx.subcommand = "farey";
        ctx.params = {{"Q", Q}};
        const FareySet set = farey_set(Q);
        {
            std::ofstream out(ctx.path("farey_Q" + std::to_string(Q) + ".csv"), std::ios::trunc);
            out << "a,q\n";
            for (const auto& f : set.fractions) out << f.a << ',' << f.q << '\n';
        }
        ctx.write_json("farey_summary.json",
                       {{"Q", Q}, {"size", static_cast<std::int64_t>(set.fractions.size())}});
    } else if (gram_cmd->parsed()) {
        ctx.subcommand = "gram";
        const std::int64_t N = resolve_n(n_arg, Q);
        ctx.params = {{"Q", Q}, {"N", N}};
        const GramMatrix m = build_gram(Q, N);
        write_first_row_csv(m, ctx.path("gram_first_row.csv"));
        write_gram_binary(m, ctx.path("gram.bin"));
        ctx.write_json("gram_summary.json",
                       {{"Q", Q}, {"N", N}, {"trace", m.trace()}, {"c0", m.first_row[0]}});
    } else if (spectrum_cmd->parsed()) {
        ctx.subcommand = "spectrum";
        const std::int64_t N = resolve_n(n_arg, Q);
        ctx.params = {{"Q", Q}, {"N", N}};
        const Spectrum s = eigenvalues(build_gram(Q, N));
        write_eigenvalues_csv(s, ctx.path("spectrum.csv"));
        double trace = 0.0;
        for (double l : s.eigenvalues) trace += l;
        ctx.write_json("spectrum_summary.json",
                       {{"Q", Q},
                        {"N", N},
                        {"lambda_1", round12(s.eigenvalues.front())},
                        {"lambda_N", round12(s.eigenvalues.back())},
                        {"trace", round12(trace)},
                        {"large_sieve_bound", N + Q * Q - 1}});
    } else if (moments_cmd->parsed()) {
        ctx.subcommand = "moments";
        const std::int64_t N = resolve_n(n_arg, Q);
        ctx.params = {{"Q", Q}, {"N", N}, {"ell", ell}, {"method", method}};
        if (method != "spectral" && method != "trace" && method != "dual" && method != "all")
            throw validation_error("--method must be spectral|trace|dual|all");
        const GramMatrix m = build_gram(Q, N);
        std::vector<MomentReport> reports;
        if (method == "spectral" || method == "all") {
            const Spectrum s = eigenvalues(m);
            for (int l = 1; l <= ell; ++l) reports.push_back(moment_spectral(s, l));
        }
        if (method == "trace" || method == "all")
            for (int l = 1; l <= ell; ++l) reports.push_back(moment_trace(m, l));
        if (method == "dual" || method == "all") {
            const DualGramMatrix d = build_dual_gram(Q, N);
            for (int l = 1; l <= ell; ++l) reports.push_back(moment_dual(d, l));
        }
        write_moments_csv(reports, ctx.path("moments.csv"));
        json rows = json::array();
        for (const auto& r : reports) rows.push_back(moment_json(r));
        ctx.write_json("moments_summary.json", {{"Q", Q}, {"N", N}, {"moments", rows}});
    } else if (hist_cmd->parsed()) {
        ctx.subcommand = "histogram";
        const std::int64_t N = resolve_n(n_arg, Q);
        ctx.params = {{"Q", Q}, {"N", N}, {"bin_width", bin_width}};
        if (omit_below) ctx.params["omit_below"] = *omit_below;
        const Spectrum s = eigenvalues(build_gram(Q, N));
        const auto bins = histogram(empirical_measure(s), bin_width, omit_below);
        write_histogram_csv(bins, ctx.path("histogram.csv"));
        ctx.write_json("histogram_summary.json",
                       {{"Q", Q}, {"N", N}, {"bins", static_cast<std::int64_t>(bins.size())}});
    } else if (limit_cmd->parsed()) {
        ctx.subcommand = "limit-moment";
        ctx.params = {{"ell", ell},
                      {"alpha", alpha},
                      {"pair_tol", qcfg.pair_tol},
                      {"max_depth", qcfg.max_depth},
                      {"r_start", qcfg.r_start},
                      {"r_cap", qcfg.r_cap},
                      {"cauchy_tol", qcfg.cauchy_tol}};
        std::vector<PairIntegral> ledger;
        const LimitMomentResult r =
            limit_moment(ell, alpha, qcfg, with_ledger ? &ledger : nullptr);
        if (with_ledger) write_pair_ledger_csv(ledger, ell, alpha, ctx.path("pair_ledger.csv"));
        ctx.write_json("limit_moment_summary.json", {{"ell", r.ell},
                                                     {"alpha", round12(r.alpha)},
                                                     {"value", round12(r.value)},
                                                     {"R_final", r.r_final},
                                                     {"cauchy_gap", round12(r.cauchy_gap)},
                                                     {"converged", r.converged}});
        ctx.finish();
        if (!r.converged) {
            std::fprintf(stderr, "limit-moment: Cauchy gap %.3g at R cap %lld exceeds %.3g\n",
                         r.cauchy_gap, static_cast<long long>(r.r_final), qcfg.cauchy_tol);
            return 4;
        }
        return 0;
    } else if (m2_cmd->parsed()) {
        ctx.subcommand = "m2";
        ctx.params = {{"alpha", alpha}, {"cutoff", cutoff}};
        const M2Result r = m2_via_g2(alpha, cutoff);
        ctx.write_json("m2_summary.json", {{"alpha", round12(alpha)},
                                           {"value", round12(r.value)},
                                           {"tail_bound", round12(r.tail_bound)}});
    } else if (smooth_cmd->parsed()) {
        ctx.subcommand = "smooth-check";
        const std::int64_t N = resolve_n(n_arg, Q);
        ctx.params = {{"Q", Q}, {"N", N}, {"ell", ell}, {"deltas", deltas}};
        const GramMatrix m = build_gram(Q, N);
        const double plain = moment_trace(m, ell).value;
        json rows = json::array();
        {
            std::ofstream out(ctx.path("smooth_check.csv"), std::ios::trunc);
            out.precision(12);
            out << "delta,smoothed,plain,abs_err,ratio\n";
            for (double d : deltas) {
                const double sm = smoothed_moment(Q, N, ell, d).value;
                const double err = std::abs(plain - sm);
                out << d << ',' << sm << ',' << plain << ',' << err << ',' << err / d << '\n';
                rows.push_back({{"delta", round12(d)},
                                {"smoothed", round12(sm)},
                                {"plain", round12(plain)},
                                {"ratio", round12(err / d)}});
            }
        }
        ctx.write_json("smooth_summary.json",
                       {{"Q", Q}, {"N", N}, {"ell", ell}, {"rows", rows}});
    } else if (conv_cmd->parsed()) {
        ctx.subcommand = "converge";
        ctx.params = {{"ell", ell}, {"q_grid", q_grid}};
        json rows = json::array();
        std::ofstream out(ctx.path("converge.csv"), std::ios::trunc);
        out.precision(12);
        out << "Q,N,alpha,empirical,limit,abs_err\n";
        for (std::int64_t q : q_grid) {
            const std::int64_t N = farey_size(q);
            const double a = static_cast<double>(N) / (static_cast<double>(q) * q);
            const GramMatrix m = build_gram(q, N);
            const double emp = moment_trace(m, ell).value;
            const double lim = limit_moment(ell, a, qcfg).value;
            const double err = std::abs(emp - lim);
            out << q << ',' << N << ',' << a << ',' << emp << ',' << lim << ',' << err << '\n';
            rows.push_back({{"Q", q},
                            {"N", N},
                            {"alpha", round12(a)},
                            {"empirical", round12(emp)},
                            {"limit", round12(lim)},
                            {"abs_err", round12(err)}});
        }
        ctx.write_json("converge_summary.json", {{"ell", ell}, {"rows", rows}});
    } else if (verify_cmd->parsed()) {
        ctx.subcommand = "verify";
        ctx.params = {{"instances", instances}, {"seed", seed}};
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<std::int64_t> coord(-20, 20), rhs(-10, 10), width(2, 12);
        int equal = 0;
        for (int i = 0; i < instances; ++i) {
            std::vector<Box> boxes;
            for (int c = 0; c < 4; ++c) {
                const std::int64_t lo = coord(rng);
                boxes.push_back({lo, lo + width(rng)});
            }
            const std::vector<std::int64_t> D = {rhs(rng)};
            const auto fast = enumerate_chain(boxes, D);
            const auto slow = enumerate_chain_bruteforce(boxes, D);
            if (fast.size() == slow.size()) {
                bool same = true;
                for (std::size_t k = 0; k < fast.size(); ++k)
                    if (fast[k].A != slow[k].A || fast[k].B != slow[k].B) same = false;
                if (same) ++equal;
            }
        }
        const double tail8 = shell_tail(2, 1.0, 8, qcfg);
        const double tail16 = shell_tail(2, 1.0, 16, qcfg);
        ctx.write_json("verify_summary.json",
                       {{"instances", instances},
                        {"set_equal", equal},
                        {"all_equal", equal == instances},
                        {"shell_tail_8", round12(tail8)},
                        {"shell_tail_16", round12(tail16)},
                        {"tail_decreasing", tail16 < tail8}});
        ctx.finish();
        return equal == instances && tail16 < tail8 ? 0 : 4;
    }
    ctx.finish();
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run_cli(argc, argv);
    } catch (const validation_error& e) {
        std::fprintf(stderr, "validation error: %s\n", e.what());
        return 2;
    } catch (const resource_guard_error& e) {
        std::fprintf(stderr, "resource guard: %s\n", e.what());
        return 3;
    } catch (const convergence_error& e) {
        std::fprintf(stderr, "non-convergence: %s\n", e.what());
        return 4;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
