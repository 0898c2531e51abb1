// fkqc: equilibrium and minimal configurations of the Frenkel-Kontorova model
// on the Fibonacci chain.
//
//   fkqc word         print words of the substitution system
//   fkqc equilibrium  anti-integrable-limit equilibrium (fixed point or tridiagonal)
//   fkqc minimal      branched-manifold level configuration
//   fkqc verify       run the invariant suites
//
// Exit codes: 0 success, 1 validation error, 2 numerical failure.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fkqc/chain.hpp"
#include "fkqc/fibword.hpp"
#include "fkqc/golden.hpp"
#include "fkqc/io.hpp"
#include "fkqc/minimal.hpp"
#include "fkqc/model.hpp"
#include "fkqc/potential.hpp"
#include "fkqc/solver.hpp"
#include "fkqc/verify.hpp"

namespace {

constexpr const char* kVersion = "fkqc 0.1.0";

using fkqc::GoldenNumber;
namespace io = fkqc::io;

struct WordOptions {
    int level = 0;
    bool two_sided = false;
    std::int64_t from = 0, to = 0;
    std::string format = "text";
    std::string out;
};

std::string cached_one_sided_word(int level) {
    const char* dir = std::getenv("FKQC_CACHE_DIR");
    if (dir == nullptr || *dir == '\0')
        return fkqc::fibword::one_sided_word(level).letters;
    const std::filesystem::path path =
        std::filesystem::path(dir) / ("u_" + std::to_string(level) + ".txt");
    const std::size_t expected = static_cast<std::size_t>(fkqc::fibword::fibonacci(level));
    if (std::filesystem::exists(path)) {
        std::ifstream in(path);
        std::string cached;
        std::getline(in, cached);
        if (cached.size() == expected) return cached;
    }
    std::string letters = fkqc::fibword::one_sided_word(level).letters;
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream out(path);
    if (out) out << letters << '\n';
    return letters;
}

int run_word(const WordOptions& opt) {
    std::string text;
    nlohmann::json j;
    if (opt.two_sided) {
        const fkqc::fibword::Word w = fkqc::fibword::two_sided_window(opt.from, opt.to);
        text = w.letters;
        if (w.ref_index) text.insert(*w.ref_index, "|");
        j = {{"two_sided", true},
             {"from", opt.from},
             {"to", opt.to},
             {"letters", w.letters},
             {"bar_position", w.ref_index ? nlohmann::json(*w.ref_index) : nlohmann::json()}};
    } else {
        text = cached_one_sided_word(opt.level);
        j = {{"level", opt.level},
             {"letters", text},
             {"length", text.size()},
             {"assigned_length", io::golden_to_json(fkqc::golden_pow(opt.level))}};
    }
    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!opt.out.empty()) {
        file.open(opt.out);
        if (!file) throw std::runtime_error("cannot open " + opt.out);
        os = &file;
    }
    if (opt.format == "json")
        *os << j.dump(2) << '\n';
    else
        *os << text << '\n';
    return 0;
}

struct EquilibriumOptions {
    std::string theta = "default";
    std::string anchor;       // "h1"
    std::string anchor_file;  // csv i,h
    double lambda = 1.0;
    std::int64_t n = 100;
    double tol = 1e-12;
    int max_iter = 60;
    std::string method = "fixed-point";
    std::string format = "csv";
    std::string out = "equilibrium";
    std::uint64_t seed = 0;
};

fkqc::model::AnchorFn make_anchor(const EquilibriumOptions& opt) {
    int given = (!opt.anchor.empty() ? 1 : 0) + (!opt.anchor_file.empty() ? 1 : 0) +
                (opt.theta != "default" ? 1 : 0);
    if (given > 1) throw std::invalid_argument("choose one of --theta, --anchor, --anchor-file");
    if (!opt.anchor.empty()) {
        if (opt.anchor != "h1") throw std::invalid_argument("unknown anchor '" + opt.anchor + "'");
        return fkqc::model::AnchorFn::signed_square();
    }
    if (!opt.anchor_file.empty()) {
        std::ifstream in(opt.anchor_file);
        if (!in) throw std::invalid_argument("cannot read anchor file " + opt.anchor_file);
        std::string line;
        std::getline(in, line);  // header i,h
        std::vector<std::pair<std::int64_t, double>> rows;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            const auto comma = line.find(',');
            if (comma == std::string::npos)
                throw std::invalid_argument("anchor file: expected 'i,h' rows");
            rows.emplace_back(std::stoll(line.substr(0, comma)),
                              io::parse_double(line.substr(comma + 1)));
        }
        if (rows.size() < 3) throw std::invalid_argument("anchor file: need at least 3 rows");
        for (std::size_t k = 1; k < rows.size(); ++k)
            if (rows[k].first != rows[k - 1].first + 1)
                throw std::invalid_argument("anchor file: indices must be consecutive");
        std::vector<double> values;
        values.reserve(rows.size());
        for (const auto& [i, h] : rows) values.push_back(h);
        return fkqc::model::AnchorFn::table(std::move(values), rows.front().first);
    }
    if (opt.theta == "default") return fkqc::model::AnchorFn::linear_default();
    return fkqc::model::AnchorFn::linear(io::parse_double(opt.theta));
}

int run_equilibrium(const EquilibriumOptions& opt) {
    const auto t0 = std::chrono::steady_clock::now();
    if (opt.n < 10) throw std::invalid_argument("--n must be at least 10");
    if (opt.lambda <= 0) throw std::invalid_argument("--lambda must be positive");
    if (opt.method != "fixed-point" && opt.method != "tridiagonal")
        throw std::invalid_argument("--method must be fixed-point or tridiagonal");
    if (opt.format != "csv" && opt.format != "json")
        throw std::invalid_argument("--format must be csv or json");

    fkqc::solver::AILParams params;
    params.anchor = make_anchor(opt);
    params.lambda = opt.lambda;
    params.n = opt.n;
    params.tol = opt.tol;
    params.max_iter = opt.max_iter;
    params.trace = true;

    const double threshold = fkqc::solver::lambda_threshold(params.anchor, params.n);
    if (params.lambda < threshold)
        throw std::invalid_argument("lambda " + std::to_string(params.lambda) +
                                    " is below the guaranteed-contraction threshold " +
                                    std::to_string(threshold));

    const fkqc::solver::SolveResult res = opt.method == "fixed-point"
                                              ? fkqc::solver::solve_fixed_point(params)
                                              : fkqc::solver::solve_tridiagonal(params);

    const fkqc::potential::PotentialSpec spec{params.lambda, nullptr};
    const double residual = fkqc::model::equilibrium_residual(res.config, spec, 2);

    // The truncation matrix has no coupling beyond its edge rows, so the
    // outermost tridiagonal values carry a boundary layer (decaying at rate
    // ~1/126 per site); estimate the rotation number on a trimmed window.
    std::int64_t est_half = params.n;
    if (opt.method == "tridiagonal") est_half = params.n - std::min<std::int64_t>(20, params.n / 5);
    fkqc::model::Configuration est_view;
    est_view.i_min = -est_half;
    est_view.anchor = res.config.anchor;
    est_view.lambda = res.config.lambda;
    for (std::int64_t i = -est_half; i <= est_half; ++i)
        est_view.positions.push_back(res.config.at(i));
    const fkqc::model::RotationEstimate rot = fkqc::model::rotation_number_estimate(est_view);
    double sup_ug = 0.0;
    for (std::int64_t i = -params.n; i <= params.n; ++i)
        sup_ug = std::max(sup_ug, std::abs(res.config.at(i) - res.g_at(i)));

    auto residual_at = [&](std::int64_t i) -> std::optional<double> {
        if (i <= -params.n || i >= params.n) return std::nullopt;
        return 2 * res.config.at(i) - res.config.at(i - 1) - res.config.at(i + 1) +
               fkqc::potential::V_prime(res.config.at(i), spec);
    };

    std::vector<std::string> outputs;
    const std::string data_path = opt.out + (opt.format == "csv" ? ".csv" : ".json");
    if (opt.format == "csv") {
        io::CsvWriter csv(data_path, {"i", "x_i", "g_i", "h_i", "residual_i"});
        for (std::int64_t i = -params.n; i <= params.n; ++i) {
            const auto r = residual_at(i);
            csv.row({std::to_string(i), io::format_double(res.config.at(i)),
                     io::format_double(res.g_at(i)), io::format_double(params.anchor(i)),
                     r ? io::format_double(*r) : std::string()});
        }
    } else {
        nlohmann::json rows = nlohmann::json::array();
        for (std::int64_t i = -params.n; i <= params.n; ++i) {
            const auto r = residual_at(i);
            nlohmann::json row{{"i", i},
                               {"x", res.config.at(i)},
                               {"g", io::golden_to_json(res.g_exact[static_cast<std::size_t>(i + params.n + 1)])},
                               {"h", params.anchor(i)}};
            if (r) row["residual"] = *r;
            rows.push_back(std::move(row));
        }
        std::ofstream jf(data_path);
        if (!jf) throw std::runtime_error("cannot open " + data_path);
        jf << nlohmann::json{{"rows", rows}}.dump(2) << '\n';
    }
    outputs.push_back(data_path);

    io::RunManifest manifest;
    manifest.command = "equilibrium";
    manifest.parameters = {{"anchor", params.anchor.name()}, {"lambda", params.lambda},
                           {"n", params.n},                  {"tol", params.tol},
                           {"max_iter", params.max_iter},    {"method", opt.method},
                           {"format", opt.format}};
    manifest.seed = opt.seed;
    manifest.version = kVersion;
    manifest.outputs = outputs;
    manifest.results = {
        {"iterations", res.iterations},
        {"final_delta", res.final_delta},
        {"max_residual_interior", residual},
        {"sup_u_minus_g", sup_ug},
        {"lambda_threshold", threshold},
        {"rotation",
         {{"estimate", rot.estimate},
          {"error_bound", rot.error_bound},
          {"plus", rot.plus},
          {"minus", rot.minus},
          {"window", est_half},
          {"has_rotation_number", rot.anchor_slopes_converge}}}};
    manifest.timing_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    const std::string manifest_path = opt.out + ".manifest.json";
    manifest.write(manifest_path);

    std::cout << "wrote " << data_path << " and " << manifest_path << '\n';
    std::cout << "iterations " << res.iterations << ", residual " << io::format_double(residual)
              << ", rotation estimate " << io::format_double(rot.estimate);
    if (!rot.anchor_slopes_converge) std::cout << " (no rotation number)";
    std::cout << '\n';
    return 0;
}

struct MinimalOptions {
    int level = 1;
    std::int64_t window = 50;
    std::uint64_t seed = 7;
    int restarts = 20;
    std::string out = "minimal";
};

int run_minimal(const MinimalOptions& opt) {
    const auto t0 = std::chrono::steady_clock::now();
    if (opt.level < 1) throw std::invalid_argument("--level must be >= 1");
    if (opt.window < 5) throw std::invalid_argument("--window must be >= 5");

    fkqc::minimal::OptimizeSettings settings;
    settings.seed = opt.seed;
    settings.restarts = opt.restarts;
    const fkqc::minimal::LevelOptimum optimum = fkqc::minimal::optimize_level(opt.level, settings);
    for (int c = 0; c < 2; ++c)
        if (!optimum.circle[c].converged)
            std::cerr << "warning: circle " << c + 1
                      << " optimizer stopped above its stationarity target (gradient "
                      << optimum.circle[c].grad_norm << "); best iterate kept\n";

    double span = 3.2 * static_cast<double>(opt.window) +
                  2.0 * fkqc::golden_pow(2 * opt.level + 2).value() + 8.0;
    fkqc::minimal::LevelConfig cfg = fkqc::minimal::lift(optimum.geometry, -span, span);
    while (cfg.n_min > -opt.window || cfg.n_max() < opt.window) {
        span *= 1.5;
        cfg = fkqc::minimal::lift(optimum.geometry, -span, span);
    }

    const std::string csv_path = opt.out + ".csv";
    {
        io::CsvWriter csv(csv_path, {"n", "theta_n"});
        for (std::int64_t n = -opt.window; n <= opt.window; ++n)
            csv.row({std::to_string(n), io::format_double(cfg.at(n))});
    }

    const fkqc::model::Configuration conf = cfg.as_configuration(opt.window);
    const double slope = (conf.at(opt.window) - conf.at(-opt.window)) / (2.0 * opt.window);
    const auto sandwich = fkqc::minimal::rotation_sandwich(cfg, -opt.window, opt.window);
    const fkqc::GoldenRational rho = fkqc::minimal::rotation_number_level(opt.level);

    nlohmann::json certificate{
        {"level", opt.level},
        {"window", opt.window},
        {"rotation",
         {{"exact", io::golden_to_json(rho)},
          {"slope_estimate", slope},
          {"sandwich",
           {{"lo", sandwich.lo},
            {"hi", sandwich.hi},
            {"windings_A", sandwich.windings[0]},
            {"windings_B", sandwich.windings[1]},
            {"pass", sandwich.lo <= slope && slope <= sandwich.hi}}}}},
        {"circles", nlohmann::json::array()}};
    for (int c = 0; c < 2; ++c) {
        certificate["circles"].push_back(
            {{"circumference", optimum.geometry.circumference[c]},
             {"atoms", optimum.geometry.atoms[c]},
             {"energy", optimum.circle[c].energy},
             {"uniform_energy", optimum.circle[c].uniform_energy},
             {"gradient_norm", optimum.circle[c].grad_norm},
             {"converged", optimum.circle[c].converged},
             {"distinct_local_minima", optimum.circle[c].distinct_minima}});
    }
    if (opt.level == 1) {
        certificate["level1_antipodal"] = {
            {"circle1_arc", optimum.circle[0].arcs[0]},
            {"circle1_half_circumference", optimum.geometry.circumference[0] / 2},
            {"circle2_arc", optimum.circle[1].arcs[0]},
            {"circle2_half_circumference", optimum.geometry.circumference[1] / 2},
            {"antipodal", std::abs(optimum.circle[0].arcs[0] - optimum.geometry.circumference[0] / 2) <= 1e-6 &&
                              std::abs(optimum.circle[1].arcs[0] - optimum.geometry.circumference[1] / 2) <= 1e-6}};
    }
    // combinatorics needs >= 10 full blocks per type; report when available
    try {
        fkqc::minimal::LevelConfig wide = cfg;
        double wspan = 13.0 * fkqc::golden_pow(2 * opt.level + 2).value() * 2.3;
        if (wspan > span) wide = fkqc::minimal::lift(optimum.geometry, -wspan, wspan);
        const auto rep = fkqc::minimal::combinatorics_certificate(wide, 10);
        certificate["combinatorics"] = {{"full_blocks_A", rep.full_blocks[0]},
                                        {"full_blocks_B", rep.full_blocks[1]},
                                        {"spread_A", rep.max_atoms[0] - rep.min_atoms[0]},
                                        {"spread_B", rep.max_atoms[1] - rep.min_atoms[1]},
                                        {"max_gap", rep.max_gap},
                                        {"gap_bound", rep.gap_bound},
                                        {"pass", rep.spread_pass && rep.gap_pass}};
    } catch (const std::exception& e) {
        certificate["combinatorics"] = {{"skipped", e.what()}};
    }

    const std::string cert_path = opt.out + ".certificate.json";
    {
        std::ofstream cf(cert_path);
        if (!cf) throw std::runtime_error("cannot open " + cert_path);
        cf << certificate.dump(2) << '\n';
    }

    io::RunManifest manifest;
    manifest.command = "minimal";
    manifest.parameters = {{"level", opt.level},
                           {"window", opt.window},
                           {"restarts", opt.restarts}};
    manifest.seed = opt.seed;
    manifest.version = kVersion;
    manifest.outputs = {csv_path, cert_path};
    manifest.results = certificate;
    manifest.timing_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    manifest.write(opt.out + ".manifest.json");

    std::cout << "wrote " << csv_path << " and " << cert_path << '\n';
    std::cout << "slope estimate " << io::format_double(slope) << " vs exact "
              << io::format_double(rho.value()) << '\n';
    return 0;
}

int run_verify(const std::string& suite) {
    const auto suites = fkqc::verify::all_suites();
    bool any = false;
    int passed = 0, failed = 0;
    for (const auto& [name, fn] : suites) {
        if (suite != "all" && suite != name) continue;
        any = true;
        const fkqc::verify::Suite checks = fn();
        for (const auto& c : checks) {
            std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << name << ": " << c.name;
            if (!c.detail.empty()) std::cout << " (" << c.detail << ")";
            std::cout << '\n';
            (c.pass ? passed : failed)++;
        }
    }
    if (!any) throw std::invalid_argument("unknown suite '" + suite + "'");
    std::cout << passed << " passed, " << failed << " failed\n";
    return failed == 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Frenkel-Kontorova model on the Fibonacci quasi-crystal"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    WordOptions wopt;
    CLI::App* word = app.add_subcommand("word", "print substitution words");
    word->add_option("--level", wopt.level, "one-sided word level (u^(level))");
    word->add_flag("--two-sided", wopt.two_sided, "emit a window of the two-sided word");
    word->add_option("--from", wopt.from, "first letter index (two-sided)");
    word->add_option("--to", wopt.to, "last letter index (two-sided)");
    word->add_option("--format", wopt.format, "text|json")->check(CLI::IsMember({"text", "json"}));
    word->add_option("--out", wopt.out, "write to file instead of stdout");

    EquilibriumOptions eopt;
    CLI::App* eq = app.add_subcommand("equilibrium", "anti-integrable-limit equilibrium");
    eq->add_option("--theta", eopt.theta, "'default' for (3 tau+1)/2, or a numeric slope");
    eq->add_option("--anchor", eopt.anchor, "named anchor: h1 (signed square)");
    eq->add_option("--anchor-file", eopt.anchor_file, "CSV file with header i,h");
    eq->add_option("--lambda", eopt.lambda, "potential scale");
    eq->add_option("--n", eopt.n, "solve on i in [-n, n]");
    eq->add_option("--tol", eopt.tol, "fixed-point stopping tolerance");
    eq->add_option("--max-iter", eopt.max_iter, "iteration cap");
    eq->add_option("--method", eopt.method, "fixed-point|tridiagonal")
        ->check(CLI::IsMember({"fixed-point", "tridiagonal"}));
    eq->add_option("--format", eopt.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
    eq->add_option("--out", eopt.out, "output prefix");
    eq->add_option("--seed", eopt.seed, "recorded in the manifest");

    MinimalOptions mopt;
    CLI::App* mn = app.add_subcommand("minimal", "branched-manifold level configuration");
    mn->add_option("--level", mopt.level, "construction level l >= 1");
    mn->add_option("--window", mopt.window, "emit theta_n for n in [-window, window]");
    mn->add_option("--seed", mopt.seed, "optimizer seed");
    mn->add_option("--restarts", mopt.restarts, "optimizer restarts");
    mn->add_option("--out", mopt.out, "output prefix");

    std::string suite = "all";
    CLI::App* vf = app.add_subcommand("verify", "run invariant suites");
    vf->add_option("--suite", suite, "fibword|chain|potential|solver|minimal|all")
        ->check(CLI::IsMember({"fibword", "chain", "potential", "solver", "minimal", "all"}));

    try {
        app.parse(argc, argv);
        if (word->parsed()) {
            if (wopt.two_sided) {
                if (wopt.from > wopt.to) throw std::invalid_argument("--from must be <= --to");
            } else if (wopt.level < 1) {
                throw std::invalid_argument("--level must be >= 1");
            }
            return run_word(wopt);
        }
        if (eq->parsed()) return run_equilibrium(eopt);
        if (mn->parsed()) return run_minimal(mopt);
        if (vf->parsed()) return run_verify(suite);
        return 1;
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 2;
    }
}
