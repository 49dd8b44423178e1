#include "cli/commands.hpp"

#include <array>
#include <cstdlib>
#include <functional>
#include <ostream>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "rieszflow/approx.hpp"
#include "rieszflow/csv.hpp"
#include "rieszflow/error.hpp"
#include "rieszflow/map_json.hpp"
#include "rieszflow/operators.hpp"

namespace rieszflow::cli {

namespace fs = std::filesystem;

namespace {

using OutputSet = std::vector<std::pair<fs::path, std::string>>;

// Writes every file or none: on failure, files already written are removed.
void commit(const OutputSet& files) {
    std::vector<fs::path> written;
    try {
        for (const auto& [path, text] : files) {
            write_text(path, text);
            written.push_back(path);
        }
    } catch (...) {
        std::error_code ec;
        for (const auto& p : written) fs::remove(p, ec);
        throw;
    }
}

fs::path prepare_out_dir(const RunConfig& cfg) {
    const fs::path dir = cfg.out.value_or(fs::path("."));
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw Error("cannot create output directory " + dir.string());
    return dir;
}

// x = k / 40 for k = -200 … 200, so x = 0 is hit exactly.
std::vector<double> plot_grid() {
    std::vector<double> xs;
    for (int k = -200; k <= 200; ++k) xs.push_back(static_cast<double>(k) / 40.0);
    return xs;
}

OptConfig opt_config(const RunConfig& cfg) {
    OptConfig oc;
    oc.iterations = cfg.iters;
    oc.learning_rate = cfg.lr;
    oc.seed = cfg.seed;
    oc.count = cfg.n;
    return oc;
}

// Every command shares this error boundary: exceptions become exit 1.
int guarded(std::ostream& err, const std::function<int()>& body) {
    try {
        return body();
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitError;
    }
}

}  // namespace

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        if (!cfg.map_file) throw ConfigError("verify requires --map FILE");
        const MapSpec map = load_map(*cfg.map_file);
        const QuadRule rule = build_rule(cfg.quad);
        const Certificate cert = certify(map, BasisSpec::hermite(cfg.n), cfg.n, rule);
        const std::string text = certificate_to_json(cert).dump(2) + "\n";
        if (cfg.out) commit({{prepare_out_dir(cfg) / "certificate.json", text}});
        out << text;
        return cert.verdict == Verdict::Inconclusive ? kExitInconclusive : kExitOk;
    });
}

int cmd_approximate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const MapSpec map = cfg.map_file ? load_map(*cfg.map_file) : MapSpec::identity();
        const TargetFn f = TargetFn::parse(cfg.target);
        const QuadRule rule = build_rule(cfg.quad);
        const fs::path dir = prepare_out_dir(cfg);
        const BasisSpec base = BasisSpec::hermite(cfg.n);

        const Expansion e = expand(f, map, base, cfg.n, rule);
        std::vector<std::size_t> counts;
        for (std::size_t k = 1; k <= cfg.n; ++k) counts.push_back(k);
        std::vector<std::vector<double>> rows;
        for (const auto& [n, e2] : convergence_curve(f, map, base, counts, rule)) {
            rows.push_back({static_cast<double>(n), e2});
        }
        const nlohmann::json summary = {
            {"target", f.description()}, {"n", cfg.n}, {"coefficients", e.coefficients}, {"l2_error", e.l2_error}};

        commit({{dir / "expansion.json", summary.dump(2) + "\n"},
                {dir / "convergence.csv", to_csv({"N", "l2_error"}, rows)}});
        out << "l2_error(N=" << cfg.n << ") = " << format_double(e.l2_error) << '\n';
        return kExitOk;
    });
}

int cmd_optimize(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const MapSpec initial = cfg.map_file ? load_map(*cfg.map_file) : default_flow_template(cfg.seed);
        const TargetFn f = TargetFn::parse(cfg.target);
        const QuadRule rule = build_rule(cfg.quad);
        const fs::path dir = prepare_out_dir(cfg);

        const OptResult res = optimize_map(f, BasisSpec::hermite(cfg.n), initial, opt_config(cfg), rule);
        std::vector<std::vector<double>> rows;
        for (const TracePoint& t : res.trace) rows.push_back({static_cast<double>(t.iter), t.l2_error});

        commit({{dir / "map.json", map_to_string(res.map) + "\n"},
                {dir / "trace.csv", to_csv({"iter", "l2_error"}, rows)}});
        out << "initial l2_error = " << format_double(res.initial_error) << '\n'
            << "best l2_error    = " << format_double(res.best_error) << '\n';
        return kExitOk;
    });
}

int cmd_figures(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const TargetFn f = TargetFn::parse(cfg.target);
        const QuadRule rule = build_rule(cfg.quad);
        const fs::path dir = prepare_out_dir(cfg);
        OutputSet files;

        MapSpec map;
        if (cfg.map_file) {
            map = load_map(*cfg.map_file);
        } else {
            const OptResult res =
                optimize_map(f, BasisSpec::hermite(cfg.n), default_flow_template(cfg.seed), opt_config(cfg), rule);
            map = res.map;
            files.emplace_back(dir / "map.json", map_to_string(map) + "\n");
            out << "optimized l2_error(N=" << cfg.n << ") = " << format_double(res.best_error) << '\n';
        }

        const std::vector<double> xs = plot_grid();
        std::vector<std::vector<double>> fig1, fig2, fig4;
        for (double x : xs) {
            fig1.push_back({x, f(x)});
            fig2.push_back({x, map_forward(map, x)});
            std::vector<double> row{x};
            std::array<double, 5> plain{}, pert{};
            hermite_all(x, plain);
            hermite_all(map_forward(map, x), pert);
            row.insert(row.end(), plain.begin(), plain.end());
            row.insert(row.end(), pert.begin(), pert.end());
            fig4.push_back(std::move(row));
        }

        constexpr std::size_t kMaxN = 20;
        std::vector<std::size_t> counts;
        for (std::size_t k = 1; k <= kMaxN; ++k) counts.push_back(k);
        const BasisSpec base = BasisSpec::hermite(kMaxN);
        const auto hermite = convergence_curve(f, MapSpec::identity(), base, counts, rule);
        const auto perturbed = convergence_curve(f, map, base, counts, rule);
        std::vector<std::vector<double>> fig3;
        for (std::size_t k = 0; k < counts.size(); ++k) {
            fig3.push_back({static_cast<double>(counts[k]), hermite[k].second, perturbed[k].second});
        }

        files.emplace_back(dir / "fig1_target.csv", to_csv({"x", "f"}, fig1));
        files.emplace_back(dir / "fig2_map.csv", to_csv({"x", "h"}, fig2));
        files.emplace_back(dir / "fig3_convergence.csv", to_csv({"N", "err_hermite", "err_perturbed"}, fig3));
        files.emplace_back(dir / "fig4_bases.csv",
                           to_csv({"x", "gamma_0", "gamma_1", "gamma_2", "gamma_3", "gamma_4", "perturbed_0",
                                   "perturbed_1", "perturbed_2", "perturbed_3", "perturbed_4"},
                                  fig4));
        commit(files);
        out << "wrote figure data to " << dir.string() << '\n';
        return kExitOk;
    });
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Perturbed L2 bases from bi-Lipschitz maps"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string map_file;
    std::string out_dir;
    std::string domain;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--map", map_file, "Map JSON file");
        sub->add_option("--target", cfg.target, "shifted-gaussian:A | sin-abs-gaussian | expr:STRING");
        sub->add_option("--n", cfg.n, "Number of basis functions")->check(CLI::PositiveNumber);
        sub->add_option("--quad-domain", domain, "Truncation interval LO:HI (use --quad-domain=-10:10)");
        sub->add_option("--quad-panels", cfg.quad.panels, "Quadrature panels")->check(CLI::PositiveNumber);
        sub->add_option("--quad-order", cfg.quad.order, "Gauss-Legendre nodes per panel")->check(CLI::Range(2, 64));
        sub->add_option("--iters", cfg.iters, "Optimizer iterations")->check(CLI::PositiveNumber);
        sub->add_option("--lr", cfg.lr, "Adam learning rate")->check(CLI::PositiveNumber);
        sub->add_option("--seed", cfg.seed, "Seed for map initialization");
        sub->add_option("--out", out_dir, "Output directory");
    };
    std::vector<CLI::App*> subs = {
        app.add_subcommand("verify", "Certify the basis induced by a map"),
        app.add_subcommand("approximate", "Expand a target in a perturbed basis"),
        app.add_subcommand("optimize", "Optimize a map to fit a target"),
        app.add_subcommand("figures", "Export figure data as CSV"),
    };
    for (auto* sub : subs) add_common(sub);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitError;
    }

    if (!map_file.empty()) cfg.map_file = map_file;
    if (!out_dir.empty()) cfg.out = out_dir;
    if (!domain.empty()) {
        const auto colon = domain.find(':', 1);
        char* end_lo = nullptr;
        char* end_hi = nullptr;
        if (colon != std::string::npos) {
            const std::string lo = domain.substr(0, colon);
            const std::string hi = domain.substr(colon + 1);
            cfg.quad.lo = std::strtod(lo.c_str(), &end_lo);
            cfg.quad.hi = std::strtod(hi.c_str(), &end_hi);
            if (*end_lo != '\0' || *end_hi != '\0' || lo.empty() || hi.empty()) end_lo = nullptr;
        }
        if (colon == std::string::npos || end_lo == nullptr || !(cfg.quad.lo < cfg.quad.hi)) {
            err << "error: --quad-domain expects LO:HI with LO < HI, got '" << domain << "'\n";
            return kExitError;
        }
    }

    for (auto* sub : subs) {
        if (!sub->parsed()) continue;
        cfg.subcommand = sub->get_name();
    }
    if (cfg.subcommand == "verify") return cmd_verify(cfg, out, err);
    if (cfg.subcommand == "approximate") return cmd_approximate(cfg, out, err);
    if (cfg.subcommand == "optimize") return cmd_optimize(cfg, out, err);
    return cmd_figures(cfg, out, err);
}

}  // namespace rieszflow::cli
