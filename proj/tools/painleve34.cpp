// Command-line front end: series tables, residual checks, eigenvalue table,
// complex-path integration, and the sector experiments, with JSON/CSV output
// and self-contained SVG plots.

#include "painleve/json_io.hpp"
#include "painleve/oracle.hpp"
#include "painleve/selftest.hpp"
#include "painleve/svg.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

using namespace painleve;
namespace fs = std::filesystem;

struct Common {
    std::string family = "p3i";
    int m = 0;
    std::string alpha = "0", beta = "0", k0 = "0", kinf = "0";
    int N = 20;
    std::string backend = "f256";
    double tol = 1e-10;
    std::string format = "json";
    bool quiet = false;
    std::string out_dir;
};

PValue parse_param(const std::string& text, const char* what) {
    auto v = parse_complex_rational(text);
    if (!v) {
        double re = 0, im = 0;
        if (std::sscanf(text.c_str(), "%lf%lfi", &re, &im) >= 1) {
            std::cerr << "warning: parameter " << what
                      << " is not an exact rational; forcing the floating backend\n";
            return PValue(c64{re, im});
        }
        throw CLI::ValidationError(std::string(what) + ": cannot parse '" + text + "'");
    }
    return PValue(ExactScalar::gauss(v->first, v->second));
}

EquationSpec equation_from(const Common& c) {
    auto fam = family_from_name(c.family);
    if (!fam) throw CLI::ValidationError("unknown family '" + c.family + "'");
    switch (*fam) {
        case Family::P3i: return make_p3i(parse_param(c.alpha, "alpha"), parse_param(c.beta, "beta"));
        case Family::P3ii: return make_p3ii(parse_param(c.beta, "beta"));
        case Family::P4: return make_p4(parse_param(c.k0, "k0"), parse_param(c.kinf, "kinf"));
    }
    throw CLI::ValidationError("unreachable");
}

Backend backend_from(const Common& c) {
    auto b = backend_from_name(c.backend);
    if (!b) throw CLI::ValidationError("unknown backend '" + c.backend + "'");
    return *b;
}

void add_common(CLI::App* app, Common& c) {
    app->add_option("--family", c.family, "equation family: p3i | p3ii | p4");
    app->add_option("--m,--case", c.m, "branch index (p3i: 0..3, p3ii: 0..2, p4: 1..4)");
    app->add_option("--alpha", c.alpha, "alpha as an exact rational/complex string, e.g. 1/3 or 1+2i");
    app->add_option("--beta", c.beta, "beta (same format)");
    app->add_option("--k0", c.k0, "kappa_0 (P4)");
    app->add_option("--kinf", c.kinf, "kappa_inf (P4)");
    app->add_option("--N", c.N, "series order");
    app->add_option("--backend", c.backend, "exact | f64 | f128 | f256");
    app->add_option("--tol", c.tol, "integrator tolerance");
    app->add_option("--format", c.format, "json | csv");
    app->add_flag("--quiet", c.quiet, "suppress stdout payload");
    app->add_option("--out", c.out_dir, "output directory (default $PAINLEVE34_OUT)");
}

fs::path ensure_out_dir(const Common& c) {
    std::string dir = c.out_dir;
    if (dir.empty()) {
        const char* env = std::getenv("PAINLEVE34_OUT");
        dir = env ? env : "";
    }
    if (dir.empty()) return {};
    fs::create_directories(dir);
    // timestamps stay in a sidecar so payload files are byte-identical per config
    std::ofstream meta(fs::path(dir) / "run_meta.json");
    meta << "{\"written_unix\": "
         << std::chrono::duration_cast<std::chrono::seconds>(
                std::chrono::system_clock::now().time_since_epoch())
                .count()
         << "}\n";
    return dir;
}

void emit(const Common& c, const Json& payload, const std::string& name) {
    fs::path dir = ensure_out_dir(c);
    if (!dir.empty()) {
        std::ofstream f(dir / (name + ".json"));
        f << payload.dump(2) << "\n";
    }
    if (!c.quiet) std::cout << payload.dump(2) << "\n";
}

int run_app(int argc, char** argv) {
    CLI::App app{"tronquee solutions of the third and fourth Painleve equations"};
    app.require_subcommand(1);
    Common c;

    auto* coeffs = app.add_subcommand("coeffs", "emit the recurrence coefficient table");
    add_common(coeffs, c);
    coeffs->callback([&] {
        EquationSpec eq = equation_from(c);
        auto table = compute_coefficients(branch(eq, c.m), c.N, backend_from(c), true);
        emit(c, table_json(table), "coeffs");
        auto growth = c.N >= 5 ? std::optional<GrowthReport>(term_growth(table)) : std::nullopt;
        if (growth && !c.quiet) std::cout << growth_json(*growth).dump(2) << "\n";
    });

    auto* residual = app.add_subcommand("residual", "exact formal-solution residual order");
    add_common(residual, c);
    residual->callback([&] {
        EquationSpec eq = equation_from(c);
        Branch br = branch(eq, c.m);
        auto rep = residual_order(br, c.N);
        Json j = residual_json(rep);
        auto tab = compute_coefficients(br, c.N, Backend::Exact, true).exact();
        j["oracle_depth"] = oracle::residual_depth(br, tab.a, tab.A);
        auto sc = oracle::scalar_equation_residual(br, tab.a, false);
        j["oracle_scalar_ok"] = sc.all_known_vanish;
        emit(c, j, "residual");
        if (!(rep.infinite() || rep.order >= c.N)) throw Error(Errc::ToleranceFailure, "residual short");
    });

    auto* eigs = app.add_subcommand("eigs", "Jacobian eigenvalue table over all branches");
    add_common(eigs, c);
    eigs->callback([&] {
        EquationSpec p3i = make_p3i(parse_param(c.alpha == "0" ? "1" : c.alpha, "alpha"),
                                    parse_param(c.beta == "0" ? "2" : c.beta, "beta"));
        EquationSpec p3ii = make_p3ii(parse_param("1/2", "beta"));
        EquationSpec p4 = make_p4(parse_param(c.k0 == "0" ? "2/3" : c.k0, "k0"),
                                  parse_param(c.kinf == "0" ? "3/5" : c.kinf, "kinf"));
        auto reps = wasow_check_all(p3i, p3ii, p4);
        emit(c, wasow_json(reps), "eigs");
        for (const auto& r : reps)
            if (!r.pass) throw Error(Errc::ToleranceFailure, r.branch + " failed");
    });

    auto* integ = app.add_subcommand("integrate", "integrate one path from a series seed");
    add_common(integ, c);
    double th0 = 0, r0 = 10, r1 = 40;
    integ->add_option("--theta", th0, "ray angle (radians, tracked)");
    integ->add_option("--r0", r0, "start radius");
    integ->add_option("--r1", r1, "end radius");
    integ->callback([&] {
        EquationSpec eq = equation_from(c);
        auto table = compute_coefficients(branch(eq, c.m), std::max(c.N, 20), Backend::F256, true);
        int Ns = std::min(optimal_truncation(table, r0).n_star, c.N);
        auto [u0, U0] = evaluate(table, CoverPoint{r0, th0}, Ns);
        IntegrateOptions io;
        io.tol = c.tol;
        Trajectory tr = integrate(eq, Path::ray(th0, r0, r1), u0, U0, io);
        fs::path dir = ensure_out_dir(c);
        if (!dir.empty()) {
            std::ofstream f(dir / "trajectory.csv");
            trajectory_csv(tr, f);
        }
        if (c.format == "csv" && !c.quiet) trajectory_csv(tr, std::cout);
        else emit(c, trajectory_json(tr), "trajectory");
    });

    auto* tron = app.add_subcommand("tronquee", "build a sector patch and validate asymptotics");
    add_common(tron, c);
    double R0 = 25;
    int kk = 0;
    tron->add_option("--R0", R0, "anchor radius");
    tron->add_option("--k", kk, "sector index");
    tron->callback([&] {
        EquationSpec eq = equation_from(c);
        Branch br = branch(eq, c.m);
        auto table = compute_coefficients(br, 60, Backend::F256, true);
        Sector sec = sector(eq, c.m, kk, SectorKind::S_existence, R0 / 3.0);
        GridSpec grid;
        grid.r_lo = 0.55 * R0;
        grid.r_hi = 1.3 * R0;
        BuildOptions bo;
        bo.tol = c.tol;
        SolutionPatch patch = build_tronquee(table, sec, R0, c.N, grid, bo);
        Json j = patch_json(patch);
        std::vector<double> radii;
        for (int i = 0; i < 7; ++i) radii.push_back(0.55 * R0 * std::pow(1.3 / 0.55, i / 6.0));
        FitOptions fo;
        FitReport fit = validate_asymptotics(patch, table, radii, std::min(c.N, 5), fo);
        j["fit"] = fit_json(fit);
        emit(c, j, "tronquee");
        fs::path dir = ensure_out_dir(c);
        if (!dir.empty()) {
            Plot p;
            p.title = "truncation error vs radius";
            p.xlabel = "log10 |x|";
            p.ylabel = "log10 err";
            PlotSeries s;
            for (size_t i = 0; i < fit.radii.size(); ++i) {
                s.x.push_back(std::log10(fit.radii[i]));
                s.y.push_back(std::log10(std::max(fit.errs[i], 1e-300)));
            }
            s.name = "N_cmp=" + std::to_string(fit.N_cmp);
            p.series.push_back(s);
            write_svg(p, (dir / "tronquee_fit.svg").string());
        }
    });

    auto* pert = app.add_subcommand("perturb", "perturbation decay-rate experiment");
    add_common(pert, c);
    double eps = 1e-9, rhi = 20, rlo = 14;
    bool logpref = true;
    pert->add_option("--eps", eps, "perturbation size");
    pert->add_option("--rhi", rhi, "window outer radius");
    pert->add_option("--rlo", rlo, "window inner radius");
    pert->add_flag("--no-log-prefactor{false}", logpref, "drop the log r regressor");
    pert->callback([&] {
        EquationSpec eq = equation_from(c);
        auto table = compute_coefficients(branch(eq, c.m), 60, Backend::F256, true);
        DecayOptions d;
        d.r_hi = rhi;
        d.r_lo = rlo;
        d.tol = c.tol;
        d.fit_log_prefactor = logpref;
        DecayReport rep = perturbation_decay(table, sector(eq, c.m, 0, SectorKind::S_existence, 1.0),
                                             eps, PerturbMode::Decaying, d);
        emit(c, decay_json(rep), "perturb");
        fs::path dir = ensure_out_dir(c);
        if (!dir.empty()) {
            Plot p;
            p.title = "perturbation decay";
            p.xlabel = "|x|";
            p.ylabel = "log |du|";
            PlotSeries s;
            s.x = rep.rs;
            s.y = rep.log_du;
            p.series.push_back(s);
            write_svg(p, (dir / "decay.svg").string());
        }
    });

    auto* over = app.add_subcommand("overlap", "adjacent-sector agreement probe");
    add_common(over, c);
    double Rp = 20;
    int ok_ = 0;
    over->add_option("--R", Rp, "probe radius");
    over->add_option("--k", ok_, "lower sector index");
    over->callback([&] {
        EquationSpec eq = equation_from(c);
        auto table = compute_coefficients(branch(eq, c.m), 60, Backend::F256, true);
        OverlapReport rep = overlap_agreement(table, ok_, c.N, Rp);
        emit(c, overlap_json(rep), "overlap");
    });

    auto* sweep = app.add_subcommand("sweep3ii", "P3ii tritronquee branch-cut sweep");
    add_common(sweep, c);
    double cut = -3.14159265358979, Rs = 30;
    int segs = 12;
    sweep->add_option("--cut", cut, "branch cut angle");
    sweep->add_option("--R", Rs, "sweep radius");
    sweep->add_option("--segments", segs, "re-seeded segments across the span");
    sweep->callback([&] {
        EquationSpec eq = equation_from(c);
        if (eq.family != Family::P3ii) throw CLI::ValidationError("sweep3ii needs --family p3ii");
        auto table = compute_coefficients(branch(eq, c.m), 60, Backend::F256, true);
        SweepOptions so;
        so.n_segments = segs;
        so.tol = c.tol;
        SweepReport rep = tritronquee_sweep_p3ii(table, cut, Rs, std::min(c.N, 10), so);
        emit(c, sweep_json(rep), "sweep3ii");
        if (!rep.pole_free) throw Error(Errc::ToleranceFailure, "sweep hit a pole");
    });

    auto* scan = app.add_subcommand("scan", "pole scan of a detuned seed");
    add_common(scan, c);
    double det = 0.5, R0s = 15, rlo2 = 6, thlo = -1.1, thhi = 1.1;
    int nrays = 7;
    scan->add_option("--detuning", det, "seed detuning added to u");
    scan->add_option("--R0", R0s, "seed radius");
    scan->add_option("--rlo", rlo2, "inner radius");
    scan->add_option("--theta-lo", thlo, "fan lower angle");
    scan->add_option("--theta-hi", thhi, "fan upper angle");
    scan->add_option("--rays", nrays, "number of rays");
    scan->callback([&] {
        EquationSpec eq = equation_from(c);
        auto table = compute_coefficients(branch(eq, c.m), 60, Backend::F256, true);
        ScanRegion region{thlo, thhi, nrays, R0s, rlo2};
        IntegrateOptions io;
        io.tol = c.tol;
        PoleFieldReport rep = pole_scan(table, c64{det, 0}, region, io);
        emit(c, polefield_json(rep), "scan");
        fs::path dir = ensure_out_dir(c);
        if (!dir.empty()) {
            Plot p;
            p.title = "pole map";
            p.xlabel = "Re x";
            p.ylabel = "Im x";
            PlotSeries s;
            s.markers_only = true;
            s.color = "#d73a49";
            for (const auto& q : rep.poles) {
                s.x.push_back(q.ev.x_pole.real());
                s.y.push_back(q.ev.x_pole.imag());
            }
            p.series.push_back(s);
            write_svg(p, (dir / "pole_map.svg").string());
        }
    });

    auto* self = app.add_subcommand("selftest", "run the full acceptance suite");
    add_common(self, c);
    self->callback([&] {
        auto results = painleve::selftest::run_all(c.quiet ? nullptr : &std::cout);
        if (!painleve::selftest::all_pass(results))
            throw Error(Errc::ToleranceFailure, "selftest failed");
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run_app(argc, argv);
    } catch (const CLI::Error& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const painleve::Error& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
