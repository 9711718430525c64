#include "painleve/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <future>

namespace painleve {

namespace {

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = n == 1 ? a : a + (b - a) * i / (n - 1);
    return v;
}

// least squares y ~ X c for small column counts
std::vector<double> lstsq(const std::vector<std::vector<double>>& cols, const std::vector<double>& y) {
    const size_t m = cols.size(), n = y.size();
    std::vector<std::vector<double>> G(m, std::vector<double>(m, 0.0));
    std::vector<double> b(m, 0.0);
    for (size_t i = 0; i < m; ++i) {
        for (size_t j = 0; j < m; ++j)
            for (size_t k = 0; k < n; ++k) G[i][j] += cols[i][k] * cols[j][k];
        for (size_t k = 0; k < n; ++k) b[i] += cols[i][k] * y[k];
    }
    // Gaussian elimination with partial pivoting
    std::vector<size_t> idx(m);
    for (size_t i = 0; i < m; ++i) idx[i] = i;
    for (size_t col = 0; col < m; ++col) {
        size_t piv = col;
        for (size_t r = col + 1; r < m; ++r)
            if (std::abs(G[r][col]) > std::abs(G[piv][col])) piv = r;
        std::swap(G[col], G[piv]);
        std::swap(b[col], b[piv]);
        for (size_t r = col + 1; r < m; ++r) {
            double f = G[r][col] / G[col][col];
            for (size_t cc = col; cc < m; ++cc) G[r][cc] -= f * G[col][cc];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> c(m, 0.0);
    for (size_t i = m; i-- > 0;) {
        double s = b[i];
        for (size_t j = i + 1; j < m; ++j) s -= G[i][j] * c[j];
        c[i] = s / G[i][i];
    }
    return c;
}

int seed_order(const CoefficientTable& table, double r, int cap) {
    auto ch = optimal_truncation(table, r);
    // terminating tables seed with every nonzero entry of either row (the
    // u-row scan alone can stop before a nonzero tail of the U-row)
    int n = ch.terminating ? std::max(table.last_nonzero(), 0) : ch.n_star;
    return std::min(n, std::min(cap, table.N));
}

struct LegOutcome {
    bool completed = true;
    std::optional<PoleEvent> pole;
};

// Integrates one ray chain visiting `targets` in order, recording (u,U) at each
// target. State is carried at precision C; recorded values downcast.
template <class C>
LegOutcome radial_chain(const EquationSpec& eq, double theta, double r_from,
                        const std::vector<double>& targets, C u, C U, const IntegrateOptions& opts,
                        std::vector<PatchPoint>& out) {
    LegOutcome res;
    double r = r_from;
    for (double rt : targets) {
        if (rt == r) {
            out.push_back({theta, rt, to_c64(u), to_c64(U)});
            continue;
        }
        Trajectory tr = integrate_t<C>(eq, Path::ray(theta, r, rt), u, U, opts, &u, &U);
        if (tr.status != TrajStatus::Completed) {
            res.completed = false;
            res.pole = tr.pole;
            return res;
        }
        out.push_back({theta, rt, to_c64(u), to_c64(U)});
        r = rt;
    }
    return res;
}

}  // namespace

SolutionPatch build_tronquee(const CoefficientTable& table, const Sector& sector, double R0, int N,
                             const GridSpec& grid, const BuildOptions& opts) {
    const Branch& br = table.br;
    SolutionPatch patch;
    patch.br = br;
    patch.sector = sector;

    // raise R0 until the optimal-truncation error estimate clears the target
    double r0 = R0;
    for (int it = 0; it < 64; ++it) {
        auto ch = optimal_truncation(table, r0);
        if (ch.terminating || ch.err_estimate < opts.seed_err_target) break;
        r0 *= 1.12;
    }
    patch.R0 = r0;
    const double bis = sector.bisector();
    if (!contains(sector, CoverPoint{r0, bis}))
        fail(Errc::SeedOutsideSector, "anchor lies outside the sector");

    patch.N_seed = seed_order(table, r0, N);
    const double lo = sector.theta_lo() + grid.margin, hi = sector.theta_hi() - grid.margin;
    patch.thetas = linspace(lo, hi, grid.n_rays);
    double r_lo = grid.r_lo > 0 ? grid.r_lo : std::max(sector.r_min + 1.0, 0.6 * r0);
    double r_hi = grid.r_hi > 0 ? grid.r_hi : 1.4 * r0;
    patch.radii = linspace(r_lo, r_hi, grid.n_radii);

    // Arc pass at high precision: transport noise injected at angle s toward
    // the sector edge is amplified by exp(Phi(edge) - Phi(s)); at double
    // precision this exceeds the seed accuracy long before the margin.
    auto run = [&]<class C>() {
        auto [u0, U0] = evaluate_prec<C>(table, CoverPoint{r0, bis}, patch.N_seed);
        IntegrateOptions arc_opts;
        arc_opts.tol = opts.arc_tol;
        arc_opts.max_step = 0.01;
        arc_opts.record_stride = 1 << 20;
        IntegrateOptions ray_opts;
        ray_opts.tol = opts.tol;
        ray_opts.record_stride = 1 << 20;

        // states at each grid ray after the arc pass (sequential sweep each way)
        std::vector<std::pair<C, C>> at_ray(patch.thetas.size());
        std::vector<char> arc_ok(patch.thetas.size(), 1);
        auto sweep = [&](std::vector<size_t> order) {
            C u = u0, U = U0;
            double th = bis;
            for (size_t j : order) {
                double target = patch.thetas[j];
                if (std::abs(target - th) > 1e-14) {
                    Trajectory tr = integrate_t<C>(br.eq, Path::arc(r0, th, target), u, U, arc_opts,
                                                   &u, &U);
                    if (tr.status != TrajStatus::Completed) {
                        patch.poles.push_back({target, tr.pole.value_or(PoleEvent{})});
                        for (size_t rest = 0; rest < order.size(); ++rest) arc_ok[j] = 0;
                        break;
                    }
                }
                at_ray[j] = {u, U};
                th = target;
            }
        };
        std::vector<size_t> up, down;
        for (size_t j = 0; j < patch.thetas.size(); ++j)
            (patch.thetas[j] >= bis ? up : down).push_back(j);
        std::sort(up.begin(), up.end(), [&](size_t a, size_t b) { return patch.thetas[a] < patch.thetas[b]; });
        std::sort(down.begin(), down.end(), [&](size_t a, size_t b) { return patch.thetas[a] > patch.thetas[b]; });
        sweep(up);
        sweep(down);

        std::vector<double> inner, outer;
        for (double r : patch.radii) (r < r0 ? inner : outer).push_back(r);
        std::sort(inner.begin(), inner.end(), std::greater<>());
        std::sort(outer.begin(), outer.end());

        auto ray_job = [&](size_t j) {
            std::vector<PatchPoint> pts;
            std::vector<PoleRecord> pl;
            if (!arc_ok[j]) return std::make_pair(pts, pl);
            double th = patch.thetas[j];
            auto [us, Us] = at_ray[j];
            auto in = radial_chain<C>(br.eq, th, r0, inner, us, Us, ray_opts, pts);
            if (!in.completed && in.pole) pl.push_back({th, *in.pole});
            auto out = radial_chain<C>(br.eq, th, r0, outer, us, Us, ray_opts, pts);
            if (!out.completed && out.pole) pl.push_back({th, *out.pole});
            return std::make_pair(pts, pl);
        };
        std::vector<std::future<std::pair<std::vector<PatchPoint>, std::vector<PoleRecord>>>> futs;
        bool parallel = opts.workers != 1;
        if (parallel) {
            for (size_t j = 0; j < patch.thetas.size(); ++j)
                futs.push_back(std::async(std::launch::async, ray_job, j));
            for (auto& f : futs) {
                auto [pts, pl] = f.get();
                patch.points.insert(patch.points.end(), pts.begin(), pts.end());
                patch.poles.insert(patch.poles.end(), pl.begin(), pl.end());
            }
        } else {
            for (size_t j = 0; j < patch.thetas.size(); ++j) {
                auto [pts, pl] = ray_job(j);
                patch.points.insert(patch.points.end(), pts.begin(), pts.end());
                patch.poles.insert(patch.poles.end(), pl.begin(), pl.end());
            }
        }
    };
    switch (opts.arc_prec) {
        case Prec::F64: run.template operator()<c64>(); break;
        case Prec::F128: run.template operator()<c128>(); break;
        case Prec::F256: run.template operator()<c256>(); break;
    }
    patch.pole_free = patch.poles.empty();
    return patch;
}

FitReport validate_asymptotics(const SolutionPatch& patch, const CoefficientTable& table,
                               const std::vector<double>& radii, int N_cmp, const FitOptions& opts) {
    if (radii.size() < 6) fail(Errc::InsufficientSamples, "need at least 6 radii");
    for (size_t i = 1; i < radii.size(); ++i)
        if (!(radii[i] > radii[i - 1])) fail(Errc::InsufficientSamples, "radii must increase");
    if (N_cmp + 1 > table.N) fail(Errc::InsufficientSamples, "table order too small for N_cmp");

    FitReport rep;
    rep.N_cmp = N_cmp;
    rep.radii = radii;
    const double bis = patch.sector.bisector();
    const double pu = to_double(table.br.p_u);

    auto run = [&]<class C>() {
        IntegrateOptions io;
        io.tol = opts.tol;
        io.record_stride = 1 << 20;
        for (double r : radii) {
            double r_seed = r + opts.leg;
            int Ns = seed_order(table, r_seed, table.N);
            auto [u0, U0] = evaluate_prec<C>(table, CoverPoint{r_seed, bis}, Ns);
            C u = u0, U = U0;
            Trajectory tr = integrate_t<C>(table.br.eq, Path::ray(bis, r_seed, r), u, U, io, &u, &U);
            if (tr.status != TrajStatus::Completed)
                fail(Errc::ToleranceFailure, "fit leg did not complete");
            auto [us, Us] = evaluate_prec<C>(table, CoverPoint{r, bis}, N_cmp);
            double err = to_double_r(abs_of(C(u - us))) / std::pow(r, pu);
            rep.errs.push_back(err);
        }
    };
    switch (opts.prec) {
        case Prec::F64: run.template operator()<c64>(); break;
        case Prec::F128: run.template operator()<c128>(); break;
        case Prec::F256: run.template operator()<c256>(); break;
    }

    rep.predicted_slope = -to_double((N_cmp + 1) * table.br.step);
    double emax = *std::max_element(rep.errs.begin(), rep.errs.end());
    rep.floor_limited = emax <= opts.floor_abs;
    std::vector<double> lx, ly, ones;
    for (size_t i = 0; i < radii.size(); ++i) {
        lx.push_back(std::log(radii[i]));
        ly.push_back(std::log(std::max(rep.errs[i], 1e-300)));
        ones.push_back(1.0);
    }
    auto c = lstsq({ones, lx}, ly);
    rep.slope = c[1];
    rep.slope_dev = std::abs(rep.slope - rep.predicted_slope);
    double ss = 0;
    for (size_t i = 0; i < lx.size(); ++i) {
        double fit = c[0] + c[1] * lx[i];
        ss += (ly[i] - fit) * (ly[i] - fit);
    }
    rep.fit_residual = std::sqrt(ss / lx.size());
    return rep;
}

DecayReport perturbation_decay(const CoefficientTable& table, const Sector& sector, double eps,
                               PerturbMode mode, const DecayOptions& opts) {
    const Branch& br = table.br;
    DecayReport rep;
    rep.theta = sector.bisector();
    rep.eps = eps;
    if (!(eps > 0)) fail(Errc::PerturbationEscaped, "eps must be positive");
    double r_hi = opts.r_hi, r_lo = opts.r_lo;
    if (!(r_hi > r_lo) || !(r_lo > 0)) fail(Errc::InsufficientSamples, "bad decay window");

    JacobianData jd = jacobian_limit(br);
    // outward-decaying eigenvalue on the bisector
    c64 lam = jd.lam1;
    {
        c64 dphi = phase_derivative(jd, 0.5 * (r_hi + r_lo), rep.theta);
        if ((lam * dphi).real() > 0) lam = jd.lam2;
        if (mode == PerturbMode::Growing) lam = (lam == jd.lam1) ? jd.lam2 : jd.lam1;
    }

    // decaying mode: measure inward, where the outward-recessive mode dominates
    // the difference; growing mode: run outward and watch it take over
    const bool outward = mode == PerturbMode::Growing;
    const double r_from = outward ? r_lo : r_hi;
    const double r_to = outward ? r_hi : r_lo;
    int Ns = seed_order(table, r_from, table.N);
    auto [u0, U0] = evaluate(table, CoverPoint{r_from, rep.theta}, Ns);
    if (!(std::abs(c64(eps)) <= 1e-4 * std::abs(u0)))
        fail(Errc::PerturbationEscaped, "eps exceeds 1e-4 * |u| at the anchor");

    IntegrateOptions io;
    io.tol = opts.tol;
    io.record_stride = 1 << 20;

    // the decaying measurement kicks u alone (the inward-dominant mode takes
    // over regardless); the growing one must be seeded along the growing
    // eigenvector, since a u-only kick can be exactly the decaying direction
    c64 du0{eps, 0.0}, dU0{0.0, 0.0};
    if (outward) {
        c64 v1 = jd.J[0][1], v2 = lam - jd.J[0][0];
        if (std::abs(v1) + std::abs(v2) < 1e-12) {
            v1 = lam - jd.J[1][1];
            v2 = jd.J[1][0];
        }
        double nv = std::hypot(std::abs(v1), std::abs(v2));
        du0 = eps * v1 / nv;
        dU0 = eps * v2 / nv;
    }

    std::vector<double> rs = linspace(r_from, r_to, opts.n_samples + 2);
    rs.erase(rs.begin());  // skip the anchor itself
    c64 ub = u0, Ub = U0, up = u0 + du0, Up = U0 + dU0;
    double prev = r_from;
    double umax = std::abs(u0);
    for (double r : rs) {
        Trajectory t1 = integrate(br.eq, Path::ray(rep.theta, prev, r), ub, Ub, io);
        Trajectory t2 = integrate(br.eq, Path::ray(rep.theta, prev, r), up, Up, io);
        if (t1.status != TrajStatus::Completed || t2.status != TrajStatus::Completed) {
            rep.escaped = true;
            break;
        }
        ub = t1.final_u;
        Ub = t1.final_U;
        up = t2.final_u;
        Up = t2.final_U;
        double du = std::abs(up - ub);
        umax = std::max(umax, std::abs(ub));
        if (du > 0.05 * std::abs(ub)) {
            rep.escaped = true;
            rep.rs.push_back(r);
            rep.log_du.push_back(std::log(du));
            break;
        }
        rep.rs.push_back(r);
        rep.log_du.push_back(std::log(std::max(du, 1e-300)));
        prev = r;
    }
    if (rep.escaped) {
        if (!opts.expect_growth)
            fail(Errc::PerturbationEscaped, "perturbation grew to O(1) in the window");
        return rep;
    }
    if (rep.rs.size() < 4) fail(Errc::InsufficientSamples, "too few decay samples");

    // log|du| ~ C + d log r + kappa * Re(lam*phi(r e^{i theta}))
    std::vector<double> ones, logr, phi;
    for (double r : rep.rs) {
        ones.push_back(1.0);
        logr.push_back(std::log(r));
        phi.push_back((lam * phase_value(jd, r, rep.theta)).real());
    }
    std::vector<std::vector<double>> cols = opts.fit_log_prefactor
                                                ? std::vector<std::vector<double>>{ones, logr, phi}
                                                : std::vector<std::vector<double>>{ones, phi};
    auto c = lstsq(cols, rep.log_du);
    double kappa = opts.fit_log_prefactor ? c[2] : c[1];
    rep.prefactor_exp = opts.fit_log_prefactor ? c[1] : 0.0;
    rep.fitted_scale = kappa;
    double rmid = 0.5 * (rep.rs.front() + rep.rs.back());
    double dphi = (lam * phase_derivative(jd, rmid, rep.theta)).real();
    rep.predicted_rate = dphi;
    rep.measured_rate = kappa * dphi + (opts.fit_log_prefactor ? rep.prefactor_exp / rmid : 0.0);
    rep.rel_deviation = std::abs(rep.measured_rate - rep.predicted_rate) /
                        std::max(1e-300, std::abs(rep.predicted_rate));
    return rep;
}

OverlapReport overlap_agreement(const CoefficientTable& table, int k, int N, double R_probe,
                                const OverlapOptions& opts) {
    const Branch& br = table.br;
    const Family fam = br.eq.family;
    if (k < 0 || k + 1 >= sector_k_count(fam)) fail(Errc::NoOverlap, "no adjacent sector for k");
    Sector s1 = sector(br.eq, br.m, k, SectorKind::S_existence, 1.0);
    Sector s2 = sector(br.eq, br.m, k + 1, SectorKind::S_existence, 1.0);
    double olo = std::max(s1.theta_lo(), s2.theta_lo());
    double ohi = std::min(s1.theta_hi(), s2.theta_hi());
    if (olo > ohi + 1e-12) fail(Errc::NoOverlap, "sectors do not touch");
    double theta_p = 0.5 * (olo + ohi) + opts.probe_offset;
    if (std::abs(opts.probe_offset) > opts.wedge_eps)
        fail(Errc::NoOverlap, "probe lies outside the overlap wedge");

    OverlapReport rep;
    rep.k = k;
    rep.R_probe = R_probe;
    rep.theta_probe = theta_p;

    JacobianData jd = jacobian_limit(br);
    int Ns = seed_order(table, R_probe, N);

    auto transport = [&]<class C>(double bis) {
        auto [u0, U0] = evaluate_prec<C>(table, CoverPoint{R_probe, bis}, Ns);
        IntegrateOptions io;
        io.tol = opts.arc_tol;
        io.max_step = 0.01;
        io.record_stride = 1 << 20;
        C u = u0, U = U0;
        Trajectory tr =
            integrate_t<C>(br.eq, Path::arc(R_probe, bis, theta_p), u, U, io, &u, &U);
        bool ok = tr.status == TrajStatus::Completed;
        return std::make_tuple(to_c64(u), to_c64(U), ok);
    };
    bool ok1 = false, ok2 = false;
    auto do_both = [&]<class C>() {
        auto [a, b, o1] = transport.template operator()<C>(s1.bisector());
        auto [c, d, o2] = transport.template operator()<C>(s2.bisector());
        rep.u1 = a; rep.U1 = b; rep.u2 = c; rep.U2 = d;
        ok1 = o1; ok2 = o2;
    };
    switch (opts.arc_prec) {
        case Prec::F64: do_both.template operator()<c64>(); break;
        case Prec::F128: do_both.template operator()<c128>(); break;
        case Prec::F256: do_both.template operator()<c256>(); break;
    }
    rep.du_abs = ok1 && ok2 ? std::abs(rep.u1 - rep.u2) : std::numeric_limits<double>::infinity();
    rep.dU_abs = ok1 && ok2 ? std::abs(rep.U1 - rep.U2) : std::numeric_limits<double>::infinity();

    // transport noise bound: worst future amplification of either mode along the arcs
    double amp = 0.0;
    for (c64 lam : {jd.lam1, jd.lam2}) {
        for (double bis : {s1.bisector(), s2.bisector()}) {
            double phi_end = (lam * phase_value(jd, R_probe, theta_p)).real();
            for (double s = 0.0; s <= 1.0; s += 1.0 / 64) {
                double th = bis + (theta_p - bis) * s;
                double phi_s = (lam * phase_value(jd, R_probe, th)).real();
                amp = std::max(amp, phi_end - phi_s);
            }
        }
    }
    double prec_eps = opts.arc_prec == Prec::F64 ? 1e-16 : (opts.arc_prec == Prec::F128 ? 1e-34 : 1e-71);
    rep.solver_floor = (opts.arc_tol + prec_eps) * std::exp(std::min(amp, 600.0));

    double lphi = std::abs(jd.lam1) * to_double(jd.phase_coeff) *
                  std::pow(R_probe, to_double(jd.phase_power));
    rep.bound_C = rep.du_abs / std::exp(-std::min(lphi, 600.0));
    if (N + 1 <= table.N) {
        double lt = table.log_abs_a(N + 1) +
                    to_double(table.br.p_u - (N + 1) * table.br.step) * std::log(R_probe);
        rep.largest_neglected = std::exp(lt);
    }
    rep.separation = rep.largest_neglected / std::max(rep.du_abs, 1e-300);
    rep.pass_agreement = rep.du_abs <= std::max(rep.solver_floor, opts.agree_tol);
    rep.pass_separation = rep.separation >= 1e3;
    return rep;
}

SweepReport tritronquee_sweep_p3ii(const CoefficientTable& table, double cut_angle, double R, int N,
                                   const SweepOptions& opts) {
    if (table.br.eq.family != Family::P3ii)
        fail(Errc::UnsupportedFamily, "tritronquee sweep is a P3ii experiment");
    SweepReport rep;
    rep.cut_angle = cut_angle;
    rep.R = R;
    rep.n_segments = opts.n_segments;
    rep.margin = opts.margin;
    const double lo = cut_angle + opts.margin;
    const double hi = cut_angle + 3 * pi_const<double>() - opts.margin;
    const double seg = (hi - lo) / opts.n_segments;
    const double shift = 2 * pi_const<double>() * opts.sheet;

    IntegrateOptions io;
    io.tol = opts.tol;
    io.record_stride = 1 << 20;
    for (int i = 0; i < opts.n_segments; ++i) {
        double th0 = lo + i * seg, th1 = th0 + seg;
        int Ns = seed_order(table, R, table.N);
        auto [u0, U0] = evaluate(table, CoverPoint{R, th0 + shift}, Ns);
        Trajectory tr = integrate(table.br.eq, Path::arc(R, th0, th1), u0, U0, io);
        if (tr.status != TrajStatus::Completed) {
            rep.pole_free = false;
            break;
        }
        auto [us, Us] = evaluate(table, CoverPoint{R, th1 + shift}, N);
        double dev = std::abs(tr.final_u - us) / std::abs(us);
        rep.thetas.push_back(th1);
        rep.rel_dev.push_back(dev);
        rep.worst_dev = std::max(rep.worst_dev, dev);
    }
    return rep;
}

PoleFieldReport pole_scan(const CoefficientTable& table, c64 detuning, const ScanRegion& region,
                          const IntegrateOptions& opts) {
    PoleFieldReport rep;
    rep.detuning = detuning;
    rep.ray_thetas = linspace(region.theta_lo, region.theta_hi, region.n_rays);

    auto job = [&](double th) -> std::pair<std::optional<PoleRecord>, bool> {
        int Ns = seed_order(table, region.R0, table.N);
        auto [u0, U0] = evaluate(table, CoverPoint{region.R0, th}, Ns);
        Trajectory tr = integrate(table.br.eq, Path::ray(th, region.R0, region.r_lo), u0 + detuning,
                                  U0, opts);
        if (tr.status == TrajStatus::PoleDetected && tr.pole)
            return {PoleRecord{th, *tr.pole}, false};
        return {std::nullopt, tr.status == TrajStatus::Completed};
    };
    std::vector<std::future<std::pair<std::optional<PoleRecord>, bool>>> futs;
    for (double th : rep.ray_thetas) futs.push_back(std::async(std::launch::async, job, th));
    for (auto& f : futs) {
        auto [pole, done] = f.get();
        if (pole) rep.poles.push_back(*pole);
        if (done) ++rep.completed_rays;
    }
    rep.any_pole = !rep.poles.empty();
    return rep;
}

}  // namespace painleve
