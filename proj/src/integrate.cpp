#include "painleve/integrate.hpp"

#include <algorithm>
#include <cmath>

namespace painleve {

namespace {
constexpr double kJoinTol = 1e-9;

double seg_end_r(const Segment& s) {
    return std::holds_alternative<RaySeg>(s) ? std::get<RaySeg>(s).r1 : std::get<ArcSeg>(s).r;
}
double seg_end_th(const Segment& s) {
    return std::holds_alternative<RaySeg>(s) ? std::get<RaySeg>(s).theta : std::get<ArcSeg>(s).th1;
}
double seg_start_r(const Segment& s) {
    return std::holds_alternative<RaySeg>(s) ? std::get<RaySeg>(s).r0 : std::get<ArcSeg>(s).r;
}
double seg_start_th(const Segment& s) {
    return std::holds_alternative<RaySeg>(s) ? std::get<RaySeg>(s).theta : std::get<ArcSeg>(s).th0;
}
}  // namespace

Path make_path(std::vector<Segment> segs) {
    Path p;
    p.segs_ = std::move(segs);
    return p;
}

Path Path::ray(double theta, double r0, double r1) {
    if (!(r0 > 0) || !(r1 > 0)) fail(Errc::ZeroXOnPath, "ray radii must be positive");
    if (!std::isfinite(theta)) fail(Errc::DiscontinuousJoin, "non-finite angle");
    return make_path({RaySeg{theta, r0, r1}});
}

Path Path::arc(double r, double th0, double th1) {
    if (!(r > 0)) fail(Errc::ZeroXOnPath, "arc radius must be positive");
    if (!std::isfinite(th0) || !std::isfinite(th1)) fail(Errc::DiscontinuousJoin, "non-finite angle");
    return make_path({ArcSeg{r, th0, th1}});
}

Path Path::concat(const std::vector<Path>& parts) {
    std::vector<Segment> segs;
    for (const auto& p : parts)
        for (const auto& s : p.segs_) {
            if (!segs.empty()) {
                double dr = std::abs(seg_end_r(segs.back()) - seg_start_r(s));
                double dth = std::abs(seg_end_th(segs.back()) - seg_start_th(s));
                double scale = std::max(1.0, std::abs(seg_end_r(segs.back())));
                if (dr > kJoinTol * scale || dth > kJoinTol)
                    fail(Errc::DiscontinuousJoin,
                         "segments do not join continuously in (r, tracked arg)");
            }
            segs.push_back(s);
        }
    if (segs.empty()) fail(Errc::DiscontinuousJoin, "empty path");
    return make_path(std::move(segs));
}

Path Path::reversed() const {
    std::vector<Segment> segs;
    for (auto it = segs_.rbegin(); it != segs_.rend(); ++it) {
        if (std::holds_alternative<RaySeg>(*it)) {
            auto s = std::get<RaySeg>(*it);
            segs.push_back(RaySeg{s.theta, s.r1, s.r0});
        } else {
            auto s = std::get<ArcSeg>(*it);
            segs.push_back(ArcSeg{s.r, s.th1, s.th0});
        }
    }
    return make_path(std::move(segs));
}

CoverPoint Path::point(double t) const {
    size_t i = segs_.size();
    double local = 1.0;
    if (t < static_cast<double>(segs_.size())) {
        i = static_cast<size_t>(std::max(0.0, std::floor(t)));
        local = t - static_cast<double>(i);
    } else {
        i = segs_.size() - 1;
    }
    const Segment& s = segs_[i];
    if (std::holds_alternative<RaySeg>(s)) {
        auto g = std::get<RaySeg>(s);
        return {g.r0 + (g.r1 - g.r0) * local, g.theta};
    }
    auto g = std::get<ArcSeg>(s);
    return {g.r, g.th0 + (g.th1 - g.th0) * local};
}

double Path::min_radius() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& s : segs_) {
        if (std::holds_alternative<RaySeg>(s)) {
            auto g = std::get<RaySeg>(s);
            m = std::min({m, g.r0, g.r1});
        } else {
            m = std::min(m, std::get<ArcSeg>(s).r);
        }
    }
    return m;
}

double Path::scale(size_t seg) const {
    const Segment& s = segs_[seg];
    if (std::holds_alternative<RaySeg>(s)) {
        auto g = std::get<RaySeg>(s);
        return std::abs(g.r1 - g.r0);
    }
    auto g = std::get<ArcSeg>(s);
    return g.r * std::abs(g.th1 - g.th0);
}

namespace {

// Dormand-Prince 5(4) tableau.
template <class R> struct Dopri {
    R c2, c3, c4, c5;
    R a21, a31, a32, a41, a42, a43, a51, a52, a53, a54, a61, a62, a63, a64, a65;
    R a71, a73, a74, a75, a76;
    R e1, e3, e4, e5, e6, e7;
    static const Dopri& get() {
        static const Dopri d = [] {
            Dopri t;
            auto q = [](long n, long den) { return R(n) / R(den); };
            t.c2 = q(1, 5); t.c3 = q(3, 10); t.c4 = q(4, 5); t.c5 = q(8, 9);
            t.a21 = q(1, 5);
            t.a31 = q(3, 40); t.a32 = q(9, 40);
            t.a41 = q(44, 45); t.a42 = q(-56, 15); t.a43 = q(32, 9);
            t.a51 = q(19372, 6561); t.a52 = q(-25360, 2187); t.a53 = q(64448, 6561);
            t.a54 = q(-212, 729);
            t.a61 = q(9017, 3168); t.a62 = q(-355, 33); t.a63 = q(46732, 5247);
            t.a64 = q(49, 176); t.a65 = q(-5103, 18656);
            t.a71 = q(35, 384); t.a73 = q(500, 1113); t.a74 = q(125, 192);
            t.a75 = q(-2187, 6784); t.a76 = q(11, 84);
            // y5 - y4 error weights
            t.e1 = q(71, 57600); t.e3 = q(-71, 16695); t.e4 = q(71, 1920);
            t.e5 = q(-17253, 339200); t.e6 = q(22, 525); t.e7 = q(-1, 40);
            return t;
        }();
        return d;
    }
};

template <class C> struct State {
    C u, U;
};

template <class C> struct SegGeom {
    using R = real_t<C>;
    bool is_arc;
    R r0, dr, theta;  // ray
    R r, th0, dth;    // arc

    static SegGeom from(const Segment& s) {
        SegGeom g{};
        if (std::holds_alternative<RaySeg>(s)) {
            auto v = std::get<RaySeg>(s);
            g.is_arc = false;
            g.r0 = R(v.r0);
            g.dr = R(v.r1 - v.r0);
            g.theta = R(v.theta);
        } else {
            auto v = std::get<ArcSeg>(s);
            g.is_arc = true;
            g.r = R(v.r);
            g.th0 = R(v.th0);
            g.dth = R(v.th1 - v.th0);
        }
        return g;
    }
    // x(t), dx/dt, and the cover point for sampling
    void eval(const R& t, C& x, C& dxdt, double& out_r, double& out_th) const {
        using std::cos;
        using std::sin;
        if (!is_arc) {
            R r = r0 + dr * t;
            R cth = cos(theta), sth = sin(theta);
            x = make_cx<C>(r * cth, r * sth);
            dxdt = make_cx<C>(dr * cth, dr * sth);
            out_r = to_double_r(r);
            out_th = to_double_r(theta);
        } else {
            R th = th0 + dth * t;
            R cth = cos(th), sth = sin(th);
            x = make_cx<C>(r * cth, r * sth);
            dxdt = make_cx<C>(-r * dth * sth, r * dth * cth);  // i * dth * x
            out_r = to_double_r(r);
            out_th = to_double_r(th);
        }
    }
};

template <class C>
Trajectory run_engine(const EquationSpec& eq, const Path& path, C u0, C U0,
                      const IntegrateOptions& opts, C* out_u, C* out_U) {
    using R = real_t<C>;
    const auto& tb = Dopri<R>::get();
    const bool p3 = eq.family != Family::P4;
    if (p3 && !(path.min_radius() > 0)) fail(Errc::ZeroXOnPath, "path touches x = 0");

    Trajectory traj;
    C u = u0, U = U0;
    auto record = [&](double tglob, double r, double th, const R& err) {
        traj.samples.push_back(
            Sample{tglob, CoverPoint{r, th}, to_c64(u), to_c64(U), to_double_r(err)});
    };

    auto rhs_seg = [&](const SegGeom<C>& g, const R& t, const C& uu, const C& UU, C& fu, C& fU) {
        C x, dx;
        double rr, th;
        g.eval(t, x, dx, rr, th);
        auto d = rhs<C>(eq, x, uu, UU);
        fu = d.du * dx;
        fU = d.dU * dx;
    };

    double r_d, th_d;
    {
        C x, dx;
        SegGeom<C> g0 = SegGeom<C>::from(path.segment(0));
        g0.eval(R(0), x, dx, r_d, th_d);
    }
    record(0.0, r_d, th_d, R(0));

    long accepted = 0;
    for (size_t seg = 0; seg < path.segments(); ++seg) {
        SegGeom<C> g = SegGeom<C>::from(path.segment(seg));
        R t(0), h(std::min(opts.max_step, 0.1));
        C k1u, k1U;
        rhs_seg(g, t, u, U, k1u, k1U);
        bool have_k1 = true;
        while (to_double_r(t) < 1.0) {
            if (to_double_r(h) > opts.max_step) h = R(opts.max_step);
            if (to_double_r(t) + to_double_r(h) > 1.0) h = R(1) - t;
            if (!have_k1) {
                rhs_seg(g, t, u, U, k1u, k1U);
                have_k1 = true;
            }
            C k2u, k2U, k3u, k3U, k4u, k4U, k5u, k5U, k6u, k6U, k7u, k7U;
            rhs_seg(g, t + tb.c2 * h, u + h * (tb.a21 * k1u), U + h * (tb.a21 * k1U), k2u, k2U);
            rhs_seg(g, t + tb.c3 * h, u + h * (tb.a31 * k1u + tb.a32 * k2u),
                    U + h * (tb.a31 * k1U + tb.a32 * k2U), k3u, k3U);
            rhs_seg(g, t + tb.c4 * h, u + h * (tb.a41 * k1u + tb.a42 * k2u + tb.a43 * k3u),
                    U + h * (tb.a41 * k1U + tb.a42 * k2U + tb.a43 * k3U), k4u, k4U);
            rhs_seg(g, t + tb.c5 * h,
                    u + h * (tb.a51 * k1u + tb.a52 * k2u + tb.a53 * k3u + tb.a54 * k4u),
                    U + h * (tb.a51 * k1U + tb.a52 * k2U + tb.a53 * k3U + tb.a54 * k4U), k5u, k5U);
            rhs_seg(g, t + h,
                    u + h * (tb.a61 * k1u + tb.a62 * k2u + tb.a63 * k3u + tb.a64 * k4u + tb.a65 * k5u),
                    U + h * (tb.a61 * k1U + tb.a62 * k2U + tb.a63 * k3U + tb.a64 * k4U + tb.a65 * k5U),
                    k6u, k6U);
            C u5 = u + h * (tb.a71 * k1u + tb.a73 * k3u + tb.a74 * k4u + tb.a75 * k5u + tb.a76 * k6u);
            C U5 = U + h * (tb.a71 * k1U + tb.a73 * k3U + tb.a74 * k4U + tb.a75 * k5U + tb.a76 * k6U);
            rhs_seg(g, t + h, u5, U5, k7u, k7U);
            C eu = h * (tb.e1 * k1u + tb.e3 * k3u + tb.e4 * k4u + tb.e5 * k5u + tb.e6 * k6u +
                        tb.e7 * k7u);
            C eU = h * (tb.e1 * k1U + tb.e3 * k3U + tb.e4 * k4U + tb.e5 * k5U + tb.e6 * k6U +
                        tb.e7 * k7U);

            using std::max;
            R su = max(abs_of(u), abs_of(u5)) + R(1e-12);
            R sU = max(abs_of(U), abs_of(U5)) + R(1e-12);
            R err = max(abs_of(eu) / su, abs_of(eU) / sU) / R(opts.tol);
            double err_d = to_double_r(err);

            if (err_d <= 1.0) {
                t += h;
                u = u5;
                U = U5;
                k1u = k7u;
                k1U = k7U;
                ++accepted;
                double au = to_double_r(abs_of(u)), aU = to_double_r(abs_of(U));
                double tg = static_cast<double>(seg) + to_double_r(t);
                C x, dx;
                g.eval(t, x, dx, r_d, th_d);
                R local_err = err * R(opts.tol);
                traj.worst_err = std::max(traj.worst_err, to_double_r(local_err));
                if (accepted % std::max(1, opts.record_stride) == 0 || to_double_r(t) >= 1.0)
                    record(tg, r_d, th_d, local_err);
                if (!std::isfinite(au) || !std::isfinite(aU) || au >= opts.blowup ||
                    aU >= opts.blowup) {
                    traj.status = TrajStatus::PoleDetected;
                    if (traj.samples.back().t < tg) record(tg, r_d, th_d, local_err);
                    size_t w = std::min<size_t>(traj.samples.size(), 10);
                    try {
                        traj.pole = estimate_pole(
                            std::span<const Sample>(traj.samples.data() + traj.samples.size() - w, w));
                    } catch (const Error&) {
                        PoleEvent ev;
                        ev.x_pole = traj.samples.back().x.value();
                        ev.blowing = au >= aU ? 'u' : 'U';
                        ev.fit_quality = 1.0;
                        traj.pole = ev;
                    }
                    traj.final_u = to_c64(u);
                    traj.final_U = to_c64(U);
                    if (out_u) *out_u = u;
                    if (out_U) *out_U = U;
                    return traj;
                }
            } else {
                have_k1 = true;  // k1 still valid at unchanged t
            }
            double fac = 0.9 * std::pow(std::max(err_d, 1e-10), -0.2);
            fac = std::clamp(fac, 0.2, 5.0);
            h = h * R(fac);
            if (to_double_r(h) < opts.step_floor) {
                // step underflow: a pole if the state already carries a
                // blow-up signature, a tolerance failure otherwise
                double au = to_double_r(abs_of(u)), aU = to_double_r(abs_of(U));
                if (std::max(au, aU) >= 0.01 * opts.blowup && traj.samples.size() >= 4) {
                    traj.status = TrajStatus::PoleDetected;
                    size_t w = std::min<size_t>(traj.samples.size(), 10);
                    try {
                        traj.pole = estimate_pole(std::span<const Sample>(
                            traj.samples.data() + traj.samples.size() - w, w));
                    } catch (const Error&) {
                        PoleEvent ev;
                        ev.x_pole = traj.samples.back().x.value();
                        ev.blowing = au >= aU ? 'u' : 'U';
                        ev.fit_quality = 1.0;
                        traj.pole = ev;
                    }
                } else {
                    traj.status = TrajStatus::ToleranceFailure;
                }
                traj.final_u = to_c64(u);
                traj.final_U = to_c64(U);
                if (out_u) *out_u = u;
                if (out_U) *out_U = U;
                return traj;
            }
        }
    }
    traj.status = TrajStatus::Completed;
    traj.final_u = to_c64(u);
    traj.final_U = to_c64(U);
    if (out_u) *out_u = u;
    if (out_U) *out_U = U;
    return traj;
}

}  // namespace

template <class C>
Trajectory integrate_t(const EquationSpec& eq, const Path& path, C u0, C U0,
                       const IntegrateOptions& opts, C* final_u, C* final_U) {
    return run_engine<C>(eq, path, u0, U0, opts, final_u, final_U);
}

template Trajectory integrate_t<c64>(const EquationSpec&, const Path&, c64, c64,
                                     const IntegrateOptions&, c64*, c64*);
template Trajectory integrate_t<c128>(const EquationSpec&, const Path&, c128, c128,
                                      const IntegrateOptions&, c128*, c128*);
template Trajectory integrate_t<c256>(const EquationSpec&, const Path&, c256, c256,
                                      const IntegrateOptions&, c256*, c256*);

Trajectory integrate(const EquationSpec& eq, const Path& path, c64 u0, c64 U0,
                     const IntegrateOptions& opts) {
    if (!std::isfinite(u0.real()) || !std::isfinite(u0.imag()) || !std::isfinite(U0.real()) ||
        !std::isfinite(U0.imag()))
        fail(Errc::ToleranceFailure, "non-finite initial values");
    switch (opts.prec) {
        case Prec::F64: return integrate_t<c64>(eq, path, u0, U0, opts);
        case Prec::F128: return integrate_t<c128>(eq, path, cx_cast<c128>(u0), cx_cast<c128>(U0), opts);
        case Prec::F256: return integrate_t<c256>(eq, path, cx_cast<c256>(u0), cx_cast<c256>(U0), opts);
    }
    fail(Errc::ToleranceFailure, "unknown precision");
}

PoleEvent estimate_pole(std::span<const Sample> trailing) {
    if (trailing.size() < 4) fail(Errc::NoBlowupSignature, "need at least 4 trailing samples");
    // choose the component growing monotonically over the window
    auto mono = [&](auto get) {
        for (size_t i = 1; i < trailing.size(); ++i)
            if (!(std::abs(get(trailing[i])) > std::abs(get(trailing[i - 1])))) return false;
        return true;
    };
    auto getu = [](const Sample& s) { return s.u; };
    auto getU = [](const Sample& s) { return s.U; };
    char comp;
    if (mono(getu) && std::abs(trailing.back().u) >= std::abs(trailing.back().U)) comp = 'u';
    else if (mono(getU)) comp = 'U';
    else if (mono(getu)) comp = 'u';
    else fail(Errc::NoBlowupSignature, "no monotonically growing component");

    // least squares for 1/w = a + b x
    c64 Sx{0}, Sy{0}, Sxx{0}, Sxy{0};
    double n = static_cast<double>(trailing.size());
    for (const auto& s : trailing) {
        c64 x = s.x.value();
        c64 y = 1.0 / (comp == 'u' ? s.u : s.U);
        Sx += x;
        Sy += y;
        Sxx += x * x;
        Sxy += x * y;
    }
    c64 denom = n * Sxx - Sx * Sx;
    if (std::abs(denom) == 0.0) fail(Errc::NoBlowupSignature, "degenerate abscissa");
    c64 b = (n * Sxy - Sx * Sy) / denom;
    c64 a = (Sy - b * Sx) / n;
    if (std::abs(b) == 0.0) fail(Errc::NoBlowupSignature, "flat reciprocal");
    PoleEvent ev;
    ev.blowing = comp;
    ev.x_pole = -a / b;
    double num = 0, den = 0;
    for (const auto& s : trailing) {
        c64 x = s.x.value();
        c64 y = 1.0 / (comp == 'u' ? s.u : s.U);
        num += std::norm(y - (a + b * x));
        den += std::norm(y);
    }
    ev.fit_quality = den > 0 ? std::sqrt(num / den) : 1.0;
    return ev;
}

}  // namespace painleve
