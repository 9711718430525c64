#include "painleve/series.hpp"

#include <algorithm>
#include <cmath>

namespace painleve {

const char* backend_name(Backend b) {
    switch (b) {
        case Backend::Exact: return "exact";
        case Backend::F64: return "f64";
        case Backend::F128: return "f128";
        case Backend::F256: return "f256";
    }
    return "?";
}

std::optional<Backend> backend_from_name(std::string_view s) {
    if (s == "exact") return Backend::Exact;
    if (s == "f64") return Backend::F64;
    if (s == "f128") return Backend::F128;
    if (s == "f256") return Backend::F256;
    return std::nullopt;
}

namespace {

// ---------------------------------------------------------------------------
// Recurrences. Each is written exactly as printed, with the coupled leading
// 2x2 systems solved in closed form.
// ---------------------------------------------------------------------------

template <class S>
void rec_p3i(const S& alpha, const S& beta, const S& a0, const S& A0, int N, std::vector<S>& a,
             std::vector<S>& A) {
    a.assign(1, a0);
    A.assign(1, A0);
    std::vector<S> Ca{a0 * a0}, CA{A0 * A0};  // running self-convolutions
    const S two_a0A0 = s_from_long<S>(2) * a0 * A0;
    const S a0sq = a0 * a0;
    for (int n = 0; n < N; ++n) {
        S Sa1 = s_from_long<S>(0), SA1 = s_from_long<S>(0);
        for (int l = 1; l <= n; ++l) {
            Sa1 += a[l] * a[n + 1 - l];
            SA1 += A[l] * A[n + 1 - l];
        }
        S r1 = (beta - s_from_long<S>(1 + n)) * a[n] - A0 * Sa1;
        S r2 = (n == 0 ? alpha : s_from_long<S>(0)) + (s_from_long<S>(n - 2) + beta) * A[n] - a0 * SA1;
        for (int k = 1; k <= n; ++k) {
            r1 -= A[k] * Ca[n + 1 - k];
            r2 -= a[k] * CA[n + 1 - k];
        }
        S Anext = r2 / two_a0A0;
        S anext = (r1 - a0sq * Anext) / two_a0A0;
        a.push_back(anext);
        A.push_back(Anext);
        S ca = s_from_long<S>(0), cA = s_from_long<S>(0);
        for (int l = 0; l <= n + 1; ++l) {
            ca += a[l] * a[n + 1 - l];
            cA += A[l] * A[n + 1 - l];
        }
        Ca.push_back(ca);
        CA.push_back(cA);
    }
}

template <class S>
void rec_p3ii(const S& beta, const S& a0, const S& A0, int N, std::vector<S>& a, std::vector<S>& A) {
    a.assign(1, a0);
    A.assign(1, A0);
    std::vector<S> Ca{a0 * a0}, CA{A0 * A0};
    const S a0sq = a0 * a0;
    const S nine_a0sq = s_from_long<S>(9) * a0sq;
    const S three = s_from_long<S>(3);
    for (int n = 0; n < N; ++n) {
        S Sa1 = s_from_long<S>(0), SA1 = s_from_long<S>(0);
        for (int l = 1; l <= n; ++l) {
            Sa1 += a[l] * a[n + 1 - l];
            SA1 += A[l] * A[n + 1 - l];
        }
        S r1 = (s_from_long<S>(2 * n + 2) - three * beta) * a[n] - three * a0 * Sa1;
        S r2 = (three * beta - s_from_long<S>(4 - 2 * n)) * A[n] - three * a0 * SA1;
        for (int k = 1; k <= n; ++k) {
            r1 += three * A[k] * Ca[n + 1 - k];
            r2 -= three * a[k] * CA[n + 1 - k];
        }
        // a0^2 (6a' - 3A') = r1 ; a0^2 (3a' - 6A') = r2
        S anext = (s_from_long<S>(2) * r1 - r2) / nine_a0sq;
        S Anext = (r1 - s_from_long<S>(2) * r2) / nine_a0sq;
        a.push_back(anext);
        A.push_back(Anext);
        S ca = s_from_long<S>(0), cA = s_from_long<S>(0);
        for (int l = 0; l <= n + 1; ++l) {
            ca += a[l] * a[n + 1 - l];
            cA += A[l] * A[n + 1 - l];
        }
        Ca.push_back(ca);
        CA.push_back(cA);
    }
}

template <class S>
void rec_p4(int m, const S& k0, const S& kinf, int N, std::vector<S>& a, std::vector<S>& A) {
    const S half = s_from_long<S>(1) / s_from_long<S>(2);
    const S alpha = -k0 + s_from_long<S>(2) * kinf + s_from_long<S>(1);
    auto L = [](long v) { return s_from_long<S>(v); };
    switch (m) {
        case 1: {
            a = {s_from_rat<S>(Rational(-2, 3)), alpha};
            A = {s_from_rat<S>(Rational(1, 3)), half - k0 + half * kinf};
            for (int n = 1; n < N; ++n) {
                S r1 = L(1 - 2 * n) * a[n];
                S r2 = L(2 * n - 1) * A[n];
                for (int k = 1; k <= n; ++k) {
                    r1 -= a[k] * (L(4) * A[n + 1 - k] - a[n + 1 - k]);
                    r2 += L(2) * A[k] * (a[n + 1 - k] - A[n + 1 - k]);
                }
                // [[2/3,-8/3],[-2/3,2/3]] [a';A'] = [r1;r2], det = -4/3
                a.push_back(-half * r1 - L(2) * r2);
                A.push_back(-half * r1 - half * r2);
            }
            if (N < 1) { a.resize(N + 1); A.resize(N + 1); }
            break;
        }
        case 2: {
            a = {L(-2), -alpha};
            A = {-half * kinf};
            if (N < 1) { a.resize(1); break; }
            for (int n = 0; n < N; ++n) {
                if (n >= 1) {
                    S an1 = (half - L(n)) * a[n] + L(4) * A[n];
                    for (int k = 1; k <= n; ++k)
                        an1 += half * a[k] * (a[n + 1 - k] - L(4) * A[n - k]);
                    a.push_back(an1);
                }
                S An1 = (half + L(n)) * A[n];
                for (int k = 0; k <= n; ++k) An1 += A[k] * (a[n + 1 - k] - A[n - k]);
                A.push_back(An1);
            }
            break;
        }
        case 3: {
            a = {k0};
            A = {L(1), -half * (L(1) - L(2) * k0 + kinf)};
            for (int n = 0; n < N; ++n) {
                if (n >= 1) {
                    S An1 = (L(n) - half) * A[n] + a[n];
                    for (int k = 1; k <= n; ++k) An1 -= A[k] * (A[n + 1 - k] - a[n - k]);
                    A.push_back(An1);
                }
                S an1 = -(L(n) + half) * a[n];
                for (int k = 0; k <= n; ++k) an1 += half * a[k] * (a[n - k] - L(4) * A[n + 1 - k]);
                a.push_back(an1);
            }
            if (N < 1) A.resize(1);
            break;
        }
        case 4: {
            a = {-k0};
            A = {half * kinf};
            for (int n = 0; n < N; ++n) {
                S an1 = (L(n) + half) * a[n];
                S An1 = -(L(n) + half) * A[n];
                for (int k = 0; k <= n; ++k) {
                    an1 -= half * a[k] * (a[n - k] - L(4) * A[n - k]);
                    An1 += A[k] * (A[n - k] - a[n - k]);
                }
                a.push_back(an1);
                A.push_back(An1);
            }
            break;
        }
    }
}

template <class S> TableData<S> build_table(const Branch& br, int N) {
    TableData<S> t;
    switch (br.eq.family) {
        case Family::P3i: {
            S alpha, beta;
            if constexpr (std::is_same_v<S, ExactScalar>) {
                alpha = br.eq.alpha_p.req_exact("alpha");
                beta = br.eq.beta_p.req_exact("beta");
            } else {
                alpha = br.eq.alpha_p.as<S>();
                beta = br.eq.beta_p.as<S>();
            }
            rec_p3i<S>(alpha, beta, s_from_exact<S>(br.a0), s_from_exact<S>(br.A0), N, t.a, t.A);
            break;
        }
        case Family::P3ii: {
            S beta;
            if constexpr (std::is_same_v<S, ExactScalar>) beta = br.eq.beta_p.req_exact("beta");
            else beta = br.eq.beta_p.as<S>();
            rec_p3ii<S>(beta, s_from_exact<S>(br.a0), s_from_exact<S>(br.A0), N, t.a, t.A);
            break;
        }
        case Family::P4: {
            S k0, ki;
            if constexpr (std::is_same_v<S, ExactScalar>) {
                k0 = br.eq.kappa0.req_exact("kappa0");
                ki = br.eq.kappaInf.req_exact("kappaInf");
            } else {
                k0 = br.eq.kappa0.as<S>();
                ki = br.eq.kappaInf.as<S>();
            }
            rec_p4<S>(br.m, k0, ki, N, t.a, t.A);
            break;
        }
    }
    return t;
}

double log_abs_exact(const ExactScalar& v) {
    if (v.is_zero()) return -std::numeric_limits<double>::infinity();
    Rational n2;
    if (v.field() == Field::Qi) n2 = v.c0() * v.c0() + v.c1() * v.c1();
    else if (v.field() == Field::Qw) n2 = v.c0() * v.c0() - v.c0() * v.c1() + v.c1() * v.c1();
    else n2 = v.c0() * v.c0();
    f128 x = rat_to<f128>(n2);
    return 0.5 * log(x).convert_to<double>();
}

template <class S> double log_abs_float(const S& v) {
    auto m = abs_of(v);
    if (m == 0) return -std::numeric_limits<double>::infinity();
    using std::log;
    return to_double_r(log(m));
}

}  // namespace

const TableData<ExactScalar>& CoefficientTable::exact() const {
    if (backend != Backend::Exact) fail(Errc::ExactBackendUnavailable, "table is not exact");
    return std::get<TableData<ExactScalar>>(data);
}

double CoefficientTable::log_abs_a(int n) const {
    return std::visit(
        [&](const auto& t) {
            using S = std::decay_t<decltype(t.a[0])>;
            if constexpr (std::is_same_v<S, ExactScalar>) return log_abs_exact(t.a[n]);
            else return log_abs_float(t.a[n]);
        },
        data);
}

double CoefficientTable::log_abs_A(int n) const {
    return std::visit(
        [&](const auto& t) {
            using S = std::decay_t<decltype(t.A[0])>;
            if constexpr (std::is_same_v<S, ExactScalar>) return log_abs_exact(t.A[n]);
            else return log_abs_float(t.A[n]);
        },
        data);
}

bool CoefficientTable::a_is_zero(int n) const {
    return std::visit([&](const auto& t) { return s_is_zero(t.a[n]); }, data);
}

bool CoefficientTable::A_is_zero(int n) const {
    return std::visit([&](const auto& t) { return s_is_zero(t.A[n]); }, data);
}

int CoefficientTable::last_nonzero() const {
    for (int n = N; n >= 0; --n)
        if (!a_is_zero(n) || !A_is_zero(n)) return n;
    return -1;
}

c64 CoefficientTable::a_c64(int n) const {
    return std::visit(
        [&](const auto& t) {
            using S = std::decay_t<decltype(t.a[0])>;
            if constexpr (std::is_same_v<S, ExactScalar>) {
                auto [r, i] = t.a[n].embed_d();
                return c64{r, i};
            } else
                return to_c64(t.a[n]);
        },
        data);
}

c64 CoefficientTable::A_c64(int n) const {
    return std::visit(
        [&](const auto& t) {
            using S = std::decay_t<decltype(t.A[0])>;
            if constexpr (std::is_same_v<S, ExactScalar>) {
                auto [r, i] = t.A[n].embed_d();
                return c64{r, i};
            } else
                return to_c64(t.A[n]);
        },
        data);
}

CoefficientTable compute_coefficients(const Branch& br, int N, Backend backend, bool allow_trivial) {
    if (N < 0) fail(Errc::BadBranchIndex, "N must be >= 0");
    if (br.trivial() && !allow_trivial)
        fail(Errc::TrivialBranch, br.label() + " has a zero leading coefficient");
    CoefficientTable t;
    t.br = br;
    t.N = N;
    t.backend = backend;
    switch (backend) {
        case Backend::Exact:
            try {
                t.data = build_table<ExactScalar>(br, N);
            } catch (const Error& e) {
                if (e.code() == Errc::FieldMismatch)
                    fail(Errc::ExactBackendUnavailable,
                         "parameters do not lie in the branch's exact field");
                throw;
            }
            break;
        case Backend::F64: {
            auto d = build_table<c64>(br, N);
            for (auto& v : d.a)
                if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                    fail(Errc::BackendOverflow, "f64 coefficient overflow; use a wider backend");
            t.data = std::move(d);
            break;
        }
        case Backend::F128: t.data = build_table<c128>(br, N); break;
        case Backend::F256: t.data = build_table<c256>(br, N); break;
    }
    return t;
}

namespace {

// Terms are accumulated with the prefactor applied per term, so the partial
// sums at N_use and N_use+1 differ by exactly the added term in the backend's
// own arithmetic.
template <class C>
std::pair<C, C> evaluate_data(const TableData<C>& d, const Branch& br, const CoverPoint& x,
                              int N_use, int sheet) {
    using R = real_t<C>;
    R r = R(x.r);
    R th = R(x.theta) + R(2 * sheet) * pi_const<R>();
    C wu = cover_pow<C>(r, th, -br.step);  // one lattice step x^{-step}
    C pu = cover_pow<C>(r, th, br.p_u), pU = cover_pow<C>(r, th, br.p_U);
    C su = make_cx<C>(R(0), R(0)), sU = su;
    C pw = make_cx<C>(R(1), R(0));
    for (int n = 0; n <= N_use; ++n) {
        su += d.a[n] * pw * pu;
        sU += d.A[n] * pw * pU;
        pw = pw * wu;
    }
    return {su, sU};
}

template <class C>
C term_u_data(const TableData<C>& d, const Branch& br, const CoverPoint& x, int n, int sheet) {
    using R = real_t<C>;
    R r = R(x.r);
    R th = R(x.theta) + R(2 * sheet) * pi_const<R>();
    C wu = cover_pow<C>(r, th, -br.step);
    C pu = cover_pow<C>(r, th, br.p_u);
    C pw = make_cx<C>(R(1), R(0));
    for (int k = 0; k < n; ++k) pw = pw * wu;
    return d.a[n] * pw * pu;
}

template <class C>
TableData<C> embed_table(const TableData<ExactScalar>& e) {
    TableData<C> d;
    d.a.reserve(e.a.size());
    d.A.reserve(e.A.size());
    for (auto& v : e.a) d.a.push_back(s_from_exact<C>(v));
    for (auto& v : e.A) d.A.push_back(s_from_exact<C>(v));
    return d;
}

}  // namespace

template <class C>
std::pair<C, C> evaluate_prec(const CoefficientTable& t, const CoverPoint& x, int N_use, int sheet) {
    if (N_use > t.N) fail(Errc::BadBranchIndex, "N_use exceeds table order");
    return std::visit(
        [&](const auto& d) -> std::pair<C, C> {
            using S = std::decay_t<decltype(d.a[0])>;
            if constexpr (std::is_same_v<S, ExactScalar>) {
                return evaluate_data<C>(embed_table<C>(d), t.br, x, N_use, sheet);
            } else if constexpr (std::is_same_v<S, C>) {
                return evaluate_data<C>(d, t.br, x, N_use, sheet);
            } else {
                TableData<C> conv;
                conv.a.reserve(N_use + 1);
                conv.A.reserve(N_use + 1);
                for (int n = 0; n <= N_use; ++n) {
                    conv.a.push_back(cx_convert<C>(d.a[n]));
                    conv.A.push_back(cx_convert<C>(d.A[n]));
                }
                return evaluate_data<C>(conv, t.br, x, N_use, sheet);
            }
        },
        t.data);
}

template std::pair<c64, c64> evaluate_prec<c64>(const CoefficientTable&, const CoverPoint&, int, int);
template std::pair<c128, c128> evaluate_prec<c128>(const CoefficientTable&, const CoverPoint&, int, int);
template std::pair<c256, c256> evaluate_prec<c256>(const CoefficientTable&, const CoverPoint&, int, int);

std::pair<c64, c64> evaluate(const CoefficientTable& t, const CoverPoint& x, int N_use, int sheet) {
    switch (t.backend) {
        case Backend::F64: return evaluate_prec<c64>(t, x, N_use, sheet);
        case Backend::F128: {
            auto [u, U] = evaluate_prec<c128>(t, x, N_use, sheet);
            return {to_c64(u), to_c64(U)};
        }
        default: {
            auto [u, U] = evaluate_prec<c256>(t, x, N_use, sheet);
            return {to_c64(u), to_c64(U)};
        }
    }
}

c64 evaluate_term_u(const CoefficientTable& t, const CoverPoint& x, int n, int sheet) {
    if (n > t.N) fail(Errc::BadBranchIndex, "term index exceeds table order");
    return std::visit(
        [&](const auto& d) -> c64 {
            using S = std::decay_t<decltype(d.a[0])>;
            if constexpr (std::is_same_v<S, ExactScalar>)
                return to_c64(term_u_data<c256>(embed_table<c256>(d), t.br, x, n, sheet));
            else
                return to_c64(term_u_data<S>(d, t.br, x, n, sheet));
        },
        t.data);
}

TruncationChoice optimal_truncation(const CoefficientTable& t, double radius) {
    if (!(radius > 0)) fail(Errc::ZeroX, "optimal truncation needs |x| > 0");
    TruncationChoice out;
    const double logr = std::log(radius);
    const double step = to_double(t.br.step);
    // zero detection: exact zero, or vanishing relative to the running scale
    double runmax = -std::numeric_limits<double>::infinity();
    std::vector<bool> zero(t.N + 1, false);
    int lastnz = -1;
    for (int n = 0; n <= t.N; ++n) {
        double la = t.log_abs_a(n);
        if (std::isinf(la) || (std::isfinite(runmax) && la < runmax + std::log(1e-13)))
            zero[n] = true;
        else {
            runmax = std::max(runmax, la);
            lastnz = n;
        }
    }
    if (lastnz < t.N) {  // identically zero tail: the scan treats the series as terminating
        out.terminating = true;
        out.n_star = std::max(lastnz, 0);
        out.err_estimate = 0.0;
        return out;
    }
    double best = std::numeric_limits<double>::infinity();
    int bestn = 0;
    for (int n = 0; n <= t.N; ++n) {
        if (zero[n]) continue;
        double v = t.log_abs_a(n) - n * step * logr;
        if (v < best) {
            best = v;
            bestn = n;
        }
    }
    out.n_star = bestn;
    out.err_estimate = std::exp(best);
    return out;
}

GrowthReport term_growth(const CoefficientTable& t) {
    if (t.N < 5) fail(Errc::InsufficientSamples, "term_growth needs N >= 5");
    GrowthReport g;
    int lastnz = t.last_nonzero();
    g.all_zero = lastnz < 0;
    g.terminating = lastnz < t.N;
    double prev = 0.0;
    for (int n = 0; n <= t.N; ++n) {
        GrowthRow row;
        row.n = n;
        double la = t.log_abs_a(n), lA = t.log_abs_A(n);
        row.abs_a = std::isinf(la) ? 0.0 : std::exp(la);
        row.abs_A = std::isinf(lA) ? 0.0 : std::exp(lA);
        row.root_a = (n == 0 || std::isinf(la)) ? 0.0 : std::exp(la / n);
        if (n > 0 && std::isfinite(la) && std::isfinite(prev))
            row.ratio_a = std::exp(la - prev);
        else
            row.ratio_a = std::numeric_limits<double>::quiet_NaN();
        prev = la;
        g.rows.push_back(row);
    }
    if (!g.terminating) {
        // super-geometric: n-th root magnitudes still increasing over the last window
        int w = std::min(5, t.N / 2);
        bool inc = true;
        for (int n = t.N - w + 1; n <= t.N; ++n) {
            double r0 = g.rows[n - 1].root_a, r1 = g.rows[n].root_a;
            if (!(r1 > r0 * 1.01)) inc = false;
        }
        g.supergeometric = inc;
    }
    return g;
}

// ---------------------------------------------------------------------------
// Exact residual of the first-order systems under truncated substitution.
// ---------------------------------------------------------------------------

std::pair<GSeries<ExactScalar>, GSeries<ExactScalar>> system_residual_series(
    const Branch& br, const std::vector<ExactScalar>& a, const std::vector<ExactScalar>& A,
    bool complete) {
    using G = GSeries<ExactScalar>;
    const Rational& step = br.step;
    G u{br.p_u, step, a, complete};
    G U{br.p_U, step, A, complete};

    if (br.eq.family == Family::P4) {
        ExactScalar k0 = br.eq.kappa0.req_exact("kappa0");
        ExactScalar ki = br.eq.kappaInf.req_exact("kappaInf");
        // F1 = u' - (4uU - u^2 - 2xu - 2k0); F2 = U' + 2U^2 - 2uU - 2xU + kinf
        G uU = mul(u, U);
        G F1 = sub(derivative(u), sub(scale(uU, ExactScalar(4)),
                                      add(mul(u, u),
                                          add(scale(mul_xpow(u, 1), ExactScalar(2)),
                                              G::monomial(0, ExactScalar(2) * k0, step)))));
        G F2 = add(derivative(U),
                   add(scale(mul(U, U), ExactScalar(2)),
                       sub(G::monomial(0, ki, step),
                           add(scale(uU, ExactScalar(2)), scale(mul_xpow(U, 1), ExactScalar(2))))));
        return {F1, F2};
    }

    // General P3 with (gamma, delta) = (1,-1) or (0,-1): h = 1 - beta.
    ExactScalar alpha = br.eq.alpha_p.req_exact("alpha");
    ExactScalar beta = br.eq.beta_p.req_exact("beta");
    ExactScalar h = ExactScalar(1) - beta;
    ExactScalar gamma = br.eq.family == Family::P3i ? ExactScalar(1) : ExactScalar(0);
    // F1 = x u' - x - h u - x u^2 U
    G F1 = sub(x_derivative(u),
               add(G::monomial(1, ExactScalar(1), step),
                   add(scale(u, h), mul_xpow(mul(mul(u, u), U), 1))));
    // F2 = x U' - alpha - gamma x u + (1+h) U + x u U^2
    G F2 = add(sub(x_derivative(U),
                   add(G::monomial(0, alpha, step), scale(mul_xpow(u, 1), gamma))),
               add(scale(U, ExactScalar(2) - beta), mul_xpow(mul(u, mul(U, U)), 1)));
    return {F1, F2};
}

ResidualReport residual_check_exact(const Branch& br, const std::vector<ExactScalar>& a,
                                    const std::vector<ExactScalar>& A) {
    ResidualReport rep;
    int N = static_cast<int>(a.size()) - 1;
    // terminating detection: a comfortably long identically-zero tail
    int lastnz = -1;
    for (int n = N; n >= 0; --n)
        if (!a[n].is_zero() || !A[n].is_zero()) {
            lastnz = n;
            break;
        }
    bool complete = lastnz >= 0 && N - lastnz >= 3;
    std::vector<ExactScalar> at = a, At = A;
    if (complete) {
        at.resize(lastnz + 1);
        At.resize(lastnz + 1);
    }
    auto [F1, F2] = system_residual_series(br, at, At, complete);

    // Align the two residual rows by exponent so "order" counts lattice depth
    // from the leading balance of each row.
    auto scan = [](const GSeries<ExactScalar>& F) {
        int j = 0;
        for (; j < F.len(); ++j)
            if (!F.c[j].is_zero()) break;
        return std::pair<int, int>(j, F.len());  // first nonzero, known length
    };
    auto [f1, l1] = scan(F1);
    auto [f2, l2] = scan(F2);
    rep.terminates = complete;
    if (complete) {
        if (f1 == l1 && f2 == l2) {
            rep.order = ResidualReport::kInfinite;
            rep.checked_orders = std::max(l1, l2);
        } else {
            rep.order = std::min(f1, f2) - 1;
            rep.checked_orders = std::max(l1, l2);
            rep.terminates = false;
        }
        return rep;
    }
    int known = std::min(l1, l2);
    int first_bad = std::min(f1 == F1.len() ? known : f1, f2 == F2.len() ? known : f2);
    rep.checked_orders = known;
    rep.order = first_bad - 1;
    return rep;
}

ResidualReport residual_order(const Branch& br, int N) {
    auto table = compute_coefficients(br, N, Backend::Exact, true);
    const auto& d = table.exact();
    return residual_check_exact(br, d.a, d.A);
}

}  // namespace painleve
