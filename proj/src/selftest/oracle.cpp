#include "painleve/oracle.hpp"

#include <cmath>

namespace painleve::oracle {

namespace {

const Rational kNoFloor("-1000000");

void drop_below_floor(MapSeries& s) {
    if (s.complete) return;
    for (auto it = s.terms.begin(); it != s.terms.end();) {
        if (it->first < s.floor) it = s.terms.erase(it);
        else ++it;
    }
}

}  // namespace

MapSeries from_coefficients(const Rational& base, const Rational& step,
                            const std::vector<ExactScalar>& c, bool complete) {
    MapSeries s;
    s.complete = complete;
    for (size_t j = 0; j < c.size(); ++j)
        if (!c[j].is_zero()) s.terms[base - Rational(j) * step] = c[j];
    s.floor = complete ? kNoFloor : base - Rational(c.size() - 1) * step;
    return s;
}

MapSeries ms_monomial(const Rational& expo, const ExactScalar& c) {
    MapSeries s;
    s.complete = true;
    s.floor = kNoFloor;
    if (!c.is_zero()) s.terms[expo] = c;
    return s;
}

MapSeries ms_mul(const MapSeries& a, const MapSeries& b) {
    MapSeries r;
    r.complete = a.complete && b.complete;
    // a_known * b_tail lives strictly below lead(a) + floor(b), and vice versa
    if (r.complete) r.floor = kNoFloor;
    else if (a.complete) r.floor = a.lead() + b.floor;
    else if (b.complete) r.floor = b.lead() + a.floor;
    else r.floor = std::max(a.lead() + b.floor, b.lead() + a.floor);
    for (const auto& [ea, ca] : a.terms)
        for (const auto& [eb, cb] : b.terms) {
            Rational e = ea + eb;
            if (!r.complete && e < r.floor) continue;
            auto it = r.terms.find(e);
            if (it == r.terms.end()) r.terms[e] = ca * cb;
            else it->second += ca * cb;
        }
    for (auto it = r.terms.begin(); it != r.terms.end();) {
        if (it->second.is_zero()) it = r.terms.erase(it);
        else ++it;
    }
    return r;
}

MapSeries ms_add(const MapSeries& a, const MapSeries& b) {
    MapSeries r;
    r.complete = a.complete && b.complete;
    r.floor = r.complete ? kNoFloor
                         : std::max(a.complete ? kNoFloor : a.floor,
                                    b.complete ? kNoFloor : b.floor);
    r.terms = a.terms;
    for (const auto& [e, c] : b.terms) {
        auto it = r.terms.find(e);
        if (it == r.terms.end()) r.terms[e] = c;
        else {
            it->second += c;
            if (it->second.is_zero()) r.terms.erase(it);
        }
    }
    drop_below_floor(r);
    return r;
}

MapSeries ms_sub(const MapSeries& a, const MapSeries& b) {
    MapSeries nb = b;
    for (auto& [e, c] : nb.terms) c = -c;
    return ms_add(a, nb);
}

MapSeries ms_scale(MapSeries a, const ExactScalar& s) {
    if (s.is_zero()) {
        a.terms.clear();
        return a;
    }
    for (auto& [e, c] : a.terms) c = c * s;
    return a;
}

MapSeries ms_dx(const MapSeries& a) {
    MapSeries r;
    r.complete = a.complete;
    r.floor = a.complete ? kNoFloor : a.floor - 1;
    for (const auto& [e, c] : a.terms) {
        if (e == 0) continue;  // derivative of the constant term vanishes
        r.terms[e - 1] = c * ExactScalar(e);
    }
    return r;
}

MapSeries ms_xpow(MapSeries a, const Rational& k) {
    MapSeries r;
    r.complete = a.complete;
    r.floor = a.complete ? kNoFloor : a.floor + k;
    for (const auto& [e, c] : a.terms) r.terms[e + k] = c;
    return r;
}

ResidualVerdict verdict(const MapSeries& r) {
    ResidualVerdict v;
    v.floor = r.floor;
    v.has_nonzero = !r.terms.empty();
    if (v.has_nonzero) v.first_nonzero_expo = r.terms.begin()->first;
    v.all_known_vanish = r.terms.empty();
    return v;
}

ResidualVerdict scalar_equation_residual(const Branch& br, const std::vector<ExactScalar>& a,
                                         bool complete) {
    const EquationSpec& eq = br.eq;
    MapSeries u = from_coefficients(br.p_u, br.step, a, complete);
    MapSeries du = ms_dx(u), d2u = ms_dx(du);
    MapSeries x1 = ms_monomial(1, ExactScalar(1));
    MapSeries res;
    if (eq.family == Family::P4) {
        ExactScalar alpha = eq.alpha().req_exact("alpha");
        ExactScalar beta = eq.beta().req_exact("beta");
        MapSeries u2 = ms_mul(u, u);
        res = ms_sub(ms_scale(ms_mul(u, d2u), ExactScalar(2)), ms_mul(du, du));
        res = ms_sub(res, ms_scale(ms_mul(u2, u2), ExactScalar(3)));
        res = ms_sub(res, ms_scale(ms_xpow(ms_mul(u2, u), 1), ExactScalar(8)));
        res = ms_sub(res, ms_scale(ms_xpow(u2, 2), ExactScalar(4)));
        res = ms_add(res, ms_scale(u2, ExactScalar(4) * alpha));
        res = ms_sub(res, ms_monomial(0, ExactScalar(2) * beta));
    } else {
        ExactScalar alpha = eq.family == Family::P3i ? eq.alpha_p.req_exact("alpha") : ExactScalar(1);
        ExactScalar beta = eq.beta_p.req_exact("beta");
        MapSeries u2 = ms_mul(u, u);
        res = ms_sub(ms_xpow(ms_mul(u, d2u), 1), ms_xpow(ms_mul(du, du), 1));
        res = ms_add(res, ms_mul(u, du));
        res = ms_sub(res, ms_scale(ms_mul(u2, u), alpha));
        res = ms_sub(res, ms_scale(u, beta));
        res = ms_sub(res, ms_xpow(ms_mul(u2, u2), 1));
        res = ms_add(res, x1);
    }
    return verdict(res);
}

std::pair<ResidualVerdict, ResidualVerdict> system_residual(const Branch& br,
                                                            const std::vector<ExactScalar>& a,
                                                            const std::vector<ExactScalar>& A,
                                                            bool complete) {
    const EquationSpec& eq = br.eq;
    MapSeries u = from_coefficients(br.p_u, br.step, a, complete);
    MapSeries U = from_coefficients(br.p_U, br.step, A, complete);
    if (eq.family == Family::P4) {
        ExactScalar k0 = eq.kappa0.req_exact("kappa0");
        ExactScalar ki = eq.kappaInf.req_exact("kappaInf");
        MapSeries f1 = ms_dx(u);
        f1 = ms_sub(f1, ms_scale(ms_mul(u, U), ExactScalar(4)));
        f1 = ms_add(f1, ms_mul(u, u));
        f1 = ms_add(f1, ms_scale(ms_xpow(u, 1), ExactScalar(2)));
        f1 = ms_add(f1, ms_monomial(0, ExactScalar(2) * k0));
        MapSeries f2 = ms_dx(U);
        f2 = ms_add(f2, ms_scale(ms_mul(U, U), ExactScalar(2)));
        f2 = ms_sub(f2, ms_scale(ms_mul(u, U), ExactScalar(2)));
        f2 = ms_sub(f2, ms_scale(ms_xpow(U, 1), ExactScalar(2)));
        f2 = ms_add(f2, ms_monomial(0, ki));
        return {verdict(f1), verdict(f2)};
    }
    ExactScalar alpha = eq.family == Family::P3i ? eq.alpha_p.req_exact("alpha") : ExactScalar(1);
    ExactScalar beta = eq.beta_p.req_exact("beta");
    ExactScalar gamma = eq.family == Family::P3i ? ExactScalar(1) : ExactScalar(0);
    MapSeries f1 = ms_xpow(ms_dx(u), 1);
    f1 = ms_sub(f1, ms_monomial(1, ExactScalar(1)));
    f1 = ms_sub(f1, ms_scale(u, ExactScalar(1) - beta));
    f1 = ms_sub(f1, ms_xpow(ms_mul(ms_mul(u, u), U), 1));
    MapSeries f2 = ms_xpow(ms_dx(U), 1);
    f2 = ms_sub(f2, ms_monomial(0, alpha));
    f2 = ms_sub(f2, ms_scale(ms_xpow(u, 1), gamma));
    f2 = ms_add(f2, ms_scale(U, ExactScalar(2) - beta));
    f2 = ms_add(f2, ms_xpow(ms_mul(u, ms_mul(U, U)), 1));
    return {verdict(f1), verdict(f2)};
}

int residual_depth(const Branch& br, const std::vector<ExactScalar>& a,
                   const std::vector<ExactScalar>& A) {
    const int N = static_cast<int>(a.size()) - 1;
    auto [v1, v2] = system_residual(br, a, A, false);
    // convert the first failing exponent into a recurrence depth; the leading
    // balance of each row sits at the row's maximal possible exponent
    auto depth_of = [&](const ResidualVerdict& v, const Rational& lead_expo) {
        if (!v.has_nonzero) return N;  // all checkable orders vanish
        Rational d = (lead_expo - v.first_nonzero_expo) / br.step;
        return static_cast<int>(d.convert_to<long>()) - 1;
    };
    const Rational pu = br.p_u, pU = br.p_U;
    Rational lead1, lead2;
    if (br.eq.family == Family::P4) {
        lead1 = std::max({pu - 1, pu + pU, 2 * pu, pu + 1, Rational(0)});
        lead2 = std::max({pU - 1, 2 * pU, pu + pU, pU + 1, Rational(0)});
    } else {
        lead1 = 1;
        lead2 = br.eq.family == Family::P3i ? Rational(1) : Rational(0);
    }
    return std::min(depth_of(v1, lead1), depth_of(v2, lead2));
}

int truncation_scan(const CoefficientTable& t, double radius) {
    // zero tail: the scan stops at the last nonzero index of the u-row
    int last_a = -1;
    for (int n = 0; n <= t.N; ++n)
        if (!t.a_is_zero(n)) last_a = n;
    if (last_a < t.N) return std::max(last_a, 0);

    const double step = to_double(t.br.step);
    int best = 0;
    double bestv = std::numeric_limits<double>::infinity();
    double biggest = -std::numeric_limits<double>::infinity();
    for (int n = 0; n <= t.N; ++n) {
        double la = t.log_abs_a(n);
        if (std::isinf(la)) continue;
        if (std::isfinite(biggest) && la < biggest + std::log(1e-13)) continue;
        biggest = std::max(biggest, la);
        double v = la - n * step * std::log(radius);
        if (v < bestv) {
            bestv = v;
            best = n;
        }
    }
    return best;
}

}  // namespace painleve::oracle
