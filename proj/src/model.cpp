#include "painleve/model.hpp"

#include <cmath>

namespace painleve {

const char* errc_name(Errc c) {
    switch (c) {
        case Errc::NonCanonicalParams: return "NonCanonicalParams";
        case Errc::BadBranchIndex: return "BadBranchIndex";
        case Errc::BadSectorIndex: return "BadSectorIndex";
        case Errc::FieldMismatch: return "FieldMismatch";
        case Errc::ExactBackendUnavailable: return "ExactBackendUnavailable";
        case Errc::BackendOverflow: return "BackendOverflow";
        case Errc::ZeroX: return "ZeroX";
        case Errc::ZeroDelta: return "ZeroDelta";
        case Errc::ZeroU: return "ZeroU";
        case Errc::UnsupportedFamily: return "UnsupportedFamily";
        case Errc::TrivialBranch: return "TrivialBranch";
        case Errc::DiscontinuousJoin: return "DiscontinuousJoin";
        case Errc::ZeroXOnPath: return "ZeroXOnPath";
        case Errc::ToleranceFailure: return "ToleranceFailure";
        case Errc::NoBlowupSignature: return "NoBlowupSignature";
        case Errc::SeedOutsideSector: return "SeedOutsideSector";
        case Errc::NoOverlap: return "NoOverlap";
        case Errc::InsufficientSamples: return "InsufficientSamples";
        case Errc::PerturbationEscaped: return "PerturbationEscaped";
    }
    return "Error";
}

const char* family_name(Family f) {
    switch (f) {
        case Family::P3i: return "p3i";
        case Family::P3ii: return "p3ii";
        case Family::P4: return "p4";
    }
    return "?";
}

std::optional<Family> family_from_name(std::string_view s) {
    if (s == "p3i" || s == "P3i" || s == "p3-i") return Family::P3i;
    if (s == "p3ii" || s == "P3ii" || s == "p3-ii") return Family::P3ii;
    if (s == "p4" || s == "P4") return Family::P4;
    return std::nullopt;
}

namespace {

bool pv_equals(const PValue& v, long want) {
    if (v.is_exact()) return *v.exact == ExactScalar(want);
    return v.approx == c64(static_cast<double>(want), 0.0);
}

}  // namespace

PValue EquationSpec::alpha() const {
    if (family != Family::P4) return alpha_p;
    // alpha = -k0 + 2*kinf + 1
    if (kappa0.is_exact() && kappaInf.is_exact())
        return PValue(-*kappa0.exact + ExactScalar(2) * *kappaInf.exact + ExactScalar(1));
    return PValue(-kappa0.approx + 2.0 * kappaInf.approx + 1.0);
}

PValue EquationSpec::beta() const {
    if (family != Family::P4) return beta_p;
    // beta = -2*k0^2
    if (kappa0.is_exact()) return PValue(ExactScalar(-2) * *kappa0.exact * *kappa0.exact);
    return PValue(-2.0 * kappa0.approx * kappa0.approx);
}

std::string EquationSpec::str() const {
    auto show = [](const PValue& v) {
        if (v.is_exact()) return v.exact->str();
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g%+.17gi", v.approx.real(), v.approx.imag());
        return std::string(buf);
    };
    std::string s = family_name(family);
    if (family == Family::P4)
        return s + "(k0=" + show(kappa0) + ", kinf=" + show(kappaInf) + ")";
    if (family == Family::P3ii) return s + "(beta=" + show(beta_p) + ")";
    return s + "(alpha=" + show(alpha_p) + ", beta=" + show(beta_p) + ")";
}

EquationSpec make_equation(Family family, const RawParams& raw) {
    auto finite = [](const std::optional<PValue>& v) {
        return !v || (std::isfinite(v->approx.real()) && std::isfinite(v->approx.imag()));
    };
    if (!finite(raw.alpha) || !finite(raw.beta) || !finite(raw.gamma) || !finite(raw.delta) ||
        !finite(raw.kappa0) || !finite(raw.kappaInf))
        fail(Errc::NonCanonicalParams, "non-finite parameter");

    EquationSpec eq;
    eq.family = family;
    switch (family) {
        case Family::P3i:
            if (raw.gamma && !pv_equals(*raw.gamma, 1))
                fail(Errc::NonCanonicalParams, "P3i requires gamma = 1");
            if (raw.delta && !pv_equals(*raw.delta, -1))
                fail(Errc::NonCanonicalParams, "P3i requires delta = -1");
            if (raw.kappa0 || raw.kappaInf)
                fail(Errc::NonCanonicalParams, "kappa parameters belong to P4");
            eq.alpha_p = raw.alpha.value_or(PValue(0L));
            eq.beta_p = raw.beta.value_or(PValue(0L));
            break;
        case Family::P3ii:
            if (raw.alpha && !pv_equals(*raw.alpha, 1))
                fail(Errc::NonCanonicalParams, "P3ii requires alpha = 1");
            if (raw.gamma && !pv_equals(*raw.gamma, 0))
                fail(Errc::NonCanonicalParams, "P3ii requires gamma = 0");
            if (raw.delta && !pv_equals(*raw.delta, -1))
                fail(Errc::NonCanonicalParams, "P3ii requires delta = -1");
            if (raw.kappa0 || raw.kappaInf)
                fail(Errc::NonCanonicalParams, "kappa parameters belong to P4");
            eq.alpha_p = PValue(1L);
            eq.beta_p = raw.beta.value_or(PValue(0L));
            break;
        case Family::P4:
            if (raw.alpha || raw.beta || raw.gamma || raw.delta)
                fail(Errc::NonCanonicalParams, "P4 takes (kappa0, kappaInf) only");
            if (!raw.kappa0 || !raw.kappaInf)
                fail(Errc::NonCanonicalParams, "P4 requires kappa0 and kappaInf");
            eq.kappa0 = *raw.kappa0;
            eq.kappaInf = *raw.kappaInf;
            break;
    }
    return eq;
}

EquationSpec make_p3i(PValue alpha, PValue beta) {
    RawParams r;
    r.alpha = alpha;
    r.beta = beta;
    return make_equation(Family::P3i, r);
}

EquationSpec make_p3ii(PValue beta) {
    RawParams r;
    r.beta = beta;
    return make_equation(Family::P3ii, r);
}

EquationSpec make_p4(PValue k0, PValue kinf) {
    RawParams r;
    r.kappa0 = k0;
    r.kappaInf = kinf;
    return make_equation(Family::P4, r);
}

int branch_count(Family f) {
    switch (f) {
        case Family::P3i: return 4;
        case Family::P3ii: return 3;
        case Family::P4: return 4;
    }
    return 0;
}

int branch_index_lo(Family f) { return f == Family::P4 ? 1 : 0; }

std::string Branch::label() const {
    return std::string(family_name(eq.family)) + (eq.family == Family::P4 ? " case " : " m=") +
           std::to_string(m);
}

Branch branch(const EquationSpec& eq, int m) {
    int lo = branch_index_lo(eq.family);
    if (m < lo || m >= lo + branch_count(eq.family))
        fail(Errc::BadBranchIndex, "m = " + std::to_string(m) + " out of range for " +
                                       family_name(eq.family));
    Branch b;
    b.eq = eq;
    b.m = m;
    switch (eq.family) {
        case Family::P3i: {
            // a0 = e^{m pi i / 2}: 1, i, -1, -i
            static const std::pair<int, int> tbl[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
            b.a0 = ExactScalar::gauss(tbl[m].first, tbl[m].second);
            b.A0 = -(b.a0 * b.a0);
            b.p_u = 0;
            b.p_U = 0;
            b.step = 1;
            break;
        }
        case Family::P3ii: {
            // a0 = e^{2 m pi i / 3}: 1, w, w^2 = -1-w
            if (m == 0) b.a0 = ExactScalar(1);
            else if (m == 1) b.a0 = ExactScalar::omega();
            else b.a0 = ExactScalar::eisen(-1, -1);
            b.A0 = -b.a0;
            b.p_u = Rational(1, 3);
            b.p_U = Rational(-2, 3);
            b.step = Rational(2, 3);
            break;
        }
        case Family::P4: {
            const ExactScalar k0 = eq.kappa0.req_exact("kappa0");
            const ExactScalar ki = eq.kappaInf.req_exact("kappaInf");
            const Rational third(1, 3), half(1, 2);
            switch (m) {
                case 1:
                    b.a0 = ExactScalar(Rational(-2, 3));
                    b.A0 = ExactScalar(third);
                    b.p_u = 1;
                    b.p_U = 1;
                    break;
                case 2:
                    b.a0 = ExactScalar(-2);
                    b.A0 = -ExactScalar(half) * ki;
                    b.p_u = 1;
                    b.p_U = -1;
                    break;
                case 3:
                    b.a0 = k0;
                    b.A0 = ExactScalar(1);
                    b.p_u = -1;
                    b.p_U = 1;
                    break;
                case 4:
                    b.a0 = -k0;
                    b.A0 = ExactScalar(half) * ki;
                    b.p_u = -1;
                    b.p_U = -1;
                    break;
            }
            b.step = 2;
            break;
        }
    }
    return b;
}

int sector_k_count(Family f) { return f == Family::P3i ? 2 : 4; }

Sector sector(const EquationSpec& eq, int m, int k, SectorKind kind, double r_min) {
    int lo = branch_index_lo(eq.family);
    if (m < lo || m >= lo + branch_count(eq.family))
        fail(Errc::BadSectorIndex, "branch index m = " + std::to_string(m));
    if (k < 0 || k >= sector_k_count(eq.family))
        fail(Errc::BadSectorIndex, "sector index k = " + std::to_string(k));

    Sector s;
    s.family = eq.family;
    s.m = m;
    s.k = k;
    s.kind = kind;
    s.r_min = r_min;

    // S sectors exactly as printed in the theorems. Omega sectors share the
    // k = 0 anchor printed for each family and are enumerated on the same k
    // lattice as S, so Omega_k always contains S_k.
    Rational lo_pi, hi_pi, omega_lo_shift, omega_span;
    switch (eq.family) {
        case Family::P3i:
            if (m == 0 || m == 2) {
                lo_pi = Rational(-1, 2) + k;
                hi_pi = Rational(1, 2) + k;
            } else {
                lo_pi = k;
                hi_pi = k + 1;
            }
            omega_lo_shift = 0;
            omega_span = 2;
            break;
        case Family::P3ii:
            if (m == 0 || m == 2) {
                lo_pi = Rational(-3, 4) - Rational(k, 2);
                hi_pi = Rational(3, 4) - Rational(k, 2);
            } else {
                lo_pi = Rational(1, 4) - Rational(k, 2);
                hi_pi = Rational(7, 4) - Rational(k, 2);
            }
            omega_lo_shift = 0;
            omega_span = 3;
            break;
        case Family::P4:
            if (m == 1) {
                lo_pi = Rational(k, 2);
                hi_pi = Rational(1, 2) + Rational(k, 2);
                omega_lo_shift = 0;
            } else {
                lo_pi = Rational(-1, 4) + Rational(k, 2);
                hi_pi = Rational(1, 4) + Rational(k, 2);
                omega_lo_shift = Rational(-1, 2);
            }
            omega_span = 2;
            break;
    }
    if (kind == SectorKind::S_existence) {
        s.lo_pi = lo_pi;
        s.hi_pi = hi_pi;
    } else {
        s.lo_pi = lo_pi + omega_lo_shift;
        s.hi_pi = s.lo_pi + omega_span;
    }
    return s;
}

bool contains(const Sector& s, const CoverPoint& x) {
    if (!(x.r > s.r_min)) return false;
    return s.theta_lo() < x.theta && x.theta < s.theta_hi();
}

}  // namespace painleve
