#include "painleve/dynamics.hpp"

#include <cmath>

namespace painleve {

namespace {

c64 exact_c64(const ExactScalar& v) {
    auto [r, i] = v.embed_d();
    return {r, i};
}

}  // namespace

std::pair<c64, c64> eigenvalues_2x2(const c64 J[2][2]) {
    c64 tr = J[0][0] + J[1][1];
    c64 det = J[0][0] * J[1][1] - J[0][1] * J[1][0];
    c64 disc = std::sqrt(tr * tr - 4.0 * det);
    return {(tr + disc) / 2.0, (tr - disc) / 2.0};
}

JacobianData jacobian_limit(const Branch& br) {
    if (br.trivial())
        fail(Errc::TrivialBranch, br.label() + ": zero leading coefficient excluded");
    JacobianData jd;
    jd.family = br.eq.family;
    jd.m = br.m;
    const c64 a0 = exact_c64(br.a0), A0 = exact_c64(br.A0);
    switch (br.eq.family) {
        case Family::P3i: {
            jd.J[0][0] = 2.0 * a0 * A0;
            jd.J[0][1] = a0 * a0;
            jd.J[1][0] = 0.0;
            jd.J[1][1] = -2.0 * a0 * A0;
            // lambda = -+ 2 e^{-m pi i/2}
            c64 w = std::polar(2.0, -br.m * pi_const<double>() / 2.0);
            jd.closed1 = -w;
            jd.closed2 = w;
            jd.phase_coeff = 1;
            jd.phase_power = 1;
            break;
        }
        case Family::P3ii: {
            jd.J[0][0] = 6.0 * a0 * A0;
            jd.J[0][1] = 3.0 * a0 * a0;
            jd.J[1][0] = -3.0 * A0 * A0;
            jd.J[1][1] = -6.0 * a0 * A0;
            c64 w = std::polar(3.0 * std::sqrt(3.0), -2.0 * br.m * pi_const<double>() / 3.0);
            jd.closed1 = w;
            jd.closed2 = -w;
            jd.phase_coeff = Rational(1, 2);
            jd.phase_power = Rational(2, 3);
            jd.note =
                "the perturbation matrix entries b0/B0 are read as the leading "
                "coefficients a0/A0";
            break;
        }
        case Family::P4: {
            switch (br.m) {
                case 1:
                    jd.J[0][0] = {2.0 / 3.0, 0};
                    jd.J[0][1] = {-8.0 / 3.0, 0};
                    jd.J[1][0] = {2.0 / 3.0, 0};
                    jd.J[1][1] = {-2.0 / 3.0, 0};
                    jd.closed1 = {0.0, 2.0 * std::sqrt(3.0) / 3.0};
                    jd.closed2 = {0.0, -2.0 * std::sqrt(3.0) / 3.0};
                    break;
                case 2:
                    jd.J[0][0] = {2.0, 0};
                    jd.J[0][1] = {0.0, 0};
                    jd.J[1][0] = -br.eq.kappaInf.approx;
                    jd.J[1][1] = {-2.0, 0};
                    jd.closed1 = {2.0, 0};
                    jd.closed2 = {-2.0, 0};
                    break;
                case 3:
                    jd.J[0][0] = {2.0, 0};
                    jd.J[0][1] = 4.0 * br.eq.kappa0.approx;
                    jd.J[1][0] = {0.0, 0};
                    jd.J[1][1] = {-2.0, 0};
                    jd.closed1 = {2.0, 0};
                    jd.closed2 = {-2.0, 0};
                    break;
                case 4:
                    jd.J[0][0] = {-2.0, 0};
                    jd.J[0][1] = {0.0, 0};
                    jd.J[1][0] = {0.0, 0};
                    jd.J[1][1] = {2.0, 0};
                    jd.closed1 = {2.0, 0};
                    jd.closed2 = {-2.0, 0};
                    break;
            }
            jd.phase_coeff = Rational(1, 2);
            jd.phase_power = 2;
            break;
        }
    }
    auto [l1, l2] = eigenvalues_2x2(jd.J);
    // pair computed eigenvalues with the closed forms
    if (std::abs(l1 - jd.closed1) + std::abs(l2 - jd.closed2) <=
        std::abs(l1 - jd.closed2) + std::abs(l2 - jd.closed1)) {
        jd.lam1 = l1;
        jd.lam2 = l2;
    } else {
        jd.lam1 = l2;
        jd.lam2 = l1;
    }
    return jd;
}

c64 phase_value(const JacobianData& jd, double r, double theta) {
    double p = to_double(jd.phase_power);
    double c = to_double(jd.phase_coeff);
    return c * std::polar(std::pow(r, p), p * theta);
}

c64 phase_derivative(const JacobianData& jd, double r, double theta) {
    double p = to_double(jd.phase_power);
    double c = to_double(jd.phase_coeff);
    return c * p * std::polar(std::pow(r, p - 1.0), (p - 1.0) * theta);
}

WasowBranchReport wasow_check(const Branch& br, int residual_N) {
    WasowBranchReport rep;
    rep.branch = br.label();
    if (br.trivial()) {
        rep.excluded_trivial = true;
        rep.note = "trivial zero branch excluded";
        rep.pass = false;
        return rep;
    }
    JacobianData jd = jacobian_limit(br);
    rep.eig_abs_err =
        std::max(std::abs(jd.lam1 - jd.closed1), std::abs(jd.lam2 - jd.closed2));
    rep.eig_nonzero = std::abs(jd.lam1) > 0 && std::abs(jd.lam2) > 0;
    bool eig_match = rep.eig_abs_err <= 1e-12;
    auto res = residual_order(br, residual_N);
    rep.residual_order = res.order;
    rep.residual_ok = res.infinite() || res.order >= residual_N;
    rep.pass = rep.eig_nonzero && eig_match && rep.residual_ok;
    if (!jd.note.empty()) rep.note = jd.note;
    return rep;
}

std::vector<WasowBranchReport> wasow_check_all(const EquationSpec& p3i, const EquationSpec& p3ii,
                                               const EquationSpec& p4, int residual_N) {
    std::vector<WasowBranchReport> out;
    for (int m = 0; m < 4; ++m) out.push_back(wasow_check(branch(p3i, m), residual_N));
    for (int m = 0; m < 3; ++m) out.push_back(wasow_check(branch(p3ii, m), residual_N));
    for (int m = 1; m <= 4; ++m) out.push_back(wasow_check(branch(p4, m), residual_N));
    return out;
}

}  // namespace painleve
