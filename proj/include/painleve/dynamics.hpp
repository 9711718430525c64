#pragma once

#include "painleve/model.hpp"
#include "painleve/series.hpp"

namespace painleve {

template <class C> struct Deriv {
    C du, dU;
};

namespace detail {

template <class C> C pv_as(const PValue& v) { return v.as<C>(); }
template <> inline ExactScalar pv_as<ExactScalar>(const PValue& v) { return v.req_exact("param"); }

template <class C> bool c_is_zero(const C& v) { return s_is_zero(v); }

template <class C> C sqrt_neg(const C& delta) {
    using std::sqrt;
    return sqrt(-delta);
}
template <> inline ExactScalar sqrt_neg<ExactScalar>(const ExactScalar& delta) {
    if (!delta.is_rational()) fail(Errc::ZeroDelta, "exact sqrt(-delta) needs rational delta");
    auto r = exact_sqrt(-delta.c0());
    if (!r) fail(Errc::ZeroDelta, "-delta is not an exact square");
    return ExactScalar(*r);
}

}  // namespace detail

// General P3 first-order system, h = 1 - beta*(-delta)^{-1/2}:
//   x u' = (-delta)^{1/2} x + h u + x u^2 U
//   x U' = alpha + gamma x u - (1+h) U - x u U^2
template <class C>
Deriv<C> rhs_general_p3(const C& alpha, const C& beta, const C& gamma, const C& delta, const C& x,
                        const C& u, const C& U) {
    if (detail::c_is_zero(delta)) fail(Errc::ZeroDelta, "general P3 system needs delta != 0");
    if (detail::c_is_zero(x)) fail(Errc::ZeroX, "P3 systems are singular at x = 0");
    C sq = detail::sqrt_neg<C>(delta);
    C h = s_from_long<C>(1) - beta / sq;
    C du = (sq * x + h * u + x * u * u * U) / x;
    C dU = (alpha + gamma * x * u - (s_from_long<C>(1) + h) * U - x * u * U * U) / x;
    return {du, dU};
}

template <class C> C general_p3_h(const C& beta, const C& delta) {
    return s_from_long<C>(1) - beta / detail::sqrt_neg<C>(delta);
}

// The canonical right-hand sides as printed per family.
template <class C> Deriv<C> rhs(const EquationSpec& eq, const C& x, const C& u, const C& U) {
    using detail::pv_as;
    switch (eq.family) {
        case Family::P3i: {
            if (detail::c_is_zero(x)) fail(Errc::ZeroX, "P3i is singular at x = 0");
            C alpha = pv_as<C>(eq.alpha_p), beta = pv_as<C>(eq.beta_p);
            C du = (x + (s_from_long<C>(1) - beta) * u + x * u * u * U) / x;
            C dU = (alpha + x * u - (s_from_long<C>(2) - beta) * U - x * u * U * U) / x;
            return {du, dU};
        }
        case Family::P3ii: {
            if (detail::c_is_zero(x)) fail(Errc::ZeroX, "P3ii is singular at x = 0");
            C beta = pv_as<C>(eq.beta_p);
            C du = (x + (s_from_long<C>(1) - beta) * u + x * u * u * U) / x;
            C dU = (s_from_long<C>(1) - (s_from_long<C>(2) - beta) * U - x * u * U * U) / x;
            return {du, dU};
        }
        case Family::P4: {
            C k0 = pv_as<C>(eq.kappa0), ki = pv_as<C>(eq.kappaInf);
            C du = s_from_long<C>(4) * u * U - u * u - s_from_long<C>(2) * x * u - s_from_long<C>(2) * k0;
            C dU = -s_from_long<C>(2) * U * U + s_from_long<C>(2) * u * U + s_from_long<C>(2) * x * U - ki;
            return {du, dU};
        }
    }
    fail(Errc::UnsupportedFamily, "rhs");
}

// Hamiltonian values:
//   P3i : H with x*H = 2u^2U^2 - xu^2U + (1-beta)uU + xU - (2+alpha-beta)xu/4
//   P4  : H = 2uU^2 - (u^2 + 2xu + 2*k0)U + kinf*u
template <class C> C hamiltonian(const EquationSpec& eq, const C& x, const C& u, const C& U) {
    using detail::pv_as;
    const C two = s_from_long<C>(2), four = s_from_long<C>(4);
    if (eq.family == Family::P3i) {
        if (detail::c_is_zero(x)) fail(Errc::ZeroX, "H_III is singular at x = 0");
        C alpha = pv_as<C>(eq.alpha_p), beta = pv_as<C>(eq.beta_p);
        C xH = two * u * u * U * U - x * u * u * U + (s_from_long<C>(1) - beta) * u * U + x * U -
               (two + alpha - beta) * x * u / four;
        return xH / x;
    }
    if (eq.family == Family::P4) {
        C k0 = pv_as<C>(eq.kappa0), ki = pv_as<C>(eq.kappaInf);
        return two * u * U * U - (u * u + two * x * u + two * k0) * U + ki * u;
    }
    fail(Errc::UnsupportedFamily, "no Hamiltonian for this family");
}

// Hamiltonian-system right-hand sides (the auxiliary variable of the H_III
// system differs from the one in rhs() for P3i; for P4 they coincide):
//   P3i: x u' = 4u^2U - xu^2 + (1-beta)u + x
//        x U' = -4uU^2 + (2ux + beta - 1)U + (2+alpha-beta)x/4
template <class C>
Deriv<C> rhs_hamiltonian(const EquationSpec& eq, const C& x, const C& u, const C& U) {
    using detail::pv_as;
    const C two = s_from_long<C>(2), four = s_from_long<C>(4);
    if (eq.family == Family::P3i) {
        if (detail::c_is_zero(x)) fail(Errc::ZeroX, "P3i is singular at x = 0");
        C alpha = pv_as<C>(eq.alpha_p), beta = pv_as<C>(eq.beta_p);
        C du = (four * u * u * U - x * u * u + (s_from_long<C>(1) - beta) * u + x) / x;
        C dU = (-four * u * U * U + (two * u * x + beta - s_from_long<C>(1)) * U +
                (two + alpha - beta) * x / four) /
               x;
        return {du, dU};
    }
    if (eq.family == Family::P4) return rhs(eq, x, u, U);
    fail(Errc::UnsupportedFamily, "no Hamiltonian system for this family");
}

// d2u - RHS of the original second-order equation.
template <class C>
C scalar_residual(const EquationSpec& eq, const C& x, const C& u, const C& du, const C& d2u) {
    using detail::pv_as;
    if (detail::c_is_zero(u)) fail(Errc::ZeroU, "scalar equation is singular at u = 0");
    const C one = s_from_long<C>(1), two = s_from_long<C>(2);
    switch (eq.family) {
        case Family::P3i: {
            if (detail::c_is_zero(x)) fail(Errc::ZeroX, "P3 scalar equation is singular at x = 0");
            C alpha = pv_as<C>(eq.alpha_p), beta = pv_as<C>(eq.beta_p);
            return d2u - (du * du / u - du / x + (alpha * u * u + beta) / x + u * u * u - one / u);
        }
        case Family::P3ii: {
            if (detail::c_is_zero(x)) fail(Errc::ZeroX, "P3 scalar equation is singular at x = 0");
            C beta = pv_as<C>(eq.beta_p);
            return d2u - (du * du / u - du / x + (u * u + beta) / x + u * u * u - one / u);
        }
        case Family::P4: {
            C alpha = pv_as<C>(eq.alpha());
            C beta = pv_as<C>(eq.beta());
            return d2u - (du * du / (two * u) + s_from_rat<C>(Rational(3, 2)) * u * u * u +
                          s_from_long<C>(4) * x * u * u + two * (x * x - alpha) * u + beta / u);
        }
    }
    fail(Errc::UnsupportedFamily, "scalar_residual");
}

// u'' along the flow: total derivative of the first rhs component.
template <class C> C d2u_from_system(const EquationSpec& eq, const C& x, const C& u, const C& U) {
    using detail::pv_as;
    auto d = rhs(eq, x, u, U);
    const C one = s_from_long<C>(1), two = s_from_long<C>(2);
    if (eq.family == Family::P4) {
        // f1 = 4uU - u^2 - 2xu - 2k0
        C f1_x = -two * u;
        C f1_u = s_from_long<C>(4) * U - two * u - two * x;
        C f1_U = s_from_long<C>(4) * u;
        return f1_x + f1_u * d.du + f1_U * d.dU;
    }
    // f1 = 1 + h u / x + u^2 U with h = 1 - beta
    C beta = pv_as<C>(eq.beta_p);
    C h = one - beta;
    C f1_x = -h * u / (x * x);
    C f1_u = h / x + two * u * U;
    C f1_U = u * u;
    return f1_x + f1_u * d.du + f1_U * d.dU;
}

// Limit Jacobian of the shifted system at the branch, with eigenvalues and
// their printed closed forms, plus the phase function phi(x) = coeff * x^power
// entering the perturbation factor e^{lambda * phi(x)}.
struct JacobianData {
    Family family;
    int m = 0;
    c64 J[2][2];
    c64 lam1, lam2;          // computed from J
    c64 closed1, closed2;    // printed closed forms
    Rational phase_coeff;    // phi(x) = phase_coeff * x^{phase_power}
    Rational phase_power;
    std::string note;        // P3ii carries the b0/B0 reading note
};

JacobianData jacobian_limit(const Branch& br);

// Recompute eigenvalues from J (used by the corrupted-matrix negative control).
std::pair<c64, c64> eigenvalues_2x2(const c64 J[2][2]);

// dphi/dr along a ray of angle theta, evaluated at radius r (complex value).
c64 phase_derivative(const JacobianData& jd, double r, double theta);
c64 phase_value(const JacobianData& jd, double r, double theta);

struct WasowBranchReport {
    std::string branch;
    bool excluded_trivial = false;
    bool eig_nonzero = false;
    double eig_abs_err = 0.0;
    int residual_order = -1;
    bool residual_ok = false;
    bool pass = false;
    std::string note;
};

WasowBranchReport wasow_check(const Branch& br, int residual_N = 10);

// All branches of the three canonical families at the given parameters.
std::vector<WasowBranchReport> wasow_check_all(const EquationSpec& p3i, const EquationSpec& p3ii,
                                               const EquationSpec& p4, int residual_N = 10);

}  // namespace painleve
