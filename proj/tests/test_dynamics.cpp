#include "painleve/dynamics.hpp"

#include <doctest.h>

#include <random>

using namespace painleve;

namespace {
std::mt19937_64 g_rng(17);
ExactScalar rx() {
    std::uniform_int_distribution<int> num(-9, 9), den(1, 7);
    return ExactScalar::gauss(Rational(num(g_rng), den(g_rng)), Rational(num(g_rng), den(g_rng)));
}
c64 rc() {
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    return {u(g_rng), u(g_rng)};
}
}  // namespace

TEST_CASE("general P3 system specializes to the canonical families, exactly") {
    ExactScalar one(1), zero(0), mone(-1);
    for (int t = 0; t < 100; ++t) {
        ExactScalar alpha = rx(), beta = rx();
        ExactScalar x = rx(), u = rx(), U = rx();
        if (x.is_zero()) continue;
        EquationSpec p3i = make_p3i(alpha, beta);
        auto d1 = rhs<ExactScalar>(p3i, x, u, U);
        auto g1 = rhs_general_p3<ExactScalar>(alpha, beta, one, mone, x, u, U);
        CHECK(d1.du == g1.du);
        CHECK(d1.dU == g1.dU);

        EquationSpec p3ii = make_p3ii(beta);
        auto d2 = rhs<ExactScalar>(p3ii, x, u, U);
        auto g2 = rhs_general_p3<ExactScalar>(one, beta, zero, mone, x, u, U);
        CHECK(d2.du == g2.du);
        CHECK(d2.dU == g2.dU);
    }
    // h = 1 for beta = 0, delta = -1
    CHECK(general_p3_h<ExactScalar>(ExactScalar(0), ExactScalar(-1)) == ExactScalar(1));
    CHECK_THROWS_AS((rhs_general_p3<c64>(c64{1, 0}, c64{0, 0}, c64{1, 0}, c64{0, 0}, c64{2, 0},
                                         c64{1, 0}, c64{1, 0})),
                    Error);
}

TEST_CASE("stationary pairs of the canonical systems") {
    // P3i with alpha = -beta: (u, U) = (1, -1 + (beta-1)/x) has du = 0
    ExactScalar beta(Rational(3, 7));
    EquationSpec eq = make_p3i(-beta, beta);
    for (int t = 0; t < 10; ++t) {
        ExactScalar x = rx();
        if (x.is_zero()) continue;
        ExactScalar U = ExactScalar(-1) + (beta - ExactScalar(1)) / x;
        auto d = rhs<ExactScalar>(eq, x, ExactScalar(1), U);
        CHECK(d.du == ExactScalar(0));
        // dU matches the derivative of U(x): dU/dx = -(beta-1)/x^2
        CHECK(d.dU == -(beta - ExactScalar(1)) / (x * x));
    }

    // P4, k0 = 1, kinf = 0: (u, U) = (-2x, 0) gives (-2, 0)
    EquationSpec p4 = make_p4(ExactScalar(1), ExactScalar(0));
    for (int t = 0; t < 10; ++t) {
        ExactScalar x = rx();
        auto d = rhs<ExactScalar>(p4, x, ExactScalar(-2) * x, ExactScalar(0));
        CHECK(d.du == ExactScalar(-2));
        CHECK(d.dU == ExactScalar(0));
    }

    // P4 with k0 = 0: u == 0 is invariant
    EquationSpec p40 = make_p4(ExactScalar(0), ExactScalar(Rational(1, 2)));
    for (int t = 0; t < 10; ++t) {
        auto d = rhs<ExactScalar>(p40, rx(), ExactScalar(0), rx());
        CHECK(d.du == ExactScalar(0));
    }
}

TEST_CASE("Hamiltonian values and gradients") {
    EquationSpec p4 = make_p4(ExactScalar(Rational(2, 5)), ExactScalar(Rational(3, 4)));
    // U = 0 kills all U terms: H = kinf * u
    CHECK(hamiltonian<ExactScalar>(p4, rx(), ExactScalar(1), ExactScalar(0)) ==
          ExactScalar(Rational(3, 4)));
    // (x,u,U) = (0,1,1): 2 - 1 - 2 k0 + kinf
    CHECK(hamiltonian<ExactScalar>(p4, ExactScalar(0), ExactScalar(1), ExactScalar(1)) ==
          ExactScalar(1) - ExactScalar(2) * ExactScalar(Rational(2, 5)) + ExactScalar(Rational(3, 4)));

    EquationSpec p3ii = make_p3ii(ExactScalar(0));
    CHECK_THROWS_AS((hamiltonian<c64>(p3ii, c64{1, 0}, c64{1, 0}, c64{1, 0})), Error);

    // centered finite differences of H reproduce the Hamiltonian system rhs
    auto fd_check = [&](const EquationSpec& eq) {
        const double h = 1e-6;
        for (int t = 0; t < 20; ++t) {
            c64 x = rc() + c64{3, 0}, u = rc() + c64{2.5, 0}, U = rc();
            auto d = rhs_hamiltonian<c64>(eq, x, u, U);
            c64 dHdU = (hamiltonian<c64>(eq, x, u, U + h) - hamiltonian<c64>(eq, x, u, U - h)) /
                       (2 * h);
            c64 dHdu = (hamiltonian<c64>(eq, x, u + h, U) - hamiltonian<c64>(eq, x, u - h, U)) /
                       (2 * h);
            CHECK(std::abs(d.du - dHdU) < 5e-9 * std::max(1.0, std::abs(d.du)));
            CHECK(std::abs(d.dU + dHdu) < 5e-9 * std::max(1.0, std::abs(d.dU)));
        }
    };
    fd_check(make_p3i(ExactScalar(1), ExactScalar(2)));
    fd_check(p4);
    // for P4 the Hamiltonian system is the canonical one
    for (int t = 0; t < 10; ++t) {
        c64 x = rc(), u = rc(), U = rc();
        auto a = rhs<c64>(p4, x, u, U);
        auto b = rhs_hamiltonian<c64>(p4, x, u, U);
        CHECK(a.du == b.du);
        CHECK(a.dU == b.dU);
    }
}

TEST_CASE("scalar residual and d2u from the system") {
    // u == 1 for alpha = -beta solves P3i
    EquationSpec eq = make_p3i(ExactScalar(1), ExactScalar(-1));
    CHECK(scalar_residual<ExactScalar>(eq, ExactScalar(Rational(7, 2)), ExactScalar(1),
                                       ExactScalar(0), ExactScalar(0)) == ExactScalar(0));

    // u = -2x solves P4 with k0=1, kinf=0
    EquationSpec p4 = make_p4(ExactScalar(1), ExactScalar(0));
    for (int t = 0; t < 10; ++t) {
        ExactScalar x = rx();
        if (x.is_zero()) continue;
        CHECK(scalar_residual<ExactScalar>(p4, x, ExactScalar(-2) * x, ExactScalar(-2),
                                           ExactScalar(0)) == ExactScalar(0));
    }

    // residual is affine in d2u
    c64 x{3, 1}, u{1.2, -0.4}, du{0.3, 0.1}, d2u{0.05, -0.2}, epsv{1e-3, 2e-3};
    c64 r0 = scalar_residual<c64>(p4, x, u, du, d2u);
    c64 r1 = scalar_residual<c64>(p4, x, u, du, d2u + epsv);
    CHECK(std::abs((r1 - r0) - epsv) < 1e-13);
    CHECK_THROWS_AS((scalar_residual<c64>(p4, x, c64{0, 0}, du, d2u)), Error);

    // d2u_from_system vanishes on the exact pairs
    EquationSpec eq1 = make_p3i(ExactScalar(2), ExactScalar(-2));
    ExactScalar beta(-2);
    for (int t = 0; t < 10; ++t) {
        ExactScalar xx = rx();
        if (xx.is_zero()) continue;
        ExactScalar U = ExactScalar(-1) + (beta - ExactScalar(1)) / xx;
        CHECK(d2u_from_system<ExactScalar>(eq1, xx, ExactScalar(1), U) == ExactScalar(0));
        CHECK(d2u_from_system<ExactScalar>(p4, xx, ExactScalar(-2) * xx, ExactScalar(0)) ==
              ExactScalar(0));
    }

    // and matches a finite difference of the first rhs component along the flow
    EquationSpec gen = make_p3i(ExactScalar(1), ExactScalar(2));
    c64 x0{6, 2}, u0{1.1, 0.2}, U0{-0.9, 0.1};
    const double h = 1e-5;
    auto flow = [&](c64 xx, c64 uu, c64 UU, double dt) {
        // one explicit midpoint step along dx = dt
        auto d1 = rhs<c64>(gen, xx, uu, UU);
        c64 um = uu + 0.5 * dt * d1.du, Um = UU + 0.5 * dt * d1.dU;
        auto d2 = rhs<c64>(gen, xx + 0.5 * dt, um, Um);
        return std::pair{uu + dt * d2.du, UU + dt * d2.dU};
    };
    auto [up, Up] = flow(x0, u0, U0, h);
    auto [um, Um] = flow(x0, u0, U0, -h);
    c64 fd = (rhs<c64>(gen, x0 + h, up, Up).du - rhs<c64>(gen, x0 - h, um, Um).du) / (2 * h);
    CHECK(std::abs(fd - d2u_from_system<c64>(gen, x0, u0, U0)) < 1e-7);
}

TEST_CASE("limit Jacobians and eigenvalue anchors") {
    EquationSpec p3i = make_p3i(ExactScalar(1), ExactScalar(2));
    auto jd = jacobian_limit(branch(p3i, 0));
    CHECK(std::abs(jd.lam1 - c64{-2, 0}) < 1e-14);
    CHECK(std::abs(jd.lam2 - c64{2, 0}) < 1e-14);

    EquationSpec p3ii = make_p3ii(ExactScalar(Rational(1, 2)));
    auto jd2 = jacobian_limit(branch(p3ii, 0));
    CHECK(std::abs(jd2.lam1 - c64{3 * std::sqrt(3.0), 0}) < 1e-12);
    CHECK_FALSE(jd2.note.empty());

    EquationSpec p4 = make_p4(ExactScalar(Rational(2, 3)), ExactScalar(Rational(3, 5)));
    auto jd3 = jacobian_limit(branch(p4, 1));
    CHECK(std::abs(jd3.lam1 - c64{0, 2 * std::sqrt(3.0) / 3}) < 1e-14);
    for (int m = 2; m <= 4; ++m) {
        auto jdm = jacobian_limit(branch(p4, m));
        CHECK(std::abs(std::abs(jdm.lam1) - 2.0) < 1e-14);
    }

    // trace 0 and det = -lambda^2 for every branch
    auto check_tracedet = [](const JacobianData& j) {
        c64 tr = j.J[0][0] + j.J[1][1];
        c64 det = j.J[0][0] * j.J[1][1] - j.J[0][1] * j.J[1][0];
        CHECK(std::abs(tr) < 1e-14);
        CHECK(std::abs(det + j.lam1 * j.lam1) < 1e-12);
    };
    for (int m = 0; m < 4; ++m) check_tracedet(jacobian_limit(branch(p3i, m)));
    for (int m = 0; m < 3; ++m) check_tracedet(jacobian_limit(branch(p3ii, m)));
    for (int m = 1; m <= 4; ++m) check_tracedet(jacobian_limit(branch(p4, m)));

    // trivial branch excluded
    EquationSpec p4t = make_p4(ExactScalar(0), ExactScalar(1));
    CHECK_THROWS_AS(jacobian_limit(branch(p4t, 3)), Error);
}

TEST_CASE("wasow table over all branches") {
    EquationSpec p3i = make_p3i(ExactScalar(1), ExactScalar(2));
    EquationSpec p3ii = make_p3ii(ExactScalar(Rational(1, 2)));
    EquationSpec p4 = make_p4(ExactScalar(Rational(2, 3)), ExactScalar(Rational(3, 5)));
    auto reps = wasow_check_all(p3i, p3ii, p4);
    REQUIRE(reps.size() == 11);
    for (const auto& r : reps) {
        CHECK(r.pass);
        CHECK(r.eig_nonzero);
        CHECK(r.eig_abs_err <= 1e-12);
        CHECK(r.residual_ok);
    }

    // trivial P4 branch reported as excluded, not passed
    EquationSpec p4t = make_p4(ExactScalar(0), ExactScalar(1));
    auto rt = wasow_check(branch(p4t, 3));
    CHECK(rt.excluded_trivial);
    CHECK_FALSE(rt.pass);

    // corrupted Jacobian is caught (negative control)
    auto jd = jacobian_limit(branch(p3i, 0));
    jd.J[0][0] += c64{0.5, 0};
    auto [l1, l2] = eigenvalues_2x2(jd.J);
    double err = std::min(std::abs(l1 - jd.closed1) + std::abs(l2 - jd.closed2),
                          std::abs(l1 - jd.closed2) + std::abs(l2 - jd.closed1));
    CHECK(err > 1e-6);
}
