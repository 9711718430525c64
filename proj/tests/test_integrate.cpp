#include "painleve/integrate.hpp"
#include "painleve/series.hpp"

#include <doctest.h>

using namespace painleve;

TEST_CASE("path construction and joins") {
    Path r = Path::ray(0.0, 10.0, 20.0);
    CHECK(r.start().r == 10.0);
    CHECK(r.end().r == 20.0);

    const double pi = pi_const<double>();
    Path a = Path::arc(10.0, 0.0, pi / 2);
    CHECK(a.end().theta == doctest::Approx(pi / 2));
    CHECK(std::abs(a.end().value() - c64{0, 10}) < 1e-12);

    Path ok = Path::concat({Path::ray(0.0, 5.0, 10.0), Path::arc(10.0, 0.0, pi / 2)});
    CHECK(ok.segments() == 2);
    CHECK_THROWS_AS(Path::concat({Path::ray(0.0, 5.0, 10.0), Path::arc(11.0, 0.0, 1.0)}), Error);
    CHECK_THROWS_AS(Path::ray(0.0, 0.0, 3.0), Error);

    Path rev = ok.reversed();
    CHECK(rev.start().theta == doctest::Approx(pi / 2));
    CHECK(rev.end().r == doctest::Approx(5.0));
}

TEST_CASE("integrator holds exact solutions") {
    // P3i, alpha+beta = 0: u == 1 on a short outward span
    EquationSpec eq = make_p3i(ExactScalar(1), ExactScalar(-1));
    IntegrateOptions io;
    io.tol = 1e-12;
    Trajectory tr = integrate(eq, Path::ray(0.0, 10.0, 16.0), c64{1, 0}, c64{-1.0 - 2.0 / 10, 0}, io);
    REQUIRE(tr.status == TrajStatus::Completed);
    double worst = 0;
    for (const auto& s : tr.samples) worst = std::max(worst, std::abs(s.u - c64{1, 0}));
    CHECK(worst < 1e-8);

    // P4 exact solution u = -2x inward
    EquationSpec p4 = make_p4(ExactScalar(1), ExactScalar(0));
    Trajectory t2 = integrate(p4, Path::ray(0.0, 30.0, 5.0), c64{-60, 0}, c64{0, 0}, io);
    REQUIRE(t2.status == TrajStatus::Completed);
    CHECK(std::abs(t2.final_u - c64{-10, 0}) < 1e-8);
    CHECK(std::abs(t2.final_U) == 0.0);
}

TEST_CASE("order check: tol / 32 improves the error by >= 16") {
    EquationSpec p4 = make_p4(ExactScalar(Rational(1, 3)), ExactScalar(Rational(-1, 3)));
    auto err_at = [&](double tol) {
        IntegrateOptions io;
        io.tol = tol;
        io.max_step = 0.2;
        Trajectory t = integrate(p4, Path::ray(0.0, 5.0, 30.0), c64{-10.0 / 3, 0}, c64{5.0 / 3, 0}, io);
        REQUIRE(t.status == TrajStatus::Completed);
        return std::abs(t.final_u - c64{-20, 0});
    };
    double e1 = err_at(1e-6), e2 = err_at(1e-6 / 32);
    CHECK(e1 / e2 >= 16.0);
}

TEST_CASE("reversal returns to the initial state") {
    // gentle stiffness instance; the bound is relative, matching the
    // controller's per-step error measure
    EquationSpec eq = make_p3ii(ExactScalar(Rational(1, 2)));
    auto table = compute_coefficients(branch(eq, 0), 50, Backend::F256);
    auto [u0, U0] = evaluate(table, CoverPoint{30.0, 0.0}, optimal_truncation(table, 30.0).n_star);
    IntegrateOptions io;
    io.tol = 1e-10;
    io.max_step = 0.5;
    Path fwd = Path::ray(0.0, 30.0, 33.0);
    Trajectory t1 = integrate(eq, fwd, u0, U0, io);
    REQUIRE(t1.status == TrajStatus::Completed);
    Trajectory t2 = integrate(eq, fwd.reversed(), t1.final_u, t1.final_U, io);
    REQUIRE(t2.status == TrajStatus::Completed);
    CHECK(std::abs(t2.final_u - u0) < 10 * io.tol * std::max(1.0, std::abs(u0)));
    CHECK(std::abs(t2.final_U - U0) < 10 * io.tol * std::max(1.0, std::abs(U0)));
}

TEST_CASE("second-order equation recovered along a trajectory") {
    EquationSpec eq = make_p3i(ExactScalar(1), ExactScalar(2));
    auto table = compute_coefficients(branch(eq, 0), 50, Backend::F256);
    auto [u0, U0] = evaluate(table, CoverPoint{14.0, 0.0}, optimal_truncation(table, 14.0).n_star);
    IntegrateOptions io;
    io.tol = 1e-11;
    Trajectory t = integrate(eq, Path::ray(0.0, 14.0, 10.0), u0, U0, io);
    REQUIRE(t.status == TrajStatus::Completed);
    for (size_t i = 0; i < t.samples.size(); i += 5) {
        const auto& s = t.samples[i];
        c64 x = s.x.value();
        c64 du = rhs<c64>(eq, x, s.u, s.U).du;
        c64 d2u = d2u_from_system<c64>(eq, x, s.u, s.U);
        c64 res = scalar_residual<c64>(eq, x, s.u, du, d2u);
        CHECK(std::abs(res) <= 100 * io.tol * std::max(1.0, std::abs(d2u)));
    }
}

TEST_CASE("pole detection and the reciprocal fit") {
    // synthetic simple pole: u(x) = 1/(x - xp)
    auto synth = [](c64 xp, int order) {
        std::vector<Sample> v;
        for (int i = 0; i < 8; ++i) {
            double x = 3.0 - 0.11 * i;  // marching toward xp = 2, staying above it
            c64 w = std::pow(c64{x, 0} - xp, -order);
            v.push_back({double(i), CoverPoint{x, 0}, w, c64{0.1, 0}, 1e-12});
        }
        return v;
    };
    auto v1 = synth(c64{2.0, 0.3}, 1);
    PoleEvent ev = estimate_pole(std::span<const Sample>(v1.data(), v1.size()));
    CHECK(std::abs(ev.x_pole - c64{2.0, 0.3}) < 1e-6);
    CHECK(ev.fit_quality < 1e-9);
    CHECK(ev.blowing == 'u');

    // wrong model (double pole) degrades the fit quality measurably
    auto v2 = synth(c64{2.0, 0.0}, 2);
    PoleEvent ev2 = estimate_pole(std::span<const Sample>(v2.data(), v2.size()));
    CHECK(ev2.fit_quality > 1e3 * ev.fit_quality);

    std::vector<Sample> flat(3, Sample{0, CoverPoint{1, 0}, c64{1, 0}, c64{0, 0}, 0});
    CHECK_THROWS_AS(estimate_pole(std::span<const Sample>(flat.data(), flat.size())), Error);

    // a detuned P3i run blows up at a refinement-stable location
    EquationSpec eq = make_p3i(ExactScalar(1), ExactScalar(2));
    auto table = compute_coefficients(branch(eq, 0), 50, Backend::F256);
    auto [u0, U0] = evaluate(table, CoverPoint{15.0, 0.0}, optimal_truncation(table, 15.0).n_star);
    IntegrateOptions io;
    io.tol = 1e-12;
    Trajectory t = integrate(eq, Path::ray(0.0, 15.0, 3.0), u0 + c64{0.5, 0}, U0, io);
    REQUIRE(t.status == TrajStatus::PoleDetected);
    REQUIRE(t.pole.has_value());
    IntegrateOptions io2;
    io2.tol = 1e-13;
    io2.blowup = 1e10;
    Trajectory t2 = integrate(eq, Path::ray(0.0, 15.0, 3.0), u0 + c64{0.5, 0}, U0, io2);
    REQUIRE(t2.status == TrajStatus::PoleDetected);
    CHECK(std::abs(t.pole->x_pole - t2.pole->x_pole) / std::abs(t.pole->x_pole) < 1e-4);

    // samples strictly increasing in t
    for (size_t i = 1; i < t.samples.size(); ++i) CHECK(t.samples[i].t > t.samples[i - 1].t);
}

TEST_CASE("zero-x guard for P3 paths") {
    EquationSpec eq = make_p3i(ExactScalar(1), ExactScalar(2));
    CHECK_THROWS_AS(Path::ray(0.0, -1.0, 3.0), Error);
}
