#include "painleve/oracle.hpp"
#include "painleve/series.hpp"

#include <doctest.h>

#include <random>

using namespace painleve;

namespace {
std::mt19937_64 g_rng(42);
Rational rr() {
    std::uniform_int_distribution<int> num(-9, 9), den(1, 9);
    int n = 0;
    while (n == 0) n = num(g_rng);
    return Rational(n, den(g_rng));
}
}  // namespace

TEST_CASE("truncated series arithmetic basics") {
    using G = GSeries<ExactScalar>;
    // u = x^0 (2 - 3/x), complete
    G u{0, 1, {ExactScalar(2), ExactScalar(-3)}, true};
    G v{0, 1, {ExactScalar(1), ExactScalar(5)}, true};
    G p = mul(u, v);
    CHECK(p.complete);
    REQUIRE(p.len() == 3);
    CHECK(p.c[0] == ExactScalar(2));
    CHECK(p.c[1] == ExactScalar(7));
    CHECK(p.c[2] == ExactScalar(-15));

    // derivative of 2 - 3/x is 3/x^2
    G d = derivative(u);
    CHECK(d.base == Rational(-1));
    CHECK(d.c[0] == ExactScalar(0));
    CHECK(d.c[1] == ExactScalar(3));

    // alignment across bases: x + (1/x-term series)
    G xs = G::monomial(1, ExactScalar(1), 1);
    G s = add(xs, u);
    CHECK(s.base == Rational(1));
    REQUIRE(s.len() >= 3);
    CHECK(s.c[0] == ExactScalar(1));
    CHECK(s.c[1] == ExactScalar(2));
    CHECK(s.c[2] == ExactScalar(-3));

    // truncation bookkeeping: incomplete * incomplete keeps min length
    G a{0, 1, {ExactScalar(1), ExactScalar(1), ExactScalar(1)}, false};
    G b{0, 1, {ExactScalar(1), ExactScalar(1)}, false};
    CHECK(mul(a, b).len() == 2);
}

TEST_CASE("P3i low-order coefficients match the hand-solved 2x2 system") {
    // n = 0 instance solved by hand: a1 = -(alpha+beta)/4, A1 = (beta-alpha-2)/2
    for (int t = 0; t < 10; ++t) {
        ExactScalar alpha(rr()), beta(rr());
        EquationSpec eq = make_p3i(alpha, beta);
        auto tab = compute_coefficients(branch(eq, 0), 3, Backend::Exact).exact();
        CHECK(tab.a[1] == -(alpha + beta) / ExactScalar(4));
        CHECK(tab.A[1] == (beta - alpha - ExactScalar(2)) / ExactScalar(2));
    }
    // alpha = -beta: constant solution u == 1, terminating table
    EquationSpec eq = make_p3i(ExactScalar(5), ExactScalar(-5));
    auto tab = compute_coefficients(branch(eq, 0), 8, Backend::Exact).exact();
    CHECK(tab.a[1] == ExactScalar(0));
    CHECK(tab.A[1] == ExactScalar(-6));  // beta - 1
    for (int n = 1; n <= 8; ++n) CHECK(tab.a[n].is_zero());
    for (int n = 2; n <= 8; ++n) CHECK(tab.A[n].is_zero());
}

TEST_CASE("P3ii low-order coefficients match the inverted leading system") {
    // n = 0: a1 = -beta a0^2 / 3, A1 = (beta-2) a0^2 / 3
    for (int m = 0; m < 3; ++m) {
        ExactScalar beta(rr());
        EquationSpec eq = make_p3ii(beta);
        Branch br = branch(eq, m);
        auto tab = compute_coefficients(br, 2, Backend::Exact).exact();
        ExactScalar a0sq = br.a0 * br.a0;
        CHECK(tab.a[1] == -beta * a0sq / ExactScalar(3));
        CHECK(tab.A[1] == (beta - ExactScalar(2)) * a0sq / ExactScalar(3));
    }
}

TEST_CASE("terminating P4 case 2 table") {
    EquationSpec eq = make_p4(ExactScalar(1), ExactScalar(0));
    auto t = compute_coefficients(branch(eq, 2), 10, Backend::Exact, true);
    const auto& d = t.exact();
    CHECK(d.a[0] == ExactScalar(-2));
    for (int n = 1; n <= 10; ++n) CHECK(d.a[n].is_zero());
    for (int n = 0; n <= 10; ++n) CHECK(d.A[n].is_zero());
}

TEST_CASE("evaluate partial sums") {
    // P4 case 3, N_use = 0: u = k0 / x
    EquationSpec eq = make_p4(ExactScalar(Rational(1, 2)), ExactScalar(Rational(1, 3)));
    auto t = compute_coefficients(branch(eq, 3), 6, Backend::F64);
    auto [u, U] = evaluate(t, CoverPoint{10.0, 0.0}, 0);
    CHECK(std::abs(u - c64{0.05, 0}) < 1e-15);
    CHECK(std::abs(U - c64{10.0, 0}) < 1e-14);

    // P3i terminating: u == 1 exactly at any order
    EquationSpec eq2 = make_p3i(ExactScalar(1), ExactScalar(-1));
    auto t2 = compute_coefficients(branch(eq2, 0), 8, Backend::F64);
    for (int N : {0, 3, 8}) {
        auto [u2, U2] = evaluate(t2, CoverPoint{7.0, 0.0}, N);
        CHECK(std::abs(u2 - c64{1, 0}) < 1e-15);
        (void)U2;
    }

    // P3ii leading term on the principal sheet: u = 8^{1/3}
    EquationSpec eq3 = make_p3ii(ExactScalar(Rational(1, 2)));
    auto t3 = compute_coefficients(branch(eq3, 0), 4, Backend::F64);
    auto [u3, U3] = evaluate(t3, CoverPoint{8.0, 0.0}, 0);
    CHECK(std::abs(u3 - c64{2, 0}) < 1e-14);
    CHECK(std::abs(U3 - c64{-0.25, 0}) < 1e-15);

    // sheet selection rotates x^{1/3}
    auto [u3s, U3s] = evaluate(t3, CoverPoint{8.0, 0.0}, 0, 1);
    c64 rot = std::polar(1.0, 2.0 * pi_const<double>() / 3.0);
    CHECK(std::abs(u3s - 2.0 * rot) < 1e-13);
}

TEST_CASE("evaluate sums differ by exactly the added term (f64 backend)") {
    EquationSpec eq = make_p3i(ExactScalar(1), ExactScalar(2));
    auto t = compute_coefficients(branch(eq, 0), 12, Backend::F64);
    CoverPoint x{9.0, 0.7};
    for (int N = 0; N < 12; ++N) {
        auto s0 = evaluate(t, x, N).first;
        auto s1 = evaluate(t, x, N + 1).first;
        c64 term = evaluate_term_u(t, x, N + 1);
        CHECK(s1 == s0 + term);  // bitwise: same operation sequence
    }
}

TEST_CASE("optimal truncation") {
    // factorial coefficients with step 1 at |x| = 10: minimum near n = 10
    EquationSpec eq = make_p3i(ExactScalar(1), ExactScalar(2));
    CoefficientTable t;
    t.br = branch(eq, 0);
    t.N = 25;
    t.backend = Backend::F64;
    TableData<c64> d;
    double f = 1;
    for (int n = 0; n <= 25; ++n) {
        d.a.push_back(c64{f, 0});
        d.A.push_back(c64{f, 0});
        f *= (n + 1);
    }
    t.data = d;
    auto ch = optimal_truncation(t, 10.0);
    CHECK(ch.n_star >= 8);
    CHECK(ch.n_star <= 11);
    CHECK_FALSE(ch.terminating);

    // terminating table: all a_n = 0 for n >= 1 -> scan returns 0 with zero error
    auto t2 = compute_coefficients(branch(make_p3i(ExactScalar(1), ExactScalar(-1)), 0), 8,
                                   Backend::Exact);
    auto ch2 = optimal_truncation(t2, 20.0);
    CHECK(ch2.terminating);
    CHECK(ch2.n_star == 0);
    CHECK(ch2.err_estimate == 0.0);

    // generic table agrees with the brute-force scan oracle
    auto t3 = compute_coefficients(branch(eq, 0), 40, Backend::F256);
    for (double r : {5.0, 12.0, 20.0}) {
        auto c = optimal_truncation(t3, r);
        CHECK(c.n_star == oracle::truncation_scan(t3, r));
    }
}

TEST_CASE("term growth report") {
    EquationSpec eq = make_p3i(ExactScalar(1), ExactScalar(2));
    auto t = compute_coefficients(branch(eq, 0), 24, Backend::F256);
    auto g = term_growth(t);
    CHECK_FALSE(g.all_zero);
    CHECK_FALSE(g.terminating);
    CHECK(g.supergeometric);
    CHECK(g.rows.size() == 25);

    auto t2 = compute_coefficients(branch(make_p3i(ExactScalar(1), ExactScalar(-1)), 0), 8,
                                   Backend::Exact);
    auto g2 = term_growth(t2);
    CHECK(g2.terminating);
    CHECK_FALSE(g2.supergeometric);

    EquationSpec p4 = make_p4(ExactScalar(0), ExactScalar(0));
    auto t3 = compute_coefficients(branch(p4, 4), 6, Backend::Exact, true);
    auto g3 = term_growth(t3);
    CHECK(g3.all_zero);
    for (const auto& row : g3.rows) CHECK(row.abs_a == 0.0);
}

TEST_CASE("residual order certifies the recurrences") {
    // generic P3i: r >= N
    EquationSpec eq = make_p3i(ExactScalar(1), ExactScalar(2));
    auto rep = residual_order(branch(eq, 0), 20);
    CHECK(rep.order >= 20);

    // terminating P4 case 2: infinite sentinel
    EquationSpec p4 = make_p4(ExactScalar(1), ExactScalar(0));
    auto rep2 = residual_order(branch(p4, 2), 20);
    CHECK(rep2.infinite());
    CHECK(rep2.terminates);

    // P3ii over Q(w)
    EquationSpec p3ii = make_p3ii(ExactScalar(0));
    auto rep3 = residual_order(branch(p3ii, 1), 15);
    CHECK(rep3.order >= 15);

    // corrupted coefficient is caught at its order
    auto tab = compute_coefficients(branch(eq, 0), 12, Backend::Exact).exact();
    auto bad = tab;
    bad.a[7] += ExactScalar(1);
    auto repbad = residual_check_exact(branch(eq, 0), bad.a, bad.A);
    CHECK(repbad.order < 12);
    CHECK(repbad.order >= 5);

    // exact backend unavailable when parameters leave the branch's field:
    // a Gaussian beta cannot mix with the omega leading data of m = 1
    EquationSpec mixed = make_p3ii(ExactScalar::gauss(1, 1));
    CHECK_THROWS_AS(residual_order(branch(mixed, 1), 4), Error);
}

TEST_CASE("oracle agrees with the production residual route") {
    std::mt19937_64 rng(99);
    EquationSpec eq = make_p3i(ExactScalar(Rational(2, 3)), ExactScalar(Rational(-1, 4)));
    for (int m = 0; m < 4; ++m) {
        Branch br = branch(eq, m);
        auto tab = compute_coefficients(br, 12, Backend::Exact).exact();
        CHECK(residual_check_exact(br, tab.a, tab.A).order >= 12);
        CHECK(oracle::residual_depth(br, tab.a, tab.A) >= 12);
        CHECK(oracle::scalar_equation_residual(br, tab.a, false).all_known_vanish);
        // corrupt and confirm both routes notice
        auto bad = tab;
        bad.A[5] += ExactScalar(Rational(1, 7));
        CHECK(residual_check_exact(br, bad.a, bad.A).order < 12);
        CHECK(oracle::residual_depth(br, bad.a, bad.A) < 12);
    }
}

TEST_CASE("branch symmetry m -> m+2 for P3i, sign bookkeeping via the residual") {
    ExactScalar alpha(Rational(3, 5)), beta(Rational(-2, 7));
    EquationSpec eq = make_p3i(alpha, beta);
    EquationSpec eqneg = make_p3i(-alpha, -beta);
    const int N = 10;
    auto t0 = compute_coefficients(branch(eq, 0), N, Backend::Exact).exact();
    auto t2 = compute_coefficients(branch(eq, 2), N, Backend::Exact).exact();
    auto t0n = compute_coefficients(branch(eqneg, 0), N, Backend::Exact).exact();

    // the spec relation on the u-row: a_n^{(2)}(alpha,beta) = -a_n^{(0)}(-alpha,-beta)
    for (int n = 0; n <= N; ++n) CHECK(t2.a[n] == -t0n.a[n]);

    // full-pair relation, asserted through the residual: the m=0 pair at the
    // same parameters maps onto the m=2 formal solution under
    // (a_n, A_n) -> (-(-1)^n a_n, (-1)^n A_n), i.e. u(x) -> -u(x e^{i pi}).
    std::vector<ExactScalar> am, Am;
    for (int n = 0; n <= N; ++n) {
        ExactScalar sgn = (n % 2 == 0) ? ExactScalar(1) : ExactScalar(-1);
        am.push_back(-sgn * t0.a[n]);
        Am.push_back(sgn * t0.A[n]);
    }
    CHECK(residual_check_exact(branch(eq, 2), am, Am).order >= N);
    for (int n = 0; n <= N; ++n) {
        CHECK(t2.a[n] == am[n]);
        CHECK(t2.A[n] == Am[n]);
    }
}

TEST_CASE("conjugation symmetry for real parameters") {
    // P3i: m = 1 <-> 3
    EquationSpec eq = make_p3i(ExactScalar(Rational(1, 3)), ExactScalar(Rational(5, 4)));
    const int N = 10;
    auto t1 = compute_coefficients(branch(eq, 1), N, Backend::Exact).exact();
    std::vector<ExactScalar> ac, Ac;
    for (int n = 0; n <= N; ++n) {
        ac.push_back(t1.a[n].conj());
        Ac.push_back(t1.A[n].conj());
    }
    CHECK(residual_check_exact(branch(eq, 3), ac, Ac).order >= N);
    auto t3 = compute_coefficients(branch(eq, 3), N, Backend::Exact).exact();
    for (int n = 0; n <= N; ++n) CHECK(t3.a[n] == ac[n]);

    // P3ii: m = 1 <-> 2
    EquationSpec p3ii = make_p3ii(ExactScalar(Rational(2, 5)));
    auto s1 = compute_coefficients(branch(p3ii, 1), N, Backend::Exact).exact();
    std::vector<ExactScalar> bc, Bc;
    for (int n = 0; n <= N; ++n) {
        bc.push_back(s1.a[n].conj());
        Bc.push_back(s1.A[n].conj());
    }
    CHECK(residual_check_exact(branch(p3ii, 2), bc, Bc).order >= N);

    // real-a0 branches have real coefficients
    auto s0 = compute_coefficients(branch(p3ii, 0), N, Backend::Exact).exact();
    for (int n = 0; n <= N; ++n) {
        CHECK(s0.a[n].is_rational());
        CHECK(s0.A[n].is_rational());
    }
}

TEST_CASE("floating backends track the exact one") {
    EquationSpec eq = make_p3i(ExactScalar(1), ExactScalar(2));
    auto te = compute_coefficients(branch(eq, 0), 30, Backend::Exact);
    auto tf = compute_coefficients(branch(eq, 0), 30, Backend::F256);
    for (int n = 0; n <= 30; ++n) {
        c64 a = te.a_c64(n), b = tf.a_c64(n);
        CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)));
    }
}
