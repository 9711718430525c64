#include "painleve/floats.hpp"
#include "painleve/numbers.hpp"

#include <doctest.h>

#include <random>

using namespace painleve;

namespace {
ExactScalar rnd(std::mt19937_64& rng, Field f) {
    std::uniform_int_distribution<int> num(-9, 9), den(1, 7);
    Rational a(num(rng), den(rng)), b(num(rng), den(rng));
    if (f == Field::Q) return ExactScalar(a);
    return ExactScalar(a, b, f);
}
}  // namespace

TEST_CASE("rational parsing") {
    CHECK(*parse_rational("3/7") == Rational(3, 7));
    CHECK(*parse_rational("-2") == Rational(-2));
    CHECK(*parse_rational("0.25") == Rational(1, 4));
    CHECK(*parse_rational("1.5e2") == Rational(150));
    CHECK(*parse_rational("2.5e-3") == Rational(1, 400));
    CHECK(!parse_rational("abc"));
    CHECK(!parse_rational("1/0"));

    auto z = *parse_complex_rational("1/2+1/3i");
    CHECK(z.first == Rational(1, 2));
    CHECK(z.second == Rational(1, 3));
    CHECK(parse_complex_rational("-i")->second == Rational(-1));
    CHECK(parse_complex_rational("3/4i")->second == Rational(3, 4));
    CHECK(parse_complex_rational("5")->second == Rational(0));
}

TEST_CASE("exact sqrt") {
    CHECK(*exact_sqrt(Rational(4, 9)) == Rational(2, 3));
    CHECK(!exact_sqrt(Rational(2)));
    CHECK(!exact_sqrt(Rational(-1)));
}

TEST_CASE("field arithmetic closed and exact") {
    std::mt19937_64 rng(7);
    for (Field f : {Field::Qi, Field::Qw}) {
        for (int t = 0; t < 50; ++t) {
            ExactScalar a = rnd(rng, f), b = rnd(rng, f), cc = rnd(rng, f);
            CHECK((a + b) * cc == a * cc + b * cc);
            CHECK(a * b == b * a);
            CHECK((a - b) + b == a);
            if (!b.is_zero()) CHECK((a / b) * b == a);
            CHECK(a * a.conj() == a.conj() * a);
            // the norm is rational and matches |.|^2 in the embedding
            ExactScalar n = a * a.conj();
            CHECK(n.is_rational());
            auto [re, im] = a.embed_d();
            CHECK(to_double(n.c0()) == doctest::Approx(re * re + im * im).epsilon(1e-12));
        }
    }
}

TEST_CASE("roots of unity") {
    ExactScalar i = ExactScalar::i(), w = ExactScalar::omega();
    CHECK(i.pow(4) == ExactScalar(1));
    CHECK(i * i == ExactScalar(-1));
    CHECK(w.pow(3) == ExactScalar(1));
    CHECK(w * w + w + ExactScalar(1) == ExactScalar(0));
    CHECK(w.conj() == w * w);
}

TEST_CASE("field mixing rejected, Q promotes") {
    ExactScalar i = ExactScalar::i(), w = ExactScalar::omega();
    CHECK_THROWS_AS((void)(i + w), Error);
    CHECK((ExactScalar(Rational(2, 3)) * w) == ExactScalar::eisen(0, Rational(2, 3)));
}

TEST_CASE("embedding is a ring homomorphism") {
    std::mt19937_64 rng(11);
    for (Field f : {Field::Q, Field::Qi, Field::Qw}) {
        for (int t = 0; t < 30; ++t) {
            ExactScalar a = rnd(rng, f), b = rnd(rng, f);
            auto ea = a.embed_d(), eb = b.embed_d();
            c64 za{ea.first, ea.second}, zb{eb.first, eb.second};
            auto es = (a + b).embed_d();
            auto ep = (a * b).embed_d();
            CHECK(std::abs(c64{es.first, es.second} - (za + zb)) < 1e-12);
            CHECK(std::abs(c64{ep.first, ep.second} - (za * zb)) < 1e-12);
        }
    }
    // high-precision embedding agrees with the double one
    ExactScalar v = ExactScalar::eisen(Rational(3, 7), Rational(-2, 5));
    c128 z = embed_exact<c128>(v);
    auto [r, i] = v.embed_d();
    CHECK(std::abs(to_c64(z) - c64{r, i}) < 1e-15);
}
