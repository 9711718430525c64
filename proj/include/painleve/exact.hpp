#pragma once

#include "painleve/errors.hpp"
#include "painleve/numbers.hpp"

#include <string>

namespace painleve {

enum class Field : unsigned char { Q, Qi, Qw };

// Element of Q, Q(i) or Q(w), w = exp(2*pi*i/3), stored as x + y*s over the
// basis {1, s}. Q mixes freely with either extension; Q(i) and Q(w) do not mix.
class ExactScalar {
  public:
    ExactScalar() : f_(Field::Q), x_(0), y_(0) {}
    ExactScalar(long v) : f_(Field::Q), x_(v), y_(0) {}
    ExactScalar(const Rational& v) : f_(Field::Q), x_(v), y_(0) {}
    ExactScalar(const Rational& x, const Rational& y, Field f) : f_(f), x_(x), y_(y) {
        if (f == Field::Q && y != 0) fail(Errc::FieldMismatch, "rational with nonzero extension part");
        normalize();
    }

    static ExactScalar gauss(const Rational& re, const Rational& im) {
        return ExactScalar(re, im, im == 0 ? Field::Q : Field::Qi);
    }
    static ExactScalar eisen(const Rational& p, const Rational& q) {
        return ExactScalar(p, q, q == 0 ? Field::Q : Field::Qw);
    }
    static ExactScalar i() { return ExactScalar(0, 1, Field::Qi); }
    static ExactScalar omega() { return ExactScalar(0, 1, Field::Qw); }

    Field field() const { return f_; }
    const Rational& c0() const { return x_; }
    const Rational& c1() const { return y_; }
    bool is_zero() const { return x_ == 0 && y_ == 0; }
    bool is_rational() const { return y_ == 0; }

    ExactScalar operator-() const { return ExactScalar(-x_, -y_, f_); }
    ExactScalar conj() const;

    friend ExactScalar operator+(const ExactScalar& a, const ExactScalar& b);
    friend ExactScalar operator-(const ExactScalar& a, const ExactScalar& b);
    friend ExactScalar operator*(const ExactScalar& a, const ExactScalar& b);
    friend ExactScalar operator/(const ExactScalar& a, const ExactScalar& b);
    ExactScalar& operator+=(const ExactScalar& b) { return *this = *this + b; }
    ExactScalar& operator-=(const ExactScalar& b) { return *this = *this - b; }
    ExactScalar& operator*=(const ExactScalar& b) { return *this = *this * b; }
    ExactScalar& operator/=(const ExactScalar& b) { return *this = *this / b; }

    friend bool operator==(const ExactScalar& a, const ExactScalar& b) {
        if (a.x_ != b.x_ || a.y_ != b.y_) return false;
        return a.y_ == 0 || a.f_ == b.f_;
    }
    friend bool operator!=(const ExactScalar& a, const ExactScalar& b) { return !(a == b); }

    ExactScalar inverse() const;
    ExactScalar pow(long e) const;

    // Canonical embedding into C at double precision. Q and Q(i) have exact
    // rational re/im; for Q(w), im = c1*sqrt(3)/2. Higher precision embeddings
    // live in floats.hpp (embed_exact).
    std::pair<double, double> embed_d() const {
        double x = x_.convert_to<double>(), y = y_.convert_to<double>();
        if (f_ == Field::Qw) return {x - 0.5 * y, y * 0.8660254037844386467637231707529362};
        return {x, y};
    }

    std::string str() const;

  private:
    void normalize() {
        if (y_ == 0) f_ = Field::Q;
    }
    static Field join(Field a, Field b) {
        if (a == Field::Q) return b;
        if (b == Field::Q) return a;
        if (a != b) fail(Errc::FieldMismatch, "cannot mix Q(i) and Q(w) exactly");
        return a;
    }

    Field f_;
    Rational x_, y_;
};

inline ExactScalar operator+(const ExactScalar& a, const ExactScalar& b) {
    return ExactScalar(a.x_ + b.x_, a.y_ + b.y_, ExactScalar::join(a.f_, b.f_));
}

inline ExactScalar operator-(const ExactScalar& a, const ExactScalar& b) {
    return ExactScalar(a.x_ - b.x_, a.y_ - b.y_, ExactScalar::join(a.f_, b.f_));
}

inline ExactScalar operator*(const ExactScalar& a, const ExactScalar& b) {
    Field f = ExactScalar::join(a.f_, b.f_);
    Rational x = a.x_ * b.x_, y = a.x_ * b.y_ + a.y_ * b.x_;
    if (a.y_ != 0 && b.y_ != 0) {
        Rational yy = a.y_ * b.y_;
        x -= yy;                        // i^2 = -1;  w^2 = -1 - w
        if (f == Field::Qw) y -= yy;
    }
    return ExactScalar(x, y, f);
}

inline ExactScalar ExactScalar::conj() const {
    if (f_ == Field::Qi) return ExactScalar(x_, -y_, f_);
    if (f_ == Field::Qw) return ExactScalar(x_ - y_, -y_, f_);  // conj(w) = -1 - w
    return *this;
}

inline ExactScalar ExactScalar::inverse() const {
    if (is_zero()) fail(Errc::FieldMismatch, "division by zero in exact backend");
    if (y_ == 0) return ExactScalar(1 / x_, 0, Field::Q);
    Rational norm = (f_ == Field::Qi) ? x_ * x_ + y_ * y_ : x_ * x_ - x_ * y_ + y_ * y_;
    ExactScalar c = conj();
    return ExactScalar(c.x_ / norm, c.y_ / norm, f_);
}

inline ExactScalar operator/(const ExactScalar& a, const ExactScalar& b) { return a * b.inverse(); }

inline ExactScalar ExactScalar::pow(long e) const {
    ExactScalar base = e < 0 ? inverse() : *this;
    unsigned long k = e < 0 ? -static_cast<unsigned long>(e) : static_cast<unsigned long>(e);
    ExactScalar out(1);
    while (k) {
        if (k & 1) out *= base;
        base *= base;
        k >>= 1;
    }
    return out;
}

inline std::string ExactScalar::str() const {
    if (y_ == 0) return rational_str(x_);
    const char* s = f_ == Field::Qi ? "i" : "w";
    std::string out = x_ == 0 ? "" : rational_str(x_);
    if (y_ == 1) out += out.empty() ? std::string(s) : "+" + std::string(s);
    else if (y_ == -1) out += std::string("-") + s;
    else {
        std::string ys = rational_str(y_);
        if (!out.empty() && ys[0] != '-') out += "+";
        out += ys + "*" + s;
    }
    return out;
}

}  // namespace painleve
