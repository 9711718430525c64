#pragma once

#include "painleve/exact.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

#include <cmath>
#include <complex>

namespace painleve {

namespace mp = boost::multiprecision;

using f128 = mp::number<mp::cpp_bin_float<128, mp::backends::digit_base_2>, mp::et_off>;
using f256 = mp::number<mp::cpp_bin_float<256, mp::backends::digit_base_2>, mp::et_off>;
using c64 = std::complex<double>;
using c128 = mp::number<mp::complex_adaptor<mp::cpp_bin_float<128, mp::backends::digit_base_2>>, mp::et_off>;
using c256 = mp::number<mp::complex_adaptor<mp::cpp_bin_float<256, mp::backends::digit_base_2>>, mp::et_off>;

enum class Prec : unsigned char { F64, F128, F256 };

template <class R> R rat_to(const Rational& q) {
    return R(numerator(q).str()) / R(denominator(q).str());
}
template <> inline double rat_to<double>(const Rational& q) { return q.convert_to<double>(); }

template <class C> struct cx_traits;

template <> struct cx_traits<c64> {
    using real_type = double;
    static double re(const c64& z) { return z.real(); }
    static double im(const c64& z) { return z.imag(); }
    static c64 make(double r, double i) { return {r, i}; }
};
template <> struct cx_traits<c128> {
    using real_type = f128;
    static f128 re(const c128& z) { return z.real(); }
    static f128 im(const c128& z) { return z.imag(); }
    static c128 make(const f128& r, const f128& i) { return {r, i}; }
};
template <> struct cx_traits<c256> {
    using real_type = f256;
    static f256 re(const c256& z) { return z.real(); }
    static f256 im(const c256& z) { return z.imag(); }
    static c256 make(const f256& r, const f256& i) { return {r, i}; }
};

template <class C> using real_t = typename cx_traits<C>::real_type;

template <class C> real_t<C> re_of(const C& z) { return cx_traits<C>::re(z); }
template <class C> real_t<C> im_of(const C& z) { return cx_traits<C>::im(z); }
template <class C> real_t<C> abs_of(const C& z) {
    using std::abs;
    return abs(z);
}
template <class C> C make_cx(const real_t<C>& r, const real_t<C>& i) { return cx_traits<C>::make(r, i); }

inline c64 to_c64(const c64& z) { return z; }
inline c64 to_c64(const c128& z) { return {z.real().convert_to<double>(), z.imag().convert_to<double>()}; }
inline c64 to_c64(const c256& z) { return {z.real().convert_to<double>(), z.imag().convert_to<double>()}; }

template <class C> C cx_cast(const c64& z) { return make_cx<C>(real_t<C>(z.real()), real_t<C>(z.imag())); }
template <> inline c64 cx_cast<c64>(const c64& z) { return z; }

// conversion between any two complex precisions
template <class To, class From> To cx_convert(const From& z) {
    if constexpr (std::is_same_v<To, From>) {
        return z;
    } else if constexpr (std::is_same_v<From, c64>) {
        return cx_cast<To>(z);
    } else if constexpr (std::is_same_v<To, c64>) {
        return to_c64(z);
    } else {
        using RT = real_t<To>;
        return make_cx<To>(re_of(z).template convert_to<RT>(), im_of(z).template convert_to<RT>());
    }
}

template <class C> C embed_exact(const ExactScalar& v) {
    using R = real_t<C>;
    R x = rat_to<R>(v.c0()), y = rat_to<R>(v.c1());
    if (v.field() == Field::Qw) {
        using std::sqrt;
        R half = R(1) / R(2);
        return make_cx<C>(x - y * half, y * sqrt(R(3)) * half);
    }
    return make_cx<C>(x, y);
}

template <class R> R pi_const() {
    using std::atan;
    return R(4) * atan(R(1));
}
template <> inline double pi_const<double>() { return 3.141592653589793238462643383279502884; }

// r^p * exp(i*p*theta) with the argument on the universal cover; p rational.
template <class C> C cover_pow(const real_t<C>& r, const real_t<C>& theta, const Rational& p) {
    using R = real_t<C>;
    using std::cos;
    using std::exp;
    using std::log;
    using std::sin;
    if (p == 0) return make_cx<C>(R(1), R(0));
    R pv = rat_to<R>(p);
    R mod = exp(pv * log(r));
    R ang = pv * theta;
    return make_cx<C>(mod * cos(ang), mod * sin(ang));
}

inline double to_double_r(double x) { return x; }
inline double to_double_r(const f128& x) { return x.convert_to<double>(); }
inline double to_double_r(const f256& x) { return x.convert_to<double>(); }

}  // namespace painleve
