#pragma once

#include "painleve/errors.hpp"
#include "painleve/floats.hpp"

#include <limits>
#include <vector>

namespace painleve {

// Scalar helpers shared by the series engine.
template <class S> bool s_is_zero(const S& v);
template <> inline bool s_is_zero<ExactScalar>(const ExactScalar& v) { return v.is_zero(); }
template <> inline bool s_is_zero<c64>(const c64& v) { return v == c64(0.0, 0.0); }
template <> inline bool s_is_zero<c128>(const c128& v) { return v == 0; }
template <> inline bool s_is_zero<c256>(const c256& v) { return v == 0; }

template <class S> S s_from_long(long v);
template <> inline ExactScalar s_from_long<ExactScalar>(long v) { return ExactScalar(v); }
template <> inline c64 s_from_long<c64>(long v) { return c64(static_cast<double>(v), 0.0); }
template <> inline c128 s_from_long<c128>(long v) { return c128(v); }
template <> inline c256 s_from_long<c256>(long v) { return c256(v); }

template <class S> S s_from_rat(const Rational& q);
template <> inline ExactScalar s_from_rat<ExactScalar>(const Rational& q) { return ExactScalar(q); }
template <> inline c64 s_from_rat<c64>(const Rational& q) { return c64(rat_to<double>(q), 0.0); }
template <> inline c128 s_from_rat<c128>(const Rational& q) { return c128(rat_to<f128>(q)); }
template <> inline c256 s_from_rat<c256>(const Rational& q) { return c256(rat_to<f256>(q)); }

template <class S> S s_from_exact(const ExactScalar& v);
template <> inline ExactScalar s_from_exact<ExactScalar>(const ExactScalar& v) { return v; }
template <> inline c64 s_from_exact<c64>(const ExactScalar& v) {
    auto [r, i] = v.embed_d();
    return {r, i};
}
template <> inline c128 s_from_exact<c128>(const ExactScalar& v) { return embed_exact<c128>(v); }
template <> inline c256 s_from_exact<c256>(const ExactScalar& v) { return embed_exact<c256>(v); }

// Truncated generalized power series x^{base} * sum_j c[j] x^{-j*step}.
// Coefficients с[0..size) are exact values of the underlying series; `complete`
// marks a series whose tail beyond the stored coefficients is identically zero
// (a generalized polynomial), for which products lose nothing to truncation.
template <class S> struct GSeries {
    Rational base;
    Rational step;
    std::vector<S> c;
    bool complete = false;

    int len() const { return static_cast<int>(c.size()); }
    static GSeries monomial(const Rational& expo, const S& coeff, const Rational& step) {
        GSeries g;
        g.base = expo;
        g.step = step;
        g.c = {coeff};
        g.complete = true;
        return g;
    }
};

namespace tps_detail {
inline constexpr int kInfLen = std::numeric_limits<int>::max() / 4;
template <class S> int known_len(const GSeries<S>& g) { return g.complete ? kInfLen : g.len(); }
}  // namespace tps_detail

template <class S> GSeries<S> mul(const GSeries<S>& a, const GSeries<S>& b) {
    if (a.step != b.step) fail(Errc::FieldMismatch, "series step mismatch in mul");
    GSeries<S> r;
    r.base = a.base + b.base;
    r.step = a.step;
    const int ka = tps_detail::known_len(a), kb = tps_detail::known_len(b);
    int out_len;
    if (a.complete && b.complete) {
        out_len = a.len() + b.len() - 1;
        r.complete = true;
    } else {
        out_len = std::min(ka, kb);
    }
    r.c.assign(static_cast<size_t>(out_len), s_from_long<S>(0));
    for (int p = 0; p < a.len(); ++p) {
        if (s_is_zero(a.c[p])) continue;
        const int qmax = std::min(b.len() - 1, out_len - 1 - p);
        for (int q = 0; q <= qmax; ++q) r.c[p + q] += a.c[p] * b.c[q];
    }
    return r;
}

template <class S> GSeries<S> add(const GSeries<S>& a, const GSeries<S>& b) {
    if (a.step != b.step) fail(Errc::FieldMismatch, "series step mismatch in add");
    GSeries<S> r;
    r.step = a.step;
    r.base = a.base > b.base ? a.base : b.base;
    Rational offa = (r.base - a.base) / a.step;
    Rational offb = (r.base - b.base) / b.step;
    if (denominator(offa) != 1 || denominator(offb) != 1)
        fail(Errc::FieldMismatch, "series bases not on a common lattice");
    const long ka = offa.convert_to<long>(), kb = offb.convert_to<long>();
    long la = a.complete ? tps_detail::kInfLen : a.len() + ka;
    long lb = b.complete ? tps_detail::kInfLen : b.len() + kb;
    long out_len = std::min(la, lb);
    r.complete = a.complete && b.complete;
    if (r.complete) out_len = std::max<long>(a.len() + ka, b.len() + kb);
    r.c.assign(static_cast<size_t>(out_len), s_from_long<S>(0));
    for (int j = 0; j < a.len(); ++j)
        if (j + ka < out_len) r.c[static_cast<size_t>(j + ka)] += a.c[j];
    for (int j = 0; j < b.len(); ++j)
        if (j + kb < out_len) r.c[static_cast<size_t>(j + kb)] += b.c[j];
    return r;
}

template <class S> GSeries<S> neg(GSeries<S> a) {
    for (auto& v : a.c) v = -v;
    return a;
}

template <class S> GSeries<S> sub(const GSeries<S>& a, const GSeries<S>& b) { return add(a, neg(b)); }

template <class S> GSeries<S> scale(GSeries<S> a, const S& s) {
    for (auto& v : a.c) v = v * s;
    return a;
}

// x * d/dx: multiplies coefficient j by its exponent (base - j*step); lattice kept.
template <class S> GSeries<S> x_derivative(GSeries<S> a) {
    for (int j = 0; j < a.len(); ++j) a.c[j] = a.c[j] * s_from_rat<S>(a.base - j * a.step);
    return a;
}

// d/dx: exponents drop by one.
template <class S> GSeries<S> derivative(GSeries<S> a) {
    a = x_derivative(std::move(a));
    a.base -= 1;
    return a;
}

template <class S> GSeries<S> mul_xpow(GSeries<S> a, const Rational& k) {
    a.base += k;
    return a;
}

}  // namespace painleve
