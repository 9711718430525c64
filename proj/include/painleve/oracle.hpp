#pragma once

#include "painleve/series.hpp"

#include <map>

namespace painleve::oracle {

// Independent truncated-series arithmetic used only for verification. Unlike
// the production engine, terms are keyed by explicit rational exponents and
// truncation is tracked by a hard exponent floor, so the two routes share no
// series code.
struct MapSeries {
    std::map<Rational, ExactScalar, std::greater<Rational>> terms;
    bool complete = false;   // no unknown tail
    Rational floor = 0;      // exponents < floor are unknown (ignored if complete)

    Rational lead() const { return terms.empty() ? Rational(0) : terms.begin()->first; }
};

MapSeries from_coefficients(const Rational& base, const Rational& step,
                            const std::vector<ExactScalar>& c, bool complete);
MapSeries ms_mul(const MapSeries& a, const MapSeries& b);
MapSeries ms_add(const MapSeries& a, const MapSeries& b);
MapSeries ms_sub(const MapSeries& a, const MapSeries& b);
MapSeries ms_scale(MapSeries a, const ExactScalar& s);
MapSeries ms_dx(const MapSeries& a);                      // d/dx term by term
MapSeries ms_xpow(MapSeries a, const Rational& k);        // multiply by x^k
MapSeries ms_monomial(const Rational& expo, const ExactScalar& c);

struct ResidualVerdict {
    bool all_known_vanish = false;
    bool has_nonzero = false;
    Rational first_nonzero_expo = 0;
    Rational floor = 0;
};

ResidualVerdict verdict(const MapSeries& r);

// Residual of the second-order scalar equations, cleared of denominators:
//   P3i :  x u u'' - x (u')^2 + u u' - alpha u^3 - beta u - x u^4 + x
//   P3ii:  x u u'' - x (u')^2 + u u' - u^3 - beta u + x
//   P4  :  2 u u'' - (u')^2 - 3u^4 - 8xu^3 - 4(x^2 - alpha)u^2 - 2 beta
ResidualVerdict scalar_equation_residual(const Branch& br, const std::vector<ExactScalar>& a,
                                         bool complete);

// Residual of the first-order system rows computed with the map arithmetic.
std::pair<ResidualVerdict, ResidualVerdict> system_residual(const Branch& br,
                                                            const std::vector<ExactScalar>& a,
                                                            const std::vector<ExactScalar>& A,
                                                            bool complete);

// Depth (in recurrence steps) to which the system residual is verified zero;
// -1 on the first failing order, matching the production convention.
int residual_depth(const Branch& br, const std::vector<ExactScalar>& a,
                   const std::vector<ExactScalar>& A);

// Brute-force term-magnitude scan for the optimal truncation index (skips
// zero coefficients); independent of the production log-based scan.
int truncation_scan(const CoefficientTable& t, double radius);

}  // namespace painleve::oracle
