#pragma once

#include "painleve/errors.hpp"
#include "painleve/floats.hpp"

#include <optional>
#include <string>
#include <vector>

namespace painleve {

enum class Family : unsigned char { P3i, P3ii, P4 };

const char* family_name(Family f);
std::optional<Family> family_from_name(std::string_view s);

// Parameter value carrying an exact representative when one exists.
struct PValue {
    std::optional<ExactScalar> exact;
    c64 approx{0.0, 0.0};

    PValue() = default;
    PValue(const ExactScalar& e) : exact(e) {
        auto [r, i] = e.embed_d();
        approx = {r, i};
    }
    PValue(long v) : PValue(ExactScalar(v)) {}
    PValue(c64 v) : approx(v) {}

    bool is_exact() const { return exact.has_value(); }
    const ExactScalar& req_exact(const char* what) const {
        if (!exact) fail(Errc::ExactBackendUnavailable, std::string("parameter ") + what + " has no exact value");
        return *exact;
    }
    template <class C> C as() const {
        if (exact) return embed_exact<C>(*exact);
        return cx_cast<C>(approx);
    }
};

// Canonical equation families:
//   P3i :  u'' = u'^2/u - u'/x + (alpha u^2 + beta)/x + u^3 - 1/u
//   P3ii:  u'' = u'^2/u - u'/x + (u^2 + beta)/x - 1/u
//   P4  :  u'' = u'^2/(2u) + 3u^3/2 + 4xu^2 + 2(x^2-alpha)u + beta/u,
//          with alpha = -k0 + 2*kinf + 1 and beta = -2*k0^2.
class EquationSpec {
  public:
    Family family;
    PValue alpha_p, beta_p;    // P3 families
    PValue kappa0, kappaInf;   // P4

    PValue alpha() const;
    PValue beta() const;
    std::string str() const;
};

struct RawParams {
    std::optional<PValue> alpha, beta, gamma, delta, kappa0, kappaInf;
};

EquationSpec make_equation(Family family, const RawParams& raw);
EquationSpec make_p3i(PValue alpha, PValue beta);
EquationSpec make_p3ii(PValue beta);
EquationSpec make_p4(PValue kappa0, PValue kappaInf);

// One choice of leading coefficient for the formal solution. m indexes the
// root of unity (P3i: 0..3, P3ii: 0..2) or the P4 case (1..4).
struct Branch {
    EquationSpec eq;
    int m = 0;
    ExactScalar a0, A0;
    Rational p_u, p_U;  // prefactor exponents of x in front of each series
    Rational step;      // exponent decrement between consecutive terms

    bool trivial_u() const { return a0.is_zero(); }
    bool trivial_U() const { return A0.is_zero(); }
    bool trivial() const { return trivial_u() || trivial_U(); }
    std::string label() const;
};

Branch branch(const EquationSpec& eq, int m);
int branch_count(Family f);
int branch_index_lo(Family f);  // 0 for P3 families, 1 for P4

// Point on the universal cover of C \ {0}: radius and unreduced argument.
struct CoverPoint {
    double r = 0.0;
    double theta = 0.0;
    c64 value() const { return std::polar(r, theta); }
    static CoverPoint from_polar(double r, double theta) { return {r, theta}; }
};

enum class SectorKind : unsigned char { S_existence, Omega_uniqueness };

// Angular region on the universal cover with a radius floor. Angles are exact
// rational multiples of pi.
struct Sector {
    Family family;
    int m = 0, k = 0;
    SectorKind kind = SectorKind::S_existence;
    Rational lo_pi, hi_pi;  // theta bounds divided by pi
    double r_min = 0.0;

    double theta_lo() const { return to_double(lo_pi) * pi_const<double>(); }
    double theta_hi() const { return to_double(hi_pi) * pi_const<double>(); }
    double bisector() const { return 0.5 * (theta_lo() + theta_hi()); }
    Rational span_pi() const { return hi_pi - lo_pi; }
};

Sector sector(const EquationSpec& eq, int m, int k, SectorKind kind, double r_min);
int sector_k_count(Family f);

// True iff r_min < |x| and theta_lo < arg x < theta_hi on the universal cover.
bool contains(const Sector& s, const CoverPoint& x);

}  // namespace painleve
