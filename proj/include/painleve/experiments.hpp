#pragma once

#include "painleve/integrate.hpp"

namespace painleve {

struct GridSpec {
    int n_rays = 9;
    int n_radii = 12;
    double r_lo = 0.0, r_hi = 0.0;  // radial span of the grid (0 => around R0)
    double margin = 0.05;           // angular margin excluded at sector edges
};

struct PatchPoint {
    double theta, r;
    c64 u, U;
};

struct PoleRecord {
    double ray_theta;
    PoleEvent ev;
};

struct SolutionPatch {
    Branch br;
    Sector sector;
    double R0 = 0.0;
    int N_seed = 0;
    std::vector<double> thetas, radii;
    std::vector<PatchPoint> points;
    bool pole_free = true;
    std::vector<PoleRecord> poles;
};

struct BuildOptions {
    double tol = 1e-12;
    Prec ray_prec = Prec::F64;
    Prec arc_prec = Prec::F128;   // bisector-to-ray transport is dichotomy-limited
    double arc_tol = 1e-22;
    double seed_err_target = 1e-10;
    int workers = 0;              // 0 = hardware concurrency
};

// Seeds (u,U) on the sector bisector at |x| = R0 from the optimally truncated
// series, carries the state along the arc |x| = R0 to each grid ray, then
// radially to the grid radii. R0 is raised until the truncation error estimate
// meets seed_err_target.
SolutionPatch build_tronquee(const CoefficientTable& table, const Sector& sector, double R0, int N,
                             const GridSpec& grid, const BuildOptions& opts = {});

struct FitReport {
    int N_cmp = 0;
    std::vector<double> radii;
    std::vector<double> errs;     // |u_num - S_Ncmp| / |x^{p_u}| at each radius
    double slope = 0.0;
    double predicted_slope = 0.0;  // -(N_cmp+1)*step
    double slope_dev = 0.0;
    double fit_residual = 0.0;
    bool floor_limited = false;
};

struct FitOptions {
    double leg = 2.0;             // inward seeding leg per radius
    Prec prec = Prec::F128;
    double tol = 1e-18;
    double floor_abs = 1e-14;     // prefactor-normalized error floor
};

// Measures |u_numeric - evaluate(table, x, N_cmp)| along the sector bisector,
// normalized by the series prefactor |x^{p_u}|, and fits the log-log slope.
// u_numeric comes from a short inward integration seeded from the optimally
// truncated series just outside each radius; one-anchor transport across the
// whole radial window would be dichotomy-amplified beyond the tail sizes.
FitReport validate_asymptotics(const SolutionPatch& patch, const CoefficientTable& table,
                               const std::vector<double>& radii, int N_cmp,
                               const FitOptions& opts = {});

enum class PerturbMode : unsigned char { Decaying, Growing };

struct DecayReport {
    double theta = 0.0;
    double eps = 0.0;
    std::vector<double> rs;
    std::vector<double> log_du;
    double fitted_scale = 0.0;     // coefficient on the predicted phase; 1 = exact match
    double measured_rate = 0.0;    // d log|du| / d|x| at the window midpoint
    double predicted_rate = 0.0;   // Re(lambda * phi'(x)) there
    double rel_deviation = 0.0;
    double prefactor_exp = 0.0;    // fitted algebraic exponent (when enabled)
    bool escaped = false;
};

struct DecayOptions {
    double r_hi = 0.0, r_lo = 0.0;  // measurement window (inward)
    int n_samples = 12;
    double tol = 1e-12;
    bool fit_log_prefactor = true;
    bool expect_growth = false;
};

// Integrates the seeded solution and an eps-perturbed copy inward along the
// sector bisector; the recessive-outward mode dominates the difference there,
// so the fitted growth of log|du| against the phase Re(lambda*phi) measures
// the decay exponent with the algebraic prefactor left free.
DecayReport perturbation_decay(const CoefficientTable& table, const Sector& sector, double eps,
                               PerturbMode mode, const DecayOptions& opts);

struct OverlapReport {
    int k = 0;
    double R_probe = 0.0;
    double theta_probe = 0.0;
    c64 u1{}, U1{}, u2{}, U2{};
    double du_abs = 0.0, dU_abs = 0.0;
    double solver_floor = 0.0;       // transport noise bound from the dichotomy estimate
    double bound_C = 0.0;            // du_abs / exp(-|lambda phi(R)|)
    double largest_neglected = 0.0;  // first omitted series term at the probe
    double separation = 0.0;         // largest_neglected / du_abs
    bool pass_agreement = false;
    bool pass_separation = false;
};

struct OverlapOptions {
    Prec arc_prec = Prec::F128;
    double arc_tol = 1e-26;
    double agree_tol = 1e-10;
    double wedge_eps = 0.2;     // half-width of the admissible probe wedge
    double probe_offset = 0.0;  // probe angle offset from the shared boundary
};

// Builds the S_k and S_{k+1} solutions from their bisector seeds at |x| =
// R_probe and transports both along the arc to the shared boundary ray.
OverlapReport overlap_agreement(const CoefficientTable& table, int k, int N, double R_probe,
                                const OverlapOptions& opts = {});

struct SweepReport {
    double cut_angle = 0.0;
    double R = 0.0;
    int n_segments = 0;
    std::vector<double> thetas;
    std::vector<double> rel_dev;  // checkpoint deviation vs the N-term series
    double worst_dev = 0.0;
    bool pole_free = true;
    double margin = 0.1;
};

struct SweepOptions {
    int n_segments = 12;
    double margin = 0.1;
    double tol = 1e-12;
    int sheet = 0;
};

// Transits the arc |x| = R over tracked arg (cut, cut + 3*pi) minus the margin,
// re-seeding from the optimally truncated series at each segment start (the
// single-seed transit would amplify solver noise by e^{2|lambda phi|} ~ e^50 at
// R = 30, beyond any double-precision budget); asserts pole-free passage and
// agreement with the N-term series at the checkpoints.
SweepReport tritronquee_sweep_p3ii(const CoefficientTable& table, double cut_angle, double R, int N,
                                   const SweepOptions& opts = {});

struct ScanRegion {
    double theta_lo = 0.0, theta_hi = 0.0;  // ray fan (absolute angles)
    int n_rays = 7;
    double R0 = 15.0;   // seeding radius; integration runs inward
    double r_lo = 6.0;  // inner radius
};

struct PoleFieldReport {
    c64 detuning{};
    std::vector<PoleRecord> poles;
    std::vector<double> ray_thetas;
    int completed_rays = 0;
    bool any_pole = false;
};

// Seeds each ray from the series at R0, adds `detuning` to u, and integrates
// inward, recording blow-ups. detuning = 0 reproduces the tronquee patch.
PoleFieldReport pole_scan(const CoefficientTable& table, c64 detuning, const ScanRegion& region,
                          const IntegrateOptions& opts = {});

}  // namespace painleve
