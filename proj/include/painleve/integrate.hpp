#pragma once

#include "painleve/dynamics.hpp"

#include <span>
#include <variant>

namespace painleve {

struct RaySeg {
    double theta, r0, r1;
};
struct ArcSeg {
    double r, th0, th1;
};
using Segment = std::variant<RaySeg, ArcSeg>;

// Piecewise path of rays and arcs, parametrized by t in [0, segments()], with a
// continuous tracked argument across joints.
class Path {
  public:
    static Path ray(double theta, double r0, double r1);
    static Path arc(double r, double th0, double th1);
    static Path concat(const std::vector<Path>& parts);
    Path reversed() const;

    size_t segments() const { return segs_.size(); }
    const Segment& segment(size_t i) const { return segs_[i]; }
    CoverPoint point(double t) const;
    CoverPoint start() const { return point(0.0); }
    CoverPoint end() const { return point(static_cast<double>(segs_.size())); }
    double min_radius() const;
    // |dx/dt| on a segment (constant per segment type up to r variation on arcs)
    double scale(size_t seg) const;

  private:
    std::vector<Segment> segs_;
    friend Path make_path(std::vector<Segment>);
};

struct Sample {
    double t;
    CoverPoint x;
    c64 u, U;
    double err;
};

struct PoleEvent {
    c64 x_pole;
    char blowing = 'u';  // 'u' or 'U'
    double fit_quality = 0.0;
};

enum class TrajStatus : unsigned char { Completed, PoleDetected, ToleranceFailure };

struct Trajectory {
    std::vector<Sample> samples;
    TrajStatus status = TrajStatus::Completed;
    std::optional<PoleEvent> pole;
    c64 final_u{}, final_U{};
    double worst_err = 0.0;
};

struct IntegrateOptions {
    double tol = 1e-10;
    double max_step = 0.05;       // cap on the parameter step per segment
    double blowup = 1e8;          // |u| or |U| threshold ending the run as a pole
    double step_floor = 1e-12;    // of the segment parameter length
    Prec prec = Prec::F64;
    int record_stride = 1;        // keep every k-th accepted sample
};

Trajectory integrate(const EquationSpec& eq, const Path& path, c64 u0, c64 U0,
                     const IntegrateOptions& opts = {});

// Full-precision variant used to chain legs without losing state.
template <class C>
Trajectory integrate_t(const EquationSpec& eq, const Path& path, C u0, C U0,
                       const IntegrateOptions& opts, C* final_u = nullptr, C* final_U = nullptr);

// Fits the reciprocal of the blowing component linearly in x over a trailing
// window of samples with monotonically growing magnitude.
PoleEvent estimate_pole(std::span<const Sample> trailing);

}  // namespace painleve
