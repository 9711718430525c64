#include "painleve/json_io.hpp"

#include <cstdio>
#include <ostream>

namespace painleve {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

Json cplx(const c64& z) { return Json::array({z.real(), z.imag()}); }

Json exact_str(const ExactScalar& v) {
    if (v.field() == Field::Qw) {
        // decimal embedding plus the exact (1, w) coordinates
        auto [r, i] = v.embed_d();
        return Json::array({format_double(r), format_double(i)});
    }
    return Json::array({rational_str(v.c0()), rational_str(v.c1())});
}

Json pvalue_json(const PValue& v) {
    if (v.is_exact()) return v.exact->str();
    return cplx(v.approx);
}

}  // namespace

Json params_json(const EquationSpec& eq) {
    Json j;
    j["family"] = family_name(eq.family);
    if (eq.family == Family::P4) {
        j["kappa0"] = pvalue_json(eq.kappa0);
        j["kappaInf"] = pvalue_json(eq.kappaInf);
        j["alpha"] = pvalue_json(eq.alpha());
        j["beta"] = pvalue_json(eq.beta());
    } else {
        j["alpha"] = pvalue_json(eq.alpha_p);
        j["beta"] = pvalue_json(eq.beta_p);
    }
    return j;
}

Json table_json(const CoefficientTable& t) {
    Json j;
    j["family"] = family_name(t.br.eq.family);
    j["m"] = t.br.m;
    j["params"] = params_json(t.br.eq);
    j["backend"] = backend_name(t.backend);
    j["step"] = rational_str(t.br.step);
    j["p_u"] = rational_str(t.br.p_u);
    j["p_U"] = rational_str(t.br.p_U);
    Json a = Json::array(), A = Json::array();
    if (t.backend == Backend::Exact) {
        const auto& d = t.exact();
        for (int n = 0; n <= t.N; ++n) {
            a.push_back(exact_str(d.a[n]));
            A.push_back(exact_str(d.A[n]));
        }
        if (!d.a.empty() && (d.a[0].field() == Field::Qw || d.A[0].field() == Field::Qw)) {
            Json ab = Json::array(), Ab = Json::array();
            for (int n = 0; n <= t.N; ++n) {
                ab.push_back(Json::array({rational_str(d.a[n].c0()), rational_str(d.a[n].c1())}));
                Ab.push_back(Json::array({rational_str(d.A[n].c0()), rational_str(d.A[n].c1())}));
            }
            j["basis"] = "1,w";
            j["a_exact"] = ab;
            j["A_exact"] = Ab;
        }
    } else {
        for (int n = 0; n <= t.N; ++n) {
            c64 av = t.a_c64(n), Av = t.A_c64(n);
            a.push_back(Json::array({format_double(av.real()), format_double(av.imag())}));
            A.push_back(Json::array({format_double(Av.real()), format_double(Av.imag())}));
        }
    }
    j["a"] = a;
    j["A"] = A;
    return j;
}

Json trajectory_json(const Trajectory& t) {
    Json j;
    j["status"] = t.status == TrajStatus::Completed
                      ? "completed"
                      : (t.status == TrajStatus::PoleDetected ? "pole" : "tolerance_failure");
    j["worst_err"] = t.worst_err;
    j["final_u"] = cplx(t.final_u);
    j["final_U"] = cplx(t.final_U);
    if (t.pole) {
        j["pole"] = {{"x", cplx(t.pole->x_pole)},
                     {"component", std::string(1, t.pole->blowing)},
                     {"fit_quality", t.pole->fit_quality}};
    }
    j["samples"] = t.samples.size();
    return j;
}

void trajectory_csv(const Trajectory& t, std::ostream& os) {
    os << "t,re_x,im_x,arg_x_tracked,re_u,im_u,re_U,im_U,err\n";
    for (const auto& s : t.samples) {
        c64 x = s.x.value();
        os << format_double(s.t) << ',' << format_double(x.real()) << ','
           << format_double(x.imag()) << ',' << format_double(s.x.theta) << ','
           << format_double(s.u.real()) << ',' << format_double(s.u.imag()) << ','
           << format_double(s.U.real()) << ',' << format_double(s.U.imag()) << ','
           << format_double(s.err) << '\n';
    }
}

Json patch_json(const SolutionPatch& p) {
    Json j;
    j["branch"] = p.br.label();
    j["params"] = params_json(p.br.eq);
    j["R0"] = p.R0;
    j["N_seed"] = p.N_seed;
    j["sector"] = {{"theta_lo", p.sector.theta_lo()},
                   {"theta_hi", p.sector.theta_hi()},
                   {"kind", p.sector.kind == SectorKind::S_existence ? "S" : "Omega"},
                   {"k", p.sector.k}};
    j["pole_free"] = p.pole_free;
    Json pts = Json::array();
    for (const auto& q : p.points)
        pts.push_back({{"theta", q.theta}, {"r", q.r}, {"u", cplx(q.u)}, {"U", cplx(q.U)}});
    j["points"] = pts;
    Json poles = Json::array();
    for (const auto& q : p.poles)
        poles.push_back({{"ray_theta", q.ray_theta},
                         {"x_pole", cplx(q.ev.x_pole)},
                         {"component", std::string(1, q.ev.blowing)},
                         {"fit_quality", q.ev.fit_quality}});
    j["poles"] = poles;
    return j;
}

Json fit_json(const FitReport& r) {
    Json j;
    j["N_cmp"] = r.N_cmp;
    j["radii"] = r.radii;
    j["errs"] = r.errs;
    j["slope"] = r.slope;
    j["predicted_slope"] = r.predicted_slope;
    j["slope_dev"] = r.slope_dev;
    j["fit_residual"] = r.fit_residual;
    j["floor_limited"] = r.floor_limited;
    return j;
}

Json decay_json(const DecayReport& r) {
    Json j;
    j["theta"] = r.theta;
    j["eps"] = r.eps;
    j["rs"] = r.rs;
    j["log_du"] = r.log_du;
    j["fitted_scale"] = r.fitted_scale;
    j["measured_rate"] = r.measured_rate;
    j["predicted_rate"] = r.predicted_rate;
    j["rel_deviation"] = r.rel_deviation;
    j["prefactor_exp"] = r.prefactor_exp;
    j["escaped"] = r.escaped;
    return j;
}

Json overlap_json(const OverlapReport& r) {
    Json j;
    j["k"] = r.k;
    j["R_probe"] = r.R_probe;
    j["theta_probe"] = r.theta_probe;
    j["u1"] = cplx(r.u1);
    j["u2"] = cplx(r.u2);
    j["du_abs"] = r.du_abs;
    j["dU_abs"] = r.dU_abs;
    j["solver_floor"] = r.solver_floor;
    j["bound_C"] = r.bound_C;
    j["largest_neglected"] = r.largest_neglected;
    j["separation"] = r.separation;
    j["pass_agreement"] = r.pass_agreement;
    j["pass_separation"] = r.pass_separation;
    return j;
}

Json sweep_json(const SweepReport& r) {
    Json j;
    j["cut_angle"] = r.cut_angle;
    j["R"] = r.R;
    j["n_segments"] = r.n_segments;
    j["margin"] = r.margin;
    j["thetas"] = r.thetas;
    j["rel_dev"] = r.rel_dev;
    j["worst_dev"] = r.worst_dev;
    j["pole_free"] = r.pole_free;
    return j;
}

Json polefield_json(const PoleFieldReport& r) {
    Json j;
    j["detuning"] = cplx(r.detuning);
    j["ray_thetas"] = r.ray_thetas;
    j["completed_rays"] = r.completed_rays;
    j["any_pole"] = r.any_pole;
    Json poles = Json::array();
    for (const auto& q : r.poles)
        poles.push_back({{"ray_theta", q.ray_theta},
                         {"x_pole", cplx(q.ev.x_pole)},
                         {"component", std::string(1, q.ev.blowing)},
                         {"fit_quality", q.ev.fit_quality}});
    j["poles"] = poles;
    return j;
}

Json wasow_json(const std::vector<WasowBranchReport>& reps) {
    Json arr = Json::array();
    for (const auto& r : reps) {
        Json j;
        j["branch"] = r.branch;
        j["excluded_trivial"] = r.excluded_trivial;
        j["eig_nonzero"] = r.eig_nonzero;
        j["eig_abs_err"] = r.eig_abs_err;
        j["residual_order"] =
            r.residual_order == ResidualReport::kInfinite ? Json("inf") : Json(r.residual_order);
        j["residual_ok"] = r.residual_ok;
        j["pass"] = r.pass;
        if (!r.note.empty()) j["note"] = r.note;
        arr.push_back(j);
    }
    return arr;
}

Json growth_json(const GrowthReport& g) {
    Json j;
    j["all_zero"] = g.all_zero;
    j["terminating"] = g.terminating;
    j["supergeometric"] = g.supergeometric;
    Json rows = Json::array();
    for (const auto& r : g.rows)
        rows.push_back({{"n", r.n},
                        {"abs_a", r.abs_a},
                        {"abs_A", r.abs_A},
                        {"root_a", r.root_a},
                        {"ratio_a", std::isfinite(r.ratio_a) ? Json(r.ratio_a) : Json()}});
    j["rows"] = rows;
    return j;
}

Json residual_json(const ResidualReport& r) {
    Json j;
    j["order"] = r.infinite() ? Json("inf") : Json(r.order);
    j["terminates"] = r.terminates;
    j["checked_orders"] = r.checked_orders;
    return j;
}

}  // namespace painleve
