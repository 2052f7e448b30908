#include "tehomog.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "tehomog/harness.hpp"

using namespace tehomog;

struct te_profile {
    PeriodicIndex idx;
};

namespace {

thread_local std::string g_last_error;

te_status fail(te_status code, const std::string& message) {
    g_last_error = message;
    return code;
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

// Maps the library's exception taxonomy onto C error codes.
template <typename Fn>
te_status guarded(Fn&& fn) {
    try {
        fn();
        return TE_OK;
    } catch (const ConfigError& e) {
        return fail(TE_ERR_CONFIG, e.what());
    } catch (const ResolutionError& e) {
        return fail(TE_ERR_RESOLUTION, e.what());
    } catch (const NonSimpleError& e) {
        return fail(TE_ERR_NONSIMPLE, e.what());
    } catch (const DegenerateDenominatorError& e) {
        return fail(TE_ERR_DEGENERATE, e.what());
    } catch (const SingularMatrixError& e) {
        return fail(TE_ERR_SOLVER, e.what());
    } catch (const BracketError& e) {
        return fail(TE_ERR_SOLVER, e.what());
    } catch (const ConvergenceError& e) {
        return fail(TE_ERR_SOLVER, e.what());
    } catch (const ConsistencyError& e) {
        return fail(TE_ERR_SOLVER, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(TE_ERR_ARGUMENT, e.what());
    } catch (const std::exception& e) {
        return fail(TE_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(TE_ERR_INTERNAL, "unknown error");
    }
}

nlohmann::json roots_json(const std::vector<EigRoot>& roots) {
    nlohmann::json arr = nlohmann::json::array();
    for (const EigRoot& r : roots)
        arr.push_back({{"tau", r.tau}, {"simple", r.simple}, {"det_derivative", r.det_derivative}});
    return arr;
}

}  // namespace

#define TE_REQUIRE(cond, msg) \
    do {                      \
        if (!(cond)) return fail(TE_ERR_ARGUMENT, msg); \
    } while (0)

extern "C" {

const char* te_last_error_message(void) { return g_last_error.c_str(); }

void te_string_free(char* s) { std::free(s); }

te_status te_profile_piecewise(const double* breakpoints, const double* values, int count,
                               te_profile** out) {
    TE_REQUIRE(breakpoints && values && out && count > 0, "te_profile_piecewise: bad arguments");
    return guarded([&] {
        std::vector<double> b(breakpoints, breakpoints + count);
        std::vector<double> v(values, values + count);
        *out = new te_profile{PeriodicIndex::piecewise(std::move(b), std::move(v))};
    });
}

te_status te_profile_trigonometric(double mean, const double* cos_coef, int cos_count,
                                   const double* sin_coef, int sin_count, te_profile** out) {
    TE_REQUIRE(out && cos_count >= 0 && sin_count >= 0 && (cos_count == 0 || cos_coef) &&
                   (sin_count == 0 || sin_coef),
               "te_profile_trigonometric: bad arguments");
    return guarded([&] {
        std::vector<double> c(cos_coef, cos_coef + cos_count);
        std::vector<double> s(sin_coef, sin_coef + sin_count);
        *out = new te_profile{PeriodicIndex::trigonometric(mean, std::move(c), std::move(s))};
    });
}

te_status te_profile_sampled(const double* samples, int count, te_profile** out) {
    TE_REQUIRE(samples && out && count > 0, "te_profile_sampled: bad arguments");
    return guarded([&] {
        std::vector<double> s(samples, samples + count);
        *out = new te_profile{PeriodicIndex::sampled(std::move(s))};
    });
}

te_status te_profile_named(const char* name, te_profile** out) {
    TE_REQUIRE(name && out, "te_profile_named: bad arguments");
    return guarded([&] { *out = new te_profile{named_profile(name)}; });
}

te_status te_profile_from_config(const char* config_text, te_profile** out) {
    TE_REQUIRE(config_text && out, "te_profile_from_config: bad arguments");
    return guarded([&] {
        const Config cfg = Config::parse(config_text);
        *out = new te_profile{profile_from_config(cfg)};
    });
}

void te_profile_free(te_profile* p) { delete p; }

te_status te_profile_cell_average(const te_profile* p, double* out) {
    TE_REQUIRE(p && out, "te_profile_cell_average: bad arguments");
    return guarded([&] { *out = p->idx.cell_average(); });
}

te_status te_profile_c_min(const te_profile* p, double* out) {
    TE_REQUIRE(p && out, "te_profile_c_min: bad arguments");
    return guarded([&] { *out = p->idx.c_min(); });
}

te_status te_profile_homogenized_coefficient(const te_profile* p, double* out) {
    TE_REQUIRE(p && out, "te_profile_homogenized_coefficient: bad arguments");
    return guarded([&] { *out = p->idx.homogenized_coefficient(); });
}

te_status te_profile_value(const te_profile* p, double y, double* out) {
    TE_REQUIRE(p && out, "te_profile_value: bad arguments");
    return guarded([&] { *out = p->idx.value(y); });
}

te_status te_cell_report(const te_profile* p, int m, int emit_samples, char** out_json) {
    TE_REQUIRE(p && out_json && m >= 9, "te_cell_report: bad arguments");
    return guarded([&] {
        const Grid g(m);
        const CellFunctions cells(p->idx, g);
        nlohmann::json j{
            {"m", m},
            {"n_bar", p->idx.cell_average()},
            {"c_min", p->idx.c_min()},
            {"homogenized_coefficient", p->idx.homogenized_coefficient()},
        };
        const struct {
            const char* name;
            CellField field;
        } fields[] = {{"beta", CellField::Beta},
                      {"chi", CellField::Chi},
                      {"gamma", CellField::Gamma},
                      {"alpha", CellField::Alpha},
                      {"B", CellField::Bmat}};
        for (const auto& f : fields) {
            const auto& val = cells.value(f.field);
            nlohmann::json fj{
                {"mean", integrate(val, g)},
                {"l2", discrete_norms(val, g).l2},
                {"value_at_0", cells.eval(f.field, 0.0)},
                {"derivative_at_0", cells.eval_derivative(f.field, 0.0)},
                {"seam_mismatch", std::abs(val.front() - val.back())},
            };
            if (emit_samples) {
                fj["values"] = val;
                fj["derivatives"] = cells.derivative(f.field);
            }
            j[f.name] = fj;
        }
        *out_json = dup_string(j.dump(2));
    });
}

te_status te_determinant_homog(double nbar, double tau, double* out) {
    TE_REQUIRE(out != nullptr, "te_determinant_homog: bad arguments");
    return guarded([&] { *out = determinant_homog(nbar, tau); });
}

te_status te_determinant_eps(const te_profile* p, double eps, double tau, int steps_per_cell,
                             double* out) {
    TE_REQUIRE(p && out, "te_determinant_eps: bad arguments");
    return guarded([&] { *out = determinant_eps(p->idx, eps, tau, steps_per_cell); });
}

te_status te_homog_eigenvalues(double nbar, double lo, double hi, double scan_step, double tol,
                               char** out_json) {
    TE_REQUIRE(out_json != nullptr, "te_homog_eigenvalues: bad arguments");
    return guarded([&] {
        auto det = [nbar](double t) { return determinant_homog(nbar, t); };
        const auto roots = scan_eigenvalues(det, lo, hi, scan_step, tol);
        nlohmann::json j{{"nbar", nbar}, {"window", {lo, hi}}, {"eigenvalues", roots_json(roots)}};
        *out_json = dup_string(j.dump(2));
    });
}

te_status te_direct_eigenvalues(const te_profile* p, double eps, double lo, double hi,
                                int steps_per_cell, double scan_step, double tol,
                                char** out_json) {
    TE_REQUIRE(p && out_json, "te_direct_eigenvalues: bad arguments");
    return guarded([&] {
        auto det = [&](double t) { return determinant_eps(p->idx, eps, t, steps_per_cell); };
        const auto roots = scan_eigenvalues(det, lo, hi, scan_step, tol);
        nlohmann::json j{{"eps", eps}, {"window", {lo, hi}}, {"eigenvalues", roots_json(roots)}};
        *out_json = dup_string(j.dump(2));
    });
}

te_status te_corrector_report(const te_profile* p, double delta, double eps, int m,
                              double window_lo, double window_hi, char** out_json) {
    TE_REQUIRE(p && out_json && m >= 9, "te_corrector_report: bad arguments");
    return guarded([&] {
        const double nbar = p->idx.cell_average();
        const EigRoot root = first_simple_homog_eigenvalue(nbar, window_lo, window_hi, 1e-3, 1e-12);
        const Grid g = eps > 0.0 ? grid_for_eps(eps, 32) : Grid(m);
        const Eigenpair pair = extract_eigenpair_homog(nbar, root.tau, g);
        const CellFunctions cells(p->idx, Grid(2049));
        const double bp0 = cells.eval_derivative(CellField::Beta, 0.0);
        const double bpd = cells.eval_derivative(CellField::Beta, delta);
        const BvpSolution star =
            solve_theta_star(nbar, root.tau, pair.phi2_0, pair.phi2_1, bp0, bpd, g);
        nlohmann::json j{
            {"tau0", root.tau},
            {"delta", delta},
            {"beta_prime_0", bp0},
            {"beta_prime_delta", bpd},
            {"theta_star_l2", discrete_norms(star.u, g).l2},
        };
        if (eps > 0.0) {
            const SlowField slow = slow_field_from_eigenpair(pair, nbar);
            const ExpansionTerms terms =
                build_expansion(slow, cells, eps, 1.0 / (nbar - 1.0), g);
            const BvpSolution theta = solve_theta_eps(2, p->idx, eps, root.tau, terms, g);
            std::vector<double> diff(g.m());
            for (int j2 = 0; j2 < g.m(); ++j2) diff[j2] = theta.u[j2] - star.u[j2];
            j["eps"] = eps;
            j["theta_eps_l2"] = discrete_norms(theta.u, g).l2;
            j["theta_distance_l2"] = discrete_norms(diff, g).l2;
        }
        *out_json = dup_string(j.dump(2));
    });
}

te_status te_correction(const te_profile* p, double delta, const char* mode, double eps, int m,
                        double window_lo, double window_hi, char** out_json) {
    TE_REQUIRE(p && out_json && mode && m >= 9, "te_correction: bad arguments");
    const std::string mode_s(mode);
    TE_REQUIRE(mode_s == "theta_star" || mode_s == "theta_eps",
               "te_correction: mode must be theta_star or theta_eps");
    return guarded([&] {
        const double nbar = p->idx.cell_average();
        const EigRoot root = first_simple_homog_eigenvalue(nbar, window_lo, window_hi, 1e-3, 1e-12);
        const Grid g = (mode_s == "theta_eps") ? grid_for_eps(eps, 32) : Grid(m);
        const Eigenpair pair = extract_eigenpair_homog(nbar, root.tau, g);
        const CellFunctions cells(p->idx, Grid(2049));
        const CorrectionMode cm =
            mode_s == "theta_star" ? CorrectionMode::ThetaStar : CorrectionMode::ThetaEps;
        const CorrectionReport rep = correction(p->idx, pair, cells, delta, g, cm, eps);
        nlohmann::json j = correction_report_json(rep);
        j["nbar"] = nbar;
        j["m"] = g.m();
        j["profile_kind"] = p->idx.kind() == ProfileKind::Piecewise        ? "piecewise"
                            : p->idx.kind() == ProfileKind::Trigonometric ? "trigonometric"
                                                                          : "sampled";
        *out_json = dup_string(j.dump(2));
    });
}

te_status te_experiment_run(const char* config_text, const char* id, const char* output_dir,
                            char** out_json) {
    TE_REQUIRE(config_text && id && out_json, "te_experiment_run: bad arguments");
    bool passed = false;
    const te_status st = guarded([&] {
        const Config cfg = Config::parse(config_text);
        ExperimentConfig ec = ExperimentConfig::from_config(cfg, id);
        if (output_dir && *output_dir) ec.output_dir = output_dir;
        const ExperimentResult res = run_experiment(ec);
        passed = res.passed;
        *out_json = dup_string(res.report.dump(2));
    });
    if (st != TE_OK) return st;
    if (!passed) return fail(TE_ERR_THRESHOLD, std::string(id) + ": threshold not met");
    return TE_OK;
}

te_status te_suite_run(const char* config_text, const char* output_dir, char** out_json) {
    TE_REQUIRE(config_text && out_json, "te_suite_run: bad arguments");
    bool passed = false;
    const te_status st = guarded([&] {
        const Config cfg = Config::parse(config_text);
        const SuiteResult res = run_suite(cfg, output_dir ? output_dir : "");
        passed = res.passed;
        *out_json = dup_string(res.report.dump(2));
    });
    if (st != TE_OK) return st;
    if (!passed) return fail(TE_ERR_THRESHOLD, "suite: at least one experiment failed");
    return TE_OK;
}

}  // extern "C"
