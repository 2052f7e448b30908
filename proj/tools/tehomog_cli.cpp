// Command-line harness for the transmission-eigenvalue homogenization
// library. Talks to the shared library exclusively through the C API.
//
// Exit codes: 0 success, 1 threshold failure, 2 configuration error,
// 3 solver error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tehomog.h"

namespace {

int exit_code_for(te_status st) {
    switch (st) {
        case TE_OK: return 0;
        case TE_ERR_THRESHOLD: return 1;
        case TE_ERR_ARGUMENT:
        case TE_ERR_CONFIG: return 2;
        default: return 3;
    }
}

int report(te_status st) {
    if (st != TE_OK) std::cerr << "error: " << te_last_error_message() << "\n";
    return exit_code_for(st);
}

int print_and_free(te_status st, char* json) {
    if (st == TE_OK || st == TE_ERR_THRESHOLD) {
        if (json) {
            std::cout << json << "\n";
            te_string_free(json);
        }
        if (st == TE_ERR_THRESHOLD) std::cerr << "error: " << te_last_error_message() << "\n";
        return exit_code_for(st);
    }
    return report(st);
}

struct ProfileArgs {
    std::string name = "piecewise24";
    std::string config_path;

    te_profile* make() const {
        te_profile* p = nullptr;
        te_status st;
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) {
                std::cerr << "error: cannot read config file '" << config_path << "'\n";
                return nullptr;
            }
            std::stringstream ss;
            ss << in.rdbuf();
            st = te_profile_from_config(ss.str().c_str(), &p);
        } else {
            st = te_profile_named(name.c_str(), &p);
        }
        if (st != TE_OK) {
            std::cerr << "error: " << te_last_error_message() << "\n";
            return nullptr;
        }
        return p;
    }
};

std::string read_file_or_empty(const std::string& path, bool& ok) {
    ok = true;
    if (path.empty()) return "";
    std::ifstream in(path);
    if (!in) {
        ok = false;
        return "";
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"transmission eigenvalues of 1D periodic media: homogenized limits, "
                 "boundary correctors and first-order corrections"};
    app.require_subcommand(1);

    // cell
    auto* cell = app.add_subcommand("cell", "solve the periodic cell hierarchy");
    ProfileArgs cell_profile;
    int cell_m = 2049;
    bool cell_samples = false;
    cell->add_option("--profile", cell_profile.name, "named profile (piecewise24, constant2, trig3, ...)");
    cell->add_option("--config", cell_profile.config_path, "config file with a profile block");
    cell->add_option("--m", cell_m, "torus grid points");
    cell->add_flag("--emit-samples", cell_samples, "include grid samples in the JSON");

    // homog-eig
    auto* homog = app.add_subcommand("homog-eig", "homogenized transmission eigenvalues");
    double he_nbar = 3.0;
    std::vector<double> he_window{1.0, 200.0};
    double he_step = 1e-3, he_tol = 1e-12;
    homog->add_option("--nbar", he_nbar, "constant refractive index (> 1)");
    homog->add_option("--window", he_window, "tau window lo hi")->expected(2);
    homog->add_option("--scan-step", he_step, "sign-scan step in tau");
    homog->add_option("--tol", he_tol, "root tolerance");

    // direct-eig
    auto* direct = app.add_subcommand("direct-eig", "transmission eigenvalues of the eps-periodic medium");
    ProfileArgs de_profile;
    double de_eps = 0.125;
    std::vector<double> de_window{1.0, 200.0};
    int de_spc = 32;
    double de_step = 1e-3, de_tol = 1e-12;
    direct->add_option("--profile", de_profile.name, "named profile");
    direct->add_option("--config", de_profile.config_path, "config file with a profile block");
    direct->add_option("--eps", de_eps, "period")->required();
    direct->add_option("--window", de_window, "tau window lo hi")->expected(2);
    direct->add_option("--steps-per-cell", de_spc, "integration substeps per period");
    direct->add_option("--scan-step", de_step, "sign-scan step in tau");
    direct->add_option("--tol", de_tol, "root tolerance");

    // corrector
    auto* corrector = app.add_subcommand("corrector", "boundary correctors theta_eps and theta*");
    ProfileArgs co_profile;
    double co_delta = 0.5, co_eps = 0.0;
    int co_m = 2001;
    std::vector<double> co_window{1.0, 200.0};
    corrector->add_option("--profile", co_profile.name, "named profile");
    corrector->add_option("--config", co_profile.config_path, "config file with a profile block");
    corrector->add_option("--delta", co_delta, "cutoff delta in [0,1)");
    corrector->add_option("--eps", co_eps, "also solve theta_eps at this period");
    corrector->add_option("--m", co_m, "grid points for the constant-coefficient solve");
    corrector->add_option("--window", co_window, "tau window lo hi")->expected(2);

    // correction
    auto* correction = app.add_subcommand("correction", "first-order eigenvalue correction");
    ProfileArgs cr_profile;
    double cr_delta = 0.5, cr_eps = 0.0;
    std::string cr_mode = "theta_star";
    int cr_m = 2001;
    std::vector<double> cr_window{1.0, 200.0};
    correction->add_option("--profile", cr_profile.name, "named profile");
    correction->add_option("--config", cr_profile.config_path, "config file with a profile block");
    correction->add_option("--delta", cr_delta, "cutoff delta in [0,1)");
    correction->add_option("--mode", cr_mode, "theta_star or theta_eps");
    correction->add_option("--eps", cr_eps, "period for theta_eps mode");
    correction->add_option("--m", cr_m, "grid points");
    correction->add_option("--window", cr_window, "tau window lo hi")->expected(2);

    // experiment
    auto* experiment = app.add_subcommand("experiment", "run one verification experiment (E1..E8)");
    std::string ex_id, ex_config, ex_out;
    experiment->add_option("id", ex_id, "experiment id E1..E8")->required();
    experiment->add_option("--config", ex_config, "config file");
    experiment->add_option("--out", ex_out, "output directory");

    // suite
    auto* suite = app.add_subcommand("suite", "run all experiments from one config");
    std::string su_config, su_out;
    suite->add_option("--config", su_config, "config file");
    suite->add_option("--out", su_out, "output directory");

    CLI11_PARSE(app, argc, argv);

    if (cell->parsed()) {
        te_profile* p = cell_profile.make();
        if (!p) return 2;
        char* json = nullptr;
        const te_status st = te_cell_report(p, cell_m, cell_samples ? 1 : 0, &json);
        te_profile_free(p);
        return print_and_free(st, json);
    }
    if (homog->parsed()) {
        char* json = nullptr;
        const te_status st =
            te_homog_eigenvalues(he_nbar, he_window[0], he_window[1], he_step, he_tol, &json);
        return print_and_free(st, json);
    }
    if (direct->parsed()) {
        te_profile* p = de_profile.make();
        if (!p) return 2;
        char* json = nullptr;
        const te_status st = te_direct_eigenvalues(p, de_eps, de_window[0], de_window[1], de_spc,
                                                   de_step, de_tol, &json);
        te_profile_free(p);
        return print_and_free(st, json);
    }
    if (corrector->parsed()) {
        te_profile* p = co_profile.make();
        if (!p) return 2;
        char* json = nullptr;
        const te_status st = te_corrector_report(p, co_delta, co_eps, co_m, co_window[0],
                                                 co_window[1], &json);
        te_profile_free(p);
        return print_and_free(st, json);
    }
    if (correction->parsed()) {
        te_profile* p = cr_profile.make();
        if (!p) return 2;
        char* json = nullptr;
        const te_status st = te_correction(p, cr_delta, cr_mode.c_str(), cr_eps, cr_m,
                                           cr_window[0], cr_window[1], &json);
        te_profile_free(p);
        return print_and_free(st, json);
    }
    if (experiment->parsed()) {
        bool ok = true;
        const std::string text = read_file_or_empty(ex_config, ok);
        if (!ok) {
            std::cerr << "error: cannot read config file '" << ex_config << "'\n";
            return 2;
        }
        char* json = nullptr;
        const te_status st = te_experiment_run(text.c_str(), ex_id.c_str(),
                                               ex_out.empty() ? nullptr : ex_out.c_str(), &json);
        return print_and_free(st, json);
    }
    if (suite->parsed()) {
        bool ok = true;
        const std::string text = read_file_or_empty(su_config, ok);
        if (!ok) {
            std::cerr << "error: cannot read config file '" << su_config << "'\n";
            return 2;
        }
        char* json = nullptr;
        const te_status st =
            te_suite_run(text.c_str(), su_out.empty() ? nullptr : su_out.c_str(), &json);
        return print_and_free(st, json);
    }
    return 2;
}
