// Exercises the shared-library surface exactly as an external consumer would:
// only tehomog.h, opaque handles and status codes.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstring>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "tehomog.h"

namespace {

nlohmann::json parse_and_free(char* s) {
    REQUIRE(s != nullptr);
    nlohmann::json j = nlohmann::json::parse(s);
    te_string_free(s);
    return j;
}

}  // namespace

TEST_CASE("profile lifecycle and queries") {
    te_profile* p = nullptr;
    const double breaks[] = {0.0, 0.5};
    const double vals[] = {2.0, 4.0};
    REQUIRE(te_profile_piecewise(breaks, vals, 2, &p) == TE_OK);
    double out = 0.0;
    CHECK(te_profile_cell_average(p, &out) == TE_OK);
    CHECK(out == doctest::Approx(3.0));
    CHECK(te_profile_homogenized_coefficient(p, &out) == TE_OK);
    CHECK(out == doctest::Approx(0.5));
    CHECK(te_profile_c_min(p, &out) == TE_OK);
    CHECK(out == doctest::Approx(1.0));
    CHECK(te_profile_value(p, 0.75, &out) == TE_OK);
    CHECK(out == doctest::Approx(4.0));
    te_profile_free(p);
    te_profile_free(nullptr);  // must be harmless
}

TEST_CASE("argument and construction failures set codes and messages") {
    te_profile* p = nullptr;
    CHECK(te_profile_piecewise(nullptr, nullptr, 2, &p) == TE_ERR_ARGUMENT);
    CHECK(std::strlen(te_last_error_message()) > 0);

    const double breaks[] = {0.0, 0.5};
    const double bad_vals[] = {1.0, 0.5};  // n <= 1 somewhere
    CHECK(te_profile_piecewise(breaks, bad_vals, 2, &p) == TE_ERR_ARGUMENT);

    CHECK(te_profile_named("no_such_profile", &p) == TE_ERR_CONFIG);

    double out;
    CHECK(te_determinant_homog(3.0, 1e-6, &out) == TE_ERR_ARGUMENT);  // tau below tau_min
}

TEST_CASE("homogenized eigenvalues golden value over the C surface") {
    char* json = nullptr;
    REQUIRE(te_homog_eigenvalues(3.0, 55.0, 70.0, 1e-3, 1e-12, &json) == TE_OK);
    const nlohmann::json j = parse_and_free(json);
    REQUIRE(j["eigenvalues"].size() == 1);
    CHECK(std::abs(j["eigenvalues"][0]["tau"].get<double>() - 61.868402866667) < 1e-9);
    CHECK(j["eigenvalues"][0]["simple"].get<bool>());
}

TEST_CASE("determinants over the C surface") {
    te_profile* c3 = nullptr;
    REQUIRE(te_profile_named("constant3", &c3) == TE_OK);
    double de = 0.0, dh = 0.0;
    CHECK(te_determinant_eps(c3, 1.0 / 7.0, 25.0, 16, &de) == TE_OK);
    CHECK(te_determinant_homog(3.0, 25.0, &dh) == TE_OK);
    CHECK(de == doctest::Approx(dh).epsilon(1e-12));
    te_profile_free(c3);
}

TEST_CASE("correction report over the C surface") {
    te_profile* p = nullptr;
    REQUIRE(te_profile_named("piecewise24", &p) == TE_OK);
    char* json = nullptr;
    REQUIRE(te_correction(p, 0.5, "theta_star", 0.0, 2001, 30.0, 80.0, &json) == TE_OK);
    const nlohmann::json j = parse_and_free(json);
    CHECK(std::abs(j["tau0"].get<double>() - 61.868402866667) < 1e-9);
    CHECK(std::abs(j["tau1"].get<double>() - 30.9342) < 5e-3);
    CHECK(j["denominator_guard"].get<bool>());
    CHECK(j["mode"] == "theta_star");

    CHECK(te_correction(p, 0.5, "bogus", 0.0, 2001, 30.0, 80.0, &json) == TE_ERR_ARGUMENT);
    te_profile_free(p);
}

TEST_CASE("corrector report with eps over the C surface") {
    te_profile* p = nullptr;
    REQUIRE(te_profile_named("piecewise24", &p) == TE_OK);
    char* json = nullptr;
    REQUIRE(te_corrector_report(p, 0.5, 1.0 / 16.5, 2001, 30.0, 80.0, &json) == TE_OK);
    const nlohmann::json j = parse_and_free(json);
    CHECK(j.contains("theta_star_l2"));
    CHECK(j.contains("theta_eps_l2"));
    CHECK(j["theta_distance_l2"].get<double>() < j["theta_eps_l2"].get<double>());
    te_profile_free(p);
}

TEST_CASE("cell report over the C surface") {
    te_profile* p = nullptr;
    REQUIRE(te_profile_named("piecewise24", &p) == TE_OK);
    char* json = nullptr;
    REQUIRE(te_cell_report(p, 513, 0, &json) == TE_OK);
    const nlohmann::json j = parse_and_free(json);
    CHECK(std::abs(j["beta"]["derivative_at_0"].get<double>() - 0.25) < 1e-12);
    CHECK(std::abs(j["beta"]["mean"].get<double>()) < 1e-10);
    CHECK_FALSE(j["beta"].contains("values"));
    te_profile_free(p);
}

TEST_CASE("experiment run over the C surface") {
    char* json = nullptr;
    const std::string cfg = "base_m = 801\noutput_dir = \"/tmp/tehomog_capi_e7\"\n";
    REQUIRE(te_experiment_run(cfg.c_str(), "E7", nullptr, &json) == TE_OK);
    const nlohmann::json j = parse_and_free(json);
    CHECK(j["pass"].get<bool>());
    CHECK(j["slope"].get<double>() >= 1.8);

    CHECK(te_experiment_run("tau = [abc\n", "E7", nullptr, &json) == TE_ERR_CONFIG);
    CHECK(te_experiment_run(cfg.c_str(), "E99", nullptr, &json) == TE_ERR_CONFIG);
}

TEST_CASE("profile from config text over the C surface") {
    te_profile* p = nullptr;
    const char* cfg =
        "profile.kind = \"trigonometric\"\nprofile.mean = 3.0\nprofile.cos = [1.0]\n";
    REQUIRE(te_profile_from_config(cfg, &p) == TE_OK);
    double out;
    CHECK(te_profile_cell_average(p, &out) == TE_OK);
    CHECK(out == doctest::Approx(3.0));
    te_profile_free(p);
}
