#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "tehomog/harness.hpp"

using namespace tehomog;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("config parsing") {
    const std::string text = R"(
# comment
tau = 12.5
eps_list = [0.125, 0.0625]
output_dir = "runs"

[profile]
kind = "piecewise"
breakpoints = [0.0, 0.5]
values = [2.0, 4.0]
)";
    const Config cfg = Config::parse(text);
    CHECK(cfg.number("tau") == 12.5);
    CHECK(cfg.list("eps_list") == std::vector<double>{0.125, 0.0625});
    CHECK(cfg.string_or("output_dir", "?") == "runs");
    CHECK(cfg.string_or("profile.kind", "?") == "piecewise");
    CHECK(cfg.number_or("missing", -1.0) == -1.0);

    CHECK_THROWS_AS(Config::parse("novalue\n"), ConfigError);
    CHECK_THROWS_AS(Config::parse("x = \n"), ConfigError);
    Config bad = Config::parse("x = abc\n");
    CHECK_THROWS_AS(bad.number("x"), ConfigError);
}

TEST_CASE("profile from config") {
    Config pc = Config::parse("profile.kind = \"piecewise\"\nprofile.breakpoints = [0.0, 0.5]\n"
                              "profile.values = [2.0, 4.0]\n");
    CHECK(profile_from_config(pc).cell_average() == doctest::Approx(3.0));

    Config tg = Config::parse("profile.kind = \"trigonometric\"\nprofile.mean = 3.0\n"
                              "profile.cos = [1.0]\n");
    CHECK(profile_from_config(tg).kind() == ProfileKind::Trigonometric);

    Config named = Config::parse("profile.name = \"constant2\"\n");
    CHECK(profile_from_config(named).cell_average() == doctest::Approx(2.0));

    Config unknown = Config::parse("profile.kind = \"weird\"\n");
    CHECK_THROWS_AS(profile_from_config(unknown), ConfigError);

    Config invalid = Config::parse("profile.kind = \"piecewise\"\n"
                                   "profile.breakpoints = [0.0, 0.5]\nprofile.values = [1.0, 0.5]\n");
    CHECK_THROWS_AS(profile_from_config(invalid), ConfigError);
}

TEST_CASE("experiment config validation") {
    Config bad_eps = Config::parse("eps_list = [2.0]\n");
    CHECK_THROWS_AS(ExperimentConfig::from_config(bad_eps, "E1"), ConfigError);

    Config bad_n = Config::parse("n_list = [8, 8]\n");
    CHECK_THROWS_AS(ExperimentConfig::from_config(bad_n, "E5"), ConfigError);

    Config ok = Config::parse("delta = 0.25\nn_list = [4, 8]\n");
    const ExperimentConfig ec = ExperimentConfig::from_config(ok, "E5");
    CHECK(ec.delta == 0.25);
    CHECK(ec.n_list == std::vector<long>{4, 8});
}

TEST_CASE("grid_for_eps resolves the microstructure with an even interval count") {
    for (double eps : {0.125, 1.0 / 8.5, 1.0 / 13.0}) {
        const Grid g = grid_for_eps(eps, 32);
        CHECK((g.m() - 1) % 2 == 0);
        CHECK(eps / g.h() >= 16.0);
        CHECK(eps / g.h() >= 31.0);  // requested points per period, up to rounding
    }
}

TEST_CASE("run_experiment writes the documented artifacts and is deterministic") {
    const fs::path dir = fs::temp_directory_path() / "tehomog_test_e7";
    fs::remove_all(dir);
    Config cfg = Config::parse("base_m = 801\n");
    ExperimentConfig ec = ExperimentConfig::from_config(cfg, "E7");
    ec.output_dir = dir.string();
    const ExperimentResult first = run_experiment(ec);
    CHECK(first.passed);
    CHECK(fs::exists(dir / "E7" / "samples.csv"));
    CHECK(fs::exists(dir / "E7" / "rates.json"));
    CHECK(fs::exists(dir / "E7" / "plot.gp"));

    const std::string csv = slurp(dir / "E7" / "samples.csv");
    CHECK(csv.rfind("eps,err", 0) == 0);  // exact header
    const std::string rates1 = slurp(dir / "E7" / "rates.json");

    const ExperimentResult second = run_experiment(ec);
    const std::string rates2 = slurp(dir / "E7" / "rates.json");
    CHECK(rates1 == rates2);  // bit-identical rerun
    CHECK(first.report.dump() == second.report.dump());
    fs::remove_all(dir);
}

TEST_CASE("E5 on a constant profile passes with the null-case flag") {
    const fs::path dir = fs::temp_directory_path() / "tehomog_test_null";
    fs::remove_all(dir);
    Config cfg = Config::parse("profile.name = \"constant2\"\n"
                               "tau_window = [150.0, 250.0]\nn_list = [7, 13]\n");
    ExperimentConfig ec = ExperimentConfig::from_config(cfg, "E5");
    ec.output_dir = dir.string();
    // two-point sweeps cannot be rate-fitted, but the null case short-circuits
    const ExperimentResult res = run_experiment(ec);
    CHECK(res.passed);
    CHECK(res.null_case);
    fs::remove_all(dir);
}

TEST_CASE("unknown experiment id") {
    Config cfg = Config::parse("tau = 1.0\n");
    CHECK_THROWS_AS(run_experiment(ExperimentConfig::from_config(cfg, "E9")), ConfigError);
}
