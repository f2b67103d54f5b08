/*
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "qps/experiments.hpp"

using namespace qps;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::filesystem::path temp_dir(const std::string& tag) {
    auto p = std::filesystem::temp_directory_path() / ("qps_test_" + tag);
    std::filesystem::remove_all(p);
    return p;
}

}  // namespace

TEST_CASE("presets and key assignment") {
    ExperimentConfig cfg;
    cfg.apply_preset("paper");
    CHECK(cfg.n_total == 14);
    CHECK(cfg.n_mixed == 7);
    CHECK(cfg.n_measured == 8);
    cfg.apply_preset("desk");
    CHECK(cfg.n_total == 10);
    CHECK_THROWS_AS(cfg.apply_preset("pocket"), DomainError);

    cfg.set("p_star_grid", "0.1, 0.2,0.5");
    REQUIRE(cfg.p_star_grid.size() == 3);
    CHECK(cfg.p_star_grid[1] == doctest::Approx(0.2));
    cfg.set("seed", "17");
    CHECK(cfg.seed == 17);
    CHECK_THROWS_AS(cfg.set("volume", "11"), DomainError);
    CHECK_THROWS_AS(cfg.set("p_m", "loud"), DomainError);
}

TEST_CASE("config file parsing") {
    auto path = std::filesystem::temp_directory_path() / "qps_test_cfg.txt";
    {
        std::ofstream out(path);
        out << "# comment line\n";
        out << "n_total = 8   # trailing comment\n";
        out << "source = iid_normal\n";
        out << "\n";
        out << "normal_mean = 0.07\n";
    }
    ExperimentConfig cfg = load_config(path.string());
    CHECK(cfg.n_total == 8);
    CHECK(cfg.source == "iid_normal");
    CHECK(cfg.normal_mean == doctest::Approx(0.07));
    CHECK(cfg.n_mixed == 5);  // untouched default
    CHECK_THROWS_AS(load_config("/nonexistent/qps.cfg"), DomainError);
}

TEST_CASE("default grid spans four decades") {
    std::vector<double> g = default_p_star_grid();
    CHECK(g.size() == 33);
    CHECK(g.front() == doctest::Approx(1e-4));
    CHECK(g.back() == 1.0);
    for (size_t i = 1; i < g.size(); ++i) CHECK(g[i] > g[i - 1]);
}

TEST_CASE("spectrum sources") {
    ExperimentConfig cfg;
    cfg.source = "explicit";
    cfg.explicit_values = {0.1, 0.4};
    Rng rng = split_rng(1, 0);
    BranchSpectrum s = sampled_spectrum(cfg, 2, rng);
    CHECK(s.p_m == doctest::Approx(0.25));

    cfg.source = "iid_normal";
    cfg.normal_count = 512;
    BranchSpectrum iid = sampled_spectrum(cfg, 2, rng);
    CHECK(iid.d_r == 512);
    for (double p : iid.p_am) {
        CHECK(p > 1e-6);
        CHECK(p < 1.0);
    }
    CHECK(iid.p_m == doctest::Approx(0.05).epsilon(0.1));

    cfg.source = "haar_isometry";
    cfg.n_total = 8;
    cfg.n_mixed = 4;
    BranchSpectrum haar = sampled_spectrum(cfg, 4, rng);
    CHECK(haar.d_r == 16);
    // branch probabilities sum to d_R p_m <= d_R
    CHECK(haar.p_m > 0.0);
    CHECK(haar.p_m < 1.0);

    cfg.source = "galaxy";
    CHECK_THROWS_AS(sampled_spectrum(cfg, 4, rng), DomainError);
}

TEST_CASE("fpaa instance has the exact prescribed overlap") {
    Rng rng = split_rng(2, 0);
    FpaaInstance inst = random_fpaa_instance(4, 0.37, rng);
    SVDResult s = svd(inst.encoding.encoded_matrix());
    CHECK(s.singular_values(0) * s.singular_values(0) == doctest::Approx(0.37).epsilon(1e-12));
    CHECK(inst.goal.amplitudes().norm() == doctest::Approx(1.0));
    CHECK_THROWS_AS(random_fpaa_instance(4, 1.5, rng), DomainError);
}

TEST_CASE("assertion csv format") {
    CHECK(assertions_csv_header() == "assertion,relation,measured,pass");
    AssertionRecord r{"demo", "x<=y", 0.125, false};
    CHECK(assertions_csv_row(r) == "demo,x<=y,0.125,fail");
}

TEST_CASE("figure commands run and are deterministic") {
    ExperimentConfig cfg;
    cfg.n_total = 8;
    cfg.n_mixed = 4;
    cfg.n_measured = 4;
    cfg.normal_count = 256;
    cfg.seed = 3;

    auto d1 = temp_dir("fig_a"), d2 = temp_dir("fig_b");
    cfg.out = d1.string();
    CHECK(run_experiment("fig4", cfg) == 0);
    CHECK(run_experiment("fig6", cfg) == 0);
    cfg.out = d2.string();
    CHECK(run_experiment("fig4", cfg) == 0);
    CHECK(run_experiment("fig6", cfg) == 0);

    for (const char* f : {"fig4_haar.csv", "fig4_iid.csv", "fig4_haar_hist.csv",
                          "fig6_haar.csv", "fig6_iid.csv", "fig4_assertions.csv"}) {
        CAPTURE(f);
        std::string a = slurp(d1 / f), b = slurp(d2 / f);
        CHECK(!a.empty());
        CHECK(a == b);
    }
    CHECK(std::filesystem::exists(d1 / "fig4_haar.svg"));
    CHECK(std::filesystem::exists(d1 / "fig6_iid.svg"));
}

TEST_CASE("utility commands run clean") {
    ExperimentConfig cfg;
    cfg.instances = 5;
    cfg.budget = 200;
    auto d = temp_dir("util");
    cfg.out = d.string();
    CHECK(run_experiment("gadget-check", cfg) == 0);
    CHECK(run_experiment("bounds", cfg) == 0);
    CHECK(run_experiment("protocol", cfg) == 0);
    CHECK_THROWS_AS(run_experiment("fig9", cfg), DomainError);
    CHECK(std::filesystem::exists(d / "bounds.csv"));
}
