/*
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#ifndef QPS_EXPERIMENTS_HPP
#define QPS_EXPERIMENTS_HPP

#include <string>
#include <vector>

#include "qps/bounds.hpp"

namespace qps {

/// Flat key=value configuration shared by all CLI experiments. Every field
/// maps to a config-file key and a CLI flag of the same name.
struct ExperimentConfig {
    Index n_total = 10;
    Index n_mixed = 5;
    Index n_measured = 6;
    std::string source = "haar_isometry";  // haar_isometry | iid_normal | explicit
    double normal_mean = 0.05;
    double normal_std = 0.015;
    Index normal_count = 2048;
    std::vector<double> explicit_values;
    std::vector<double> p_star_grid;  // empty selects the default log grid
    double p_m = 0.3;
    double p_star = 0.25;
    double delta = 0.01;
    Index budget = 400;
    Index instances = 20;
    std::uint64_t seed = 0;
    std::string out = ".";

    /// "desk" (10/5/6 qubits) or "paper" (14/7/8).
    void apply_preset(const std::string& name);
    /// Assign one key from its textual value; throws DomainError on unknown
    /// keys or unparsable values. List-valued keys take comma-separated text.
    void set(const std::string& key, const std::string& value);
};

/// Parse a flat key = value file with # comments on top of `base`.
ExperimentConfig load_config(const std::string& path, ExperimentConfig base = {});

/// Default p* grid: 33 log-spaced points on [1e-4, 1].
std::vector<double> default_p_star_grid();

struct AssertionRecord {
    std::string name;
    std::string relation;
    double measured;
    bool pass;
};

std::string assertions_csv_header();
std::string assertions_csv_row(const AssertionRecord& r);

/// Branch spectrum from the configured source. The Haar source draws an
/// isometry on n_total qubits with d_R = 2^n_mixed columns and projects onto
/// a uniformly chosen outcome of the leading n_measured qubits.
BranchSpectrum sampled_spectrum(const ExperimentConfig& cfg, Index n_measured, Rng& rng);

/// A pure-state amplification instance with exact overlap <goal|U|init> =
/// sqrt(p_m); target projector is outcome 0 of the leading qubit.
struct FpaaInstance {
    BlockEncoding encoding;
    StateVector goal;
    double p_m;
};

FpaaInstance random_fpaa_instance(Index n_qubits, double p_m, Rng& rng);

struct PlotSeries {
    std::string label;
    std::string color;
    std::vector<double> x, y;
};

/// Minimal static SVG line plot; log-scaled x when requested.
void write_svg_plot(const std::string& path, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::vector<PlotSeries>& series, bool log_x);

int cmd_fig4(const ExperimentConfig& cfg);
int cmd_fig6(const ExperimentConfig& cfg);
int cmd_fpaa(const ExperimentConfig& cfg);
int cmd_gadget_check(const ExperimentConfig& cfg);
int cmd_bounds(const ExperimentConfig& cfg);
int cmd_protocol(const ExperimentConfig& cfg);

/// Dispatch by subcommand name; returns the process exit code (0 iff every
/// assertion passed). Unknown names throw DomainError.
int run_experiment(const std::string& name, const ExperimentConfig& cfg);

}  // namespace qps

#endif
