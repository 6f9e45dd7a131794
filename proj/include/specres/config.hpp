#pragma once

#include "specres/common.hpp"
#include "specres/models.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace specres {

/// Experiment description: flat dotted keys, parsed from `key = value` text or
/// from an equivalent JSON object.
struct ExperimentConfig {
    // model
    std::string model_kind = "lorentzian";  // lorentzian | semicircle | polynomial | random
    double lambda = 0.0;
    double diag_shift = 0.0;
    double g = 1.0, x0 = 0.0, w = 1.0;
    double center = 0.0, radius = 1.0;
    std::vector<double> coefficients;
    double support_a = -1.0, support_b = 1.0;
    bool unbounded = true;
    double truncation_L = 8.0;
    int random_size = 24;

    Interval interval{-0.5, 0.5};
    int n = 2;

    double kappa_max = 0.2;
    int kappa_count = 5;
    double kappa_ratio = 2.0;

    int grid_N = 2000;
    int grid_N_direct = 4000;

    double time_max_tau = 3.0;
    int time_count = 601;
    double plateau_halfwidth = 0.2;

    Interval mourre_delta{0.7, 1.3};
    double mourre_kappa = 0.05;
    int mourre_nu = 6;
    int mourre_grid_N = 1200;

    int check_models = 50;
    int check_samples = 50;
    int check_size = 32;

    std::uint64_t seed = 12345;
    int jobs = 1;

    std::vector<double> kappa_ladder() const;
    FriedrichsSpec friedrichs_spec() const;
    bool is_random_model() const { return model_kind == "random"; }
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// Throws ErrorKind::Config on invariant violations (empty or non-decreasing
/// ladder, n < 1, bad interval, missing model parameters).
void validate_config(const ExperimentConfig& cfg);

/// Canonical dump (sorted keys) used for hashing and reproducibility records.
std::string canonical_dump(const ExperimentConfig& cfg);

/// FNV-1a hash of the canonical dump.
std::uint64_t config_hash(const ExperimentConfig& cfg);

}  // namespace specres
