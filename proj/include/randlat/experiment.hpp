#pragma once

// Experiment runner behind the randlat CLI: verification suite, sharpness
// sweeps, spectrum bound runs, sample dumps and point counts. Every command
// writes rows in the versioned CSV schema below.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "randlat/estimators.hpp"

namespace randlat {

inline constexpr const char* kCsvVersionLine = "# randlat-csv v1";
inline constexpr double kDefaultCheckBudgetSeconds = 600.0;

struct ExperimentConfig {
    int d = 2;
    Setting setting = Setting::affine;
    /// Unset means default_sampler(d).
    std::optional<SamplerMethod> method;
    std::int64_t hecke_prime = kDefaultHeckePrime;
    /// Negative-control hook: drop the rejection step of exact2/siegel.
    bool skip_rejection = false;
    std::int64_t trials = 100000;
    std::uint64_t seed = 42;
    std::string out;
    std::string plot;

    // sweep
    std::string family = "ball";
    std::vector<double> volumes;
    std::vector<double> shape_params;

    // spectra
    std::optional<nlohmann::json> radial;

    // sample
    std::int64_t count = 1;
    std::int64_t torsion = 0;  ///< 0 = uniform offsets; q >= 2 = primitive q-torsion

    // count
    std::optional<nlohmann::json> region;
    std::string basis_path;
    std::vector<double> offset;
    bool list_points = false;

    unsigned workers = 0;
    double check_budget_seconds = kDefaultCheckBudgetSeconds;
};

/// Keys mirror the CLI flag names (d, setting, sampler, hecke_prime, trials,
/// seed, out, plot, family, volumes, shape_params, radial, count, torsion,
/// region, basis, offset, list_points, skip_rejection, workers,
/// check_budget_seconds). Unknown keys are rejected. Throws ConfigError.
ExperimentConfig config_from_json(const nlohmann::json& j);

/// Sampler for dimension d (defaults to config.d): the configured method at
/// config.d, otherwise default_sampler(d); the skip hook is kept. Validated.
SamplerSpec sampler_spec(const ExperimentConfig& config, int d = 0);

struct CsvRow {
    std::string experiment_id;
    int d = 0;
    std::string setting;
    std::string sampler;
    std::string region_json;
    double volume = 0.0;
    std::int64_t n_trials = 0;
    std::string statistic;
    double estimate = 0.0;
    double std_error = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    double theory_value_or_bound = 0.0;
    bool satisfied = false;
    std::uint64_t seed = 0;
    std::int64_t wall_time_ms = 0;
};

std::string csv_header();
/// %.17g numbers; fields containing commas or quotes are quoted.
std::string to_csv_line(const CsvRow& row);
void write_csv(std::ostream& os, const std::vector<CsvRow>& rows);

/// 0 iff every row is satisfied.
int exit_code(const std::vector<CsvRow>& rows);

/// Full acceptance suite at the configured dimension and sampler.
std::vector<CsvRow> run_verify(const ExperimentConfig& config);

struct SweepRow {
    std::string family;
    double shape_param = 0.0;
    double volume = 0.0;
    double p_hat = 0.0;
    double se = 0.0;
    /// (1 + volume) p_hat for affine, volume p_hat for regular.
    double normalized = 0.0;
};

struct SweepResult {
    std::vector<SweepRow> sweep;
    std::vector<CsvRow> rows;
};

/// Hole probabilities over the volume grid for each shape parameter.
/// Throws ConfigError on an empty or non-ascending grid.
SweepResult run_sweep(const ExperimentConfig& config);

/// Polyline plot of normalized against volume with a reference line at the
/// bound on the normalized scale (1 affine, C_d regular).
std::string sweep_svg(const std::vector<SweepRow>& rows, Setting setting, int d);

CsvRow run_spectra(const ExperimentConfig& config);

/// One JSON object per draw: basis rows, offset (affine only), shortest
/// vector norm and the stream it came from.
std::vector<nlohmann::json> sample_dump(const ExperimentConfig& config);

/// JSON array of rows or whitespace-separated text, d rows of d numbers.
Matrix read_basis(const std::string& path);

/// {"count": n, "points": [...]} for the configured basis, offset and region.
nlohmann::json run_count(const ExperimentConfig& config);

}  // namespace randlat
