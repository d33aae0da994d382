#pragma once

#include <span>
#include <string>
#include <vector>

#include "config.hpp"

namespace dragfree
{

/// CSV noise budget over the config grid. Columns: omega_rad_s, src_fp,
/// src_fs, src_ft, src_vse, src_fc, total; --target both prefixes the
/// per-source and total columns with pm_ / cage_.
std::string spectrum_csv(const RunConfig& config);

/// Analytic and numeric optimal rho at each grid point.
std::string optimize_report(const RunConfig& config);

/// Thresholds of the consistency suite. Tests may corrupt one to exercise the
/// failure path.
struct VerifyThresholds
{
    double closed_form = 1e-12;
    double gain_slope_tolerance = 0.1;
    double gain_defect = 1e-4;  // at |G| = 1e6
    double zero_temperature = 1e-12;
    double conjugate_product = 1e-12;
    double drag_free_rejection = 1e-4;
    double rho_optimum = 1e-6;

    /// Sets a threshold by its check name; false if the name is unknown.
    bool set(std::string_view name, double value);
};

struct CheckResult
{
    std::string name;
    bool passed = false;
    double measured = 0.0;
    double threshold = 0.0;
    std::string detail;
};

struct VerifyOutcome
{
    std::vector<CheckResult> checks;
    bool numerical_failure = false;

    bool all_passed() const;
    std::string report() const;
};

VerifyOutcome run_verify(const RunConfig& config, const VerifyThresholds& thresholds = {});

/// Worst convergence defect over grid and converging sources for each |G|.
/// Throws Usage for an empty list.
std::string sweep_gain_csv(const RunConfig& config, std::span<const double> gains);

struct GainDefect
{
    double gain = 0.0;
    double defect = 0.0;
    double omega = 0.0;
    Source source = Source::ProofMassForce;
};

GainDefect worst_defect(const SystemParams& params, std::span<const double> grid, double gain);

/// Least-squares slope of log10(defect) against log10(|G|).
double log_log_slope(std::span<const GainDefect> sweep);

/// Prints a double with 17 significant digits.
std::string format_number(double v);

}  // namespace dragfree
