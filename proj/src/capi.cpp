#include "dragfree/dragfree.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <string>

#include "commands.hpp"
#include "errors.hpp"

struct dfn_config
{
    dragfree::RunConfig run;
    dragfree::VerifyThresholds thresholds;
};

namespace
{

using namespace dragfree;

thread_local std::string g_last_error;

dfn_status status_of(ErrorKind kind)
{
    switch (kind)
    {
    case ErrorKind::Usage: return DFN_ERR_USAGE;
    case ErrorKind::Syntax:
    case ErrorKind::Validation:
    case ErrorKind::Domain:
    case ErrorKind::Range: return DFN_ERR_VALIDATION;
    case ErrorKind::Singular:
    case ErrorKind::DegenerateCoupling: return DFN_ERR_NUMERICAL;
    case ErrorKind::Io: return DFN_ERR_IO;
    }
    return DFN_ERR_INTERNAL;
}

dfn_status fail(dfn_status status, std::string message)
{
    g_last_error = std::move(message);
    return status;
}

// Runs body with every exception mapped to a status code.
template <typename F>
dfn_status guarded(F&& body)
{
    try
    {
        g_last_error.clear();
        return body();
    }
    catch (const Error& e)
    {
        return fail(status_of(e.kind()), std::string(to_string(e.kind())) + " error: " + e.what());
    }
    catch (const std::bad_alloc&)
    {
        return fail(DFN_ERR_INTERNAL, "out of memory");
    }
    catch (const std::exception& e)
    {
        return fail(DFN_ERR_INTERNAL, e.what());
    }
    catch (...)
    {
        return fail(DFN_ERR_INTERNAL, "unknown error");
    }
}

char* duplicate(const std::string& s)
{
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out)
        throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

#define DFN_REQUIRE(cond, what)                                                                                   \
    do                                                                                                             \
    {                                                                                                              \
        if (!(cond))                                                                                               \
            return fail(DFN_ERR_USAGE, what);                                                                      \
    } while (0)

Target single_target(dfn_target t)
{
    if (t == DFN_TARGET_PROOF_MASS)
        return Target::ProofMass;
    if (t == DFN_TARGET_CAGE)
        return Target::Cage;
    throw Error(ErrorKind::Usage, "target must be proof-mass or cage");
}

Regime regime_of(dfn_regime r)
{
    if (r == DFN_REGIME_HIGH_GAIN)
        return Regime::HighGain;
    if (r == DFN_REGIME_FINITE_GAIN)
        return Regime::FiniteGain;
    throw Error(ErrorKind::Usage, "unknown regime");
}

Units units_of(dfn_units u)
{
    if (u == DFN_UNITS_NATURAL)
        return Units::Natural;
    if (u == DFN_UNITS_SI)
        return Units::SI;
    throw Error(ErrorKind::Usage, "unknown units");
}

}  // namespace

extern "C" {

const char* dfn_version(void)
{
    return "1.0.0";
}

const char* dfn_status_name(dfn_status status)
{
    switch (status)
    {
    case DFN_OK: return "ok";
    case DFN_ERR_USAGE: return "usage";
    case DFN_ERR_VALIDATION: return "validation";
    case DFN_ERR_NUMERICAL: return "numerical";
    case DFN_ERR_VERIFICATION: return "verification";
    case DFN_ERR_IO: return "io";
    case DFN_ERR_INTERNAL: return "internal";
    }
    return "unknown";
}

const char* dfn_last_error(void)
{
    return g_last_error.c_str();
}

void dfn_string_free(char* s)
{
    std::free(s);
}

dfn_status dfn_config_parse(const char* text, dfn_config** out)
{
    DFN_REQUIRE(text && out, "null argument");
    return guarded([&] {
        *out = new dfn_config{parse_config(text), {}};
        return DFN_OK;
    });
}

dfn_status dfn_config_load(const char* path, dfn_config** out)
{
    DFN_REQUIRE(path && out, "null argument");
    return guarded([&] {
        *out = new dfn_config{load_config(path), {}};
        return DFN_OK;
    });
}

void dfn_config_free(dfn_config* config)
{
    delete config;
}

dfn_status dfn_config_set_target(dfn_config* config, dfn_target target)
{
    DFN_REQUIRE(config, "null config");
    switch (target)
    {
    case DFN_TARGET_PROOF_MASS: config->run.target = TargetSelection::ProofMass; break;
    case DFN_TARGET_CAGE: config->run.target = TargetSelection::Cage; break;
    case DFN_TARGET_BOTH: config->run.target = TargetSelection::Both; break;
    default: return fail(DFN_ERR_USAGE, "unknown target");
    }
    return DFN_OK;
}

dfn_status dfn_config_set_regime(dfn_config* config, dfn_regime regime)
{
    DFN_REQUIRE(config, "null config");
    return guarded([&] {
        config->run.regime = regime_of(regime);
        return DFN_OK;
    });
}

dfn_status dfn_config_set_units(dfn_config* config, dfn_units units)
{
    DFN_REQUIRE(config, "null config");
    return guarded([&] {
        config->run.units = units_of(units);
        return DFN_OK;
    });
}

dfn_status dfn_config_get_target(const dfn_config* config, dfn_target* out)
{
    DFN_REQUIRE(config && out, "null argument");
    switch (config->run.target)
    {
    case TargetSelection::ProofMass: *out = DFN_TARGET_PROOF_MASS; break;
    case TargetSelection::Cage: *out = DFN_TARGET_CAGE; break;
    case TargetSelection::Both: *out = DFN_TARGET_BOTH; break;
    }
    return DFN_OK;
}

dfn_status dfn_config_get_regime(const dfn_config* config, dfn_regime* out)
{
    DFN_REQUIRE(config && out, "null argument");
    *out = config->run.regime == Regime::HighGain ? DFN_REGIME_HIGH_GAIN : DFN_REGIME_FINITE_GAIN;
    return DFN_OK;
}

dfn_status dfn_config_get_units(const dfn_config* config, dfn_units* out)
{
    DFN_REQUIRE(config && out, "null argument");
    *out = config->run.units == Units::SI ? DFN_UNITS_SI : DFN_UNITS_NATURAL;
    return DFN_OK;
}

dfn_status dfn_config_sweep_gains(const dfn_config* config, double* gains, size_t capacity, size_t* count)
{
    DFN_REQUIRE(config && count, "null argument");
    DFN_REQUIRE(gains || capacity == 0, "null gains buffer");
    const auto& list = config->run.sweep_gains;
    for (size_t i = 0; i < list.size() && i < capacity; ++i)
        gains[i] = list[i];
    *count = list.size();
    return DFN_OK;
}

dfn_status dfn_config_set_verify_threshold(dfn_config* config, const char* check, double value)
{
    DFN_REQUIRE(config && check, "null argument");
    if (!config->thresholds.set(check, value))
        return fail(DFN_ERR_USAGE, std::string("unknown verify check '") + check + "'");
    return DFN_OK;
}

dfn_status dfn_config_to_text(const dfn_config* config, char** out)
{
    DFN_REQUIRE(config && out, "null argument");
    return guarded([&] {
        *out = duplicate(to_canonical_text(config->run));
        return DFN_OK;
    });
}

dfn_status dfn_spectrum_csv(const dfn_config* config, char** out)
{
    DFN_REQUIRE(config && out, "null argument");
    return guarded([&] {
        *out = duplicate(spectrum_csv(config->run));
        return DFN_OK;
    });
}

dfn_status dfn_optimize_report(const dfn_config* config, char** out)
{
    DFN_REQUIRE(config && out, "null argument");
    return guarded([&] {
        *out = duplicate(optimize_report(config->run));
        return DFN_OK;
    });
}

dfn_status dfn_verify_report(const dfn_config* config, char** out)
{
    DFN_REQUIRE(config && out, "null argument");
    return guarded([&] {
        const VerifyOutcome outcome = run_verify(config->run, config->thresholds);
        *out = duplicate(outcome.report());
        if (outcome.all_passed())
            return DFN_OK;
        for (const auto& check : outcome.checks)
            if (!check.passed)
            {
                g_last_error = "check '" + check.name + "' failed";
                break;
            }
        return outcome.numerical_failure ? DFN_ERR_NUMERICAL : DFN_ERR_VERIFICATION;
    });
}

dfn_status dfn_sweep_gain_csv(const dfn_config* config, const double* gains, size_t count, char** out)
{
    DFN_REQUIRE(config && out, "null argument");
    DFN_REQUIRE(gains || count == 0, "null gains");
    return guarded([&] {
        *out = duplicate(sweep_gain_csv(config->run, std::span<const double>(gains, count)));
        return DFN_OK;
    });
}

dfn_status dfn_spectrum_at(const dfn_config* config, double omega, dfn_target target, dfn_regime regime,
                           double* contributions, double* total)
{
    DFN_REQUIRE(config && total, "null argument");
    return guarded([&] {
        const PointSpectrum p = assemble_spectrum(config->run.system, omega, single_target(target),
                                                  regime_of(regime), constants(config->run.units));
        if (contributions)
            std::copy(p.contributions.begin(), p.contributions.end(), contributions);
        *total = p.total;
        return DFN_OK;
    });
}

dfn_status dfn_closed_form_at(const dfn_config* config, double omega, dfn_target target, double* out)
{
    DFN_REQUIRE(config && out, "null argument");
    return guarded([&] {
        *out = closed_form(config->run.system, omega, single_target(target), constants(config->run.units));
        return DFN_OK;
    });
}

dfn_status dfn_optimize_rho(const dfn_config* config, double omega, dfn_target target, double* rho_analytic,
                            double* rho_numeric, double* minimum_analytic, double* minimum_numeric)
{
    DFN_REQUIRE(config, "null config");
    return guarded([&] {
        const RhoOptimum opt =
            optimize_rho(config->run.system, omega, single_target(target), constants(config->run.units));
        if (rho_analytic)
            *rho_analytic = opt.analytic.rho;
        if (rho_numeric)
            *rho_numeric = opt.numeric.rho;
        if (minimum_analytic)
            *minimum_analytic = opt.analytic.minimum;
        if (minimum_numeric)
            *minimum_numeric = opt.numeric.minimum;
        return DFN_OK;
    });
}

dfn_status dfn_transfer_at(const dfn_config* config, double omega, dfn_source source, dfn_regime regime,
                           double* out)
{
    DFN_REQUIRE(config && out, "null argument");
    DFN_REQUIRE(source >= DFN_SOURCE_FP && source < DFN_SOURCE_COUNT, "unknown source");
    return guarded([&] {
        const Source s = kAllSources[static_cast<std::size_t>(source)];
        const Transfer h = regime_of(regime) == Regime::HighGain ? high_gain_solution(config->run.system, omega, s)
                                                                 : solve_finite_gain(config->run.system, omega, s);
        out[0] = h.proof_mass.real();
        out[1] = h.proof_mass.imag();
        out[2] = h.cage.real();
        out[3] = h.cage.imag();
        return DFN_OK;
    });
}

dfn_status dfn_effective_energy(double omega, double temperature, dfn_units units, double* out)
{
    DFN_REQUIRE(out, "null argument");
    return guarded([&] {
        *out = effective_energy(omega, temperature, constants(units_of(units)));
        return DFN_OK;
    });
}

dfn_status dfn_amplifier_spectra(double noise_temperature, double omega_t, double rho, double coupling_magnitude,
                                 dfn_units units, double* back_action, double* sensing_error)
{
    DFN_REQUIRE(back_action && sensing_error, "null argument");
    return guarded([&] {
        const AmplifierSpectra s =
            amplifier_spectra({noise_temperature, omega_t, rho}, coupling_magnitude, constants(units_of(units)));
        *back_action = s.back_action;
        *sensing_error = s.sensing_error;
        return DFN_OK;
    });
}

}  // extern "C"
