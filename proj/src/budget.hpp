#pragma once

#include <array>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "closed_loop.hpp"
#include "units.hpp"

namespace dragfree
{

enum class Target
{
    ProofMass,
    Cage,
};

enum class Regime
{
    HighGain,
    FiniteGain,
};

std::string_view to_string(Target t) noexcept;
std::string_view to_string(Regime r) noexcept;

using SourceArray = std::array<double, kSourceCount>;

/// Spectral density of every source at omega (N^2 s for forces, m^2/s for
/// v_se). Theta_p, Theta_s, Theta_c use omega; Theta_a uses omega_t.
SourceArray source_spectra(const SystemParams& params, double omega, const PhysicalConstants& c);

struct PointSpectrum
{
    SourceArray contributions{};
    double total = 0.0;
};

/// Sum over uncorrelated sources of |H(source)|^2 sigma_source.
PointSpectrum assemble_spectrum(const SystemParams& params, double omega, Target target, Regime regime,
                                const PhysicalConstants& c);

/// Closed-form velocity densities in the high-gain limit.
double proof_mass_closed_form(const SystemParams& params, double omega, const PhysicalConstants& c);
double cage_closed_form(const SystemParams& params, double omega, const PhysicalConstants& c);
double closed_form(const SystemParams& params, double omega, Target target, const PhysicalConstants& c);

/// The rho-dependent amplifier part of |Xi_p|^2 sigma_VV for the given target.
double amplifier_term(const SystemParams& params, double omega, Target target, double rho,
                      const PhysicalConstants& c);

/// Zero-temperature proof-mass density at matched rho:
/// [hbar Omega Re(Xi_p + Xi_s) + 4 hbar omega_t |Xi_s|] / |Xi_p|^2.
/// Requires all temperatures 0 and rho == 1.
double zero_temperature_spectrum(const SystemParams& params, double omega, const PhysicalConstants& c);

enum class Method
{
    Analytic,
    Numeric,
};

struct OptimizationResult
{
    double rho = 1.0;
    double minimum = 0.0;            // sigma_VV at rho
    double amplifier_minimum = 0.0;  // amplifier term of |Xi_p|^2 sigma_VV at rho
    Target target = Target::ProofMass;
    Method method = Method::Analytic;
};

struct RhoOptimum
{
    OptimizationResult analytic;
    OptimizationResult numeric;

    double relative_rho_difference() const;
};

OptimizationResult optimize_rho_analytic(const SystemParams& params, double omega, Target target,
                                         const PhysicalConstants& c);
OptimizationResult optimize_rho_numeric(const SystemParams& params, double omega, Target target,
                                        const PhysicalConstants& c);
/// Numeric search runs over log(rho) in [1e-6, 1e6].
bool rho_in_search_bracket(double rho) noexcept;

RhoOptimum optimize_rho(const SystemParams& params, double omega, Target target, const PhysicalConstants& c);

/// Golden-section search for the minimum of a unimodal f on [lo, hi]; stops
/// when the bracket is narrower than tolerance.
double golden_section_minimize(const std::function<double(double)>& f, double lo, double hi,
                               double tolerance);

struct SpectrumTable
{
    Target target = Target::ProofMass;
    Regime regime = Regime::HighGain;
    std::vector<double> omega;
    std::array<std::vector<double>, kSourceCount> columns;
    std::vector<double> total;
};

SpectrumTable budget_decomposition(const SystemParams& params, std::span<const double> grid, Target target,
                                   Regime regime, const PhysicalConstants& c);

}  // namespace dragfree
