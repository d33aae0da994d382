#include "budget.hpp"

#include <cmath>
#include <sstream>

#include "errors.hpp"

namespace dragfree
{
namespace
{

constexpr double kRhoLow = 1e-6;
constexpr double kRhoHigh = 1e6;
constexpr double kRhoTolerance = 1e-8;

struct Impedances
{
    Complex proof_mass;
    Complex coupling;
    double coupling_magnitude;
};

Impedances evaluate(const SystemParams& params, double omega)
{
    Impedances z{params.proof_mass.eval(omega), params.coupling.eval(omega), 0.0};
    z.coupling_magnitude = std::abs(z.coupling);
    if (z.proof_mass == Complex{0.0, 0.0})
    {
        std::ostringstream msg;
        msg << "proof mass impedance vanishes at omega = " << omega;
        throw Error(ErrorKind::Singular, msg.str());
    }
    if (!(z.coupling_magnitude > 0.0))
    {
        std::ostringstream msg;
        msg << "degenerate coupling: |Xi_s| = 0 at omega = " << omega;
        throw Error(ErrorKind::DegenerateCoupling, msg.str());
    }
    return z;
}

double langevin_numerator(const SystemParams& params, double omega, const PhysicalConstants& c)
{
    return langevin_spectrum(params.proof_mass, omega, params.temperatures.proof_mass, c) +
           langevin_spectrum(params.coupling, omega, params.temperatures.coupling, c);
}

double amplifier_bracket(const Impedances& z, Target target, double rho)
{
    if (target == Target::ProofMass)
        return rho + 1.0 / rho;
    const double ratio = std::abs(z.proof_mass + z.coupling) / z.coupling_magnitude;
    return rho + ratio * ratio / rho;
}

}  // namespace

std::string_view to_string(Target t) noexcept
{
    return t == Target::ProofMass ? "proof-mass" : "cage";
}

std::string_view to_string(Regime r) noexcept
{
    return r == Regime::HighGain ? "high-gain" : "finite-gain";
}

SourceArray source_spectra(const SystemParams& params, double omega, const PhysicalConstants& c)
{
    const double coupling_magnitude = params.coupling.magnitude(omega);
    const AmplifierSpectra amp = amplifier_spectra(params.amplifier, coupling_magnitude, c);
    SourceArray s{};
    s[index(Source::ProofMassForce)] =
        langevin_spectrum(params.proof_mass, omega, params.temperatures.proof_mass, c);
    s[index(Source::CouplingForce)] = langevin_spectrum(params.coupling, omega, params.temperatures.coupling, c);
    s[index(Source::BackAction)] = amp.back_action;
    s[index(Source::SensingError)] = amp.sensing_error;
    s[index(Source::CageForce)] = langevin_spectrum(params.cage, omega, params.temperatures.cage, c) +
                                  params.cage_disturbance.at(omega);
    return s;
}

PointSpectrum assemble_spectrum(const SystemParams& params, double omega, Target target, Regime regime,
                                const PhysicalConstants& c)
{
    const SourceArray sigma = source_spectra(params, omega, c);
    PointSpectrum out;
    for (Source source : kAllSources)
    {
        const Transfer h = regime == Regime::HighGain ? high_gain_solution(params, omega, source)
                                                      : solve_finite_gain(params, omega, source);
        const Complex response = target == Target::ProofMass ? h.proof_mass : h.cage;
        const double contribution = std::norm(response) * sigma[index(source)];
        out.contributions[index(source)] = contribution;
        out.total += contribution;
    }
    return out;
}

double amplifier_term(const SystemParams& params, double omega, Target target, double rho,
                      const PhysicalConstants& c)
{
    const Impedances z = evaluate(params, omega);
    const double energy = effective_energy(params.amplifier.omega_t, params.amplifier.noise_temperature, c);
    return 4.0 * energy * z.coupling_magnitude * amplifier_bracket(z, target, rho);
}

double closed_form(const SystemParams& params, double omega, Target target, const PhysicalConstants& c)
{
    params.amplifier.validate();
    const Impedances z = evaluate(params, omega);
    const double numerator =
        langevin_numerator(params, omega, c) + amplifier_term(params, omega, target, params.amplifier.rho, c);
    return numerator / std::norm(z.proof_mass);
}

double proof_mass_closed_form(const SystemParams& params, double omega, const PhysicalConstants& c)
{
    return closed_form(params, omega, Target::ProofMass, c);
}

double cage_closed_form(const SystemParams& params, double omega, const PhysicalConstants& c)
{
    return closed_form(params, omega, Target::Cage, c);
}

double zero_temperature_spectrum(const SystemParams& params, double omega, const PhysicalConstants& c)
{
    const auto& t = params.temperatures;
    if (t.proof_mass != 0.0 || t.coupling != 0.0 || params.amplifier.noise_temperature != 0.0)
        throw Error(ErrorKind::Validation, "zero-temperature spectrum requires all temperatures = 0");
    if (params.amplifier.rho != 1.0)
        throw Error(ErrorKind::Validation, "zero-temperature spectrum requires rho = 1");
    if (omega == 0.0)
        throw Error(ErrorKind::Domain, "omega must be nonzero");
    const Impedances z = evaluate(params, omega);
    const double numerator = c.hbar * std::abs(omega) * (z.proof_mass + z.coupling).real() +
                             4.0 * c.hbar * params.amplifier.omega_t * z.coupling_magnitude;
    return numerator / std::norm(z.proof_mass);
}

double golden_section_minimize(const std::function<double(double)>& f, double lo, double hi, double tolerance)
{
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo;
    double b = hi;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    while (b - a > tolerance)
    {
        if (f1 <= f2)
        {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        }
        else
        {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

OptimizationResult optimize_rho_analytic(const SystemParams& params, double omega, Target target,
                                         const PhysicalConstants& c)
{
    const Impedances z = evaluate(params, omega);
    OptimizationResult r;
    r.target = target;
    r.method = Method::Analytic;
    r.rho = target == Target::ProofMass ? 1.0 : std::abs(z.proof_mass + z.coupling) / z.coupling_magnitude;
    const double energy = effective_energy(params.amplifier.omega_t, params.amplifier.noise_temperature, c);
    // 4 k_B Theta_a |Xi_s| (rho* + rho*) with rho* = |Xi_p + Xi_s| / |Xi_s| for the cage
    r.amplifier_minimum = 8.0 * energy *
                          (target == Target::ProofMass ? z.coupling_magnitude : std::abs(z.proof_mass + z.coupling));
    r.minimum = (langevin_numerator(params, omega, c) + r.amplifier_minimum) / std::norm(z.proof_mass);
    return r;
}

OptimizationResult optimize_rho_numeric(const SystemParams& params, double omega, Target target,
                                        const PhysicalConstants& c)
{
    const Impedances z = evaluate(params, omega);
    // The other terms do not depend on rho; minimizing the bracket alone keeps
    // the objective's relative resolution independent of the Langevin floor.
    const auto objective = [&](double log_rho) { return amplifier_bracket(z, target, std::exp(log_rho)); };
    const double log_rho =
        golden_section_minimize(objective, std::log(kRhoLow), std::log(kRhoHigh), kRhoTolerance);

    OptimizationResult r;
    r.target = target;
    r.method = Method::Numeric;
    r.rho = std::exp(log_rho);
    r.amplifier_minimum = amplifier_term(params, omega, target, r.rho, c);
    r.minimum = (langevin_numerator(params, omega, c) + r.amplifier_minimum) / std::norm(z.proof_mass);
    return r;
}

RhoOptimum optimize_rho(const SystemParams& params, double omega, Target target, const PhysicalConstants& c)
{
    params.amplifier.validate();
    return {optimize_rho_analytic(params, omega, target, c), optimize_rho_numeric(params, omega, target, c)};
}

bool rho_in_search_bracket(double rho) noexcept
{
    return rho >= kRhoLow && rho <= kRhoHigh;
}

double RhoOptimum::relative_rho_difference() const
{
    return std::abs(numeric.rho - analytic.rho) / analytic.rho;
}

SpectrumTable budget_decomposition(const SystemParams& params, std::span<const double> grid, Target target,
                                   Regime regime, const PhysicalConstants& c)
{
    SpectrumTable table;
    table.target = target;
    table.regime = regime;
    table.omega.assign(grid.begin(), grid.end());
    for (auto& column : table.columns)
        column.reserve(grid.size());
    table.total.reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
    {
        if (!(grid[i] > 0.0) || (i > 0 && grid[i] <= grid[i - 1]))
            throw Error(ErrorKind::Validation, "frequency grid must be positive and strictly increasing");
        const PointSpectrum point = assemble_spectrum(params, grid[i], target, regime, c);
        for (std::size_t s = 0; s < kSourceCount; ++s)
            table.columns[s].push_back(point.contributions[s]);
        table.total.push_back(point.total);
    }
    return table;
}

}  // namespace dragfree
