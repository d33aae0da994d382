#include "fdt.hpp"

#include <cmath>
#include <sstream>

#include "errors.hpp"

namespace dragfree
{

void AmplifierParams::validate() const
{
    std::ostringstream msg;
    if (!std::isfinite(noise_temperature) || noise_temperature < 0.0)
        msg << "amplifier noise temperature must be >= 0, got " << noise_temperature;
    else if (!std::isfinite(omega_t) || omega_t <= 0.0)
        msg << "amplifier omega_t must be > 0, got " << omega_t;
    else if (!std::isfinite(rho) || rho <= 0.0)
        msg << "amplifier rho must be > 0, got " << rho;
    else
        return;
    throw Error(ErrorKind::Validation, msg.str());
}

double stable_coth(double x)
{
    if (x < 1e-4)
        return 1.0 / x + x / 3.0 - x * x * x / 45.0;
    if (x > 20.0)
        return 1.0;
    return 1.0 / std::tanh(x);
}

double effective_energy(double omega, double temperature, const PhysicalConstants& c)
{
    if (omega == 0.0 || !std::isfinite(omega))
        throw Error(ErrorKind::Domain, "effective energy undefined at omega = 0");
    if (!(temperature >= 0.0) || !std::isfinite(temperature))
        throw Error(ErrorKind::Domain, "temperature must be finite and >= 0");

    const double zero_point = 0.5 * c.hbar * std::abs(omega);
    if (temperature == 0.0)
        return zero_point;

    const double thermal = c.k_boltzmann * temperature;
    const double x = zero_point / thermal;
    if (x < 1e-4)
    {
        // x coth x = 1 + x^2/3 - x^4/45, written as a correction to k_B T so
        // the classical limit is not swamped by rounding of 1/x.
        const double x2 = x * x;
        const double correction = thermal * (x2 / 3.0 - x2 * x2 / 45.0);
        double energy = thermal + correction;
        // Faithful rounding toward k_B T keeps k_B T <= result <= k_B T (1 + x^2/3)
        // when the correction is below one ulp.
        if (energy - thermal > correction)
            energy = std::nextafter(energy, thermal);
        return energy;
    }
    return zero_point * stable_coth(x);
}

double langevin_spectrum(const ImpedanceModel& model, double omega, double temperature,
                         const PhysicalConstants& c)
{
    const double dissipation = model.real_part(omega);
    if (dissipation < 0.0)
    {
        std::ostringstream msg;
        msg << "non-passive impedance at omega " << omega << " (Re = " << dissipation << ")";
        throw Error(ErrorKind::Validation, msg.str());
    }
    return 2.0 * effective_energy(omega, temperature, c) * dissipation;
}

AmplifierSpectra amplifier_spectra(const AmplifierParams& amp, double coupling_magnitude,
                                   const PhysicalConstants& c)
{
    amp.validate();
    if (!(coupling_magnitude > 0.0) || !std::isfinite(coupling_magnitude))
        throw Error(ErrorKind::DegenerateCoupling,
                    "degenerate coupling: |Xi_s| must be > 0 for the sensor to operate");
    const double four_energy = 4.0 * effective_energy(amp.omega_t, amp.noise_temperature, c);
    const double matched = amp.rho * coupling_magnitude;
    return {four_energy * matched, four_energy / matched};
}

}  // namespace dragfree
