#pragma once

#include "impedance.hpp"
#include "units.hpp"

namespace dragfree
{

/// Phase-independent amplifier: noise temperature T_a [K], transducer
/// operating frequency omega_t [rad/s] and impedance matching ratio rho.
struct AmplifierParams
{
    double noise_temperature = 0.0;
    double omega_t = 1.0;
    double rho = 1.0;

    void validate() const;
};

/// Energy per mode k_B*Theta = (hbar|w|/2) coth(hbar|w| / 2 k_B T).
/// Exact zero-point value at T = 0. Throws Domain for omega == 0 or T < 0.
double effective_energy(double omega, double temperature, const PhysicalConstants& c);

/// Numerically stable coth for x > 0.
double stable_coth(double x);

/// Symmetrized double-sided Langevin force density 2 k_B Theta Re Xi [N^2 s].
double langevin_spectrum(const ImpedanceModel& model, double omega, double temperature,
                         const PhysicalConstants& c);

struct AmplifierSpectra
{
    double back_action;    // sigma_FtFt [N^2 s]
    double sensing_error;  // sigma_VseVse [m^2/s]
};

/// Conjugate back-action / sensing-error pair for coupling magnitude |Xi_s|.
/// Throws DegenerateCoupling when |Xi_s| == 0.
AmplifierSpectra amplifier_spectra(const AmplifierParams& amp, double coupling_magnitude,
                                   const PhysicalConstants& c);

}  // namespace dragfree
