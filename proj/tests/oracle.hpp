#pragma once

// Reference computations for the tests. Everything here is written from the
// defining formulas in long double and shares no code with the library.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>

namespace oracle
{

using LComplex = std::complex<long double>;

/// (hbar|w|/2) coth(hbar|w| / 2 k_B T), natural units unless given.
inline long double energy_per_mode(long double omega, long double temperature, long double hbar = 1.0L,
                                   long double kb = 1.0L)
{
    const long double zp = 0.5L * hbar * std::fabs(omega);
    if (temperature == 0.0L)
        return zp;
    const long double x = zp / (kb * temperature);
    return zp / std::tanh(x);
}

/// Cramer's rule on the closed-loop equations with the unit-source
/// right-hand side; returns (V_p, V_c).
inline std::array<LComplex, 2> cramer(LComplex xp, LComplex xc, LComplex xs, LComplex g, LComplex r0, LComplex r1)
{
    const LComplex a = xp + xs, b = -xs, c = -xs - g, d = xc + xs + g;
    const LComplex det = a * d - b * c;
    return {(r0 * d - b * r1) / det, (a * r1 - c * r0) / det};
}

/// Proof-mass and cage velocity densities assembled term by term from the
/// high-gain transfer functions and the FDT / amplifier spectra.
struct HandBudget
{
    long double fp, fs, ft, vse;
    long double total() const { return fp + fs + ft + vse; }
};

inline HandBudget hand_budget(bool cage, LComplex xp, LComplex xs, long double energy_p, long double energy_s,
                              long double energy_a, long double rho)
{
    const long double abs_xs = std::abs(xs);
    const long double s_fp = 2.0L * energy_p * xp.real();
    const long double s_fs = 2.0L * energy_s * xs.real();
    const long double s_ft = 4.0L * energy_a * rho * abs_xs;
    const long double s_vse = 4.0L * energy_a / (rho * abs_xs);
    const long double h_force = std::norm(1.0L / xp);
    const long double h_vse = cage ? std::norm((xs + xp) / xp) : std::norm(xs / xp);
    return {h_force * s_fp, h_force * s_fs, h_force * s_ft, h_vse * s_vse};
}

inline long double rel(long double a, long double b)
{
    const long double scale = std::max(std::fabs(a), std::fabs(b));
    return scale == 0.0L ? 0.0L : std::fabs(a - b) / scale;
}

}  // namespace oracle
