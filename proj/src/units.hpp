#pragma once

#include <string_view>

namespace dragfree
{

/// Values of hbar [J s] and k_B [J/K] used by every spectral density.
struct PhysicalConstants
{
    double hbar;
    double k_boltzmann;
};

// Exact SI defining values.
inline constexpr PhysicalConstants kSIConstants{1.054571817e-34, 1.380649e-23};
inline constexpr PhysicalConstants kNaturalConstants{1.0, 1.0};

enum class Units
{
    Natural,
    SI,
};

constexpr const PhysicalConstants& constants(Units units) noexcept
{
    return units == Units::SI ? kSIConstants : kNaturalConstants;
}

std::string_view to_string(Units units) noexcept;

}  // namespace dragfree
