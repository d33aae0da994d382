#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "budget.hpp"
#include "closed_loop.hpp"
#include "units.hpp"

namespace dragfree
{

enum class Spacing
{
    Log,
    Linear,
};

struct GridSpec
{
    double omega_min = 1.0;
    double omega_max = 1.0;
    std::size_t points = 1;
    Spacing spacing = Spacing::Log;

    std::vector<double> values() const;
};

enum class TargetSelection
{
    ProofMass,
    Cage,
    Both,
};

std::string_view to_string(TargetSelection t) noexcept;
std::string_view to_string(Spacing s) noexcept;

struct RunConfig
{
    SystemParams system;
    GridSpec grid;
    Units units = Units::Natural;
    TargetSelection target = TargetSelection::ProofMass;
    Regime regime = Regime::HighGain;
    std::vector<double> sweep_gains;
};

/// Parses and validates a YAML run description. Errors carry the line and the
/// dotted key path, e.g. "line 12: system.amplifier.rho: must be > 0".
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

/// Fully explicit YAML form of a config; parse_config accepts it back.
std::string to_canonical_text(const RunConfig& config);

std::optional<TargetSelection> parse_target(std::string_view s);
std::optional<Regime> parse_regime(std::string_view s);
std::optional<Units> parse_units(std::string_view s);

}  // namespace dragfree
