#pragma once

#include <array>
#include <optional>
#include <string_view>
#include <vector>

#include "fdt.hpp"
#include "impedance.hpp"

namespace dragfree
{

/// Uncorrelated noise inputs of the two-body system.
enum class Source
{
    ProofMassForce,  // f_p: unscreened force on the proof mass
    CouplingForce,   // f_s: Langevin force of the separating space
    BackAction,      // f_t: transducer back action
    SensingError,    // v_se: additive error on the velocity estimate
    CageForce,       // f_c: environmental force on the cage
};

inline constexpr std::size_t kSourceCount = 5;
inline constexpr std::array<Source, kSourceCount> kAllSources{
    Source::ProofMassForce, Source::CouplingForce, Source::BackAction, Source::SensingError,
    Source::CageForce};

std::string_view to_string(Source s) noexcept;

inline constexpr std::size_t index(Source s) noexcept { return static_cast<std::size_t>(s); }

struct GainPoint
{
    double omega;
    Complex value;
};

/// Servo gain G [N s/m]: a complex constant, or a table linearly interpolated
/// in omega (real and imaginary parts separately).
class GainModel
{
public:
    GainModel(Complex constant = {0.0, 0.0});
    explicit GainModel(std::vector<GainPoint> table);

    Complex at(double omega) const;
    bool is_constant() const noexcept { return table_.empty(); }
    Complex constant() const noexcept { return constant_; }
    const std::vector<GainPoint>& table() const noexcept { return table_; }

private:
    Complex constant_;
    std::vector<GainPoint> table_;
};

struct DisturbancePoint
{
    double omega;
    double psd;
};

/// External cage force density added on top of the FDT term of Xi_c.
class CageDisturbance
{
public:
    CageDisturbance(double constant = 0.0);
    explicit CageDisturbance(std::vector<DisturbancePoint> table);

    double at(double omega) const;
    bool is_constant() const noexcept { return table_.empty(); }
    double constant() const noexcept { return constant_; }
    const std::vector<DisturbancePoint>& table() const noexcept { return table_; }

private:
    double constant_;
    std::vector<DisturbancePoint> table_;
};

struct Temperatures
{
    double proof_mass = 0.0;
    double coupling = 0.0;
    double cage = 0.0;
};

struct SystemParams
{
    ImpedanceModel proof_mass = ImpedanceModel::mass(1.0);
    ImpedanceModel cage = ImpedanceModel::mass(1.0);
    ImpedanceModel coupling = ImpedanceModel::damper(0.0);
    Temperatures temperatures;
    AmplifierParams amplifier;
    GainModel gain;
    CageDisturbance cage_disturbance;

    void validate() const;
};

using Matrix2 = std::array<std::array<Complex, 2>, 2>;
using Vector2 = std::array<Complex, 2>;

/// Response of (V_p, V_c) to a unit source.
struct Transfer
{
    Complex proof_mass;
    Complex cage;
};

Matrix2 open_loop_matrix(const SystemParams& params, double omega);
Matrix2 closed_loop_matrix(const SystemParams& params, double omega);

/// Right-hand side weights of a unit source in the closed-loop equations.
Vector2 injection(Source source, Complex gain);

/// Gaussian elimination with partial pivoting. Throws Singular when
/// |det| < 1e-30 * max|a_ij|^2.
Vector2 solve(const Matrix2& a, const Vector2& b);

Transfer solve_finite_gain(const SystemParams& params, double omega, Source source);
Transfer high_gain_solution(const SystemParams& params, double omega, Source source);
Complex free_motion(const SystemParams& params, double omega);

/// max over (V_p, V_c) of |finite - high gain| / (|high gain| + 1e-30), with
/// the servo gain replaced by the real constant gain_magnitude.
double convergence_defect(const SystemParams& params, double omega, Source source,
                          double gain_magnitude);

/// Sources whose high-gain transfer is nonzero; f_c is rejected exactly and
/// has no meaningful relative defect.
inline constexpr std::array<Source, 4> kConvergingSources{
    Source::ProofMassForce, Source::CouplingForce, Source::BackAction, Source::SensingError};

}  // namespace dragfree
