#include "closed_loop.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "errors.hpp"

namespace dragfree
{
namespace
{

template <typename Point>
void check_table(const std::vector<Point>& table, const char* what)
{
    if (table.empty())
        throw Error(ErrorKind::Validation, std::string(what) + " table is empty");
    for (std::size_t i = 0; i < table.size(); ++i)
    {
        if (!std::isfinite(table[i].omega) || table[i].omega <= 0.0 ||
            (i > 0 && table[i].omega <= table[i - 1].omega))
        {
            std::ostringstream msg;
            msg << what << " node " << i << ": omega must be > 0 and strictly increasing";
            throw Error(ErrorKind::Validation, msg.str());
        }
    }
}

// Locates omega in a strictly increasing table; returns (lower index, weight).
template <typename Point>
std::pair<std::size_t, double> bracket(const std::vector<Point>& table, double omega, const char* what)
{
    if (omega < table.front().omega || omega > table.back().omega)
    {
        std::ostringstream msg;
        msg << "omega " << omega << " outside " << what << " table range";
        throw Error(ErrorKind::Range, msg.str());
    }
    auto upper = std::lower_bound(table.begin(), table.end(), omega,
                                  [](const Point& p, double w) { return p.omega < w; });
    const auto hi = static_cast<std::size_t>(upper - table.begin());
    if (upper->omega == omega || hi == 0)
        return {hi, 0.0};
    return {hi - 1, (omega - table[hi - 1].omega) / (table[hi].omega - table[hi - 1].omega)};
}

double max_abs(const Matrix2& a)
{
    return std::max({std::abs(a[0][0]), std::abs(a[0][1]), std::abs(a[1][0]), std::abs(a[1][1])});
}

}  // namespace

std::string_view to_string(Source s) noexcept
{
    switch (s)
    {
    case Source::ProofMassForce: return "f_p";
    case Source::CouplingForce: return "f_s";
    case Source::BackAction: return "f_t";
    case Source::SensingError: return "v_se";
    case Source::CageForce: return "f_c";
    }
    return "?";
}

GainModel::GainModel(Complex constant) : constant_(constant)
{
    if (!std::isfinite(constant.real()) || !std::isfinite(constant.imag()))
        throw Error(ErrorKind::Validation, "servo gain must be finite");
}

GainModel::GainModel(std::vector<GainPoint> table) : constant_(0.0), table_(std::move(table))
{
    check_table(table_, "gain");
    for (const auto& p : table_)
        if (!std::isfinite(p.value.real()) || !std::isfinite(p.value.imag()))
            throw Error(ErrorKind::Validation, "servo gain must be finite");
}

Complex GainModel::at(double omega) const
{
    if (table_.empty())
        return constant_;
    const auto [i, t] = bracket(table_, omega, "gain");
    if (t == 0.0)
        return table_[i].value;
    const Complex lo = table_[i].value;
    const Complex hi = table_[i + 1].value;
    return {lo.real() + t * (hi.real() - lo.real()), lo.imag() + t * (hi.imag() - lo.imag())};
}

CageDisturbance::CageDisturbance(double constant) : constant_(constant)
{
    if (!std::isfinite(constant) || constant < 0.0)
        throw Error(ErrorKind::Validation, "cage disturbance density must be >= 0");
}

CageDisturbance::CageDisturbance(std::vector<DisturbancePoint> table)
    : constant_(0.0), table_(std::move(table))
{
    check_table(table_, "cage disturbance");
    for (const auto& p : table_)
        if (!std::isfinite(p.psd) || p.psd < 0.0)
            throw Error(ErrorKind::Validation, "cage disturbance density must be >= 0");
}

double CageDisturbance::at(double omega) const
{
    if (table_.empty())
        return constant_;
    const auto [i, t] = bracket(table_, omega, "cage disturbance");
    if (t == 0.0)
        return table_[i].psd;
    return table_[i].psd + t * (table_[i + 1].psd - table_[i].psd);
}

void SystemParams::validate() const
{
    const auto check_temperature = [](double t, const char* name) {
        if (!std::isfinite(t) || t < 0.0)
            throw Error(ErrorKind::Validation, std::string(name) + " temperature must be >= 0");
    };
    check_temperature(temperatures.proof_mass, "proof mass");
    check_temperature(temperatures.coupling, "coupling");
    check_temperature(temperatures.cage, "cage");
    amplifier.validate();
}

Matrix2 open_loop_matrix(const SystemParams& params, double omega)
{
    const Complex xp = params.proof_mass.eval(omega);
    const Complex xc = params.cage.eval(omega);
    const Complex xs = params.coupling.eval(omega);
    return {{{xp + xs, -xs}, {-xs, xc + xs}}};
}

Matrix2 closed_loop_matrix(const SystemParams& params, double omega)
{
    const Complex g = params.gain.at(omega);
    Matrix2 m = open_loop_matrix(params, omega);
    m[1][0] -= g;
    m[1][1] += g;
    return m;
}

Vector2 injection(Source source, Complex gain)
{
    switch (source)
    {
    case Source::ProofMassForce: return {1.0, 0.0};
    case Source::CouplingForce:
    case Source::BackAction: return {1.0, -1.0};
    case Source::CageForce: return {0.0, 1.0};
    case Source::SensingError: return {0.0, -gain};
    }
    return {0.0, 0.0};
}

Vector2 solve(const Matrix2& a, const Vector2& b)
{
    const double scale = max_abs(a);
    const Complex det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    if (scale == 0.0 || !(std::abs(det) >= 1e-30 * scale * scale))
    {
        std::ostringstream msg;
        msg << "singular 2x2 system (|det| = " << std::abs(det) << ", scale = " << scale << ")";
        throw Error(ErrorKind::Singular, msg.str());
    }

    std::size_t p = std::abs(a[0][0]) >= std::abs(a[1][0]) ? 0 : 1;
    std::size_t q = 1 - p;
    const Complex factor = a[q][0] / a[p][0];
    const Complex u11 = a[q][1] - factor * a[p][1];
    const Complex y1 = b[q] - factor * b[p];
    const Complex x1 = y1 / u11;
    const Complex x0 = (b[p] - a[p][1] * x1) / a[p][0];
    return {x0, x1};
}

Transfer solve_finite_gain(const SystemParams& params, double omega, Source source)
{
    const Matrix2 a = closed_loop_matrix(params, omega);
    try
    {
        const Vector2 x = solve(a, injection(source, params.gain.at(omega)));
        return {x[0], x[1]};
    }
    catch (const Error& e)
    {
        std::ostringstream msg;
        msg << e.what() << " at omega = " << omega;
        throw Error(e.kind(), msg.str());
    }
}

Transfer high_gain_solution(const SystemParams& params, double omega, Source source)
{
    const Complex xp = params.proof_mass.eval(omega);
    if (xp == Complex{0.0, 0.0})
    {
        std::ostringstream msg;
        msg << "proof mass impedance vanishes at omega = " << omega;
        throw Error(ErrorKind::Singular, msg.str());
    }
    switch (source)
    {
    case Source::ProofMassForce:
    case Source::CouplingForce:
    case Source::BackAction: {
        const Complex h = 1.0 / xp;
        return {h, h};
    }
    case Source::SensingError: {
        // V_c = V_p - V_se
        const Complex hp = -params.coupling.eval(omega) / xp;
        return {hp, hp - 1.0};
    }
    case Source::CageForce: return {0.0, 0.0};
    }
    return {0.0, 0.0};
}

Complex free_motion(const SystemParams& params, double omega)
{
    const Complex xp = params.proof_mass.eval(omega);
    if (xp == Complex{0.0, 0.0})
    {
        std::ostringstream msg;
        msg << "proof mass impedance vanishes at omega = " << omega;
        throw Error(ErrorKind::Singular, msg.str());
    }
    return 1.0 / xp;
}

double convergence_defect(const SystemParams& params, double omega, Source source,
                          double gain_magnitude)
{
    SystemParams at_gain = params;
    at_gain.gain = GainModel(Complex{gain_magnitude, 0.0});
    const Transfer finite = solve_finite_gain(at_gain, omega, source);
    const Transfer limit = high_gain_solution(at_gain, omega, source);
    constexpr double eps = 1e-30;
    return std::max(std::abs(finite.proof_mass - limit.proof_mass) / (std::abs(limit.proof_mass) + eps),
                    std::abs(finite.cage - limit.cage) / (std::abs(limit.cage) + eps));
}

}  // namespace dragfree
