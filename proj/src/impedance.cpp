#include "impedance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "errors.hpp"

namespace dragfree
{
namespace
{

void require_parameter(double value, const char* what)
{
    if (!std::isfinite(value) || value < 0.0)
    {
        std::ostringstream msg;
        msg << what << " must be finite and >= 0, got " << value;
        throw Error(ErrorKind::Validation, msg.str());
    }
}

Complex interpolate(const std::vector<TabulatedPoint>& points, double omega)
{
    if (omega < points.front().omega || omega > points.back().omega)
    {
        std::ostringstream msg;
        msg << "omega " << omega << " outside tabulated range [" << points.front().omega << ", "
            << points.back().omega << "]";
        throw Error(ErrorKind::Range, msg.str());
    }
    auto upper = std::lower_bound(points.begin(), points.end(), omega,
                                  [](const TabulatedPoint& p, double w) { return p.omega < w; });
    if (upper->omega == omega)
        return upper->value;
    auto lower = std::prev(upper);
    const double t = (omega - lower->omega) / (upper->omega - lower->omega);
    return {lower->value.real() + t * (upper->value.real() - lower->value.real()),
            lower->value.imag() + t * (upper->value.imag() - lower->value.imag())};
}

}  // namespace

ImpedanceModel::ImpedanceModel(Mass m) : model_(m)
{
    require_parameter(m.mass, "mass");
}

ImpedanceModel::ImpedanceModel(Damper d) : model_(d)
{
    require_parameter(d.damping, "damping");
}

ImpedanceModel::ImpedanceModel(Spring s) : model_(s)
{
    require_parameter(s.stiffness, "stiffness");
}

ImpedanceModel::ImpedanceModel(Sum s) : model_(std::move(s)) {}

ImpedanceModel::ImpedanceModel(Tabulated t)
{
    if (t.points.empty())
        throw Error(ErrorKind::Validation, "tabulated impedance needs at least one node");
    for (std::size_t i = 0; i < t.points.size(); ++i)
    {
        const auto& p = t.points[i];
        std::ostringstream msg;
        if (!std::isfinite(p.omega) || p.omega <= 0.0)
            msg << "tabulated node " << i << ": omega must be finite and > 0";
        else if (i > 0 && p.omega <= t.points[i - 1].omega)
            msg << "tabulated node " << i << ": omega not strictly increasing";
        else if (!std::isfinite(p.value.real()) || !std::isfinite(p.value.imag()))
            msg << "tabulated node " << i << ": non-finite impedance";
        else if (p.value.real() < 0.0)
            msg << "tabulated node " << i << ": non-passive impedance (Re = " << p.value.real() << " < 0)";
        else
            continue;
        throw Error(ErrorKind::Validation, msg.str());
    }
    model_ = std::move(t);
}

Complex ImpedanceModel::eval(double omega) const
{
    if (omega == 0.0)
        throw Error(ErrorKind::Domain, "impedance undefined at omega = 0");
    if (!std::isfinite(omega))
        throw Error(ErrorKind::Domain, "impedance undefined at non-finite omega");

    struct Visitor
    {
        double omega;
        Complex operator()(const Mass& m) const { return {0.0, -omega * m.mass}; }
        Complex operator()(const Damper& d) const { return {d.damping, 0.0}; }
        // k / (-i omega) = i k / omega
        Complex operator()(const Spring& s) const { return {0.0, s.stiffness / omega}; }
        Complex operator()(const Sum& s) const
        {
            Complex total{0.0, 0.0};
            for (const auto& term : s.terms)
                total += term.eval(omega);
            return total;
        }
        Complex operator()(const Tabulated& t) const { return interpolate(t.points, omega); }
    };
    return std::visit(Visitor{omega}, model_);
}

double ImpedanceModel::min_omega() const
{
    if (const auto* t = std::get_if<Tabulated>(&model_))
        return t->points.front().omega;
    if (const auto* s = std::get_if<Sum>(&model_))
    {
        double lo = 0.0;
        for (const auto& term : s->terms)
            lo = std::max(lo, term.min_omega());
        return lo;
    }
    return 0.0;
}

double ImpedanceModel::max_omega() const
{
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (const auto* t = std::get_if<Tabulated>(&model_))
        return t->points.back().omega;
    if (const auto* s = std::get_if<Sum>(&model_))
    {
        double hi = inf;
        for (const auto& term : s->terms)
            hi = std::min(hi, term.max_omega());
        return hi;
    }
    return inf;
}

}  // namespace dragfree
