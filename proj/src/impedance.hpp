#pragma once

#include <complex>
#include <variant>
#include <vector>

namespace dragfree
{

using Complex = std::complex<double>;

// Mechanical impedances are force per unit velocity [N s/m]. Time derivatives
// map to multiplication by -i*omega; the electronics convention follows from
// the substitution j -> -i.

struct Mass
{
    double mass;
};

struct Damper
{
    double damping;
};

struct Spring
{
    double stiffness;
};

struct TabulatedPoint
{
    double omega;
    Complex value;
};

class ImpedanceModel;

struct Sum
{
    std::vector<ImpedanceModel> terms;
};

struct Tabulated
{
    std::vector<TabulatedPoint> points;
};

/// Immutable impedance tree. Construction validates parameters; a tabulated
/// table must be strictly increasing in omega > 0 and passive at every node.
class ImpedanceModel
{
public:
    using Variant = std::variant<Mass, Damper, Spring, Sum, Tabulated>;

    ImpedanceModel(Mass m);
    ImpedanceModel(Damper d);
    ImpedanceModel(Spring s);
    ImpedanceModel(Sum s);
    ImpedanceModel(Tabulated t);

    static ImpedanceModel mass(double m) { return ImpedanceModel(Mass{m}); }
    static ImpedanceModel damper(double gamma) { return ImpedanceModel(Damper{gamma}); }
    static ImpedanceModel spring(double k) { return ImpedanceModel(Spring{k}); }
    static ImpedanceModel sum(std::vector<ImpedanceModel> terms) { return ImpedanceModel(Sum{std::move(terms)}); }
    static ImpedanceModel tabulated(std::vector<TabulatedPoint> points) { return ImpedanceModel(Tabulated{std::move(points)}); }

    const Variant& variant() const noexcept { return model_; }

    /// Complex impedance at omega. Throws Domain for omega == 0 and Range
    /// when a tabulated node range does not cover omega.
    Complex eval(double omega) const;

    /// Dissipative part; this is what feeds the Langevin force spectrum.
    double real_part(double omega) const { return eval(omega).real(); }
    double magnitude(double omega) const { return std::abs(eval(omega)); }

    /// Frequency range over which eval is defined; (0, inf) unless tabulated
    /// nodes restrict it.
    double min_omega() const;
    double max_omega() const;

private:
    Variant model_;
};

}  // namespace dragfree
