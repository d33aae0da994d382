#include <doctest.h>

#include <cmath>
#include <random>
#include <string>

#include "config.hpp"
#include "errors.hpp"

using namespace dragfree;

namespace
{

const char* kMinimal = R"(
units: natural
system:
  proof_mass: {type: mass, M: 1}
  cage: {type: mass, M: 2}
  coupling: {type: damper, gamma: 0.1}
  amplifier: {omega_t: 2}
grid: {omega_min: 0.1, omega_max: 10, points: 5}
)";

std::string replace(std::string text, const std::string& from, const std::string& to)
{
    const auto pos = text.find(from);
    REQUIRE(pos != std::string::npos);
    return text.replace(pos, from.size(), to);
}

Error parse_error(const std::string& text)
{
    try
    {
        (void)parse_config(text);
    }
    catch (const Error& e)
    {
        return e;
    }
    FAIL("expected parse_config to throw");
    return Error(ErrorKind::Usage, "");
}

bool mentions(const Error& e, const std::string& needle)
{
    return std::string(e.what()).find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("minimal config")
{
    const RunConfig c = parse_config(kMinimal);
    CHECK(c.units == Units::Natural);
    CHECK(c.target == TargetSelection::ProofMass);
    CHECK(c.regime == Regime::HighGain);
    CHECK(c.system.proof_mass.eval(1.0) == Complex(0.0, -1.0));
    CHECK(c.system.coupling.eval(1.0) == Complex(0.1, 0.0));
    CHECK(c.system.temperatures.proof_mass == 0.0);
    CHECK(c.system.amplifier.rho == 1.0);
    CHECK(c.system.amplifier.omega_t == 2.0);
    CHECK(c.grid.points == 5);
    CHECK(c.sweep_gains.empty());
}

TEST_CASE("validation errors name the key and line")
{
    SUBCASE("rho = 0")
    {
        const Error e = parse_error(replace(kMinimal, "{omega_t: 2}", "{omega_t: 2, rho: 0}"));
        CHECK(e.kind() == ErrorKind::Validation);
        CHECK(mentions(e, "amplifier.rho"));
        CHECK(mentions(e, "line 7"));
    }
    SUBCASE("negative mass")
    {
        const Error e = parse_error(replace(kMinimal, "{type: mass, M: 1}", "{type: mass, M: -1}"));
        CHECK(mentions(e, "system.proof_mass.M"));
    }
    SUBCASE("omega_min <= 0")
    {
        const Error e = parse_error(replace(kMinimal, "omega_min: 0.1", "omega_min: 0"));
        CHECK(mentions(e, "grid.omega_min"));
    }
    SUBCASE("non-passive tabulated coupling")
    {
        const Error e = parse_error(replace(kMinimal, "{type: damper, gamma: 0.1}",
                                            "{type: tabulated, points: [[0.1, 0.1, 0], [1, 0.2, 0], [10, -0.3, 1]]}"));
        CHECK(e.kind() == ErrorKind::Validation);
        CHECK(mentions(e, "system.coupling.points[2]"));
        CHECK(mentions(e, "node 2"));
    }
    SUBCASE("tabulated range must cover the grid")
    {
        const Error e = parse_error(replace(kMinimal, "{type: damper, gamma: 0.1}",
                                            "{type: tabulated, points: [[0.5, 0.1, 0], [10, 0.2, 0]]}"));
        CHECK(mentions(e, "system.coupling"));
        CHECK(mentions(e, "cover"));
    }
    SUBCASE("unknown key")
    {
        const Error e = parse_error(replace(kMinimal, "{omega_t: 2}", "{omega_t: 2, rh0: 1}"));
        CHECK(mentions(e, "system.amplifier.rh0"));
    }
    SUBCASE("unknown impedance type")
    {
        const Error e = parse_error(replace(kMinimal, "{type: mass, M: 2}", "{type: inerter, M: 2}"));
        CHECK(mentions(e, "system.cage.type"));
    }
    SUBCASE("non-numeric value")
    {
        const Error e = parse_error(replace(kMinimal, "gamma: 0.1", "gamma: lots"));
        CHECK(mentions(e, "system.coupling.gamma"));
    }
    SUBCASE("bad grid")
    {
        CHECK(mentions(parse_error(replace(kMinimal, "points: 5", "points: 0")), "grid.points"));
        CHECK(mentions(parse_error(replace(kMinimal, "points: 5", "points: 2.5")), "grid.points"));
        CHECK(mentions(parse_error(replace(kMinimal, "points: 5", "points: 1")), "grid.points"));
        CHECK(mentions(parse_error(replace(kMinimal, "omega_max: 10", "omega_max: 0.01")), "grid.omega_max"));
    }
    SUBCASE("SI runs need explicit temperatures")
    {
        const Error e = parse_error(replace(kMinimal, "units: natural", "units: si"));
        CHECK(mentions(e, "system.temperatures"));
    }
    SUBCASE("missing section")
    {
        CHECK(mentions(parse_error("units: natural\n"), "system"));
    }
}

TEST_CASE("syntax errors carry a line")
{
    const Error e = parse_error("system: [unclosed\n  grid: {\n");
    CHECK(e.kind() == ErrorKind::Syntax);
    CHECK(mentions(e, "line"));
}

TEST_CASE("grid spacing")
{
    GridSpec g{0.1, 10.0, 3, Spacing::Log};
    auto v = g.values();
    CHECK(v[0] == 0.1);
    CHECK(v[1] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(v[2] == 10.0);

    g.spacing = Spacing::Linear;
    v = g.values();
    CHECK(v[1] == doctest::Approx(5.05).epsilon(1e-15));

    const GridSpec single{1.0, 1.0, 1, Spacing::Log};
    CHECK(single.values() == std::vector<double>{1.0});
}

TEST_CASE("gain and disturbance forms")
{
    RunConfig c = parse_config(replace(kMinimal, "amplifier: {omega_t: 2}",
                                       "amplifier: {omega_t: 2}\n  gain: {re: 1.0e6, im: -3}\n  cage_disturbance: 0.5"));
    CHECK(c.system.gain.at(1.0) == Complex(1e6, -3.0));
    CHECK(c.system.cage_disturbance.at(3.0) == 0.5);

    c = parse_config(replace(kMinimal, "amplifier: {omega_t: 2}",
                             "amplifier: {omega_t: 2}\n  gain: {type: tabulated, points: [[0.1, 10, 0], [10, 1000, 0]]}\n"
                             "  cage_disturbance: {points: [[0.1, 1], [10, 2]]}"));
    CHECK_FALSE(c.system.gain.is_constant());
    CHECK(c.system.gain.at(10.0) == Complex(1000.0, 0.0));
    CHECK(c.system.cage_disturbance.at(10.0) == 2.0);

    const Error e = parse_error(replace(kMinimal, "amplifier: {omega_t: 2}",
                                        "amplifier: {omega_t: 2}\n  cage_disturbance: -1"));
    CHECK(mentions(e, "system.cage_disturbance"));
}

namespace
{

ImpedanceModel random_model(std::mt19937_64& rng, int depth)
{
    std::uniform_real_distribution<double> u(0.0, 10.0);
    std::uniform_int_distribution<int> kind(0, depth > 0 ? 4 : 3);
    switch (kind(rng))
    {
    case 0: return ImpedanceModel::mass(u(rng));
    case 1: return ImpedanceModel::damper(u(rng));
    case 2: return ImpedanceModel::spring(u(rng));
    case 3: {
        std::vector<TabulatedPoint> points;
        double w = 1e-3 * (1.0 + u(rng));
        for (int i = 0; i < 4; ++i, w *= 1e2 * (1.0 + u(rng)))
            points.push_back({w, {u(rng), u(rng) - 5.0}});
        return ImpedanceModel::tabulated(std::move(points));
    }
    default: {
        std::vector<ImpedanceModel> terms;
        for (int i = 0; i < 3; ++i)
            terms.push_back(random_model(rng, depth - 1));
        return ImpedanceModel::sum(std::move(terms));
    }
    }
}

}  // namespace

TEST_CASE("canonical text round-trips")
{
    std::mt19937_64 rng(211);
    std::uniform_real_distribution<double> u(0.0, 10.0);
    for (int i = 0; i < 200; ++i)
    {
        RunConfig c;
        c.units = i % 2 ? Units::SI : Units::Natural;
        c.target = static_cast<TargetSelection>(i % 3);
        c.regime = i % 4 < 2 ? Regime::HighGain : Regime::FiniteGain;
        c.system.proof_mass = random_model(rng, 2);
        c.system.cage = random_model(rng, 1);
        c.system.coupling = random_model(rng, 2);
        c.system.temperatures = {u(rng), u(rng), u(rng)};
        c.system.amplifier = {u(rng), 0.1 + u(rng), 0.01 + u(rng)};
        if (i % 3 == 0)
            c.system.gain = GainModel(std::vector<GainPoint>{{1e-4, {u(rng), u(rng)}}, {1e9, {u(rng), 0.0}}});
        else
            c.system.gain = GainModel(Complex{u(rng) * 1e5, u(rng)});
        c.system.cage_disturbance = CageDisturbance(u(rng));
        c.grid = {0.1, 1.0, 7, i % 2 ? Spacing::Log : Spacing::Linear};
        if (i % 5 == 0)
            c.sweep_gains = {0.0, 1e3, 1e4};

        const std::string text = to_canonical_text(c);
        const RunConfig back = parse_config(text);
        REQUIRE(to_canonical_text(back) == text);
        for (double omega : c.grid.values())
        {
            REQUIRE(back.system.proof_mass.eval(omega) == c.system.proof_mass.eval(omega));
            REQUIRE(back.system.coupling.eval(omega) == c.system.coupling.eval(omega));
            REQUIRE(back.system.gain.at(omega) == c.system.gain.at(omega));
        }
        REQUIRE(back.system.amplifier.rho == c.system.amplifier.rho);
        REQUIRE(back.sweep_gains == c.sweep_gains);
    }
}

TEST_CASE("option parsers")
{
    CHECK(parse_target("both") == TargetSelection::Both);
    CHECK_FALSE(parse_target("satellite").has_value());
    CHECK(parse_regime("finite-gain") == Regime::FiniteGain);
    CHECK(parse_units("si") == Units::SI);
    CHECK_FALSE(parse_units("cgs").has_value());
}
