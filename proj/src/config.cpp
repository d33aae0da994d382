#include "config.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "errors.hpp"

namespace dragfree
{
namespace
{

std::string join(const std::string& path, std::string_view key)
{
    return path.empty() ? std::string(key) : path + "." + std::string(key);
}

std::string indexed(const std::string& path, std::size_t i)
{
    return path + "[" + std::to_string(i) + "]";
}

[[noreturn]] void fail(const YAML::Node& node, const std::string& path, const std::string& message)
{
    std::ostringstream msg;
    const YAML::Mark mark = node.Mark();
    if (!mark.is_null())
        msg << "line " << mark.line + 1 << ": ";
    msg << path << ": " << message;
    throw Error(ErrorKind::Validation, msg.str());
}

void require_map(const YAML::Node& node, const std::string& path)
{
    if (!node.IsMap())
        fail(node, path, "expected a mapping");
}

void allow_keys(const YAML::Node& node, const std::string& path, std::initializer_list<std::string_view> keys)
{
    require_map(node, path);
    for (const auto& entry : node)
    {
        const auto key = entry.first.as<std::string>();
        bool known = false;
        for (auto k : keys)
            known = known || key == k;
        if (!known)
            fail(entry.first, join(path, key), "unknown key");
    }
}

double as_number(const YAML::Node& node, const std::string& path)
{
    if (!node.IsScalar())
        fail(node, path, "expected a number");
    double value = 0.0;
    if (!YAML::convert<double>::decode(node, value) || !std::isfinite(value))
        fail(node, path, "expected a finite number, got '" + node.Scalar() + "'");
    return value;
}

std::optional<double> optional_number(const YAML::Node& parent, const std::string& path, const char* key)
{
    const YAML::Node node = parent[key];
    if (!node)
        return std::nullopt;
    return as_number(node, join(path, key));
}

double required_number(const YAML::Node& parent, const std::string& path, const char* key)
{
    const YAML::Node node = parent[key];
    if (!node)
        fail(parent, join(path, key), "missing required key");
    return as_number(node, join(path, key));
}

double non_negative(const YAML::Node& parent, const std::string& path, const char* key,
                    std::optional<double> fallback)
{
    const YAML::Node node = parent[key];
    if (!node)
    {
        if (!fallback)
            fail(parent, join(path, key), "missing required key");
        return *fallback;
    }
    const double v = as_number(node, join(path, key));
    if (v < 0.0)
        fail(node, join(path, key), "must be >= 0");
    return v;
}

std::string as_string(const YAML::Node& node, const std::string& path)
{
    if (!node.IsScalar())
        fail(node, path, "expected a string");
    return node.Scalar();
}

std::vector<std::vector<double>> rows(const YAML::Node& node, const std::string& path, std::size_t width)
{
    if (!node.IsSequence() || node.size() == 0)
        fail(node, path, "expected a non-empty list of rows");
    std::vector<std::vector<double>> out;
    for (std::size_t i = 0; i < node.size(); ++i)
    {
        const YAML::Node row = node[i];
        if (!row.IsSequence() || row.size() != width)
            fail(row, indexed(path, i), "expected a row of " + std::to_string(width) + " numbers");
        std::vector<double> values;
        for (std::size_t j = 0; j < width; ++j)
            values.push_back(as_number(row[j], indexed(indexed(path, i), j)));
        out.push_back(std::move(values));
    }
    return out;
}

// Rewraps a model-level validation error with location information.
template <typename F>
auto located(const YAML::Node& node, const std::string& path, F&& build)
{
    try
    {
        return build();
    }
    catch (const Error& e)
    {
        if (e.kind() != ErrorKind::Validation)
            throw;
        fail(node, path, e.what());
    }
}

ImpedanceModel parse_impedance(const YAML::Node& node, const std::string& path)
{
    require_map(node, path);
    const YAML::Node type_node = node["type"];
    if (!type_node)
        fail(node, join(path, "type"), "missing required key");
    const std::string type = as_string(type_node, join(path, "type"));

    if (type == "mass")
    {
        allow_keys(node, path, {"type", "M"});
        return ImpedanceModel::mass(non_negative(node, path, "M", std::nullopt));
    }
    if (type == "damper")
    {
        allow_keys(node, path, {"type", "gamma"});
        return ImpedanceModel::damper(non_negative(node, path, "gamma", std::nullopt));
    }
    if (type == "spring")
    {
        allow_keys(node, path, {"type", "k"});
        return ImpedanceModel::spring(non_negative(node, path, "k", std::nullopt));
    }
    if (type == "sum")
    {
        allow_keys(node, path, {"type", "terms"});
        const YAML::Node terms = node["terms"];
        const std::string terms_path = join(path, "terms");
        if (!terms || !terms.IsSequence())
            fail(terms ? terms : node, terms_path, "expected a list of impedance models");
        std::vector<ImpedanceModel> children;
        for (std::size_t i = 0; i < terms.size(); ++i)
            children.push_back(parse_impedance(terms[i], indexed(terms_path, i)));
        return ImpedanceModel::sum(std::move(children));
    }
    if (type == "tabulated")
    {
        allow_keys(node, path, {"type", "points"});
        const std::string points_path = join(path, "points");
        const YAML::Node points = node["points"];
        if (!points)
            fail(node, points_path, "missing required key");
        const auto table = rows(points, points_path, 3);
        std::vector<TabulatedPoint> nodes;
        for (const auto& r : table)
            nodes.push_back({r[0], Complex{r[1], r[2]}});
        for (std::size_t i = 0; i < nodes.size(); ++i)
            if (nodes[i].value.real() < 0.0)
                fail(points[i], indexed(points_path, i),
                     "non-passive impedance at node " + std::to_string(i) + " (Re < 0)");
        return located(points, points_path, [&] { return ImpedanceModel::tabulated(std::move(nodes)); });
    }
    fail(type_node, join(path, "type"), "unknown impedance type '" + type + "'");
}

GainModel parse_gain(const YAML::Node& node, const std::string& path)
{
    if (node.IsScalar())
        return GainModel(Complex{as_number(node, path), 0.0});
    require_map(node, path);
    if (node["type"])
    {
        allow_keys(node, path, {"type", "points"});
        if (as_string(node["type"], join(path, "type")) != "tabulated")
            fail(node["type"], join(path, "type"), "gain type must be 'tabulated'");
        const std::string points_path = join(path, "points");
        if (!node["points"])
            fail(node, points_path, "missing required key");
        std::vector<GainPoint> table;
        for (const auto& r : rows(node["points"], points_path, 3))
            table.push_back({r[0], Complex{r[1], r[2]}});
        return located(node, points_path, [&] { return GainModel(std::move(table)); });
    }
    allow_keys(node, path, {"re", "im"});
    return GainModel(Complex{optional_number(node, path, "re").value_or(0.0),
                             optional_number(node, path, "im").value_or(0.0)});
}

CageDisturbance parse_disturbance(const YAML::Node& node, const std::string& path)
{
    if (node.IsScalar())
    {
        const double v = as_number(node, path);
        if (v < 0.0)
            fail(node, path, "must be >= 0");
        return CageDisturbance(v);
    }
    allow_keys(node, path, {"points"});
    const std::string points_path = join(path, "points");
    if (!node["points"])
        fail(node, points_path, "missing required key");
    std::vector<DisturbancePoint> table;
    for (const auto& r : rows(node["points"], points_path, 2))
        table.push_back({r[0], r[1]});
    return located(node, points_path, [&] { return CageDisturbance(std::move(table)); });
}

SystemParams parse_system(const YAML::Node& node, const std::string& path, Units units)
{
    allow_keys(node, path, {"proof_mass", "cage", "coupling", "temperatures", "amplifier", "gain", "cage_disturbance"});
    const auto child = [&](const char* key) {
        const YAML::Node c = node[key];
        if (!c)
            fail(node, join(path, key), "missing required key");
        return c;
    };

    SystemParams p;
    p.proof_mass = parse_impedance(child("proof_mass"), join(path, "proof_mass"));
    p.cage = parse_impedance(child("cage"), join(path, "cage"));
    p.coupling = parse_impedance(child("coupling"), join(path, "coupling"));

    // Natural-units runs default unspecified temperatures to zero; SI runs
    // must state them.
    const std::optional<double> temperature_default =
        units == Units::Natural ? std::optional<double>(0.0) : std::nullopt;
    const std::string t_path = join(path, "temperatures");
    if (const YAML::Node t = node["temperatures"])
    {
        allow_keys(t, t_path, {"proof_mass", "coupling", "cage"});
        p.temperatures.proof_mass = non_negative(t, t_path, "proof_mass", temperature_default);
        p.temperatures.coupling = non_negative(t, t_path, "coupling", temperature_default);
        p.temperatures.cage = non_negative(t, t_path, "cage", 0.0);
    }
    else if (units == Units::SI)
    {
        fail(node, t_path, "missing required key (SI runs need explicit temperatures)");
    }

    const std::string a_path = join(path, "amplifier");
    const YAML::Node amp = child("amplifier");
    allow_keys(amp, a_path, {"T_a", "omega_t", "rho"});
    p.amplifier.noise_temperature = non_negative(amp, a_path, "T_a", temperature_default);
    p.amplifier.omega_t = required_number(amp, a_path, "omega_t");
    if (p.amplifier.omega_t <= 0.0)
        fail(amp["omega_t"], join(a_path, "omega_t"), "must be > 0");
    if (const YAML::Node rho = amp["rho"])
    {
        p.amplifier.rho = as_number(rho, join(a_path, "rho"));
        if (p.amplifier.rho <= 0.0)
            fail(rho, join(a_path, "rho"), "must be > 0");
    }

    if (const YAML::Node g = node["gain"])
        p.gain = parse_gain(g, join(path, "gain"));
    if (const YAML::Node d = node["cage_disturbance"])
        p.cage_disturbance = parse_disturbance(d, join(path, "cage_disturbance"));
    return p;
}

GridSpec parse_grid(const YAML::Node& node, const std::string& path)
{
    allow_keys(node, path, {"omega_min", "omega_max", "points", "spacing"});
    GridSpec g;
    g.omega_min = required_number(node, path, "omega_min");
    if (g.omega_min <= 0.0)
        fail(node["omega_min"], join(path, "omega_min"), "must be > 0");
    g.omega_max = required_number(node, path, "omega_max");
    if (g.omega_max < g.omega_min)
        fail(node["omega_max"], join(path, "omega_max"), "must be >= omega_min");
    const double points = required_number(node, path, "points");
    if (points < 1.0 || points != std::floor(points) || points > 1e8)
        fail(node["points"], join(path, "points"), "must be a positive integer");
    g.points = static_cast<std::size_t>(points);
    if (g.points == 1 && g.omega_max != g.omega_min)
        fail(node["points"], join(path, "points"), "a single point needs omega_min == omega_max");
    if (g.points >= 2 && g.omega_max == g.omega_min)
        fail(node["omega_max"], join(path, "omega_max"), "must be > omega_min for points >= 2");
    if (const YAML::Node s = node["spacing"])
    {
        const std::string spacing = as_string(s, join(path, "spacing"));
        if (spacing == "log")
            g.spacing = Spacing::Log;
        else if (spacing == "linear")
            g.spacing = Spacing::Linear;
        else
            fail(s, join(path, "spacing"), "expected 'log' or 'linear'");
    }
    return g;
}

void check_coverage(const ImpedanceModel& model, const GridSpec& grid, const YAML::Node& node,
                    const std::string& path)
{
    if (grid.omega_min < model.min_omega() || grid.omega_max > model.max_omega())
        fail(node, path, "tabulated range does not cover the frequency grid");
}

template <typename Table>
void check_table_coverage(const Table& table, const GridSpec& grid, const YAML::Node& node,
                          const std::string& path)
{
    if (table.empty())
        return;
    if (grid.omega_min < table.front().omega || grid.omega_max > table.back().omega)
        fail(node, path, "tabulated range does not cover the frequency grid");
}

void emit_impedance(YAML::Emitter& out, const ImpedanceModel& model)
{
    out << YAML::BeginMap;
    struct Visitor
    {
        YAML::Emitter& out;
        void operator()(const Mass& m) const { out << YAML::Key << "type" << YAML::Value << "mass" << YAML::Key << "M" << YAML::Value << m.mass; }
        void operator()(const Damper& d) const
        {
            out << YAML::Key << "type" << YAML::Value << "damper" << YAML::Key << "gamma" << YAML::Value << d.damping;
        }
        void operator()(const Spring& s) const
        {
            out << YAML::Key << "type" << YAML::Value << "spring" << YAML::Key << "k" << YAML::Value << s.stiffness;
        }
        void operator()(const Sum& s) const
        {
            out << YAML::Key << "type" << YAML::Value << "sum" << YAML::Key << "terms" << YAML::Value << YAML::BeginSeq;
            for (const auto& term : s.terms)
                emit_impedance(out, term);
            out << YAML::EndSeq;
        }
        void operator()(const Tabulated& t) const
        {
            out << YAML::Key << "type" << YAML::Value << "tabulated" << YAML::Key << "points" << YAML::Value
                << YAML::BeginSeq;
            for (const auto& p : t.points)
                out << YAML::Flow << YAML::BeginSeq << p.omega << p.value.real() << p.value.imag() << YAML::EndSeq;
            out << YAML::EndSeq;
        }
    };
    std::visit(Visitor{out}, model.variant());
    out << YAML::EndMap;
}

}  // namespace

std::vector<double> GridSpec::values() const
{
    std::vector<double> out(points);
    if (points == 1)
    {
        out[0] = omega_min;
        return out;
    }
    const double n = static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i)
    {
        const double t = static_cast<double>(i) / n;
        out[i] = spacing == Spacing::Log ? omega_min * std::pow(omega_max / omega_min, t)
                                         : omega_min + t * (omega_max - omega_min);
    }
    out.front() = omega_min;
    out.back() = omega_max;
    return out;
}

std::string_view to_string(TargetSelection t) noexcept
{
    switch (t)
    {
    case TargetSelection::ProofMass: return "proof-mass";
    case TargetSelection::Cage: return "cage";
    case TargetSelection::Both: return "both";
    }
    return "?";
}

std::string_view to_string(Spacing s) noexcept
{
    return s == Spacing::Log ? "log" : "linear";
}

std::optional<TargetSelection> parse_target(std::string_view s)
{
    if (s == "proof-mass")
        return TargetSelection::ProofMass;
    if (s == "cage")
        return TargetSelection::Cage;
    if (s == "both")
        return TargetSelection::Both;
    return std::nullopt;
}

std::optional<Regime> parse_regime(std::string_view s)
{
    if (s == "high-gain")
        return Regime::HighGain;
    if (s == "finite-gain")
        return Regime::FiniteGain;
    return std::nullopt;
}

std::optional<Units> parse_units(std::string_view s)
{
    if (s == "natural")
        return Units::Natural;
    if (s == "si")
        return Units::SI;
    return std::nullopt;
}

RunConfig parse_config(std::string_view text)
{
    YAML::Node root;
    try
    {
        root = YAML::Load(std::string(text));
    }
    catch (const YAML::ParserException& e)
    {
        std::ostringstream msg;
        msg << "line " << e.mark.line + 1 << ", column " << e.mark.column + 1 << ": syntax error: " << e.msg;
        throw Error(ErrorKind::Syntax, msg.str());
    }
    if (!root || root.IsNull())
        throw Error(ErrorKind::Validation, "empty configuration");
    allow_keys(root, "", {"units", "target", "regime", "system", "grid", "sweep"});

    RunConfig config;
    if (const YAML::Node u = root["units"])
    {
        const auto units = parse_units(as_string(u, "units"));
        if (!units)
            fail(u, "units", "expected 'natural' or 'si'");
        config.units = *units;
    }
    if (const YAML::Node t = root["target"])
    {
        const auto target = parse_target(as_string(t, "target"));
        if (!target)
            fail(t, "target", "expected 'proof-mass', 'cage' or 'both'");
        config.target = *target;
    }
    if (const YAML::Node r = root["regime"])
    {
        const auto regime = parse_regime(as_string(r, "regime"));
        if (!regime)
            fail(r, "regime", "expected 'high-gain' or 'finite-gain'");
        config.regime = *regime;
    }

    const YAML::Node system = root["system"];
    if (!system)
        fail(root, "system", "missing required key");
    config.system = parse_system(system, "system", config.units);

    const YAML::Node grid = root["grid"];
    if (!grid)
        fail(root, "grid", "missing required key");
    config.grid = parse_grid(grid, "grid");

    check_coverage(config.system.proof_mass, config.grid, system["proof_mass"], "system.proof_mass");
    check_coverage(config.system.cage, config.grid, system["cage"], "system.cage");
    check_coverage(config.system.coupling, config.grid, system["coupling"], "system.coupling");
    check_table_coverage(config.system.gain.table(), config.grid, system["gain"], "system.gain");
    check_table_coverage(config.system.cage_disturbance.table(), config.grid, system["cage_disturbance"],
                         "system.cage_disturbance");

    if (const YAML::Node sweep = root["sweep"])
    {
        allow_keys(sweep, "sweep", {"gains"});
        const YAML::Node gains = sweep["gains"];
        if (gains)
        {
            if (!gains.IsSequence())
                fail(gains, "sweep.gains", "expected a list of gain magnitudes");
            for (std::size_t i = 0; i < gains.size(); ++i)
            {
                const double g = as_number(gains[i], indexed("sweep.gains", i));
                if (g < 0.0)
                    fail(gains[i], indexed("sweep.gains", i), "must be >= 0");
                config.sweep_gains.push_back(g);
            }
        }
    }
    return config;
}

RunConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorKind::Io, "cannot open config file '" + path.string() + "'");
    std::ostringstream text;
    text << in.rdbuf();
    try
    {
        return parse_config(text.str());
    }
    catch (const Error& e)
    {
        throw Error(e.kind(), path.string() + ": " + e.what());
    }
}

std::string to_canonical_text(const RunConfig& config)
{
    const SystemParams& s = config.system;
    YAML::Emitter out;
    out.SetDoublePrecision(17);
    out << YAML::BeginMap;
    out << YAML::Key << "units" << YAML::Value << std::string(to_string(config.units));
    out << YAML::Key << "target" << YAML::Value << std::string(to_string(config.target));
    out << YAML::Key << "regime" << YAML::Value << std::string(to_string(config.regime));

    out << YAML::Key << "system" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "proof_mass" << YAML::Value;
    emit_impedance(out, s.proof_mass);
    out << YAML::Key << "cage" << YAML::Value;
    emit_impedance(out, s.cage);
    out << YAML::Key << "coupling" << YAML::Value;
    emit_impedance(out, s.coupling);

    out << YAML::Key << "temperatures" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "proof_mass" << YAML::Value << s.temperatures.proof_mass;
    out << YAML::Key << "coupling" << YAML::Value << s.temperatures.coupling;
    out << YAML::Key << "cage" << YAML::Value << s.temperatures.cage;
    out << YAML::EndMap;

    out << YAML::Key << "amplifier" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "T_a" << YAML::Value << s.amplifier.noise_temperature;
    out << YAML::Key << "omega_t" << YAML::Value << s.amplifier.omega_t;
    out << YAML::Key << "rho" << YAML::Value << s.amplifier.rho;
    out << YAML::EndMap;

    out << YAML::Key << "gain" << YAML::Value;
    if (s.gain.is_constant())
    {
        out << YAML::BeginMap << YAML::Key << "re" << YAML::Value << s.gain.constant().real() << YAML::Key << "im"
            << YAML::Value << s.gain.constant().imag() << YAML::EndMap;
    }
    else
    {
        out << YAML::BeginMap << YAML::Key << "type" << YAML::Value << "tabulated" << YAML::Key << "points"
            << YAML::Value << YAML::BeginSeq;
        for (const auto& p : s.gain.table())
            out << YAML::Flow << YAML::BeginSeq << p.omega << p.value.real() << p.value.imag() << YAML::EndSeq;
        out << YAML::EndSeq << YAML::EndMap;
    }

    out << YAML::Key << "cage_disturbance" << YAML::Value;
    if (s.cage_disturbance.is_constant())
    {
        out << s.cage_disturbance.constant();
    }
    else
    {
        out << YAML::BeginMap << YAML::Key << "points" << YAML::Value << YAML::BeginSeq;
        for (const auto& p : s.cage_disturbance.table())
            out << YAML::Flow << YAML::BeginSeq << p.omega << p.psd << YAML::EndSeq;
        out << YAML::EndSeq << YAML::EndMap;
    }
    out << YAML::EndMap;

    out << YAML::Key << "grid" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "omega_min" << YAML::Value << config.grid.omega_min;
    out << YAML::Key << "omega_max" << YAML::Value << config.grid.omega_max;
    out << YAML::Key << "points" << YAML::Value << config.grid.points;
    out << YAML::Key << "spacing" << YAML::Value << std::string(to_string(config.grid.spacing));
    out << YAML::EndMap;

    if (!config.sweep_gains.empty())
    {
        out << YAML::Key << "sweep" << YAML::Value << YAML::BeginMap << YAML::Key << "gains" << YAML::Value
            << YAML::Flow << YAML::BeginSeq;
        for (double g : config.sweep_gains)
            out << g;
        out << YAML::EndSeq << YAML::EndMap;
    }
    out << YAML::EndMap;
    return std::string(out.c_str()) + "\n";
}

}  // namespace dragfree
