#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "errors.hpp"

namespace dragfree
{
namespace
{

constexpr std::array<const char*, kSourceCount> kColumnNames{"src_fp", "src_fs", "src_ft", "src_vse", "src_fc"};

std::vector<Target> targets_of(TargetSelection selection)
{
    switch (selection)
    {
    case TargetSelection::ProofMass: return {Target::ProofMass};
    case TargetSelection::Cage: return {Target::Cage};
    case TargetSelection::Both: return {Target::ProofMass, Target::Cage};
    }
    return {};
}

double relative(double a, double b)
{
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

std::vector<double> decade_ladder(double from, double to)
{
    std::vector<double> out;
    for (double g = from; g <= to * 1.0000001; g *= 10.0)
        out.push_back(g);
    return out;
}

// Runs one named check, turning numerical errors into a failed result.
template <typename F>
void run_check(VerifyOutcome& outcome, const char* name, double threshold, F&& body)
{
    CheckResult r;
    r.name = name;
    r.threshold = threshold;
    try
    {
        body(r);
    }
    catch (const Error& e)
    {
        r.passed = false;
        r.detail = e.what();
        if (e.kind() == ErrorKind::Singular || e.kind() == ErrorKind::DegenerateCoupling)
            outcome.numerical_failure = true;
    }
    outcome.checks.push_back(std::move(r));
}

}  // namespace

std::string format_number(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

bool VerifyThresholds::set(std::string_view name, double value)
{
    if (name == "closed_form")
        closed_form = value;
    else if (name == "gain_slope")
        gain_slope_tolerance = value;
    else if (name == "gain_defect")
        gain_defect = value;
    else if (name == "zero_temperature")
        zero_temperature = value;
    else if (name == "conjugate_product")
        conjugate_product = value;
    else if (name == "drag_free_rejection")
        drag_free_rejection = value;
    else if (name == "rho_optimum")
        rho_optimum = value;
    else
        return false;
    return true;
}

std::string spectrum_csv(const RunConfig& config)
{
    const auto& c = constants(config.units);
    const std::vector<double> grid = config.grid.values();
    const std::vector<Target> targets = targets_of(config.target);
    const bool paired = targets.size() > 1;

    std::vector<SpectrumTable> tables;
    for (Target t : targets)
        tables.push_back(budget_decomposition(config.system, grid, t, config.regime, c));

    std::ostringstream out;
    out << "omega_rad_s";
    for (Target t : targets)
    {
        const std::string prefix = paired ? (t == Target::ProofMass ? "pm_" : "cage_") : "";
        for (const char* name : kColumnNames)
            out << ',' << prefix << name;
        out << ',' << prefix << "total";
    }
    out << '\n';
    for (std::size_t i = 0; i < grid.size(); ++i)
    {
        out << format_number(grid[i]);
        for (const auto& table : tables)
        {
            for (const auto& column : table.columns)
                out << ',' << format_number(column[i]);
            out << ',' << format_number(table.total[i]);
        }
        out << '\n';
    }
    return out.str();
}

std::string optimize_report(const RunConfig& config)
{
    const auto& c = constants(config.units);
    const std::vector<double> grid = config.grid.values();
    std::ostringstream out;
    out << "# optimal impedance matching ratio (" << to_string(config.units) << " units)\n";
    out << "target,omega_rad_s,rho_analytic,rho_numeric,rho_relative_difference,minimum_analytic,"
           "minimum_numeric,amplifier_term_minimum\n";
    double worst = 0.0;
    for (Target t : targets_of(config.target))
    {
        for (double omega : grid)
        {
            const RhoOptimum opt = optimize_rho(config.system, omega, t, c);
            const double diff = opt.relative_rho_difference();
            worst = std::max(worst, diff);
            out << to_string(t) << ',' << format_number(omega) << ',' << format_number(opt.analytic.rho) << ','
                << format_number(opt.numeric.rho) << ',' << format_number(diff) << ','
                << format_number(opt.analytic.minimum) << ',' << format_number(opt.numeric.minimum) << ','
                << format_number(opt.analytic.amplifier_minimum) << '\n';
        }
    }
    out << "# max relative rho difference " << format_number(worst) << " (tolerance 1e-06): "
        << (worst <= 1e-6 ? "ok" : "EXCEEDED") << '\n';
    return out.str();
}

GainDefect worst_defect(const SystemParams& params, std::span<const double> grid, double gain)
{
    GainDefect worst;
    worst.gain = gain;
    worst.defect = -1.0;
    for (double omega : grid)
    {
        for (Source s : kConvergingSources)
        {
            double d = 0.0;
            try
            {
                d = convergence_defect(params, omega, s, gain);
            }
            catch (const Error& e)
            {
                std::ostringstream msg;
                msg << e.what() << ", |G| = " << gain;
                throw Error(e.kind(), msg.str());
            }
            if (d > worst.defect)
                worst = {gain, d, omega, s};
        }
    }
    return worst;
}

double log_log_slope(std::span<const GainDefect> sweep)
{
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double n = static_cast<double>(sweep.size());
    for (const auto& p : sweep)
    {
        const double x = std::log10(p.gain);
        const double y = std::log10(p.defect);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::string sweep_gain_csv(const RunConfig& config, std::span<const double> gains)
{
    if (gains.empty())
        throw Error(ErrorKind::Usage, "sweep-gain needs at least one gain magnitude");
    for (double g : gains)
        if (!(g >= 0.0) || !std::isfinite(g))
            throw Error(ErrorKind::Usage, "gain magnitudes must be finite and >= 0");
    const std::vector<double> grid = config.grid.values();
    std::ostringstream out;
    out << "gain_magnitude,max_defect,worst_omega_rad_s,worst_source\n";
    for (double g : gains)
    {
        const GainDefect d = worst_defect(config.system, grid, g);
        out << format_number(g) << ',' << format_number(d.defect) << ',' << format_number(d.omega) << ','
            << to_string(d.source) << '\n';
    }
    return out.str();
}

bool VerifyOutcome::all_passed() const
{
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& r) { return r.passed; });
}

std::string VerifyOutcome::report() const
{
    std::ostringstream out;
    for (const auto& r : checks)
    {
        out << (r.passed ? "PASS " : "FAIL ") << r.name;
        if (r.detail.empty())
            out << ": measured " << format_number(r.measured) << ", threshold " << format_number(r.threshold);
        else
            out << ": " << r.detail;
        out << '\n';
    }
    out << (all_passed() ? "all checks passed" : "verification FAILED") << '\n';
    return out.str();
}

VerifyOutcome run_verify(const RunConfig& config, const VerifyThresholds& th)
{
    const auto& c = constants(config.units);
    const SystemParams& params = config.system;
    const std::vector<double> grid = config.grid.values();
    VerifyOutcome outcome;

    run_check(outcome, "coupling_nondegenerate", 0.0, [&](CheckResult& r) {
        double smallest = std::numeric_limits<double>::infinity();
        for (double omega : grid)
        {
            smallest = std::min(smallest, params.coupling.magnitude(omega));
            if (!(smallest > 0.0))
            {
                std::ostringstream msg;
                msg << "degenerate coupling: |Xi_s| = 0 at omega = " << omega;
                throw Error(ErrorKind::DegenerateCoupling, msg.str());
            }
        }
        r.measured = smallest;
        r.passed = true;
    });

    run_check(outcome, "closed_form", th.closed_form, [&](CheckResult& r) {
        for (double omega : grid)
            for (Target t : {Target::ProofMass, Target::Cage})
            {
                const double assembled = assemble_spectrum(params, omega, t, Regime::HighGain, c).total;
                r.measured = std::max(r.measured, relative(closed_form(params, omega, t, c), assembled));
            }
        r.passed = r.measured <= th.closed_form;
    });

    std::vector<GainDefect> sweep;
    run_check(outcome, "gain_slope", th.gain_slope_tolerance, [&](CheckResult& r) {
        for (double g : decade_ladder(1e3, 1e8))
            sweep.push_back(worst_defect(params, grid, g));
        const double slope = log_log_slope(sweep);
        r.measured = std::abs(slope + 1.0);
        r.passed = r.measured <= th.gain_slope_tolerance;
        std::ostringstream msg;
        msg << "slope " << format_number(slope) << ", |slope + 1| = " << format_number(r.measured)
            << ", threshold " << format_number(th.gain_slope_tolerance);
        r.detail = msg.str();
    });

    run_check(outcome, "gain_defect", th.gain_defect, [&](CheckResult& r) {
        r.measured = worst_defect(params, grid, 1e6).defect;
        r.passed = r.measured <= th.gain_defect;
    });

    run_check(outcome, "zero_temperature", th.zero_temperature, [&](CheckResult& r) {
        SystemParams cold = params;
        cold.temperatures = {};
        cold.amplifier.noise_temperature = 0.0;
        cold.amplifier.rho = 1.0;
        for (double omega : grid)
            r.measured = std::max(r.measured, relative(zero_temperature_spectrum(cold, omega, c),
                                                       proof_mass_closed_form(cold, omega, c)));
        r.passed = r.measured <= th.zero_temperature;
    });

    run_check(outcome, "conjugate_product", th.conjugate_product, [&](CheckResult& r) {
        const double energy = effective_energy(params.amplifier.omega_t, params.amplifier.noise_temperature, c);
        const double expected = 16.0 * energy * energy;
        for (double omega : grid)
        {
            const AmplifierSpectra s = amplifier_spectra(params.amplifier, params.coupling.magnitude(omega), c);
            r.measured = std::max(r.measured, relative(s.back_action * s.sensing_error, expected));
        }
        r.passed = r.measured <= th.conjugate_product;
    });

    run_check(outcome, "drag_free_rejection", th.drag_free_rejection, [&](CheckResult& r) {
        SystemParams open = params;
        open.gain = GainModel(Complex{0.0, 0.0});
        SystemParams closed = params;
        closed.gain = GainModel(Complex{1e6, 0.0});
        bool exact_zero = true;
        for (double omega : grid)
        {
            const Transfer limit = high_gain_solution(params, omega, Source::CageForce);
            exact_zero = exact_zero && limit.proof_mass == Complex{} && limit.cage == Complex{};
            const double reference = std::abs(solve_finite_gain(open, omega, Source::CageForce).proof_mass);
            const double rejected = std::abs(solve_finite_gain(closed, omega, Source::CageForce).proof_mass);
            r.measured = std::max(r.measured, reference == 0.0 ? 0.0 : rejected / reference);
        }
        r.passed = exact_zero && r.measured <= th.drag_free_rejection;
        if (!exact_zero)
            r.detail = "high-gain cage-force transfer is not identically zero";
    });

    run_check(outcome, "rho_optimum", th.rho_optimum, [&](CheckResult& r) {
        for (double omega : grid)
            for (Target t : {Target::ProofMass, Target::Cage})
            {
                const RhoOptimum opt = optimize_rho(params, omega, t, c);
                if (!rho_in_search_bracket(opt.analytic.rho) && r.detail.empty())
                {
                    std::ostringstream msg;
                    msg << "analytic rho* = " << format_number(opt.analytic.rho) << " (" << to_string(t)
                        << ", omega = " << format_number(omega) << ") lies outside the numeric search bracket";
                    r.detail = msg.str();
                }
                r.measured = std::max(r.measured, opt.relative_rho_difference());
            }
        r.passed = r.measured <= th.rho_optimum;
    });

    return outcome;
}

}  // namespace dragfree
