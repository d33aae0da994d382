// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "budget.hpp"
#include "closed_loop.hpp"
#include "commands.hpp"
#include "config.hpp"
#include "fdt.hpp"

using namespace dragfree;

namespace
{

constexpr auto& kNat = kNaturalConstants;

struct Outcome
{
    bool passed;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

double rel(double a, double b)
{
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

// Xi_p = -1i, Xi_c = -2i, Xi_s = 0.1 + 0.9i at omega = 1.
SystemParams standard_system()
{
    SystemParams p;
    p.proof_mass = ImpedanceModel::mass(1.0);
    p.cage = ImpedanceModel::mass(2.0);
    p.coupling = ImpedanceModel::sum({ImpedanceModel::damper(0.1), ImpedanceModel::spring(0.9)});
    p.amplifier = {0.0, 2.0, 1.0};
    return p;
}

SystemParams random_system(std::mt19937_64& rng, double lo, double hi)
{
    std::uniform_real_distribution<double> exponent(std::log10(lo), std::log10(hi));
    std::uniform_real_distribution<double> t_exp(-3.0, 3.0);
    std::uniform_real_distribution<double> rho_exp(-2.0, 2.0);
    std::bernoulli_distribution zero(0.25);
    const auto draw = [&] { return std::pow(10.0, exponent(rng)); };
    const auto temperature = [&] { return zero(rng) ? 0.0 : std::pow(10.0, t_exp(rng)); };
    SystemParams p;
    p.proof_mass = ImpedanceModel::sum({ImpedanceModel::mass(draw()), ImpedanceModel::damper(draw()),
                                        ImpedanceModel::spring(draw())});
    p.cage = ImpedanceModel::sum({ImpedanceModel::mass(draw()), ImpedanceModel::damper(draw()),
                                  ImpedanceModel::spring(draw())});
    p.coupling = ImpedanceModel::sum({ImpedanceModel::mass(draw()), ImpedanceModel::damper(draw()),
                                      ImpedanceModel::spring(draw())});
    p.temperatures = {temperature(), temperature(), temperature()};
    p.amplifier = {temperature(), draw(), std::pow(10.0, rho_exp(rng))};
    return p;
}

Outcome closed_form_equivalence()
{
    const auto start = Clock::now();
    std::mt19937_64 rng(20240101);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i)
    {
        const SystemParams p = random_system(rng, 1e-3, 1e3);
        const double omega = std::pow(10.0, std::uniform_real_distribution<double>(-2.0, 2.0)(rng));
        worst = std::max(worst, rel(proof_mass_closed_form(p, omega, kNat),
                                    assemble_spectrum(p, omega, Target::ProofMass, Regime::HighGain, kNat).total));
        worst = std::max(worst, rel(cage_closed_form(p, omega, kNat),
                                    assemble_spectrum(p, omega, Target::Cage, Regime::HighGain, kNat).total));
    }
    const double t = seconds_since(start);
    return {worst <= 1e-12 && t <= 10.0,
            "max relative error " + fmt(worst) + " (tol 1e-12) over 1000 systems, " + fmt(t) + " s (limit 10 s)"};
}

Outcome high_gain_convergence()
{
    const auto start = Clock::now();
    const SystemParams p = standard_system();
    const std::vector<double> grid{1.0};
    std::vector<GainDefect> sweep;
    for (int k = 3; k <= 8; ++k)
        sweep.push_back(worst_defect(p, grid, std::pow(10.0, k)));
    const double slope = log_log_slope(sweep);
    const double at_1e6 = sweep[3].defect;
    const double t = seconds_since(start);
    return {std::abs(slope + 1.0) <= 0.1 && at_1e6 <= 1e-4 && t <= 1.0,
            "slope " + fmt(slope) + " (want -1 +/- 0.1), defect at |G|=1e6 " + fmt(at_1e6) + " (tol 1e-4), " +
                fmt(t) + " s (limit 1 s)"};
}

Outcome optimal_matching()
{
    const auto start = Clock::now();
    std::mt19937_64 rng(20240103);
    double worst_rho = 0.0;
    double worst_min = 0.0;
    for (int i = 0; i < 100; ++i)
    {
        const SystemParams p = random_system(rng, 1e-2, 1e2);
        const double omega = std::pow(10.0, std::uniform_real_distribution<double>(-1.0, 1.0)(rng));
        const Complex xp = p.proof_mass.eval(omega);
        const Complex xs = p.coupling.eval(omega);
        const double energy = effective_energy(p.amplifier.omega_t, p.amplifier.noise_temperature, kNat);

        const OptimizationResult pm = optimize_rho_numeric(p, omega, Target::ProofMass, kNat);
        worst_rho = std::max(worst_rho, rel(pm.rho, 1.0));
        worst_min = std::max(worst_min, rel(pm.amplifier_minimum, 8.0 * energy * std::abs(xs)));

        const OptimizationResult cage = optimize_rho_numeric(p, omega, Target::Cage, kNat);
        worst_rho = std::max(worst_rho, rel(cage.rho, std::abs(xp + xs) / std::abs(xs)));
        worst_min = std::max(worst_min, rel(cage.amplifier_minimum, 8.0 * energy * std::abs(xp + xs)));
    }
    const double t = seconds_since(start);
    return {worst_rho <= 1e-6 && worst_min <= 1e-9 && t <= 5.0,
            "rho* max relative error " + fmt(worst_rho) + " (tol 1e-6), minima " + fmt(worst_min) +
                " (tol 1e-9) over 100 systems, " + fmt(t) + " s (limit 5 s)"};
}

Outcome zero_temperature_identity()
{
    const auto start = Clock::now();
    const SystemParams p = standard_system();
    const GridSpec grid{1e-3, 1e3, 1000, Spacing::Log};
    double worst = 0.0;
    for (double omega : grid.values())
        worst = std::max(worst, rel(zero_temperature_spectrum(p, omega, kNat), proof_mass_closed_form(p, omega, kNat)));
    const double t = seconds_since(start);
    return {worst <= 1e-12 && t <= 1.0,
            "max relative difference " + fmt(worst) + " (tol 1e-12) on 1000-point grid, " + fmt(t) +
                " s (limit 1 s)"};
}

Outcome fdt_limits()
{
    const auto start = Clock::now();
    std::mt19937_64 rng(20240105);
    std::uniform_real_distribution<double> wide(-8.0, 8.0);
    bool zero_point_exact = true;
    for (int i = 0; i < 100000; ++i)
    {
        const double omega = std::pow(10.0, wide(rng)) * (i % 2 ? 1.0 : -1.0);
        zero_point_exact = zero_point_exact && effective_energy(omega, 0.0, kNat) == 0.5 * std::abs(omega) &&
                           effective_energy(omega, 0.0, kSIConstants) == 0.5 * kSIConstants.hbar * std::abs(omega);
    }

    std::uniform_real_distribution<double> x_exp(-12.0, -3.0);
    std::uniform_real_distribution<double> t_exp(-4.0, 4.0);
    double worst_classical = 0.0;  // deviation / (x^2 / 3)
    for (int i = 0; i < 100000; ++i)
    {
        const double temperature = std::pow(10.0, t_exp(rng));
        const double omega = 2.0 * std::pow(10.0, x_exp(rng)) * temperature;
        const double x = omega / (2.0 * temperature);
        const double deviation = std::abs(effective_energy(omega, temperature, kNat) - temperature) / temperature;
        worst_classical = std::max(worst_classical, deviation / (x * x / 3.0));
    }

    std::uniform_real_distribution<double> pair_exp(-6.0, 6.0);
    const AmplifierParams base{0.37, 1.9, 1.0};
    const double four_energy = 4.0 * effective_energy(base.omega_t, base.noise_temperature, kNat);
    double worst_product = 0.0;
    for (int i = 0; i < 1000000; ++i)
    {
        AmplifierParams amp = base;
        amp.rho = std::pow(10.0, pair_exp(rng));
        const AmplifierSpectra s = amplifier_spectra(amp, std::pow(10.0, pair_exp(rng)), kNat);
        worst_product = std::max(worst_product, rel(s.back_action * s.sensing_error, four_energy * four_energy));
    }
    const double t = seconds_since(start);
    return {zero_point_exact && worst_classical <= 1.001 && worst_product <= 1e-12 && t <= 5.0,
            std::string("zero-point ") + (zero_point_exact ? "exact" : "NOT exact") +
                ", classical deviation / (x^2/3) max " + fmt(worst_classical) + " (limit 1.001), product error " +
                fmt(worst_product) + " (tol 1e-12) over 1e6 pairs, " + fmt(t) + " s (limit 5 s)"};
}

Outcome drag_free_rejection()
{
    const auto start = Clock::now();
    SystemParams p = standard_system();
    const Transfer limit = high_gain_solution(p, 1.0, Source::CageForce);
    const bool exact = limit.proof_mass == Complex{} && limit.cage == Complex{};
    p.gain = GainModel(Complex{0.0, 0.0});
    const double open = std::abs(solve_finite_gain(p, 1.0, Source::CageForce).proof_mass);
    p.gain = GainModel(Complex{1e6, 0.0});
    const double closed = std::abs(solve_finite_gain(p, 1.0, Source::CageForce).proof_mass);
    const double ratio = closed / open;
    const double t = seconds_since(start);
    return {exact && ratio <= 1e-4 && t <= 1.0,
            std::string("high-gain transfer ") + (exact ? "identically zero" : "NONZERO") + ", |H(1e6)|/|H(0)| " +
                fmt(ratio) + " (tol 1e-4), " + fmt(t) + " s (limit 1 s)"};
}

int run(const std::string& command)
{
    const int status = std::system(command.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome end_to_end()
{
    const std::filesystem::path cli = DRAGFREE_CLI_PATH;
    const std::filesystem::path standard = std::filesystem::path(DRAGFREE_CONFIG_DIR) / "standard.yaml";
    const std::filesystem::path work = std::filesystem::temp_directory_path() / "dragfree_acceptance";
    std::filesystem::create_directories(work);

    const int verify_status = run(cli.string() + " verify --config " + standard.string() + " > " +
                                  (work / "verify.txt").string());

    // Same system on a 1000-point grid.
    RunConfig config = load_config(standard);
    config.grid = {1e-2, 1e2, 1000, Spacing::Log};
    const auto config_path = work / "grid1000.yaml";
    std::ofstream(config_path) << to_canonical_text(config);
    const auto csv_path = work / "spectrum.csv";

    const auto start = Clock::now();
    const int spectrum_status =
        run(cli.string() + " spectrum --config " + config_path.string() + " --out " + csv_path.string());
    const double t = seconds_since(start);

    std::ifstream csv(csv_path);
    std::string line;
    std::getline(csv, line);
    std::size_t rows = 0;
    double worst = 0.0;
    while (std::getline(csv, line))
    {
        std::vector<double> cells;
        std::istringstream in(line);
        std::string cell;
        while (std::getline(in, cell, ','))
            cells.push_back(std::stod(cell));
        if (cells.size() != 7)
            return {false, "malformed CSV row " + std::to_string(rows)};
        double sum = 0.0;
        for (std::size_t j = 1; j <= 5; ++j)
            sum += cells[j];
        worst = std::max(worst, rel(sum, cells[6]));
        ++rows;
    }
    return {verify_status == 0 && spectrum_status == 0 && rows == 1000 && worst <= 1e-12 && t <= 1.0,
            "verify exit " + std::to_string(verify_status) + ", spectrum exit " + std::to_string(spectrum_status) +
                ", " + std::to_string(rows) + " rows, column-sum error " + fmt(worst) + " (tol 1e-12), " + fmt(t) +
                " s (limit 1 s)"};
}

}  // namespace

int main()
{
    const std::array<std::pair<const char*, std::function<Outcome()>>, 7> criteria{{
        {"closed-form equivalence", closed_form_equivalence},
        {"high-gain convergence", high_gain_convergence},
        {"optimal matching", optimal_matching},
        {"zero-temperature identity", zero_temperature_identity},
        {"FDT limits", fdt_limits},
        {"drag-free rejection", drag_free_rejection},
        {"end-to-end CLI", end_to_end},
    }};

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i)
    {
        Outcome outcome{false, ""};
        try
        {
            outcome = criteria[i].second();
        }
        catch (const std::exception& e)
        {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        failures += outcome.passed ? 0 : 1;
        std::printf("%s  [%zu] %s: %s\n", outcome.passed ? "PASS" : "FAIL", i + 1, criteria[i].first,
                    outcome.detail.c_str());
    }
    std::printf("%s: %d of %zu criteria failed\n", failures ? "FAILED" : "OK", failures, criteria.size());
    return failures ? 1 : 0;
}
