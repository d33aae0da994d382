// Command-line front end. Talks to the library only through the C API.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dragfree/dragfree.h"

namespace
{

struct ConfigDeleter
{
    void operator()(dfn_config* c) const { dfn_config_free(c); }
};
using ConfigHandle = std::unique_ptr<dfn_config, ConfigDeleter>;

struct StringDeleter
{
    void operator()(char* s) const { dfn_string_free(s); }
};
using OwnedString = std::unique_ptr<char, StringDeleter>;

int report_error(dfn_status status)
{
    const char* message = dfn_last_error();
    std::cerr << "dragfree: " << (*message ? message : dfn_status_name(status)) << '\n';
    return static_cast<int>(status);
}

int emit(const char* text, const std::string& out_path)
{
    if (out_path.empty() || out_path == "-")
    {
        std::cout << text;
        std::cout.flush();
        return DFN_OK;
    }
    std::ofstream out(out_path);
    if (!out || !(out << text))
    {
        std::cerr << "dragfree: io: cannot write '" << out_path << "'\n";
        return DFN_ERR_IO;
    }
    return DFN_OK;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Noise budget of a drag-free proof mass / cage servo system", "dragfree"};
    app.require_subcommand(1);
    app.set_version_flag("--version", dfn_version());

    std::string config_path;
    std::string out_path;
    std::string target;
    std::string regime;
    std::string units;
    std::vector<double> gains;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "YAML run configuration")->required();
        sub->add_option("--out", out_path, "output file (default stdout)");
        sub->add_option("--target", target, "proof-mass, cage or both")
            ->check(CLI::IsMember({"proof-mass", "cage", "both"}));
        sub->add_option("--regime", regime, "high-gain or finite-gain")
            ->check(CLI::IsMember({"high-gain", "finite-gain"}));
        sub->add_option("--units", units, "si or natural")->check(CLI::IsMember({"si", "natural"}));
    };

    CLI::App* spectrum = app.add_subcommand("spectrum", "per-source velocity noise CSV over the grid");
    CLI::App* optimize = app.add_subcommand("optimize", "analytic and numeric optimal matching ratio");
    CLI::App* verify = app.add_subcommand("verify", "run the built-in consistency suite");
    CLI::App* sweep = app.add_subcommand("sweep-gain", "high-gain convergence defect against |G|");
    for (CLI::App* sub : {spectrum, optimize, verify, sweep})
        add_common(sub);
    sweep->add_option("--gains", gains, "gain magnitudes (comma separated); default sweep.gains from config")
        ->delimiter(',');

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp& e)
    {
        return app.exit(e);
    }
    catch (const CLI::CallForVersion& e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError& e)
    {
        app.exit(e);
        return DFN_ERR_USAGE;
    }

    dfn_config* raw = nullptr;
    if (dfn_status s = dfn_config_load(config_path.c_str(), &raw); s != DFN_OK)
        return report_error(s);
    ConfigHandle config(raw);

    if (!target.empty())
        dfn_config_set_target(config.get(), target == "proof-mass" ? DFN_TARGET_PROOF_MASS
                                            : target == "cage"     ? DFN_TARGET_CAGE
                                                                   : DFN_TARGET_BOTH);
    if (!regime.empty())
        dfn_config_set_regime(config.get(), regime == "high-gain" ? DFN_REGIME_HIGH_GAIN : DFN_REGIME_FINITE_GAIN);
    if (!units.empty())
        dfn_config_set_units(config.get(), units == "si" ? DFN_UNITS_SI : DFN_UNITS_NATURAL);

    char* text = nullptr;
    dfn_status status = DFN_OK;
    if (spectrum->parsed())
    {
        status = dfn_spectrum_csv(config.get(), &text);
    }
    else if (optimize->parsed())
    {
        status = dfn_optimize_report(config.get(), &text);
    }
    else if (verify->parsed())
    {
        status = dfn_verify_report(config.get(), &text);
    }
    else
    {
        if (gains.empty())
        {
            size_t count = 0;
            dfn_config_sweep_gains(config.get(), nullptr, 0, &count);
            gains.resize(count);
            dfn_config_sweep_gains(config.get(), gains.data(), gains.size(), &count);
        }
        if (gains.empty())
        {
            std::cerr << "dragfree: usage: sweep-gain needs --gains or sweep.gains in the config\n";
            return DFN_ERR_USAGE;
        }
        status = dfn_sweep_gain_csv(config.get(), gains.data(), gains.size(), &text);
    }
    OwnedString owned(text);

    if (owned)
    {
        if (int io = emit(owned.get(), out_path); io != DFN_OK)
            return io;
    }
    if (status != DFN_OK)
        return report_error(status);
    return DFN_OK;
}
