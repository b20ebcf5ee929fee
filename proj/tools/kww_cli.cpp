// kww: tabulate the transforms, regenerate the region table, print crossover
// frequencies, and run the audit.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kww/audit.hpp"
#include "kww/kww.hpp"

namespace {

struct Options {
    std::string kind = "both";
    std::vector<double> beta;
    double omega_min = 1.0;
    double omega_max = std::nan("");
    int points = 0;
    bool linear = false;
    double delta = kww::kDefaultDelta;
    std::string out;
    double beta_step = kww::kRegionBetaStep;
    double beta_min = kww::kBetaMin;
    double beta_max = kww::kBetaMax;
    bool verbose = false;
};

std::string num(double v)
{
    if (std::isnan(v))
        return "NA";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::vector<kww::TransformKind> kinds(const std::string& k)
{
    if (k == "cos")
        return {kww::TransformKind::Cosine};
    if (k == "sin")
        return {kww::TransformKind::Sine};
    return {kww::TransformKind::Cosine, kww::TransformKind::Sine};
}

std::vector<double> omega_grid(const Options& o)
{
    const double hi = std::isnan(o.omega_max) ? o.omega_min : o.omega_max;
    const int n = o.points > 0 ? o.points : (hi == o.omega_min ? 1 : 2);
    if (n == 1) {
        if (hi != o.omega_min)
            throw CLI::ValidationError("--points", "a single point needs --omega-min == --omega-max");
        return {o.omega_min};
    }
    if (!(o.omega_min < hi))
        throw CLI::ValidationError("--omega-max", "need omega-min < omega-max");
    if (!o.linear && !(o.omega_min > 0.0))
        throw CLI::ValidationError("--omega-min", "log spacing needs omega-min > 0");
    std::vector<double> grid;
    for (int i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / (n - 1);
        grid.push_back(o.linear ? o.omega_min + t * (hi - o.omega_min)
                                : std::exp(std::log(o.omega_min) + t * (std::log(hi) - std::log(o.omega_min))));
    }
    grid.back() = hi;
    return grid;
}

std::vector<double> beta_list(const Options& o)
{
    if (!o.beta.empty())
        return o.beta;
    return kww::default_beta_grid(o.beta_step, o.beta_min, o.beta_max);
}

// Writes to --out if given, else stdout.
void emit(const Options& o, const std::string& text)
{
    if (o.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(o.out, std::ios::binary);
    if (!f)
        throw std::runtime_error("cannot write " + o.out);
    f << text;
}

int cmd_tab(const Options& o)
{
    if (o.beta.empty())
        throw CLI::ValidationError("--beta", "tab needs at least one beta");
    const std::vector<double> grid = omega_grid(o);
    const kww::EvalOptions eval{o.delta};
    std::string text = "#omega\tvalue\tmethod\tbound\n";
    for (kww::TransformKind kind : kinds(o.kind))
        for (double beta : o.beta) {
            text += "# kind=" + std::string(kww::to_string(kind)) + " beta=" + num(beta) + "\n";
            for (double omega : grid) {
                const kww::EvalResult r = kww::evaluate(kind, omega, beta, eval);
                text += num(omega) + "\t" + num(r.value) + "\t" + std::string(kww::to_string(r.method)) + "\t"
                        + num(r.certified_bound) + "\n";
            }
        }
    emit(o, text);
    return 0;
}

int cmd_limits(const Options& o)
{
    const kww::ScanReport report = kww::build_region_table(beta_list(o), o.delta);
    for (const kww::ScanIssue& issue : report.issues) {
        static const char* const names[] = {"qs_lim", "ql_lim", "vs_lim", "vl_lim"};
        std::cerr << "kww limits: beta=" << num(issue.beta) << " " << names[static_cast<int>(issue.column)] << ": "
                  << (issue.not_applicable ? "not applicable" : "no transition bracketed, edge stored") << "\n";
    }
    emit(o, kww::serialize(report.table));
    return 0;
}

int cmd_crossover(const Options& o)
{
    std::string text = "#beta\tomega_q\tomega_v\n";
    for (double beta : beta_list(o)) {
        const kww::CrossoverPair c = kww::crossover(beta);
        text += num(beta) + "\t" + num(c.omega_q) + "\t" + num(c.omega_v) + "\n";
    }
    emit(o, text);
    return 0;
}

int cmd_check(const Options& o, const std::vector<int>& only)
{
    kww::audit::AuditConfig config;
    config.delta = o.delta;
    config.betas = o.beta;
    if (o.points > 0) {
        config.points_scaled = o.points;
        config.points_fixed = std::max(2, o.points / 2);
    }
    if (o.verbose)
        config.progress = &std::cerr;

    using Check = kww::audit::Report (*)(const kww::audit::AuditConfig&);
    const Check checks[] = {kww::audit::accuracy_contract,   kww::audit::closed_form_anchors,
                            kww::audit::truncation_bounds,   kww::audit::monotonicity,
                            kww::audit::parity_and_scaling,  kww::audit::normalization,
                            kww::audit::region_map_behavior, kww::audit::chi_insensitivity,
                            kww::audit::performance,         kww::audit::crossover_curve,
                            kww::audit::method_agreement};
    std::string text;
    bool all = true;
    for (int i = 0; i < 11; ++i) {
        const int id = i < 10 ? i + 1 : 0;
        if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end())
            continue;
        const kww::audit::Report r = checks[i](config);
        all = all && r.passed;
        std::cout << kww::audit::format(r) << std::endl;
        text += kww::audit::format(r) + "\n";
    }
    if (!o.out.empty())
        emit(o, text);
    return all ? 0 : 1;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Fourier transforms of the stretched exponential exp(-t^beta)"};
    app.require_subcommand(1);
    Options o;
    std::vector<int> only;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--delta", o.delta, "Target relative accuracy")->check(CLI::PositiveNumber);
        sub->add_option("--out", o.out, "Output file (default: stdout)");
    };
    auto beta_grid = [&](CLI::App* sub) {
        sub->add_option("--beta", o.beta, "Beta values (overrides the grid)")->delimiter(',');
        sub->add_option("--beta-step", o.beta_step, "Beta grid step")->check(CLI::PositiveNumber);
        sub->add_option("--beta-min", o.beta_min, "Beta grid start");
        sub->add_option("--beta-max", o.beta_max, "Beta grid end");
    };

    CLI::App* tab = app.add_subcommand("tab", "Tabulate Q and/or V over an omega range");
    tab->add_option("--kind", o.kind, "cos, sin or both")->check(CLI::IsMember({"cos", "sin", "both"}));
    tab->add_option("--beta", o.beta, "Beta values")->delimiter(',')->required();
    tab->add_option("--omega,--omega-min", o.omega_min, "Lowest omega");
    tab->add_option("--omega-max", o.omega_max, "Highest omega (default: omega-min)");
    tab->add_option("--points", o.points, "Number of omega values")->check(CLI::PositiveNumber);
    tab->add_flag("--linear,!--log", o.linear, "Linear spacing (default: logarithmic)");
    common(tab);

    CLI::App* limits = app.add_subcommand("limits", "Regenerate the region table");
    beta_grid(limits);
    common(limits);

    CLI::App* cross = app.add_subcommand("crossover", "Crossover frequencies omega_Q, omega_V");
    beta_grid(cross);
    cross->add_option("--out", o.out, "Output file (default: stdout)");

    CLI::App* check = app.add_subcommand("check", "Audit against the reference integrator");
    check->add_option("--beta", o.beta, "Beta values for the grid audits (default 0.1..2 step 0.1)")->delimiter(',');
    check->add_option("--points", o.points, "Log-spaced omega per beta around omega_c")->check(CLI::PositiveNumber);
    check->add_option("--only", only, "Run only these criteria (0 = method agreement)")->delimiter(',');
    check->add_flag("-v,--verbose", o.verbose, "Progress on stderr");
    common(check);

    CLI11_PARSE(app, argc, argv);
    try {
        if (tab->parsed())
            return cmd_tab(o);
        if (limits->parsed())
            return cmd_limits(o);
        if (cross->parsed())
            return cmd_crossover(o);
        return cmd_check(o, only);
    } catch (const CLI::Error& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "kww: " << e.what() << "\n";
        return 2;
    }
}
