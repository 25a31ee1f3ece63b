// Command-line front end: one subcommand per experiment, `run <config>` for
// config files, plus `tw-table` (reference F_GUE table export) and `grid`
// (evaluate a lattice recursion on an injected weight table).
//
// Exit codes: 0 all checks pass, 1 any statistical rejection, 2 errors.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "glpp/glpp.hpp"

namespace {

struct CliOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> samples;
    std::optional<std::string> out;
    std::optional<unsigned> threads;
    std::optional<double> alpha;
    std::optional<double> gamma;
    std::vector<std::uint32_t> m, n, copies;
    std::vector<double> z1, z2;
    std::optional<std::string> convention;
    std::optional<std::string> distribution;
};

void apply_overrides(glpp::ExperimentConfig& cfg, const CliOverrides& o) {
    if (o.seed) cfg.master_seed = *o.seed;
    if (o.samples) cfg.samples = *o.samples;
    if (o.out) cfg.output_dir = *o.out;
    if (o.threads) cfg.threads = *o.threads;
    if (o.alpha) cfg.alpha = *o.alpha;
    if (o.gamma) cfg.gamma = *o.gamma;
    if (!o.m.empty()) cfg.m = o.m;
    if (!o.n.empty()) cfg.n = o.n;
    if (!o.copies.empty()) cfg.copies = o.copies;
    if (!o.z1.empty()) cfg.z1 = o.z1;
    if (!o.z2.empty()) cfg.z2 = o.z2;
    if (o.convention) {
        if (*o.convention == "rate_n_minus_i") cfg.convention = glpp::RateConvention::rate_n_minus_i;
        else if (*o.convention == "rate_inverse_n_minus_i")
            cfg.convention = glpp::RateConvention::rate_inverse_n_minus_i;
        else throw std::invalid_argument("unknown convention: " + *o.convention);
    }
    if (o.distribution) {
        if (*o.distribution == "exponential") cfg.distribution = glpp::DistKind::exponential;
        else if (*o.distribution == "gumbel") cfg.distribution = glpp::DistKind::gumbel;
        else if (*o.distribution == "gamma") cfg.distribution = glpp::DistKind::gamma;
        else if (*o.distribution == "inverse_gamma") cfg.distribution = glpp::DistKind::inverse_gamma;
        else throw std::invalid_argument("unknown distribution: " + *o.distribution);
    }
}

void add_override_flags(CLI::App* cmd, CliOverrides& o) {
    cmd->add_option("--seed", o.seed, "master seed");
    cmd->add_option("--samples", o.samples, "sample count per case");
    cmd->add_option("--out", o.out, "output directory");
    cmd->add_option("--threads", o.threads, "worker threads (0 = hardware)");
    cmd->add_option("--alpha", o.alpha, "significance level");
    cmd->add_option("--gamma", o.gamma, "polymer shape parameter");
    cmd->add_option("--m", o.m, "lattice rows (list)")->delimiter(',');
    cmd->add_option("--n", o.n, "lattice columns (list)")->delimiter(',');
    cmd->add_option("--N", o.copies, "multi-edge / stage counts (list)")->delimiter(',');
    cmd->add_option("--z1", o.z1, "one-step rates, first arm (list)")->delimiter(',');
    cmd->add_option("--z2", o.z2, "one-step rates, second arm (list)")->delimiter(',');
    cmd->add_option("--convention", o.convention, "growth rate convention");
    cmd->add_option("--distribution", o.distribution, "multi-edge weight law");
}

int run_and_emit(glpp::ExperimentConfig cfg) {
    glpp::ExperimentReport report = glpp::run(std::move(cfg));
    glpp::emit_report(report, report.config.output_dir);
    for (const auto& cr : report.cases) {
        for (const auto& check : cr.checks) {
            std::printf("%-18s %-32s D=%-12.6g p=%-12.6g %s\n", cr.label.c_str(), check.name.c_str(),
                        check.statistic, check.p_value,
                        check.verdict ? (check.pass ? "PASS" : "FAIL") : "info");
        }
    }
    for (const auto& check : report.summary_checks)
        std::printf("%-18s %-32s D=%-12.6g %s\n", "summary", check.name.c_str(), check.statistic,
                    check.verdict ? (check.pass ? "PASS" : "FAIL") : "info");
    std::printf("report: %s (%.2fs)\n",
                (std::filesystem::path(report.config.output_dir) / "report.json").string().c_str(),
                report.wall_seconds);
    return report.all_pass ? 0 : 1;
}

int cmd_tw_table(double lo, double hi, double step, unsigned order, const std::string& out_path) {
    const glpp::TracyWidomEvaluator tw(order);
    glpp::TableWriter w(out_path);
    w.header({"r", "tw_gue_cdf"});
    for (double r = lo; r <= hi + 1e-12; r += step) w.row({r, tw.cdf(r)});
    w.close();
    std::printf("wrote %s\n", out_path.c_str());
    return 0;
}

int cmd_grid(const std::string& weights_path, const std::string& model, std::uint32_t m, std::uint32_t n,
             double gamma, bool full) {
    const glpp::InjectedWeights weights = glpp::InjectedWeights::load(weights_path);
    glpp::PassageGrid grid = [&] {
        if (model == "gumbel_lpp") return glpp::gumbel_lpp_grid(m, n, weights);
        if (model == "log_gamma") return glpp::log_gamma_grid(m, n, gamma, weights);
        throw std::invalid_argument("grid: model must be gumbel_lpp or log_gamma");
    }();
    if (full) {
        for (std::uint32_t i = 1; i <= m; ++i) {
            for (std::uint32_t j = 1; j <= n; ++j)
                std::printf("%s%s", j > 1 ? "\t" : "", glpp::format_double(grid.value(i, j)).c_str());
            std::printf("\n");
        }
    }
    std::printf("corner(%u,%u) = %s\n", m, n, glpp::format_double(grid.corner()).c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monte Carlo laboratory for Gumbel last passage percolation, the inverse-gamma "
                 "polymer, multi-edge LPP and the N-stage corner growth process"};
    app.require_subcommand(1);

    struct ExperimentCmd {
        glpp::ExperimentKind kind;
        CliOverrides overrides;
        CLI::App* cmd = nullptr;
    };
    std::vector<ExperimentCmd> experiments;
    for (glpp::ExperimentKind kind :
         {glpp::ExperimentKind::identity_eq1, glpp::ExperimentKind::theorem1_match,
          glpp::ExperimentKind::corollary1_fluctuations, glpp::ExperimentKind::multiedge_convergence,
          glpp::ExperimentKind::growth_equivalence, glpp::ExperimentKind::conjecture_schedule}) {
        experiments.push_back({kind, {}, nullptr});
    }
    for (auto& e : experiments) {
        e.cmd = app.add_subcommand(glpp::to_string(e.kind), "run this experiment with defaults");
        add_override_flags(e.cmd, e.overrides);
    }

    std::string config_path;
    CliOverrides run_overrides;
    CLI::App* run_cmd = app.add_subcommand("run", "run an experiment described by a config file");
    run_cmd->add_option("config", config_path, "config file (key = value lines)")->required();
    add_override_flags(run_cmd, run_overrides);

    double tw_lo = -6.0, tw_hi = 4.0, tw_step = 0.1;
    unsigned tw_order = 40;
    std::string tw_out = "tw_gue_cdf.tsv";
    CLI::App* tw_cmd = app.add_subcommand("tw-table", "export a reference table of (r, F_GUE(r))");
    tw_cmd->add_option("--min", tw_lo, "left end of the r grid");
    tw_cmd->add_option("--max", tw_hi, "right end of the r grid");
    tw_cmd->add_option("--step", tw_step, "grid spacing");
    tw_cmd->add_option("--order", tw_order, "base quadrature order");
    tw_cmd->add_option("--out", tw_out, "output file");

    std::string grid_weights, grid_model = "gumbel_lpp";
    std::uint32_t grid_m = 0, grid_n = 0;
    double grid_gamma = 1.0;
    bool grid_full = false;
    CLI::App* grid_cmd = app.add_subcommand("grid", "evaluate a recursion on an injected weight table");
    grid_cmd->add_option("--weights", grid_weights, "weights file (`role m n value` lines)")->required();
    grid_cmd->add_option("--model", grid_model, "gumbel_lpp or log_gamma");
    grid_cmd->add_option("--m", grid_m, "rows")->required();
    grid_cmd->add_option("--n", grid_n, "columns")->required();
    grid_cmd->add_option("--gamma", grid_gamma, "polymer shape parameter");
    grid_cmd->add_flag("--full", grid_full, "print the whole grid, not just the corner");

    CLI11_PARSE(app, argc, argv);

    try {
        if (tw_cmd->parsed()) return cmd_tw_table(tw_lo, tw_hi, tw_step, tw_order, tw_out);
        if (grid_cmd->parsed()) return cmd_grid(grid_weights, grid_model, grid_m, grid_n, grid_gamma, grid_full);
        if (run_cmd->parsed()) {
            std::ifstream in(config_path);
            if (!in) {
                std::fprintf(stderr, "error: cannot open config file %s\n", config_path.c_str());
                return 2;
            }
            std::ostringstream text;
            text << in.rdbuf();
            glpp::ExperimentConfig cfg = glpp::parse_config(text.str());
            apply_overrides(cfg, run_overrides);
            return run_and_emit(std::move(cfg));
        }
        for (auto& e : experiments) {
            if (e.cmd->parsed()) {
                glpp::ExperimentConfig cfg;
                cfg.experiment = e.kind;
                apply_overrides(cfg, e.overrides);
                return run_and_emit(std::move(cfg));
            }
        }
        std::fprintf(stderr, "error: no subcommand\n");
        return 2;
    } catch (const std::exception& ex) {
        std::fprintf(stderr, "error: %s\n", ex.what());
        return 2;
    }
}
