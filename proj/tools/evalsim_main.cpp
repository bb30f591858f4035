#include <CLI11.hpp>
#include <string>

#include "evalsim/cli.hpp"
#include "evalsim/errors.hpp"

using namespace evalsim;

int main(int argc, char** argv) {
    CLI::App app{"Synthetic evaluation profiles: simulate, fit, embed, elect, summarize"};
    app.require_subcommand(1);

    cli::SimulateConfig simulate;
    std::string fit_scale = "auto", embed_scale = "auto", elect_scale = "auto";
    std::string summary_scale = "auto";

    auto* sim = app.add_subcommand("simulate", "Generate a profile CSV from a model JSON");
    sim->add_option("--model", simulate.model_path, "Model JSON file")->required();
    sim->add_option("--voters", simulate.voters, "Number of voters n")->required();
    sim->add_option("--seed", simulate.seed, "Master seed")->envname("EVALSIM_SEED");
    sim->add_option("--out", simulate.out_path, "Output profile CSV")->required();
    sim->add_option("--positions", simulate.positions_path,
                    "Positions CSV for spatial models");
    sim->add_flag("--transpose", simulate.transpose, "Candidates in rows, voters in columns");
    sim->add_flag("--repair-correlation", simulate.repair_correlation,
                  "Repair semidefinite copula correlation matrices instead of rejecting");
    sim->add_option("--threads", simulate.threads, "Worker threads (output is unchanged)");

    cli::FitConfig fit;
    auto* fit_cmd = app.add_subcommand("fit", "Fit models to a profile CSV");
    fit_cmd->add_option("--in", fit.in_path, "Input profile CSV")->required();
    fit_cmd->add_option("--out", fit.out_path, "Report JSON (stdout when omitted)");
    fit_cmd->add_option("--scale", fit_scale, "auto, continuous or discrete:<K>");
    fit_cmd->add_option("--families", fit.families, "Marginal families to fit");
    fit_cmd->add_option("--copula", fit.copula, "gaussian or checkerboard");
    fit_cmd->add_option("--B", fit.checkerboard_cells, "Checkerboard cells per axis");
    fit_cmd->add_option("--G", fit.histogram_classes,
                        "Empirical marginal classes (adds the empirical fit)");
    fit_cmd->add_option("--hist", fit.hist_path, "Per-candidate bin table TSV");
    fit_cmd->add_option("--hist-bins", fit.hist_bins, "Bins for --hist on continuous data");
    fit_cmd->add_option("--level", fit.level, "Significance level for steps 2-3");
    fit_cmd->add_flag("--paper-estimator", fit.paper_estimator,
                      "Binomial p estimated as mean/(K+1) instead of mean/K");
    fit_cmd->add_flag("--jitter", fit.jitter,
                      "Map discrete grades to (grade + U)/(K+1) before fitting");
    fit_cmd->add_option("--seed", fit.seed, "Master seed (used by --jitter)")
        ->envname("EVALSIM_SEED");

    cli::EmbedConfig embed;
    auto* embed_cmd = app.add_subcommand("embed", "Spatial representation via SMACOF");
    embed_cmd->add_option("--in", embed.in_path, "Input profile CSV")->required();
    embed_cmd->add_option("--d", embed.dim, "Latent dimension")->required();
    embed_cmd->add_option("--out", embed.positions_path, "Positions CSV");
    embed_cmd->add_option("--report", embed.report_path, "Report JSON (stdout when omitted)");
    embed_cmd->add_option("--scale", embed_scale, "auto, continuous or discrete:<K>");
    embed_cmd->add_option("--inverse-link", embed.inverse_link,
                          "none, linear:<ell> or sigmoid:<lambda>,<beta>");
    embed_cmd->add_option("--refit", embed.refit, "gaussian or mixture:<k>");
    embed_cmd->add_option("--max-iter", embed.max_iterations, "Majorization iteration cap");
    embed_cmd->add_option("--eps", embed.epsilon, "Relative stress-decrease threshold");
    embed_cmd->add_option("--seed", embed.seed, "Master seed for the random start")
        ->envname("EVALSIM_SEED");

    cli::ElectConfig elect;
    auto* elect_cmd = app.add_subcommand("elect", "Run a voting rule on a profile");
    elect_cmd->add_option("--in", elect.in_path, "Input profile CSV")->required();
    elect_cmd->add_option("--rule", elect.rule, "range, mj or approval:<t>")->required();
    elect_cmd->add_option("--out", elect.out_path, "Result JSON (stdout when omitted)");
    elect_cmd->add_option("--scale", elect_scale, "auto, continuous or discrete:<K>");

    cli::SummaryConfig summary;
    auto* summary_cmd = app.add_subcommand("summary", "Per-candidate summary statistics");
    summary_cmd->add_option("--in", summary.in_path, "Input profile CSV")->required();
    summary_cmd->add_option("--out", summary.out_path, "Summary JSON (stdout when omitted)");
    summary_cmd->add_option("--scale", summary_scale, "auto, continuous or discrete:<K>");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) return cli::run_simulate(simulate);
        if (fit_cmd->parsed()) {
            fit.scale = cli::parse_scale(fit_scale);
            return cli::run_fit(fit);
        }
        if (embed_cmd->parsed()) {
            embed.scale = cli::parse_scale(embed_scale);
            return cli::run_embed(embed);
        }
        if (elect_cmd->parsed()) {
            elect.scale = cli::parse_scale(elect_scale);
            return cli::run_elect(elect);
        }
        summary.scale = cli::parse_scale(summary_scale);
        return cli::run_summary(summary);
    } catch (const std::exception& error) {
        std::cerr << "error: " << error.what() << "\n";
        return cli::kConfigError;
    }
}
