#include "evalsim/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "evalsim/csv.hpp"
#include "evalsim/embedding.hpp"
#include "evalsim/errors.hpp"
#include "evalsim/fitting.hpp"
#include "evalsim/generators.hpp"
#include "evalsim/model_json.hpp"
#include "evalsim/rules.hpp"

namespace evalsim::cli {

namespace {

using nlohmann::json;

// Stream indices per subcommand, so one --seed drives everything.
constexpr std::uint64_t kSimulateStream = 0;
constexpr std::uint64_t kJitterStream = 1;
constexpr std::uint64_t kEmbedStream = 2;

int config_error(const std::string& message) {
    std::cerr << "error: " << message << "\n";
    return kConfigError;
}

int numerical_error(const std::string& message) {
    std::cerr << "numerical failure: " << message << "\n";
    return kNumericalError;
}

// Bad input data is a config error even when detected mid-computation;
// exit 3 is reserved for genuine numerical failures.
int run_phase(const std::function<void()>& body) {
    try {
        body();
        return kOk;
    } catch (const IoError& error) {
        return config_error(error.what());
    } catch (const DomainError& error) {
        return config_error(error.what());
    } catch (const DimensionMismatch& error) {
        return config_error(error.what());
    } catch (const ValidationError& error) {
        return config_error(error.what());
    } catch (const std::exception& error) {
        return numerical_error(error.what());
    }
}

json load_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    json j;
    try {
        in >> j;
    } catch (const json::exception& error) {
        throw IoError("cannot parse '" + path + "': " + error.what());
    }
    return j;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << text;
}

void emit_json(const std::string& path, const json& j) {
    if (path.empty()) {
        std::cout << to_json_text(j);
    } else {
        write_text_file(path, to_json_text(j));
    }
}

double parse_number(const std::string& text, const std::string& what) {
    try {
        std::size_t consumed = 0;
        const double value = std::stod(text, &consumed);
        if (consumed != text.size()) throw std::invalid_argument(text);
        return value;
    } catch (const std::exception&) {
        throw DomainError(what + ": cannot parse number '" + text + "'");
    }
}

std::optional<LinkFunction> parse_inverse_link(const std::string& text) {
    if (text.empty() || text == "none") return std::nullopt;
    const auto colon = text.find(':');
    const std::string kind = text.substr(0, colon);
    const std::string args = colon == std::string::npos ? "" : text.substr(colon + 1);
    if (kind == "linear") return LinearTruncatedLink{parse_number(args, "--inverse-link ell")};
    if (kind == "sigmoid") {
        const auto comma = args.find(',');
        if (comma == std::string::npos) {
            throw DomainError("--inverse-link sigmoid needs 'sigmoid:<lambda>,<beta>'");
        }
        return SigmoidLink{parse_number(args.substr(0, comma), "--inverse-link lambda"),
                           parse_number(args.substr(comma + 1), "--inverse-link beta")};
    }
    throw DomainError("--inverse-link must be 'none', 'linear:<ell>' or 'sigmoid:<l>,<b>'");
}

void write_histogram_tsv(const Profile& profile, int bins, const std::string& path) {
    std::ostringstream out;
    out << "candidate\tbin\tlo\thi\tcount\tfrequency\n";
    const double n = static_cast<double>(profile.voters());
    for (std::size_t c = 0; c < profile.candidates(); ++c) {
        const auto column = profile.column(c);
        if (profile.scale().is_discrete()) {
            const int levels = profile.scale().levels();
            const auto counts = grade_counts(column, levels);
            for (int k = 0; k <= levels; ++k) {
                out << profile.candidate_names()[c] << '\t' << k << '\t' << k << '\t' << k
                    << '\t' << static_cast<long long>(counts[k]) << '\t'
                    << format_value(counts[k] / n, false) << '\n';
            }
        } else {
            std::vector<long long> counts(bins, 0);
            for (double x : column) {
                const auto bin =
                    std::min<std::size_t>(static_cast<std::size_t>(x * bins), bins - 1);
                ++counts[bin];
            }
            for (int k = 0; k < bins; ++k) {
                out << profile.candidate_names()[c] << '\t' << k << '\t'
                    << format_value(static_cast<double>(k) / bins, false) << '\t'
                    << format_value(static_cast<double>(k + 1) / bins, false) << '\t'
                    << counts[k] << '\t' << format_value(counts[k] / n, false) << '\n';
            }
        }
    }
    write_text_file(path, out.str());
}

}  // namespace

std::optional<Scale> parse_scale(const std::string& text) {
    if (text.empty() || text == "auto") return std::nullopt;
    if (text == "continuous") return Scale::continuous();
    if (text.rfind("discrete:", 0) == 0) {
        const double k = parse_number(text.substr(9), "--scale K");
        if (k < 1 || k != std::floor(k)) throw DomainError("--scale: K must be a positive integer");
        return Scale::discrete(static_cast<int>(k));
    }
    throw DomainError("--scale must be 'auto', 'continuous' or 'discrete:<K>'");
}

int run_simulate(const SimulateConfig& config) {
    GeneratorModel model = IidModel{Uniform01{}, 1};
    try {
        if (config.voters < 1) throw DomainError("--voters must be >= 1");
        model = model_from_json(load_json_file(config.model_path),
                                DecodeOptions{config.repair_correlation});
    } catch (const std::exception& error) {
        return config_error(error.what());
    }

    return run_phase([&] {
        const RandomSource source = derive_stream(config.seed, kSimulateStream);
        Profile profile = [&] {
            if (const auto* spatial = std::get_if<SpatialModel>(&model)) {
                auto realization = spatial_generate(*spatial, config.voters, source);
                if (!config.positions_path.empty()) {
                    write_positions_csv(realization.voter_positions,
                                        realization.candidate_positions,
                                        config.positions_path);
                }
                return std::move(realization.profile);
            }
            return generate(model, config.voters, source, config.threads);
        }();
        std::ofstream out(config.out_path, std::ios::binary);
        if (!out) throw IoError("cannot open '" + config.out_path + "' for writing");
        if (config.transpose) {
            write_profile_csv_transposed(profile, out);
        } else {
            write_profile_csv(profile, out);
        }
    });
}

int run_fit(const FitConfig& config) {
    std::optional<Profile> profile;
    PipelineOptions options;
    try {
        profile = read_profile_csv(config.in_path, config.scale);
        if (config.jitter) {
            RandomSource source = derive_stream(config.seed, kJitterStream);
            profile = jitter_profile(*profile, source);
        }
        options.families = config.families;
        if (config.copula == "checkerboard") {
            options.dependence = PipelineOptions::DependenceKind::Checkerboard;
        } else if (config.copula != "gaussian") {
            throw DomainError("--copula must be 'gaussian' or 'checkerboard'");
        }
        options.checkerboard_cells = config.checkerboard_cells;
        options.histogram_classes = config.histogram_classes;
        options.significance_level = config.level;
        options.paper_binomial_estimator = config.paper_estimator;
    } catch (const std::exception& error) {
        return config_error(error.what());
    }

    return run_phase([&] {
        const FitReport report = fit_pipeline(*profile, options);
        emit_json(config.out_path, fit_report_to_json(report));
        if (!config.hist_path.empty()) {
            write_histogram_tsv(*profile, config.hist_bins, config.hist_path);
        }
    });
}

int run_embed(const EmbedConfig& config) {
    std::optional<Profile> profile;
    std::optional<LinkFunction> inverse_link;
    try {
        profile = read_profile_csv(config.in_path, config.scale);
        inverse_link = parse_inverse_link(config.inverse_link);
        if (config.dim < 1) throw DomainError("--d must be >= 1");
        if (!config.refit.empty() && config.refit != "gaussian" &&
            config.refit.rfind("mixture:", 0) != 0) {
            throw DomainError("--refit must be 'gaussian' or 'mixture:<k>'");
        }
    } catch (const std::exception& error) {
        return config_error(error.what());
    }

    return run_phase([&] {
        const auto problem = evals_to_dissimilarities(*profile, inverse_link, config.dim);
        SmacofOptions options;
        options.max_iterations = config.max_iterations;
        options.epsilon = config.epsilon;
        const RandomSource source = derive_stream(config.seed, kEmbedStream);
        const auto solution = smacof(problem, source, options);

        if (!config.positions_path.empty()) {
            write_positions_csv(solution.voter_positions, solution.candidate_positions,
                                config.positions_path);
        }
        json report = embedding_solution_to_json(solution);
        report["d"] = config.dim;
        if (config.refit == "gaussian") {
            report["refit"] = latent_to_json(refit_gaussian(solution.voter_positions));
        } else if (config.refit.rfind("mixture:", 0) == 0) {
            const double k = parse_number(config.refit.substr(8), "--refit k");
            if (k < 1 || k != std::floor(k)) throw DomainError("--refit: k must be >= 1");
            report["refit"] = latent_to_json(refit_mixture(
                solution.voter_positions, static_cast<std::size_t>(k), source));
        }
        emit_json(config.report_path, report);
    });
}

int run_elect(const ElectConfig& config) {
    std::optional<Profile> profile;
    std::string rule = config.rule;
    double threshold = 0.0;
    try {
        profile = read_profile_csv(config.in_path, config.scale);
        if (rule.rfind("approval:", 0) == 0) {
            threshold = parse_number(rule.substr(9), "--rule approval threshold");
            rule = "approval";
            if (threshold < 0.0 || threshold > profile->scale().max_value()) {
                throw DomainError("--rule: approval threshold outside the evaluation scale");
            }
        } else if (rule != "range" && rule != "mj") {
            throw DomainError("--rule must be 'range', 'mj' or 'approval:<t>'");
        }
    } catch (const std::exception& error) {
        return config_error(error.what());
    }

    return run_phase([&] {
        ElectionResult result;
        if (rule == "range") {
            result = range_winner(*profile);
        } else if (rule == "mj") {
            result = majority_judgment_winner(*profile);
        } else {
            result = approval_winner(*profile, threshold);
        }
        emit_json(config.out_path, election_result_to_json(result));
    });
}

int run_summary(const SummaryConfig& config) {
    std::optional<Profile> profile;
    try {
        profile = read_profile_csv(config.in_path, config.scale);
    } catch (const std::exception& error) {
        return config_error(error.what());
    }

    return run_phase([&] {
        json scale;
        if (profile->scale().is_discrete()) {
            scale = {{"kind", "discrete"}, {"K", profile->scale().levels()}};
        } else {
            scale = {{"kind", "continuous"}};
        }
        json candidates = json::array();
        for (std::size_t c = 0; c < profile->candidates(); ++c) {
            auto column = profile->column(c);
            const SampleMoments moments =
                column.size() >= 2 ? sample_moments(column)
                                   : SampleMoments{column.front(), 0.0, 1};
            std::sort(column.begin(), column.end());
            candidates.push_back({{"name", profile->candidate_names()[c]},
                                  {"mean", moments.mean},
                                  {"variance", moments.variance},
                                  {"min", column.front()},
                                  {"max", column.back()},
                                  {"lower_median", column[(column.size() - 1) / 2]}});
        }
        emit_json(config.out_path, json{{"n", profile->voters()},
                                        {"m", profile->candidates()},
                                        {"scale", scale},
                                        {"candidates", candidates}});
    });
}

}  // namespace evalsim::cli
