#include "evalsim/model_json.hpp"

#include <nlohmann/json.hpp>

#include "evalsim/errors.hpp"

namespace evalsim {

using nlohmann::json;

namespace {

double require_number(const json& j, const std::string& key) {
    if (!j.contains(key) || !j[key].is_number()) {
        throw DomainError("json: field '" + key + "' must be a number");
    }
    return j[key].get<double>();
}

int require_int(const json& j, const std::string& key) {
    if (!j.contains(key) || !j[key].is_number_integer()) {
        throw DomainError("json: field '" + key + "' must be an integer");
    }
    return j[key].get<int>();
}

std::string require_string(const json& j, const std::string& key) {
    if (!j.contains(key) || !j[key].is_string()) {
        throw DomainError("json: field '" + key + "' must be a string");
    }
    return j[key].get<std::string>();
}

std::vector<double> require_number_array(const json& j, const std::string& key) {
    if (!j.contains(key) || !j[key].is_array()) {
        throw DomainError("json: field '" + key + "' must be an array of numbers");
    }
    std::vector<double> out;
    for (const auto& value : j[key]) {
        if (!value.is_number()) {
            throw DomainError("json: field '" + key + "' must contain only numbers");
        }
        out.push_back(value.get<double>());
    }
    return out;
}

json point_distribution_to_json(const PointDistribution& dist) {
    if (std::holds_alternative<UniformCube>(dist)) return json{{"dist", "uniform"}};
    const auto& mix = std::get<GaussianMixture>(dist);
    json components = json::array();
    for (const auto& comp : mix.components) {
        components.push_back(
            {{"mean", comp.mean}, {"sigma", comp.sigma}, {"weight", comp.weight}});
    }
    return json{{"dist", "gaussian_mixture"}, {"components", components}};
}

PointDistribution point_distribution_from_json(const json& j) {
    const auto kind = require_string(j, "dist");
    if (kind == "uniform") return UniformCube{};
    if (kind != "gaussian_mixture") {
        throw DomainError("json: field 'dist' must be 'uniform' or 'gaussian_mixture'");
    }
    if (!j.contains("components") || !j["components"].is_array() || j["components"].empty()) {
        throw DomainError("json: field 'components' must be a non-empty array");
    }
    GaussianMixture mix;
    for (const auto& item : j["components"]) {
        GaussianMixture::Component comp;
        comp.mean = require_number_array(item, "mean");
        comp.sigma = require_number(item, "sigma");
        comp.weight = item.contains("weight") ? require_number(item, "weight") : 1.0;
        mix.components.push_back(std::move(comp));
    }
    return mix;
}

json covariance_to_json(const std::vector<std::vector<double>>& matrix) {
    json out = json::array();
    for (const auto& row : matrix) out.push_back(row);
    return out;
}

}  // namespace

json marginal_to_json(const Marginal& marginal) {
    struct Encoder {
        json operator()(const Uniform01&) const { return {{"family", "uniform"}}; }
        json operator()(const TruncNormal& m) const {
            return {{"family", "trunc_normal"}, {"mu", m.mu}, {"sigma", m.sigma}};
        }
        json operator()(const BetaDist& m) const {
            return {{"family", "beta"}, {"alpha", m.alpha}, {"beta", m.beta}};
        }
        json operator()(const DiscreteUniform& m) const {
            return {{"family", "discrete_uniform"}, {"K", m.levels}};
        }
        json operator()(const BinomialDist& m) const {
            return {{"family", "binomial"}, {"K", m.levels}, {"p", m.p}};
        }
        json operator()(const BetaBinomialDist& m) const {
            return {{"family", "beta_binomial"},
                    {"K", m.levels},
                    {"alpha", m.alpha},
                    {"beta", m.beta}};
        }
        json operator()(const EmpiricalDist& m) const {
            return {{"family", "empirical"}, {"masses", m.masses}};
        }
    };
    return std::visit(Encoder{}, marginal);
}

Marginal marginal_from_json(const json& j) {
    const auto family = require_string(j, "family");
    Marginal out = Uniform01{};
    if (family == "uniform") {
        out = Uniform01{};
    } else if (family == "trunc_normal") {
        out = TruncNormal{require_number(j, "mu"), require_number(j, "sigma")};
    } else if (family == "beta") {
        out = BetaDist{require_number(j, "alpha"), require_number(j, "beta")};
    } else if (family == "discrete_uniform") {
        out = DiscreteUniform{require_int(j, "K")};
    } else if (family == "binomial") {
        out = BinomialDist{require_int(j, "K"), require_number(j, "p")};
    } else if (family == "beta_binomial") {
        out = BetaBinomialDist{require_int(j, "K"), require_number(j, "alpha"),
                               require_number(j, "beta")};
    } else if (family == "empirical") {
        out = EmpiricalDist{require_number_array(j, "masses")};
    } else {
        throw DomainError("json: unknown marginal family '" + family + "'");
    }
    validate_marginal(out);
    return out;
}

json dependence_to_json(const Dependence& dependence) {
    if (const auto* corr = std::get_if<CorrelationMatrix>(&dependence)) {
        return {{"type", "gaussian_copula"}, {"correlation", corr->rows()}};
    }
    const auto& board = std::get<CheckerboardCopula>(dependence);
    json cells = json::array();
    for (const auto& [index, mass] : board.mass()) {
        cells.push_back({{"index", index}, {"mass", mass}});
    }
    return {{"type", "checkerboard"}, {"B", board.cells_per_axis()}, {"cells", cells}};
}

Dependence dependence_from_json(const json& j, const DecodeOptions& options) {
    const auto type = require_string(j, "type");
    if (type == "gaussian_copula") {
        if (!j.contains("correlation") || !j["correlation"].is_array()) {
            throw DomainError("json: field 'correlation' must be a matrix");
        }
        std::vector<std::vector<double>> rows;
        for (const auto& row : j["correlation"]) {
            rows.push_back(row.get<std::vector<double>>());
        }
        CorrelationMatrix matrix(std::move(rows));
        if (options.repair_correlation && matrix.min_eigenvalue() < 1e-8) {
            matrix = matrix.nearest_positive_definite();
        }
        matrix.validate();
        return matrix;
    }
    if (type != "checkerboard") {
        throw DomainError("json: field 'type' must be 'gaussian_copula' or 'checkerboard'");
    }
    const int cells_per_axis = require_int(j, "B");
    if (!j.contains("cells") || !j["cells"].is_array() || j["cells"].empty()) {
        throw DomainError("json: field 'cells' must be a non-empty array");
    }
    std::map<std::vector<int>, double> mass;
    std::size_t dim = 0;
    for (const auto& cell : j["cells"]) {
        if (!cell.contains("index") || !cell["index"].is_array()) {
            throw DomainError("json: each cell needs an 'index' array");
        }
        auto index = cell["index"].get<std::vector<int>>();
        dim = index.size();
        mass[std::move(index)] = require_number(cell, "mass");
    }
    return CheckerboardCopula(dim, cells_per_axis, std::move(mass));
}

json link_to_json(const LinkFunction& link) {
    if (const auto* lin = std::get_if<LinearTruncatedLink>(&link)) {
        return {{"type", "linear"}, {"ell", lin->ell}};
    }
    const auto& sig = std::get<SigmoidLink>(link);
    return {{"type", "sigmoid"}, {"lambda", sig.lambda}, {"beta", sig.beta}};
}

LinkFunction link_from_json(const json& j) {
    const auto type = require_string(j, "type");
    if (type == "linear") return LinearTruncatedLink{require_number(j, "ell")};
    if (type == "sigmoid") {
        return SigmoidLink{require_number(j, "lambda"), require_number(j, "beta")};
    }
    throw DomainError("json: link 'type' must be 'linear' or 'sigmoid'");
}

json model_to_json(const GeneratorModel& model) {
    if (const auto* iid = std::get_if<IidModel>(&model)) {
        return {{"model", "iid"},
                {"m", iid->candidates},
                {"marginal", marginal_to_json(iid->marginal)}};
    }
    if (const auto* idd = std::get_if<IddModel>(&model)) {
        json marginals = json::array();
        for (const auto& m : idd->marginals) marginals.push_back(marginal_to_json(m));
        return {{"model", "idd"}, {"marginals", marginals}};
    }
    if (const auto* cop = std::get_if<CopulaModel>(&model)) {
        json marginals = json::array();
        for (const auto& m : cop->marginals) marginals.push_back(marginal_to_json(m));
        return {{"model", "copula"},
                {"dependence", dependence_to_json(cop->dependence)},
                {"marginals", marginals}};
    }
    if (const auto* multi = std::get_if<MultinomialModel>(&model)) {
        return {{"model", "multinomial"}, {"K", multi->levels}, {"p", multi->p}};
    }
    if (const auto* dir = std::get_if<DirichletModel>(&model)) {
        return {{"model", "dirichlet"}, {"alpha", dir->alpha}};
    }
    const auto& spatial = std::get<SpatialModel>(model);
    json out{{"model", "spatial"},
             {"d", spatial.dim},
             {"voters", point_distribution_to_json(spatial.voters)},
             {"link", link_to_json(spatial.link)}};
    if (spatial.candidate_positions.empty()) {
        out["candidates"] = spatial.candidates;
    } else {
        out["candidates"] = spatial.candidate_positions;
    }
    if (spatial.candidate_dist) {
        out["candidate_dist"] = point_distribution_to_json(*spatial.candidate_dist);
    }
    out["K"] = spatial.levels ? json(*spatial.levels) : json(nullptr);
    return out;
}

GeneratorModel model_from_json(const json& j, const DecodeOptions& options) {
    const auto kind = require_string(j, "model");
    GeneratorModel out = IidModel{Uniform01{}, 1};
    if (kind == "iid") {
        if (!j.contains("marginal")) throw DomainError("json: iid model needs 'marginal'");
        const int m = require_int(j, "m");
        if (m < 1) throw DomainError("json: field 'm' must be >= 1");
        out = IidModel{marginal_from_json(j["marginal"]), static_cast<std::size_t>(m)};
    } else if (kind == "idd" || kind == "copula") {
        if (!j.contains("marginals") || !j["marginals"].is_array() || j["marginals"].empty()) {
            throw DomainError("json: field 'marginals' must be a non-empty array");
        }
        std::vector<Marginal> marginals;
        for (const auto& item : j["marginals"]) marginals.push_back(marginal_from_json(item));
        if (kind == "idd") {
            out = IddModel{std::move(marginals)};
        } else {
            if (!j.contains("dependence")) {
                throw DomainError("json: copula model needs 'dependence'");
            }
            out = CopulaModel{dependence_from_json(j["dependence"], options),
                              std::move(marginals)};
        }
    } else if (kind == "multinomial") {
        out = MultinomialModel{require_int(j, "K"), require_number_array(j, "p")};
    } else if (kind == "dirichlet") {
        out = DirichletModel{require_number_array(j, "alpha")};
    } else if (kind == "spatial") {
        SpatialModel spatial;
        const int dim = require_int(j, "d");
        if (dim < 1) throw DomainError("json: field 'd' must be >= 1");
        spatial.dim = static_cast<std::size_t>(dim);
        if (!j.contains("voters")) throw DomainError("json: spatial model needs 'voters'");
        spatial.voters = point_distribution_from_json(j["voters"]);
        if (!j.contains("candidates")) {
            throw DomainError("json: spatial model needs 'candidates'");
        }
        if (j["candidates"].is_number_integer()) {
            const int count = j["candidates"].get<int>();
            if (count < 1) throw DomainError("json: field 'candidates' must be >= 1");
            spatial.candidates = static_cast<std::size_t>(count);
        } else if (j["candidates"].is_array()) {
            for (const auto& row : j["candidates"]) {
                spatial.candidate_positions.push_back(row.get<std::vector<double>>());
            }
        } else {
            throw DomainError("json: field 'candidates' must be a count or a position array");
        }
        if (j.contains("candidate_dist") && !j["candidate_dist"].is_null()) {
            spatial.candidate_dist = point_distribution_from_json(j["candidate_dist"]);
        }
        if (!j.contains("link")) throw DomainError("json: spatial model needs 'link'");
        spatial.link = link_from_json(j["link"]);
        if (j.contains("K") && !j["K"].is_null()) spatial.levels = require_int(j, "K");
        out = spatial;
    } else {
        throw DomainError("json: unknown model '" + kind + "'");
    }
    validate_model(out);
    return out;
}

json fit_report_to_json(const FitReport& report) {
    json scale;
    if (report.scale.is_discrete()) {
        scale = {{"kind", "discrete"}, {"K", report.scale.levels()}};
    } else {
        scale = {{"kind", "continuous"}};
    }

    auto fits_to_json = [](const std::vector<MarginalFitResult>& fits) {
        json out = json::array();
        for (const auto& fit : fits) {
            json item{{"family", fit.family}, {"n_used", fit.n_used}};
            if (fit.fitted) {
                json params = marginal_to_json(*fit.fitted);
                params.erase("family");
                item["params"] = params;
                item["gof"] = fit.gof;
            }
            if (fit.histogram_classes) item["G"] = *fit.histogram_classes;
            if (!fit.error.empty()) item["error"] = fit.error;
            out.push_back(std::move(item));
        }
        return out;
    };

    json candidates = json::array();
    for (std::size_t c = 0; c < report.candidate_names.size(); ++c) {
        candidates.push_back({{"candidate", report.candidate_names[c]},
                              {"fits", fits_to_json(report.candidate_fits[c])}});
    }

    json out{{"n", report.voters},
             {"m", report.candidate_names.size()},
             {"scale", scale},
             {"candidates", candidates},
             {"pooled_fits", fits_to_json(report.pooled_fits)},
             {"selected_class", report.selected_class},
             {"warnings", report.warnings}};
    out["kruskal_wallis"] =
        report.kruskal_wallis
            ? json{{"H", report.kruskal_wallis->statistic}, {"p", report.kruskal_wallis->p_value}}
            : json(nullptr);
    out["bartlett"] = report.bartlett ? json{{"stat", report.bartlett->statistic},
                                             {"p", report.bartlett->p_value}}
                                      : json(nullptr);
    out["pearson"] = report.pearson ? json(report.pearson->matrix.rows()) : json(nullptr);
    out["spearman"] = report.spearman ? json(report.spearman->matrix.rows()) : json(nullptr);
    out["model"] = report.model ? model_to_json(*report.model) : json(nullptr);
    return out;
}

json election_result_to_json(const ElectionResult& result) {
    return {{"rule", result.rule},
            {"scores", result.scores},
            {"winner", result.winner_name},
            {"tie_trace", result.tie_trace}};
}

json latent_to_json(const LatentDistribution& dist) {
    if (const auto* gaussian = std::get_if<LatentGaussian>(&dist)) {
        return {{"family", "gaussian"},
                {"mean", gaussian->mean},
                {"covariance", covariance_to_json(gaussian->covariance)},
                {"regularized", gaussian->regularized}};
    }
    const auto& mixture = std::get<LatentMixture>(dist);
    json components = json::array();
    for (const auto& comp : mixture.components) {
        components.push_back({{"weight", comp.weight},
                              {"mean", comp.mean},
                              {"covariance", covariance_to_json(comp.covariance)}});
    }
    return {{"family", "gaussian_mixture"},
            {"components", components},
            {"regularized", mixture.regularized}};
}

json embedding_solution_to_json(const EmbeddingSolution& solution) {
    return {{"stress", solution.stress},
            {"normalized_stress", solution.normalized_stress},
            {"iterations", solution.iterations},
            {"converged", solution.converged},
            {"stress_trace", solution.stress_trace}};
}

std::string to_json_text(const json& j) {
    return j.dump(2) + "\n";
}

}  // namespace evalsim
