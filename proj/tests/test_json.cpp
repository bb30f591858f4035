#include <catch2/catch_amalgamated.hpp>

#include <nlohmann/json.hpp>

#include "evalsim/errors.hpp"
#include "evalsim/fitting.hpp"
#include "evalsim/generators.hpp"
#include "evalsim/model_json.hpp"

using namespace evalsim;
using nlohmann::json;

TEST_CASE("marginal JSON uses the documented shapes") {
    const auto beta = marginal_to_json(BetaDist{5, 2});
    CHECK(beta == json::parse(R"({"family":"beta","alpha":5.0,"beta":2.0})"));
    CHECK(marginal_to_json(Uniform01{}) == json::parse(R"({"family":"uniform"})"));
    CHECK(marginal_to_json(TruncNormal{0.5, 0.35}) ==
          json::parse(R"({"family":"trunc_normal","mu":0.5,"sigma":0.35})"));
    CHECK(marginal_to_json(BinomialDist{6, 0.5}) ==
          json::parse(R"({"family":"binomial","K":6,"p":0.5})"));
    CHECK(marginal_to_json(BetaBinomialDist{6, 5, 2}) ==
          json::parse(R"({"family":"beta_binomial","K":6,"alpha":5.0,"beta":2.0})"));
    CHECK(marginal_to_json(DiscreteUniform{6}) ==
          json::parse(R"({"family":"discrete_uniform","K":6})"));
}

TEST_CASE("marginal JSON round trips") {
    const std::vector<Marginal> samples = {
        Uniform01{},        TruncNormal{0.4, 0.2},     BetaDist{0.7, 0.5},
        DiscreteUniform{6}, BinomialDist{10, 0.25},    BetaBinomialDist{6, 5, 2},
        EmpiricalDist{{0.25, 0.5, 0.25}}};
    for (const auto& marginal : samples) {
        const auto text = marginal_to_json(marginal);
        const auto back = marginal_from_json(text);
        CHECK(marginal_to_json(back) == text);
    }
}

TEST_CASE("marginal JSON decoding validates") {
    CHECK_THROWS_AS(marginal_from_json(json::parse(R"({"family":"beta","alpha":5})")),
                    DomainError);
    CHECK_THROWS_AS(marginal_from_json(json::parse(R"({"family":"beta","alpha":-1,"beta":2})")),
                    DomainError);
    CHECK_THROWS_AS(marginal_from_json(json::parse(R"({"family":"cauchy"})")), DomainError);
}

TEST_CASE("dependence JSON round trips") {
    const Dependence gaussian = CorrelationMatrix({{1.0, -0.41}, {-0.41, 1.0}});
    const auto gaussian_json = dependence_to_json(gaussian);
    CHECK(gaussian_json["type"] == "gaussian_copula");
    CHECK(dependence_to_json(dependence_from_json(gaussian_json)) == gaussian_json);

    const Dependence board =
        CheckerboardCopula(2, 2, {{{0, 0}, 0.5}, {{1, 1}, 0.5}});
    const auto board_json = dependence_to_json(board);
    CHECK(board_json["type"] == "checkerboard");
    CHECK(board_json["B"] == 2);
    CHECK(dependence_to_json(dependence_from_json(board_json)) == board_json);

    CHECK_THROWS_AS(
        dependence_from_json(json::parse(
            R"({"type":"gaussian_copula","correlation":[[1.0,1.5],[1.5,1.0]]})")),
        DomainError);
}

TEST_CASE("semidefinite correlations load only under the repair option") {
    // Indefinite but entrywise-legal matrix.
    const auto text = json::parse(R"({"type":"gaussian_copula",
        "correlation":[[1.0,0.7,0.7],[0.7,1.0,-0.7],[0.7,-0.7,1.0]]})");
    CHECK_THROWS_AS(dependence_from_json(text), NotPositiveDefinite);
    DecodeOptions repair;
    repair.repair_correlation = true;
    const auto fixed = dependence_from_json(text, repair);
    CHECK(std::get<CorrelationMatrix>(fixed).min_eigenvalue() > 0.0);
}

TEST_CASE("model JSON round trips for every model kind") {
    std::vector<GeneratorModel> models;
    models.push_back(IidModel{BetaDist{5, 2}, 3});
    models.push_back(IddModel{{BetaDist{0.7, 0.5}, BetaDist{0.5, 0.7}}});
    models.push_back(CopulaModel{CorrelationMatrix({{1.0, 0.8}, {0.8, 1.0}}),
                                 {BetaDist{0.7, 0.5}, BetaDist{0.5, 0.7}}});
    models.push_back(MultinomialModel{6, {0.5, 0.3, 0.2}});
    models.push_back(DirichletModel{{5.0, 3.0, 2.0}});
    SpatialModel spatial;
    spatial.dim = 2;
    spatial.voters = UniformCube{};
    spatial.candidate_positions = {{0.2, 0.3}, {0.7, 0.8}};
    spatial.link = SigmoidLink{5.0, 2.0};
    models.push_back(spatial);
    SpatialModel random_spatial;
    random_spatial.dim = 2;
    random_spatial.voters =
        GaussianMixture{{{{0.3, 0.3}, 0.1, 0.5}, {{0.7, 0.7}, 0.1, 0.5}}};
    random_spatial.candidates = 4;
    random_spatial.link = LinearTruncatedLink{2.0};
    random_spatial.levels = 6;
    models.push_back(random_spatial);

    for (const auto& model : models) {
        const auto text = model_to_json(model);
        const auto back = model_from_json(text);
        CHECK(model_to_json(back) == text);
    }
}

TEST_CASE("spec-format model JSON parses") {
    const auto spatial = model_from_json(json::parse(R"({
        "model": "spatial", "d": 2, "voters": {"dist": "uniform"},
        "candidates": [[0.2, 0.3], [0.7, 0.8]],
        "link": {"type": "sigmoid", "lambda": 5, "beta": 2}, "K": null})"));
    const auto& s = std::get<SpatialModel>(spatial);
    CHECK(s.dim == 2);
    CHECK(s.candidate_positions.size() == 2);
    CHECK(!s.levels.has_value());

    const auto multinomial = model_from_json(
        json::parse(R"({"model":"multinomial","K":6,"p":[0.5,0.3,0.2]})"));
    CHECK(model_candidates(multinomial) == 3);

    const auto dirichlet =
        model_from_json(json::parse(R"({"model":"dirichlet","alpha":[5,3,2]})"));
    CHECK(model_candidates(dirichlet) == 3);
}

TEST_CASE("model JSON errors name the offending field") {
    try {
        model_from_json(json::parse(R"({"model":"multinomial","K":6,"p":[0.5,0.3]})"));
        FAIL("expected a validation error");
    } catch (const DomainError& error) {
        CHECK(std::string(error.what()).find("p") != std::string::npos);
    }
    try {
        model_from_json(json::parse(R"({"model":"dirichlet","alpha":[5,0,2]})"));
        FAIL("expected a validation error");
    } catch (const DomainError& error) {
        CHECK(std::string(error.what()).find("alpha") != std::string::npos);
    }
}

TEST_CASE("fit report serializes the documented fields") {
    const Profile profile =
        generate(IidModel{BetaDist{5, 2}, 2}, 1000, derive_stream(61, 0));
    const auto report = fit_pipeline(profile);
    const auto j = fit_report_to_json(report);
    CHECK(j.contains("candidates"));
    CHECK(j["candidates"].size() == 2);
    CHECK(j["candidates"][0].contains("fits"));
    CHECK(j.contains("kruskal_wallis"));
    CHECK(j.contains("pearson"));
    CHECK(j.contains("spearman"));
    CHECK(j.contains("bartlett"));
    CHECK(j.contains("selected_class"));
    CHECK(j.contains("model"));
    for (const auto& fit : j["candidates"][0]["fits"]) {
        CHECK(fit.contains("family"));
        CHECK(fit.contains("n_used"));
    }
    // The emitted model must itself decode.
    if (!j["model"].is_null()) CHECK_NOTHROW(model_from_json(j["model"]));
}

TEST_CASE("election result JSON shape") {
    const Profile p = validate_profile({0.2, 0.8, 0.4, 0.6}, 2, Scale::continuous());
    const auto j = election_result_to_json(range_winner(p));
    CHECK(j["rule"] == "range");
    CHECK(j["winner"] == "cand_2");
    CHECK(j["scores"].size() == 2);
    CHECK(j["tie_trace"].is_array());
}

TEST_CASE("json text is stable across encodings") {
    const auto model = model_from_json(
        json::parse(R"({"model":"dirichlet","alpha":[5,3,2]})"));
    const auto first = to_json_text(model_to_json(model));
    const auto second = to_json_text(model_to_json(model_from_json(json::parse(first))));
    CHECK(first == second);
}
