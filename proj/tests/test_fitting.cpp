#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "evalsim/errors.hpp"
#include "evalsim/fitting.hpp"
#include "evalsim/generators.hpp"
#include "evalsim/profile.hpp"

using namespace evalsim;
using Catch::Approx;

namespace {

std::vector<double> draw_many(const Marginal& marginal, std::size_t n, RandomSource source) {
    std::vector<double> out(n);
    for (auto& value : out) value = draw(marginal, source);
    return out;
}

}  // namespace

TEST_CASE("beta method of moments closed form") {
    const auto symmetric = fit_beta_moments(0.5, 0.05);
    CHECK(symmetric.alpha == Approx(2.0).margin(1e-12));
    CHECK(symmetric.beta == Approx(2.0).margin(1e-12));

    const auto skewed = fit_beta_moments(0.75, 0.0375);
    CHECK(skewed.alpha == Approx(3.0).margin(1e-12));
    CHECK(skewed.beta == Approx(1.0).margin(1e-12));
    // Forward check: Beta(3,1) reproduces the input moments.
    const auto m = moments(BetaDist{skewed.alpha, skewed.beta});
    CHECK(m.mean == Approx(0.75).margin(1e-12));
    CHECK(m.variance == Approx(0.0375).margin(1e-12));

    CHECK_THROWS_AS(fit_beta_moments(0.5, 0.25), DegenerateSample);
    CHECK_THROWS_AS(fit_beta_moments(0.0, 0.05), DegenerateSample);
}

TEST_CASE("trunc normal MLE recovers its own draws") {
    const auto samples = draw_many(TruncNormal{0.5, 0.35}, 100000, derive_stream(31, 0));
    const auto fit = fit_truncnormal_mle(samples);
    CHECK(fit.converged);
    CHECK(fit.mu == Approx(0.5).margin(0.02));
    CHECK(fit.sigma == Approx(0.35).margin(0.02));
}

TEST_CASE("trunc normal MLE finds the symmetric center exactly") {
    // Mirrored sample: x and 1-x in pairs makes the likelihood symmetric
    // around 1/2.
    std::vector<double> samples;
    RandomSource source = derive_stream(31, 1);
    const Marginal shape = TruncNormal{0.45, 0.25};
    for (int i = 0; i < 2000; ++i) {
        const double x = draw(shape, source);
        samples.push_back(x);
        samples.push_back(1.0 - x);
    }
    const auto fit = fit_truncnormal_mle(samples);
    CHECK(fit.mu == Approx(0.5).margin(1e-6));
}

TEST_CASE("trunc normal MLE never falls below the moment start") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const auto samples =
            draw_many(BetaDist{0.8, 2.2}, 2000, derive_stream(31, 100 + seed));
        const auto m = sample_moments(samples);
        const auto fit = fit_truncnormal_mle(samples);

        double start_ll = 0.0;
        const Marginal start = TruncNormal{m.mean, std::sqrt(m.variance)};
        const Marginal fitted = TruncNormal{fit.mu, fit.sigma};
        double fitted_ll = 0.0;
        for (double x : samples) {
            start_ll += std::log(density(start, x));
            fitted_ll += std::log(density(fitted, x));
        }
        CHECK(fit.log_likelihood >= start_ll - 1e-9);
        CHECK(fit.log_likelihood == Approx(fitted_ll).margin(1e-6));
    }
    CHECK_THROWS_AS(fit_truncnormal_mle(std::vector<double>(50, 0.4)), DegenerateSample);
}

TEST_CASE("binomial estimator and its paper variant") {
    const std::vector<double> samples = {3, 3, 3, 3};
    CHECK(fit_binomial(samples, 6) == Approx(0.5));
    CHECK(fit_binomial(samples, 6, true) == Approx(3.0 / 7.0));
    CHECK(fit_binomial(std::vector<double>(10, 0.0), 6) == 0.0);
}

TEST_CASE("beta-binomial method of moments closed form") {
    const auto uniform_like = fit_betabinomial_moments(6, 3.0, 4.0);
    CHECK(uniform_like.alpha == Approx(1.0).margin(1e-12));
    CHECK(uniform_like.beta == Approx(1.0).margin(1e-12));
    const auto m = moments(BetaBinomialDist{6, 1.0, 1.0});
    CHECK(m.mean == Approx(3.0));
    CHECK(m.variance == Approx(4.0));

    CHECK_THROWS_AS(fit_betabinomial_moments(6, 0.0, 1.0), DegenerateSample);
}

TEST_CASE("beta-binomial fit recovers simulated parameters") {
    const auto samples =
        draw_many(BetaBinomialDist{6, 5.0, 2.0}, 100000, derive_stream(31, 2));
    const auto fit = fit_betabinomial_moments(samples, 6);
    CHECK(fit.alpha == Approx(5.0).margin(0.4));
    CHECK(fit.beta == Approx(2.0).margin(0.2));
}

TEST_CASE("ks statistic hand values") {
    auto uniform_cdf = [](double x) { return std::clamp(x, 0.0, 1.0); };
    CHECK(ks_statistic({0.1, 0.5, 0.9}, uniform_cdf) == Approx(7.0 / 30.0).margin(1e-12));
    CHECK(ks_statistic({0.0}, uniform_cdf) == Approx(1.0).margin(1e-12));

    // Samples at exact quantiles (i - 0.5)/n leave half a step of gap.
    const std::size_t n = 20;
    std::vector<double> grid(n);
    for (std::size_t i = 0; i < n; ++i) grid[i] = (i + 0.5) / n;
    CHECK(ks_statistic(grid, uniform_cdf) == Approx(0.5 / n).margin(1e-12));
}

TEST_CASE("chi-squared distance hand values") {
    CHECK(chi2_statistic({10, 20, 30}, std::vector<double>(3, 1.0 / 3.0)) ==
          Approx(10.0).margin(1e-12));
    CHECK(chi2_statistic({60, 0, 0}, std::vector<double>(3, 1.0 / 3.0)) ==
          Approx(120.0).margin(1e-12));
    CHECK(chi2_statistic({25, 50, 25}, {0.25, 0.5, 0.25}) == Approx(0.0).margin(1e-12));
    CHECK(chi2_statistic({10, 20, 30}, DiscreteUniform{2}) == Approx(10.0).margin(1e-12));
    CHECK_THROWS_AS(chi2_statistic({10, 20}, {1.0, 0.0}), DomainError);
}

TEST_CASE("chi-squared distance is invariant under joint permutation") {
    const std::vector<double> counts = {5, 17, 40, 23, 8, 4, 3};
    const Marginal model = BetaBinomialDist{6, 5.0, 2.0};
    std::vector<double> probs(7);
    for (int k = 0; k <= 6; ++k) probs[k] = density(model, k);
    const double base = chi2_statistic(counts, probs);

    std::vector<std::size_t> perm = {3, 0, 6, 2, 5, 1, 4};
    std::vector<double> counts_p(7), probs_p(7);
    for (std::size_t i = 0; i < 7; ++i) {
        counts_p[i] = counts[perm[i]];
        probs_p[i] = probs[perm[i]];
    }
    CHECK(chi2_statistic(counts_p, probs_p) == Approx(base).margin(1e-12));
}

TEST_CASE("correlation matrix handles the documented cases") {
    // y = -x gives -1 under both methods; y = x^3 is monotone but not
    // linear, so Spearman saturates and Pearson does not.
    std::vector<double> values;
    const std::size_t n = 50;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = (i + 1.0) / (n + 1.0);
        values.push_back(x);
        values.push_back(1.0 - x);
        values.push_back(x * x * x);
    }
    const Profile p = validate_profile(std::move(values), n, Scale::continuous());
    const auto pearson = correlation_matrix(p, CorrelationMethod::Pearson);
    const auto spearman = correlation_matrix(p, CorrelationMethod::Spearman);
    CHECK(pearson.matrix(0, 0) == 1.0);
    CHECK(pearson.matrix(0, 1) == Approx(-1.0).margin(1e-12));
    CHECK(spearman.matrix(0, 1) == Approx(-1.0).margin(1e-12));
    CHECK(spearman.matrix(0, 2) == Approx(1.0).margin(1e-12));
    CHECK(pearson.matrix(0, 2) < 1.0);
}

TEST_CASE("constant columns are flagged, not fatal") {
    const Profile p =
        validate_profile({0.1, 0.5, 0.2, 0.5, 0.3, 0.5}, 3, Scale::continuous());
    const auto est = correlation_matrix(p, CorrelationMethod::Pearson);
    REQUIRE(est.undefined_pairs.size() == 1);
    CHECK(est.matrix(0, 1) == 0.0);
}

TEST_CASE("kruskal-wallis hand value and invariances") {
    const auto result = kruskal_wallis({{1.0, 2.0}, {3.0, 4.0}});
    CHECK(result.statistic == Approx(2.4).margin(1e-12));

    const auto swapped = kruskal_wallis({{3.0, 4.0}, {1.0, 2.0}});
    CHECK(swapped.statistic == Approx(result.statistic).margin(1e-12));

    CHECK_THROWS_AS(kruskal_wallis({{1.0, 1.0}, {1.0, 1.0}}), DegenerateSample);
    CHECK_THROWS_AS(kruskal_wallis({{1.0, 2.0}}), DomainError);
}

TEST_CASE("kruskal-wallis holds its level on uniform groups") {
    std::size_t rejections = 0;
    for (std::uint64_t rep = 0; rep < 100; ++rep) {
        RandomSource source = derive_stream(32, rep);
        std::vector<std::vector<double>> groups(3, std::vector<double>(200));
        for (auto& group : groups) {
            for (auto& value : group) value = source.next_double();
        }
        if (kruskal_wallis(groups).p_value <= 0.01) ++rejections;
    }
    CHECK(rejections <= 2);  // level 0.01: expect one rejection per hundred
}

TEST_CASE("bartlett sphericity hand values") {
    const auto identity = bartlett_sphericity(CorrelationMatrix::identity(3), 100);
    CHECK(identity.statistic == Approx(0.0).margin(1e-12));
    CHECK(identity.p_value == Approx(1.0).margin(1e-12));

    const auto half = bartlett_sphericity(CorrelationMatrix({{1.0, 0.5}, {0.5, 1.0}}), 100);
    CHECK(half.statistic == Approx(-97.5 * std::log(0.75)).margin(1e-9));

    double previous = 0.0;
    for (double r : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        const auto result = bartlett_sphericity(CorrelationMatrix({{1.0, r}, {r, 1.0}}), 50);
        CHECK(result.statistic > previous);
        previous = result.statistic;
    }
    CHECK_THROWS_AS(bartlett_sphericity(CorrelationMatrix({{1.0, 1.0}, {1.0, 1.0}}), 100),
                    SingularMatrix);
    CHECK_THROWS_AS(bartlett_sphericity(CorrelationMatrix::identity(3), 3), DomainError);
}

TEST_CASE("empirical marginal from histogram classes") {
    const auto one_bin = empirical_marginal({0.1, 0.5, 0.9}, 1);
    CHECK(std::get<EmpiricalDist>(one_bin).masses == std::vector<double>{1.0});
    CHECK(density(one_bin, 0.3) == Approx(1.0));

    const auto two_bins = empirical_marginal({0.25, 0.25, 0.25, 0.75}, 2);
    CHECK(std::get<EmpiricalDist>(two_bins).masses == std::vector<double>{0.75, 0.25});
}

TEST_CASE("empirical marginal KS against its own sample is bounded") {
    for (int classes : {5, 17, 40}) {
        const auto samples = draw_many(BetaDist{2, 5}, 3000, derive_stream(33, classes));
        const auto fitted = empirical_marginal(samples, classes);
        const double d =
            ks_statistic(samples, [&](double x) { return cumulative(fitted, x); });
        CHECK(d <= 1.0 / classes + 1.0 / samples.size());
    }
}

TEST_CASE("ks statistic concentrates near 0.83/sqrt(n)") {
    std::vector<double> distances;
    auto uniform_cdf = [](double x) { return std::clamp(x, 0.0, 1.0); };
    for (std::uint64_t rep = 0; rep < 100; ++rep) {
        RandomSource source = derive_stream(34, rep);
        std::vector<double> samples(1000);
        for (auto& value : samples) value = source.next_double();
        distances.push_back(ks_statistic(samples, uniform_cdf));
    }
    std::sort(distances.begin(), distances.end());
    const double median = distances[49];
    CHECK(median > 0.02);
    CHECK(median < 0.04);

    std::size_t improved = 0;
    for (std::uint64_t rep = 0; rep < 100; ++rep) {
        RandomSource source = derive_stream(35, rep);
        std::vector<double> small(100), large(10000);
        for (auto& value : small) value = source.next_double();
        for (auto& value : large) value = source.next_double();
        if (ks_statistic(large, uniform_cdf) < ks_statistic(small, uniform_cdf)) ++improved;
    }
    CHECK(improved >= 95);
}

TEST_CASE("jitter maps grades into the unit interval") {
    const Profile discrete =
        validate_profile({0, 3, 6, 2, 5, 1}, 3, Scale::discrete(6));
    RandomSource source = derive_stream(36, 0);
    const Profile continuous = jitter_profile(discrete, source);
    CHECK(!continuous.scale().is_discrete());
    for (std::size_t v = 0; v < 3; ++v) {
        for (std::size_t c = 0; c < 2; ++c) {
            const double grade = discrete.at(v, c);
            const double e = continuous.at(v, c);
            CHECK(e >= grade / 7.0);
            CHECK(e < (grade + 1.0) / 7.0);
        }
    }
}

TEST_CASE("pipeline selects IID for iid beta data") {
    const Profile profile =
        generate(IidModel{BetaDist{5, 2}, 3}, 5000, derive_stream(38, 0));
    const auto report = fit_pipeline(profile);
    CHECK(report.selected_class == "IID");
    REQUIRE(report.model.has_value());
    CHECK(std::holds_alternative<IidModel>(*report.model));
    for (const auto& fits : report.candidate_fits) {
        double beta_gof = 0.0, uniform_gof = 0.0;
        for (const auto& fit : fits) {
            if (fit.family == "beta") beta_gof = fit.gof;
            if (fit.family == "uniform") uniform_gof = fit.gof;
        }
        CHECK(beta_gof < uniform_gof);
    }
}

TEST_CASE("pipeline selects DDD and recovers the latent correlation") {
    const std::vector<Marginal> marginals = {BetaDist{0.7, 0.5}, BetaDist{0.5, 0.7}};
    const GeneratorModel model =
        CopulaModel{CorrelationMatrix({{1.0, 0.8}, {0.8, 1.0}}), marginals};
    const Profile profile = generate(model, 5000, derive_stream(37, 1));
    const auto report = fit_pipeline(profile);
    CHECK(report.selected_class == "DDD");
    REQUIRE(report.model.has_value());
    const auto& fitted = std::get<CopulaModel>(*report.model);
    const auto& correlation = std::get<CorrelationMatrix>(fitted.dependence);
    CHECK(correlation(0, 1) == Approx(0.8).margin(0.05));
}

TEST_CASE("pipeline handles a single candidate") {
    const Profile profile =
        generate(IidModel{BetaDist{5, 2}, 1}, 500, derive_stream(37, 2));
    const auto report = fit_pipeline(profile);
    CHECK(report.selected_class == "IID");
    CHECK(!report.kruskal_wallis.has_value());
    CHECK(!report.bartlett.has_value());
    REQUIRE(!report.warnings.empty());
}

TEST_CASE("pipeline fits discrete families on discrete data") {
    const Profile profile =
        generate(IidModel{BetaBinomialDist{6, 5, 2}, 3}, 4000, derive_stream(37, 3));
    const auto report = fit_pipeline(profile);
    for (const auto& fits : report.candidate_fits) {
        double bb = 1e300, uniform = 0.0, binomial = 0.0;
        for (const auto& fit : fits) {
            REQUIRE(fit.fitted.has_value());
            if (fit.family == "beta_binomial") bb = fit.gof;
            if (fit.family == "discrete_uniform") uniform = fit.gof;
            if (fit.family == "binomial") binomial = fit.gof;
        }
        CHECK(bb < uniform);
        CHECK(bb < binomial);
    }
    REQUIRE(report.model.has_value());
}

TEST_CASE("pipeline honors the checkerboard option") {
    const std::vector<Marginal> marginals = {BetaDist{2, 5}, BetaDist{5, 2}};
    const GeneratorModel model =
        CopulaModel{CorrelationMatrix({{1.0, -0.6}, {-0.6, 1.0}}), marginals};
    const Profile profile = generate(model, 3000, derive_stream(37, 4));
    PipelineOptions options;
    options.dependence = PipelineOptions::DependenceKind::Checkerboard;
    options.checkerboard_cells = 8;
    const auto report = fit_pipeline(profile, options);
    CHECK(report.selected_class == "DDD");
    REQUIRE(report.model.has_value());
    const auto& fitted = std::get<CopulaModel>(*report.model);
    CHECK(std::holds_alternative<CheckerboardCopula>(fitted.dependence));
}

TEST_CASE("pipeline adds the empirical family when G is set") {
    const Profile profile =
        generate(IidModel{BetaDist{0.7, 0.5}, 2}, 2000, derive_stream(37, 5));
    PipelineOptions options;
    options.histogram_classes = 40;
    const auto report = fit_pipeline(profile, options);
    bool saw_empirical = false;
    for (const auto& fit : report.candidate_fits[0]) {
        if (fit.family == "empirical") {
            saw_empirical = true;
            CHECK(fit.histogram_classes == 40);
            REQUIRE(fit.fitted.has_value());
        }
    }
    CHECK(saw_empirical);
}

TEST_CASE("pipeline rejects families from the wrong scale") {
    const Profile profile =
        generate(IidModel{BinomialDist{6, 0.5}, 2}, 200, derive_stream(37, 6));
    PipelineOptions options;
    options.families = {"beta"};
    CHECK_THROWS_AS(fit_pipeline(profile, options), DomainError);
    options.families = {"nonsense"};
    CHECK_THROWS_AS(fit_pipeline(profile, options), DomainError);
}
