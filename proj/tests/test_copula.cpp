#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "evalsim/copula.hpp"
#include "evalsim/errors.hpp"
#include "evalsim/fitting.hpp"
#include "evalsim/profile.hpp"

using namespace evalsim;
using Catch::Approx;

namespace {

Profile make_profile(std::vector<double> values, std::size_t voters) {
    return validate_profile(std::move(values), voters, Scale::continuous());
}

double sample_spearman(const std::vector<double>& x, const std::vector<double>& y) {
    // Rank-based, so squeezing the values into [0,1] changes nothing.
    const std::size_t n = x.size();
    double hi = 1.0;
    for (std::size_t i = 0; i < n; ++i) hi = std::max({hi, x[i], y[i]});
    std::vector<double> values(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        values[2 * i] = x[i] / hi;
        values[2 * i + 1] = y[i] / hi;
    }
    const Profile p = validate_profile(std::move(values), n, Scale::continuous());
    return correlation_matrix(p, CorrelationMethod::Spearman).matrix(0, 1);
}

}  // namespace

TEST_CASE("pseudo observations use mid-ranks over n+1") {
    const Profile p = make_profile({0.2, 0.9, 0.5}, 3);
    const auto pseudo = pseudo_observations(p);
    CHECK(pseudo.at(0, 0) == Approx(0.25));
    CHECK(pseudo.at(1, 0) == Approx(0.75));
    CHECK(pseudo.at(2, 0) == Approx(0.5));
    CHECK(pseudo.degenerate_columns.empty());
}

TEST_CASE("pseudo observations average tied ranks") {
    const Profile p = make_profile({0.4, 0.4}, 2);
    const auto pseudo = pseudo_observations(p);
    CHECK(pseudo.at(0, 0) == Approx(0.5));
    CHECK(pseudo.at(1, 0) == Approx(0.5));
    CHECK(pseudo.degenerate_columns == std::vector<std::size_t>{0});
}

TEST_CASE("pseudo observations of a sorted distinct column are i/(n+1)") {
    std::vector<double> values;
    const std::size_t n = 9;
    for (std::size_t i = 0; i < n; ++i) values.push_back(0.05 + 0.1 * i);
    const auto pseudo = pseudo_observations(make_profile(std::move(values), n));
    for (std::size_t i = 0; i < n; ++i) {
        CHECK(pseudo.at(i, 0) == Approx((i + 1.0) / (n + 1.0)));
    }
}

TEST_CASE("cholesky handles the documented cases") {
    const auto identity = cholesky(CorrelationMatrix::identity(3));
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
            CHECK(identity[i][j] == Approx(i == j ? 1.0 : 0.0).margin(1e-15));
        }
    }

    const auto L = cholesky(CorrelationMatrix({{1.0, 0.5}, {0.5, 1.0}}));
    CHECK(L[0][0] == Approx(1.0));
    CHECK(L[1][0] == Approx(0.5));
    CHECK(L[1][1] == Approx(std::sqrt(0.75)).margin(1e-12));

    CHECK_THROWS_AS(cholesky(CorrelationMatrix({{1.0, 1.5}, {1.5, 1.0}})),
                    NotPositiveDefinite);
}

TEST_CASE("cholesky reconstructs random correlation matrices") {
    RandomSource source = derive_stream(8, 0);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t m = 2 + trial % 4;
        // Gram matrix of random unit vectors is a valid correlation matrix.
        std::vector<std::vector<double>> vectors(m, std::vector<double>(m + 1));
        for (auto& row : vectors) {
            double norm = 0.0;
            for (auto& value : row) {
                value = source.next_double() - 0.5;
                norm += value * value;
            }
            for (auto& value : row) value /= std::sqrt(norm);
        }
        CorrelationMatrix R(m);
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < i; ++j) {
                double dot = 0.0;
                for (std::size_t k = 0; k < m + 1; ++k) dot += vectors[i][k] * vectors[j][k];
                R.set(i, j, dot);
            }
        }
        const auto L = cholesky(R);
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < m; ++j) {
                double rebuilt = 0.0;
                for (std::size_t k = 0; k < m; ++k) rebuilt += L[i][k] * L[j][k];
                CHECK(rebuilt == Approx(R(i, j)).margin(1e-10));
            }
        }
    }
}

TEST_CASE("nearest positive definite repair fixes semidefinite input") {
    CorrelationMatrix bad({{1.0, 0.7, 0.7}, {0.7, 1.0, -0.7}, {0.7, -0.7, 1.0}});
    CHECK(bad.min_eigenvalue() < 0.0);
    const auto repaired = bad.nearest_positive_definite();
    CHECK(repaired.min_eigenvalue() > 0.0);
    CHECK_NOTHROW(repaired.validate());
    for (std::size_t i = 0; i < 3; ++i) CHECK(repaired(i, i) == Approx(1.0).margin(1e-12));
}

TEST_CASE("identity gaussian copula gives independent uniforms") {
    const std::vector<Marginal> marginals(2, Uniform01{});
    const GaussianCopulaSampler sampler(CorrelationMatrix::identity(2), marginals);
    RandomSource source = derive_stream(11, 0);
    const int n = 100000;
    double sx = 0.0, sy = 0.0, sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (int i = 0; i < n; ++i) {
        const auto row = sampler.draw_row(source);
        sx += row[0];
        sy += row[1];
        sxy += row[0] * row[1];
        sxx += row[0] * row[0];
        syy += row[1] * row[1];
    }
    const double r = (sxy - sx * sy / n) /
                     std::sqrt((sxx - sx * sx / n) * (syy - sy * sy / n));
    CHECK(std::fabs(r) < 0.01);
}

TEST_CASE("comonotone copula duplicates the column") {
    const std::vector<Marginal> marginals(2, BetaDist{5, 2});
    const GaussianCopulaSampler sampler(CorrelationMatrix({{1.0, 1.0}, {1.0, 1.0}}),
                                        marginals);
    RandomSource source = derive_stream(12, 0);
    for (int i = 0; i < 1000; ++i) {
        const auto row = sampler.draw_row(source);
        CHECK(row[0] == Approx(row[1]).margin(1e-9));
    }
}

TEST_CASE("gaussian copula hits the closed-form spearman") {
    // Spearman of the bivariate Gaussian copula: (6/pi) asin(rho/2).
    const std::vector<Marginal> marginals(2, Uniform01{});
    const GaussianCopulaSampler sampler(CorrelationMatrix({{1.0, 0.8}, {0.8, 1.0}}),
                                        marginals);
    RandomSource source = derive_stream(13, 0);
    const int n = 100000;
    std::vector<double> x(n), y(n);
    for (int i = 0; i < n; ++i) {
        const auto row = sampler.draw_row(source);
        x[i] = row[0];
        y[i] = row[1];
    }
    CHECK(sample_spearman(x, y) == Approx(0.7859392826067277).margin(0.02));
}

TEST_CASE("gaussian copula preserves its declared marginals") {
    const std::vector<Marginal> marginals = {BetaDist{5, 2}, TruncNormal{0.5, 0.35}};
    const GaussianCopulaSampler sampler(CorrelationMatrix({{1.0, -0.6}, {-0.6, 1.0}}),
                                        marginals);
    RandomSource source = derive_stream(14, 0);
    const int n = 100000;
    std::vector<std::vector<double>> columns(2, std::vector<double>(n));
    for (int i = 0; i < n; ++i) {
        const auto row = sampler.draw_row(source);
        columns[0][i] = row[0];
        columns[1][i] = row[1];
    }
    for (std::size_t c = 0; c < 2; ++c) {
        const auto& marginal = marginals[c];
        const double d = ks_statistic(
            columns[c], [&](double v) { return cumulative(marginal, v); });
        CHECK(d < 0.01);
    }
}

TEST_CASE("discrete gaussian copula attenuates the latent correlation") {
    const std::vector<Marginal> marginals(2, BinomialDist{6, 0.5});
    const double latent = 0.8;
    const GaussianCopulaSampler sampler(
        CorrelationMatrix({{1.0, latent}, {latent, 1.0}}), marginals);
    RandomSource source = derive_stream(15, 0);
    const int n = 50000;
    std::vector<double> x(n), y(n);
    for (int i = 0; i < n; ++i) {
        const auto row = sampler.draw_row(source);
        x[i] = row[0];
        y[i] = row[1];
    }
    const double rho = sample_spearman(x, y);
    CHECK(std::fabs(rho) <= latent + 0.02);
    CHECK(rho > 0.5);
}

TEST_CASE("copula rejects mixed-scale marginals") {
    const std::vector<Marginal> mixed = {Uniform01{}, BinomialDist{6, 0.5}};
    CHECK_THROWS_AS(GaussianCopulaSampler(CorrelationMatrix::identity(2), mixed),
                    DomainError);
    const std::vector<Marginal> different_k = {BinomialDist{6, 0.5}, BinomialDist{5, 0.5}};
    CHECK_THROWS_AS(GaussianCopulaSampler(CorrelationMatrix::identity(2), different_k),
                    DomainError);
}

TEST_CASE("checkerboard fit places rows in half-open cells") {
    const Profile p = make_profile({0.2, 0.1, 0.8, 0.9}, 2);
    const auto board = fit_checkerboard(pseudo_observations(p), 2);
    // Pseudo-levels are 1/3 and 2/3 per column: cells (0,0) and (1,1).
    REQUIRE(board.mass().size() == 2);
    CHECK(board.mass().at({0, 0}) == Approx(0.5));
    CHECK(board.mass().at({1, 1}) == Approx(0.5));
}

TEST_CASE("checkerboard with B=1 is a single full cell") {
    const Profile p = make_profile({0.2, 0.4, 0.7, 0.9}, 2);
    const auto board = fit_checkerboard(pseudo_observations(p), 1);
    REQUIRE(board.mass().size() == 1);
    CHECK(board.mass().at({0, 0}) == Approx(1.0));
}

TEST_CASE("checkerboard masses of uniform data approach 1/B^m") {
    RandomSource source = derive_stream(16, 0);
    const std::size_t n = 10000;
    std::vector<double> values(2 * n);
    for (auto& v : values) v = source.next_double();
    const Profile p = make_profile(std::move(values), n);
    const auto board = fit_checkerboard(pseudo_observations(p), 4);
    double total = 0.0;
    for (const auto& [cell, mass] : board.mass()) {
        CHECK(mass == Approx(1.0 / 16.0).margin(0.02));
        total += mass;
    }
    CHECK(total == Approx(1.0).margin(1e-12));
}

TEST_CASE("checkerboard draws stay inside the selected boxes") {
    CheckerboardCopula single(2, 4, {{{2, 1}, 1.0}});
    const std::vector<Marginal> marginals(2, Uniform01{});
    RandomSource source = derive_stream(17, 0);
    for (int i = 0; i < 2000; ++i) {
        const auto row = checkerboard_draw(single, marginals, source);
        CHECK(row[0] >= 0.5);
        CHECK(row[0] < 0.75);
        CHECK(row[1] >= 0.25);
        CHECK(row[1] < 0.5);
    }
}

TEST_CASE("checkerboard round trip recovers cell masses") {
    // Fit on correlated data, draw, refit: masses should match.
    const std::vector<Marginal> uniforms(2, Uniform01{});
    const GaussianCopulaSampler sampler(CorrelationMatrix({{1.0, 0.6}, {0.6, 1.0}}),
                                        uniforms);
    RandomSource source = derive_stream(18, 0);
    std::vector<double> values;
    const std::size_t n = 20000;
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = sampler.draw_row(source);
        values.insert(values.end(), row.begin(), row.end());
    }
    const auto board =
        fit_checkerboard(pseudo_observations(make_profile(std::move(values), n)), 4);

    std::vector<double> redrawn;
    const std::size_t m2 = 100000;
    for (std::size_t i = 0; i < m2; ++i) {
        const auto row = checkerboard_draw(board, uniforms, source);
        redrawn.insert(redrawn.end(), row.begin(), row.end());
    }
    const auto refit =
        fit_checkerboard(pseudo_observations(make_profile(std::move(redrawn), m2)), 4);
    for (const auto& [cell, mass] : board.mass()) {
        const auto it = refit.mass().find(cell);
        REQUIRE(it != refit.mass().end());
        CHECK(it->second == Approx(mass).margin(0.02));
    }
}
