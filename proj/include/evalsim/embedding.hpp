#ifndef EVALSIM_EMBEDDING_HPP_
#define EVALSIM_EMBEDDING_HPP_

#include <optional>
#include <variant>
#include <vector>

#include "evalsim/generators.hpp"
#include "evalsim/profile.hpp"
#include "evalsim/rng.hpp"

namespace evalsim {

// Bipartite dissimilarity data: only voter-candidate pairs are observed;
// within-block pairs carry weight 0 in the stress.
struct EmbeddingProblem {
    std::vector<double> delta;    // n x m, row-major, non-negative
    std::vector<double> weights;  // n x m, non-negative
    std::size_t voters = 0;
    std::size_t candidates = 0;
    std::size_t dim = 2;  // target dimension d

    double delta_at(std::size_t v, std::size_t c) const { return delta[v * candidates + c]; }
    double weight_at(std::size_t v, std::size_t c) const { return weights[v * candidates + c]; }
    void validate() const;
};

// Dissimilarities from evaluations. Default transform is delta = 1 - e;
// passing the generating link inverts it instead (linear: (1-e)/ell with
// e = 0 censored at 1/ell; sigmoid: (1 + ln((1-e)/e)/lambda)/beta with e
// clamped away from {0,1} and negative results clamped to 0). Discrete
// grades are first mapped to (grade + 0.5)/(K+1).
EmbeddingProblem evals_to_dissimilarities(const Profile& profile,
                                          std::optional<LinkFunction> inverse_link,
                                          std::size_t dim);

double stress(const std::vector<std::vector<double>>& voter_positions,
              const std::vector<std::vector<double>>& candidate_positions,
              const EmbeddingProblem& problem);

struct EmbeddingSolution {
    std::vector<std::vector<double>> voter_positions;
    std::vector<std::vector<double>> candidate_positions;
    double stress = 0.0;
    double normalized_stress = 0.0;  // Kruskal stress-1
    std::size_t iterations = 0;
    bool converged = false;
    std::vector<double> stress_trace;  // raw stress per iteration, non-increasing
};

struct SmacofOptions {
    std::size_t max_iterations = 500;
    double epsilon = 1e-6;  // relative stress-decrease stopping threshold
    // Rational: double-centered SVD of the squared dissimilarities plus
    // seeded jitter; lands majorization in the right basin, which pure
    // random starts frequently miss on unfolding problems.
    enum class Init { Rational, Random };
    Init init = Init::Rational;
    // Explicit start configuration; overrides `init` when non-empty.
    std::vector<std::vector<double>> init_voters;
    std::vector<std::vector<double>> init_candidates;
};

// Stress majorization for the bipartite weight pattern. The Guttman
// transform uses the pseudoinverse of the V matrix, computed once
// (closed form when all weights are equal, spectral otherwise). Stress
// never increases across iterations.
EmbeddingSolution smacof(const EmbeddingProblem& problem, const RandomSource& source,
                         const SmacofOptions& options = {});

struct LatentGaussian {
    std::vector<double> mean;
    std::vector<std::vector<double>> covariance;
    bool regularized = false;  // covariance was bumped by 1e-8 I
};

struct LatentMixtureComponent {
    double weight;
    std::vector<double> mean;
    std::vector<std::vector<double>> covariance;
};

struct LatentMixture {
    std::vector<LatentMixtureComponent> components;
    bool regularized = false;
};

using LatentDistribution = std::variant<LatentGaussian, LatentMixture>;

LatentGaussian refit_gaussian(const std::vector<std::vector<double>>& positions);

// EM with k-means init, 100 iterations, seeded.
LatentMixture refit_mixture(const std::vector<std::vector<double>>& positions,
                            std::size_t components, const RandomSource& source);

std::vector<double> draw_latent(const LatentDistribution& dist, RandomSource& source);

// New voters from the fitted latent distribution, evaluated against the
// embedded candidates. Matches spatial generation with fixed candidates.
Profile generate_from_embedding(const std::vector<std::vector<double>>& candidate_positions,
                                const LatentDistribution& voter_dist, const LinkFunction& link,
                                std::size_t voters, const RandomSource& source,
                                std::optional<int> levels = std::nullopt);

}  // namespace evalsim

#endif  // EVALSIM_EMBEDDING_HPP_
