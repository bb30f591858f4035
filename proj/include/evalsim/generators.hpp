#ifndef EVALSIM_GENERATORS_HPP_
#define EVALSIM_GENERATORS_HPP_

#include <optional>
#include <variant>
#include <vector>

#include "evalsim/copula.hpp"
#include "evalsim/marginal.hpp"
#include "evalsim/profile.hpp"
#include "evalsim/rng.hpp"

namespace evalsim {

// Evaluation from distance: max(0, 1 - ell * delta).
struct LinearTruncatedLink {
    double ell;  // > 0
};

// Evaluation from distance: 1 / (1 + exp(lambda * (beta * delta - 1))).
struct SigmoidLink {
    double lambda;  // > 0
    double beta;    // > 0
};

using LinkFunction = std::variant<LinearTruncatedLink, SigmoidLink>;

double link_apply(const LinkFunction& link, double delta);

// Latent-space distribution for voters (and, by default, candidates).
struct UniformCube {};

struct GaussianMixture {
    struct Component {
        std::vector<double> mean;  // length d
        double sigma;              // isotropic, > 0
        double weight;             // > 0
    };
    std::vector<Component> components;
};

using PointDistribution = std::variant<UniformCube, GaussianMixture>;

std::vector<double> draw_point(const PointDistribution& dist, std::size_t dim,
                               RandomSource& source);

struct IidModel {
    Marginal marginal;
    std::size_t candidates;
};

struct IddModel {
    std::vector<Marginal> marginals;
};

using Dependence = std::variant<CorrelationMatrix, CheckerboardCopula>;

struct CopulaModel {
    Dependence dependence;
    std::vector<Marginal> marginals;
};

// Cumulative voting on {0..K}: rows sum to exactly K.
struct MultinomialModel {
    int levels;
    std::vector<double> p;  // sums to 1
};

// Cumulative voting on [0,1]: rows sum to exactly 1.
struct DirichletModel {
    std::vector<double> alpha;  // all > 0
};

struct SpatialModel {
    std::size_t dim;  // latent dimension d >= 1
    PointDistribution voters;
    // Fixed candidate positions, or empty to draw `candidates` points
    // from `candidate_dist` (defaults to the voter distribution).
    std::vector<std::vector<double>> candidate_positions;
    std::size_t candidates = 0;
    std::optional<PointDistribution> candidate_dist;
    LinkFunction link;
    std::optional<int> levels;  // discretize to {0..K} when set
};

using GeneratorModel = std::variant<IidModel, IddModel, CopulaModel, MultinomialModel,
                                    DirichletModel, SpatialModel>;

void validate_model(const GeneratorModel& model);
std::size_t model_candidates(const GeneratorModel& model);
Scale model_scale(const GeneratorModel& model);

// n rows drawn independently from the model's joint law. Each voter uses
// its own derived child stream, so output is identical for any thread
// count (and `threads` only changes wall time).
Profile generate(const GeneratorModel& model, std::size_t voters, const RandomSource& source,
                 unsigned threads = 1);

// One multinomial row by a binomial chain; marginal c is Binomial(K, p_c).
std::vector<double> multinomial_row(int levels, const std::vector<double>& p,
                                    RandomSource& source);

// Normalized independent Gamma(alpha_c, 1) draws; marginal c is
// Beta(alpha_c, sum(alpha) - alpha_c).
std::vector<double> dirichlet_row(const std::vector<double>& alpha, RandomSource& source);

struct SpatialRealization {
    Profile profile;
    std::vector<std::vector<double>> voter_positions;
    std::vector<std::vector<double>> candidate_positions;
};

SpatialRealization spatial_generate(const SpatialModel& model, std::size_t voters,
                                    const RandomSource& source);

// Evaluations from fixed positions: e_vc = link(Euclidean distance),
// then optional discretization. Shared by spatial generation and the
// embedding round trip.
Profile profile_from_positions(const std::vector<std::vector<double>>& voter_positions,
                               const std::vector<std::vector<double>>& candidate_positions,
                               const LinkFunction& link, std::optional<int> levels);

double euclidean_distance(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace evalsim

#endif  // EVALSIM_GENERATORS_HPP_
