#ifndef EVALSIM_MARGINAL_HPP_
#define EVALSIM_MARGINAL_HPP_

#include <string>
#include <variant>
#include <vector>

#include "evalsim/profile.hpp"
#include "evalsim/rng.hpp"

namespace evalsim {

// Continuous families on [0,1].
struct Uniform01 {};

struct TruncNormal {
    double mu;
    double sigma;  // > 0; truncation fixed to [0,1]
};

struct BetaDist {
    double alpha;  // > 0
    double beta;   // > 0
};

// Discrete families on {0..K}.
struct DiscreteUniform {
    int levels;  // K >= 1
};

struct BinomialDist {
    int levels;
    double p;  // in [0,1]
};

struct BetaBinomialDist {
    int levels;
    double alpha;  // > 0
    double beta;   // > 0
};

// Piecewise-constant density on [0,1] from a G-class histogram fit.
struct EmpiricalDist {
    std::vector<double> masses;  // one per class, sums to 1
};

using Marginal = std::variant<Uniform01, TruncNormal, BetaDist, DiscreteUniform, BinomialDist,
                              BetaBinomialDist, EmpiricalDist>;

struct Moments {
    double mean;
    double variance;
};

// Throws DomainError on parameter violations (sigma <= 0, alpha <= 0, ...).
void validate_marginal(const Marginal& marginal);

bool is_discrete(const Marginal& marginal);
Scale scale_of(const Marginal& marginal);
std::string family_name(const Marginal& marginal);

// pdf for continuous families, pmf for discrete ones.
double density(const Marginal& marginal, double x);

// Non-decreasing, right-continuous; 0 below the support, 1 above it.
double cumulative(const Marginal& marginal, double x);

// Generalized inverse CDF. Continuous: |cumulative(quantile(u)) - u| <= 1e-10.
// Discrete: smallest grade k with CDF(k) >= u.
double quantile(const Marginal& marginal, double u);

double draw(const Marginal& marginal, RandomSource& source);

Moments moments(const Marginal& marginal);

// Gamma(shape, 1) variate by the Marsaglia-Tsang squeeze, with the
// boost for shape < 1. Building block for Beta and Dirichlet draws.
double draw_gamma(double shape, RandomSource& source);

double draw_standard_normal(RandomSource& source);

}  // namespace evalsim

#endif  // EVALSIM_MARGINAL_HPP_
