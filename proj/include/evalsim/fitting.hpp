#ifndef EVALSIM_FITTING_HPP_
#define EVALSIM_FITTING_HPP_

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "evalsim/copula.hpp"
#include "evalsim/generators.hpp"
#include "evalsim/marginal.hpp"
#include "evalsim/profile.hpp"

namespace evalsim {

struct SampleMoments {
    double mean;
    double variance;  // unbiased, n-1 divisor
    std::size_t count;
};

SampleMoments sample_moments(const std::vector<double>& samples);

struct BetaParams {
    double alpha;
    double beta;
};

// Method of moments: alpha = mu(mu(1-mu)/s^2 - 1), beta = (1-mu)(...).
// Throws DegenerateSample when the variance is at or beyond the
// Bernoulli bound mu(1-mu), or the mean sits on the boundary.
BetaParams fit_beta_moments(double mean, double variance);
BetaParams fit_beta_moments(const std::vector<double>& samples);

struct TruncNormalFit {
    double mu;
    double sigma;
    double log_likelihood;
    bool converged;
    std::size_t evaluations;
};

// Maximum likelihood on [0,1] by Nelder-Mead simplex descent started
// from the sample moments. The achieved log-likelihood never falls
// below the start's. Non-convergence is reported in the result, with
// the best parameters found.
TruncNormalFit fit_truncnormal_mle(const std::vector<double>& samples);

// Default estimator inverts the Binomial mean: p = mean/K. The paper
// variant divides by K+1 instead. Result clamped to [0,1].
double fit_binomial(const std::vector<double>& samples, int levels,
                    bool paper_estimator = false);

BetaParams fit_betabinomial_moments(int levels, double mean, double variance);
BetaParams fit_betabinomial_moments(const std::vector<double>& samples, int levels);

// Two-sided Kolmogorov-Smirnov distance between a sample and a CDF.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);

// Pearson chi-squared distance of grade counts against model
// probabilities. Throws DomainError when a model probability vanishes.
double chi2_statistic(const std::vector<double>& counts, const std::vector<double>& probabilities);
double chi2_statistic(const std::vector<double>& counts, const Marginal& model);

std::vector<double> grade_counts(const std::vector<double>& samples, int levels);

enum class CorrelationMethod { Pearson, Spearman };

struct CorrelationEstimate {
    CorrelationMatrix matrix;
    // Pairs with a constant column; their entries are set to 0.
    std::vector<std::pair<std::size_t, std::size_t>> undefined_pairs;
};

CorrelationEstimate correlation_matrix(const Profile& profile, CorrelationMethod method);

struct TestResult {
    double statistic;
    double p_value;
};

// Rank-based H with tie correction; p from the chi-squared upper tail
// with groups-1 degrees of freedom.
TestResult kruskal_wallis(const std::vector<std::vector<double>>& groups);

// statistic = -(n - 1 - (2m+5)/6) ln det R, df = m(m-1)/2.
TestResult bartlett_sphericity(const CorrelationMatrix& R, std::size_t n);

// Histogram density with G equal-width classes on [0,1].
Marginal empirical_marginal(const std::vector<double>& samples, int classes);

// Discrete profile to continuous: (grade + U)/(K+1) per entry.
Profile jitter_profile(const Profile& profile, RandomSource& source);

struct MarginalFitResult {
    std::string family;
    std::optional<Marginal> fitted;  // empty when the fit degenerated
    double gof = 0.0;                // KS (continuous) or chi2 (discrete) distance
    std::size_t n_used = 0;
    std::optional<int> histogram_classes;  // G, empirical fits only
    std::string error;                     // why the fit failed, when it did
};

struct PipelineOptions {
    // Families to fit; empty selects every family legal on the scale.
    std::vector<std::string> families;
    enum class DependenceKind { Gaussian, Checkerboard } dependence = DependenceKind::Gaussian;
    int checkerboard_cells = 40;           // B
    std::optional<int> histogram_classes;  // G; adds the empirical fit (continuous only)
    double significance_level = 0.05;
    bool paper_binomial_estimator = false;
};

struct FitReport {
    std::size_t voters = 0;
    Scale scale = Scale::continuous();
    std::vector<std::string> candidate_names;
    std::vector<std::vector<MarginalFitResult>> candidate_fits;  // one list per candidate
    std::vector<MarginalFitResult> pooled_fits;  // all columns pooled, for I*D models
    std::optional<TestResult> kruskal_wallis;
    std::optional<CorrelationEstimate> pearson;
    std::optional<CorrelationEstimate> spearman;
    std::optional<TestResult> bartlett;
    std::string selected_class;  // IID, IDD, DID or DDD
    std::optional<GeneratorModel> model;
    std::vector<std::string> warnings;
};

// The four-step fitting pipeline: per-candidate marginal fits with GOF
// distances, Kruskal-Wallis across candidates, correlation and Bartlett
// sphericity, then class selection and a ready-to-simulate model.
FitReport fit_pipeline(const Profile& profile, const PipelineOptions& options = {});

}  // namespace evalsim

#endif  // EVALSIM_FITTING_HPP_
