#include "evalsim/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "evalsim/errors.hpp"
#include "evalsim/special_functions.hpp"

namespace evalsim {

namespace {

constexpr double kLogSqrt2Pi = 0.9189385332046727;

// Mid-ranks 1..n, ties averaged.
std::vector<double> mid_ranks(const std::vector<double>& values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        const double mid = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = mid;
        i = j + 1;
    }
    return ranks;
}

double pearson(const std::vector<double>& x, const std::vector<double>& y, bool& defined) {
    const std::size_t n = x.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx <= 0.0 || syy <= 0.0) {
        defined = false;
        return 0.0;
    }
    defined = true;
    return sxy / std::sqrt(sxx * syy);
}

// Negative log-likelihood of N(mu, sigma^2) truncated to [0,1], from the
// sufficient statistics (n, sum, sum of squares).
double trunc_normal_negloglik(double mu, double sigma, std::size_t n, double sum,
                              double sum_sq) {
    if (sigma <= 0.0 || !std::isfinite(sigma) || !std::isfinite(mu)) return 1e300;
    const double mass = norm_cdf((1.0 - mu) / sigma) - norm_cdf((0.0 - mu) / sigma);
    if (!(mass > 1e-300)) return 1e300;
    const double quad = sum_sq - 2.0 * mu * sum + n * mu * mu;
    return n * std::log(sigma) + n * std::log(mass) + quad / (2.0 * sigma * sigma) +
           n * kLogSqrt2Pi;
}

struct SimplexResult {
    std::array<double, 2> point;
    double value;
    std::size_t evaluations;
    bool converged;
};

// Two-parameter Nelder-Mead with standard coefficients.
SimplexResult nelder_mead_2d(const std::function<double(double, double)>& f,
                             std::array<double, 2> start, double scale, double tol,
                             std::size_t max_evals) {
    struct Vertex {
        std::array<double, 2> x;
        double value;
    };
    std::size_t evals = 0;
    auto eval = [&](const std::array<double, 2>& x) {
        ++evals;
        return f(x[0], x[1]);
    };

    std::array<Vertex, 3> simplex;
    simplex[0] = {start, eval(start)};
    simplex[1] = {{start[0] + scale, start[1]}, 0.0};
    simplex[1].value = eval(simplex[1].x);
    simplex[2] = {{start[0], start[1] + scale}, 0.0};
    simplex[2].value = eval(simplex[2].x);

    bool converged = false;
    while (evals < max_evals) {
        std::sort(simplex.begin(), simplex.end(),
                  [](const Vertex& a, const Vertex& b) { return a.value < b.value; });
        if (std::fabs(simplex[2].value - simplex[0].value) < tol) {
            converged = true;
            break;
        }
        const std::array<double, 2> centroid = {
            (simplex[0].x[0] + simplex[1].x[0]) / 2.0,
            (simplex[0].x[1] + simplex[1].x[1]) / 2.0};
        auto affine = [&](double t) {
            return std::array<double, 2>{centroid[0] + t * (simplex[2].x[0] - centroid[0]),
                                         centroid[1] + t * (simplex[2].x[1] - centroid[1])};
        };
        const auto reflected = affine(-1.0);
        const double fr = eval(reflected);
        if (fr < simplex[0].value) {
            const auto expanded = affine(-2.0);
            const double fe = eval(expanded);
            simplex[2] = fe < fr ? Vertex{expanded, fe} : Vertex{reflected, fr};
        } else if (fr < simplex[1].value) {
            simplex[2] = {reflected, fr};
        } else {
            const auto contracted = affine(fr < simplex[2].value ? -0.5 : 0.5);
            const double fc = eval(contracted);
            if (fc < std::min(fr, simplex[2].value)) {
                simplex[2] = {contracted, fc};
            } else {
                for (int i = 1; i < 3; ++i) {
                    simplex[i].x = {(simplex[i].x[0] + simplex[0].x[0]) / 2.0,
                                    (simplex[i].x[1] + simplex[0].x[1]) / 2.0};
                    simplex[i].value = eval(simplex[i].x);
                }
            }
        }
    }
    std::sort(simplex.begin(), simplex.end(),
              [](const Vertex& a, const Vertex& b) { return a.value < b.value; });
    return {simplex[0].x, simplex[0].value, evals, converged};
}

}  // namespace

SampleMoments sample_moments(const std::vector<double>& samples) {
    if (samples.size() < 2) throw DegenerateSample("sample moments need n >= 2");
    double mean = 0.0;
    for (double x : samples) mean += x;
    mean /= samples.size();
    double ss = 0.0;
    for (double x : samples) ss += (x - mean) * (x - mean);
    return {mean, ss / (samples.size() - 1), samples.size()};
}

BetaParams fit_beta_moments(double mean, double variance) {
    if (!(mean > 0.0 && mean < 1.0)) {
        throw DegenerateSample("beta moments: mean must lie strictly inside (0,1)");
    }
    if (!(variance > 0.0)) throw DegenerateSample("beta moments: variance must be > 0");
    const double ratio = mean * (1.0 - mean) / variance - 1.0;
    if (ratio <= 0.0) {
        throw DegenerateSample("beta moments: variance at or beyond the Bernoulli bound");
    }
    return {mean * ratio, (1.0 - mean) * ratio};
}

BetaParams fit_beta_moments(const std::vector<double>& samples) {
    const auto m = sample_moments(samples);
    return fit_beta_moments(m.mean, m.variance);
}

TruncNormalFit fit_truncnormal_mle(const std::vector<double>& samples) {
    if (samples.size() < 2) throw DegenerateSample("trunc_normal mle: needs n >= 2");
    const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
    if (*lo == *hi) throw DegenerateSample("trunc_normal mle: sample is constant");
    const auto moments = sample_moments(samples);
    const std::size_t n = samples.size();
    double sum = 0.0, sum_sq = 0.0;
    for (double x : samples) {
        sum += x;
        sum_sq += x * x;
    }

    // Optimize over (mu, log sigma) so sigma stays positive.
    auto objective = [&](double mu, double log_sigma) {
        return trunc_normal_negloglik(mu, std::exp(log_sigma), n, sum, sum_sq);
    };

    std::array<double, 2> start = {moments.mean, std::log(std::sqrt(moments.variance))};
    const double start_value = objective(start[0], start[1]);

    SimplexResult best{start, start_value, 0, false};
    std::size_t total_evals = 0;
    double scale = 0.1;
    for (int restart = 0; restart < 128; ++restart) {
        auto result = nelder_mead_2d(objective, best.point, scale, 1e-8, 2000);
        total_evals += result.evaluations;
        const bool improved = result.value < best.value - 1e-12;
        if (result.value < best.value) best = result;
        best.converged = result.converged;
        if (result.converged && !improved) break;
        scale *= 0.5;  // re-polish from the incumbent with a tighter simplex
    }

    return {best.point[0], std::exp(best.point[1]), -std::min(best.value, start_value),
            best.converged, total_evals};
}

double fit_binomial(const std::vector<double>& samples, int levels, bool paper_estimator) {
    if (samples.empty()) throw DegenerateSample("binomial fit: needs n >= 1");
    if (levels < 1) throw DomainError("binomial fit: K must be >= 1");
    double mean = 0.0;
    for (double x : samples) mean += x;
    mean /= samples.size();
    const double p = mean / (paper_estimator ? levels + 1.0 : levels);
    return std::clamp(p, 0.0, 1.0);
}

BetaParams fit_betabinomial_moments(int levels, double mean, double variance) {
    if (levels < 1) throw DomainError("beta_binomial fit: K must be >= 1");
    if (!(mean > 0.0)) throw DegenerateSample("beta_binomial fit: mean must be > 0");
    const double k = levels;
    const double denominator = k * (variance / mean - 1.0) + mean;
    if (std::fabs(denominator) < 1e-12) {
        throw DegenerateSample("beta_binomial fit: vanishing denominator");
    }
    const double alpha = (k * mean - mean * mean - variance) / denominator;
    const double beta = (k - mean) * (k - mean - variance / mean) / denominator;
    if (!(alpha > 0.0) || !(beta > 0.0)) {
        throw DegenerateSample("beta_binomial fit: non-positive estimate");
    }
    return {alpha, beta};
}

BetaParams fit_betabinomial_moments(const std::vector<double>& samples, int levels) {
    const auto m = sample_moments(samples);
    return fit_betabinomial_moments(levels, m.mean, m.variance);
}

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
    if (samples.empty()) throw DomainError("ks_statistic: needs n >= 1");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        d = std::max(d, (i + 1) / n - f);
        d = std::max(d, f - i / n);
    }
    return d;
}

double chi2_statistic(const std::vector<double>& counts,
                      const std::vector<double>& probabilities) {
    if (counts.size() != probabilities.size()) {
        throw DimensionMismatch("chi2: counts and probabilities differ in length");
    }
    double n = 0.0;
    for (double c : counts) {
        if (c < 0.0) throw DomainError("chi2: counts must be >= 0");
        n += c;
    }
    if (n < 1.0) throw DomainError("chi2: needs at least one observation");
    double statistic = 0.0;
    for (std::size_t k = 0; k < counts.size(); ++k) {
        if (probabilities[k] < 1e-12) {
            throw DomainError("chi2: zero expected count at grade " + std::to_string(k));
        }
        const double expected = n * probabilities[k];
        statistic += (counts[k] - expected) * (counts[k] - expected) / expected;
    }
    return statistic;
}

double chi2_statistic(const std::vector<double>& counts, const Marginal& model) {
    if (!is_discrete(model)) throw DomainError("chi2: model must be discrete");
    const int levels = scale_of(model).levels();
    std::vector<double> probabilities(levels + 1);
    for (int k = 0; k <= levels; ++k) probabilities[k] = density(model, k);
    return chi2_statistic(counts, probabilities);
}

std::vector<double> grade_counts(const std::vector<double>& samples, int levels) {
    std::vector<double> counts(levels + 1, 0.0);
    for (double x : samples) {
        if (x != std::floor(x) || x < 0.0 || x > levels) {
            throw DomainError("grade_counts: value outside {0..K}");
        }
        counts[static_cast<std::size_t>(x)] += 1.0;
    }
    return counts;
}

CorrelationEstimate correlation_matrix(const Profile& profile, CorrelationMethod method) {
    const std::size_t n = profile.voters();
    const std::size_t m = profile.candidates();
    if (n < 3) throw DomainError("correlation_matrix: needs n >= 3");

    std::vector<std::vector<double>> columns(m);
    for (std::size_t c = 0; c < m; ++c) {
        columns[c] = profile.column(c);
        if (method == CorrelationMethod::Spearman) columns[c] = mid_ranks(columns[c]);
    }

    CorrelationEstimate out{CorrelationMatrix(m), {}};
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            bool defined = true;
            const double r = pearson(columns[i], columns[j], defined);
            out.matrix.set(i, j, r);
            if (!defined) out.undefined_pairs.emplace_back(j, i);
        }
    }
    return out;
}

TestResult kruskal_wallis(const std::vector<std::vector<double>>& groups) {
    if (groups.size() < 2) throw DomainError("kruskal_wallis: needs >= 2 groups");
    std::vector<double> pooled;
    for (const auto& g : groups) {
        if (g.empty()) throw DomainError("kruskal_wallis: groups must be non-empty");
        pooled.insert(pooled.end(), g.begin(), g.end());
    }
    const double n = static_cast<double>(pooled.size());
    if (std::set<double>(pooled.begin(), pooled.end()).size() == 1) {
        throw DegenerateSample("kruskal_wallis: all values are equal");
    }

    const auto ranks = mid_ranks(pooled);
    double h = 0.0;
    std::size_t offset = 0;
    for (const auto& g : groups) {
        double rank_sum = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) rank_sum += ranks[offset + i];
        h += rank_sum * rank_sum / g.size();
        offset += g.size();
    }
    h = 12.0 / (n * (n + 1.0)) * h - 3.0 * (n + 1.0);

    // Tie correction: divide by 1 - sum(t^3 - t) / (N^3 - N).
    std::vector<double> sorted(pooled);
    std::sort(sorted.begin(), sorted.end());
    double tie_sum = 0.0;
    std::size_t i = 0;
    while (i < sorted.size()) {
        std::size_t j = i;
        while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
        const double t = static_cast<double>(j - i + 1);
        tie_sum += t * t * t - t;
        i = j + 1;
    }
    h /= 1.0 - tie_sum / (n * n * n - n);

    const double df = static_cast<double>(groups.size()) - 1.0;
    return {h, chi_squared_upper_tail(h, df)};
}

TestResult bartlett_sphericity(const CorrelationMatrix& R, std::size_t n) {
    const std::size_t m = R.dim();
    if (n <= m) throw DomainError("bartlett_sphericity: needs n > m");

    double log_det = 0.0;
    try {
        const auto L = cholesky(R);
        for (std::size_t i = 0; i < m; ++i) log_det += 2.0 * std::log(L[i][i]);
    } catch (const NotPositiveDefinite&) {
        throw SingularMatrix("bartlett_sphericity: det R <= 0");
    }

    const double statistic = -(n - 1.0 - (2.0 * m + 5.0) / 6.0) * log_det;
    const double df = m * (m - 1.0) / 2.0;
    return {statistic, chi_squared_upper_tail(statistic, df)};
}

Marginal empirical_marginal(const std::vector<double>& samples, int classes) {
    if (classes < 1) throw DomainError("empirical_marginal: G must be >= 1");
    if (samples.empty()) throw DomainError("empirical_marginal: needs n >= 1");
    std::vector<double> masses(classes, 0.0);
    for (double x : samples) {
        if (!(x >= 0.0 && x <= 1.0)) {
            throw DomainError("empirical_marginal: sample outside [0,1]");
        }
        const auto bin = std::min<std::size_t>(static_cast<std::size_t>(x * classes),
                                               classes - 1);
        masses[bin] += 1.0;
    }
    for (auto& mass : masses) mass /= static_cast<double>(samples.size());
    return EmpiricalDist{std::move(masses)};
}

Profile jitter_profile(const Profile& profile, RandomSource& source) {
    if (!profile.scale().is_discrete()) {
        throw DomainError("jitter_profile: profile is already continuous");
    }
    const double denom = profile.scale().levels() + 1.0;
    std::vector<double> values(profile.values());
    for (auto& v : values) v = (v + source.next_double()) / denom;
    return validate_profile(std::move(values), profile.voters(), Scale::continuous(),
                            profile.candidate_names());
}

namespace {

std::vector<std::string> default_families(const Scale& scale, bool with_empirical) {
    if (scale.is_discrete()) return {"discrete_uniform", "binomial", "beta_binomial"};
    std::vector<std::string> out = {"uniform", "trunc_normal", "beta"};
    if (with_empirical) out.push_back("empirical");
    return out;
}

MarginalFitResult fit_one_family(const std::string& family, const std::vector<double>& samples,
                                 const Scale& scale, const PipelineOptions& options) {
    MarginalFitResult result;
    result.family = family;
    result.n_used = samples.size();
    try {
        Marginal fitted = Uniform01{};
        if (family == "uniform") {
            fitted = Uniform01{};
        } else if (family == "trunc_normal") {
            const auto fit = fit_truncnormal_mle(samples);
            if (!fit.converged) result.error = "optimizer hit the evaluation cap";
            fitted = TruncNormal{fit.mu, fit.sigma};
        } else if (family == "beta") {
            const auto p = fit_beta_moments(samples);
            fitted = BetaDist{p.alpha, p.beta};
        } else if (family == "empirical") {
            const int classes = options.histogram_classes.value_or(40);
            fitted = empirical_marginal(samples, classes);
            result.histogram_classes = classes;
        } else if (family == "discrete_uniform") {
            fitted = DiscreteUniform{scale.levels()};
        } else if (family == "binomial") {
            fitted = BinomialDist{scale.levels(),
                                  fit_binomial(samples, scale.levels(),
                                               options.paper_binomial_estimator)};
        } else if (family == "beta_binomial") {
            const auto p = fit_betabinomial_moments(samples, scale.levels());
            fitted = BetaBinomialDist{scale.levels(), p.alpha, p.beta};
        } else {
            throw DomainError("unknown family '" + family + "'");
        }

        if (scale.is_discrete()) {
            result.gof = chi2_statistic(grade_counts(samples, scale.levels()), fitted);
        } else {
            result.gof =
                ks_statistic(samples, [&](double x) { return cumulative(fitted, x); });
        }
        result.fitted = std::move(fitted);
    } catch (const std::exception& error) {
        result.error = error.what();
    }
    return result;
}

const MarginalFitResult* best_fit(const std::vector<MarginalFitResult>& fits) {
    const MarginalFitResult* best = nullptr;
    for (const auto& fit : fits) {
        if (!fit.fitted) continue;
        if (best == nullptr || fit.gof < best->gof) best = &fit;
    }
    return best;
}

// Latent Gaussian-copula correlation from Spearman's rho.
CorrelationMatrix copula_correlation_from_spearman(const CorrelationEstimate& spearman,
                                                   std::vector<std::string>& warnings) {
    const std::size_t m = spearman.matrix.dim();
    CorrelationMatrix latent(m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            const double rho = 2.0 * std::sin(M_PI * spearman.matrix(i, j) / 6.0);
            latent.set(i, j, std::clamp(rho, -1.0, 1.0));
        }
    }
    if (latent.min_eigenvalue() < 1e-8) {
        warnings.push_back("estimated correlation repaired to positive definite");
        latent = latent.nearest_positive_definite();
    }
    return latent;
}

}  // namespace

FitReport fit_pipeline(const Profile& profile, const PipelineOptions& options) {
    const std::size_t n = profile.voters();
    const std::size_t m = profile.candidates();
    if (n < 10) throw DomainError("fit_pipeline: needs n >= 10");

    FitReport report;
    report.voters = n;
    report.scale = profile.scale();
    report.candidate_names = profile.candidate_names();

    auto families = options.families;
    if (families.empty()) {
        families = default_families(profile.scale(), options.histogram_classes.has_value());
    }
    for (const auto& family : families) {
        const bool discrete_family = family == "discrete_uniform" || family == "binomial" ||
                                     family == "beta_binomial";
        if (family != "uniform" && family != "trunc_normal" && family != "beta" &&
            family != "empirical" && !discrete_family) {
            throw DomainError("fit_pipeline: unknown family '" + family + "'");
        }
        if (discrete_family != profile.scale().is_discrete()) {
            throw DomainError("fit_pipeline: family '" + family +
                              "' does not match the profile scale");
        }
    }

    // Step 1: marginal fits with goodness-of-fit distances.
    std::vector<std::vector<double>> columns(m);
    for (std::size_t c = 0; c < m; ++c) columns[c] = profile.column(c);

    report.candidate_fits.resize(m);
    for (std::size_t c = 0; c < m; ++c) {
        for (const auto& family : families) {
            report.candidate_fits[c].push_back(
                fit_one_family(family, columns[c], profile.scale(), options));
        }
    }
    std::vector<double> pooled(profile.values());
    for (const auto& family : families) {
        report.pooled_fits.push_back(fit_one_family(family, pooled, profile.scale(), options));
    }
    for (std::size_t c = 0; c < m; ++c) {
        for (const auto& fit : report.candidate_fits[c]) {
            if (!fit.fitted) {
                report.warnings.push_back("candidate " + report.candidate_names[c] + ": " +
                                          fit.family + " fit failed (" + fit.error + ")");
            }
        }
    }

    if (n > 10000) {
        report.warnings.push_back(
            "large sample: equality/independence tests reject mechanically; compare the "
            "distance statistics instead of the verdicts");
    }

    // Step 2: can the marginals be considered identical?
    bool identical = true;
    if (m >= 2) {
        try {
            report.kruskal_wallis = kruskal_wallis(columns);
            identical = report.kruskal_wallis->p_value >= options.significance_level;
        } catch (const DegenerateSample&) {
            report.warnings.push_back("kruskal-wallis skipped: all evaluations equal");
        }
    } else {
        report.warnings.push_back("single candidate: IID and IDD coincide, steps 2-3 skipped");
    }

    // Step 3: dependence between candidates.
    bool independent = true;
    if (m >= 2) {
        report.pearson = correlation_matrix(profile, CorrelationMethod::Pearson);
        report.spearman = correlation_matrix(profile, CorrelationMethod::Spearman);
        if (!report.pearson->undefined_pairs.empty()) {
            report.warnings.push_back("constant columns: some correlations are undefined");
        }
        try {
            report.bartlett = bartlett_sphericity(report.pearson->matrix, n);
            independent = report.bartlett->p_value >= options.significance_level;
        } catch (const SingularMatrix&) {
            report.warnings.push_back("bartlett skipped: singular correlation matrix");
            independent = false;
        } catch (const DomainError& error) {
            report.warnings.push_back(std::string("bartlett skipped: ") + error.what());
        }
    }

    // Step 4: pick the model class and assemble a generator.
    report.selected_class = std::string(independent ? "I" : "D") + (identical ? "I" : "D") + "D";

    const auto* pooled_best = best_fit(report.pooled_fits);
    std::vector<Marginal> per_candidate;
    bool all_candidates_fitted = true;
    for (std::size_t c = 0; c < m; ++c) {
        const auto* best = best_fit(report.candidate_fits[c]);
        if (best == nullptr) {
            all_candidates_fitted = false;
            break;
        }
        per_candidate.push_back(*best->fitted);
    }

    if (identical && pooled_best == nullptr) {
        report.warnings.push_back("no marginal family fitted the pooled sample; no model built");
    } else if (!identical && !all_candidates_fitted) {
        report.warnings.push_back("some candidate has no valid marginal fit; no model built");
    } else if (independent) {
        if (identical) {
            report.model = IidModel{*pooled_best->fitted, m};
        } else {
            report.model = IddModel{std::move(per_candidate)};
        }
    } else {
        std::vector<Marginal> marginals =
            identical ? std::vector<Marginal>(m, *pooled_best->fitted)
                      : std::move(per_candidate);
        if (options.dependence == PipelineOptions::DependenceKind::Checkerboard) {
            const auto pseudo = pseudo_observations(profile);
            report.model = CopulaModel{
                fit_checkerboard(pseudo, options.checkerboard_cells), std::move(marginals)};
        } else {
            report.model = CopulaModel{
                copula_correlation_from_spearman(*report.spearman, report.warnings),
                std::move(marginals)};
        }
    }

    return report;
}

}  // namespace evalsim
