#include "evalsim/marginal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "evalsim/errors.hpp"
#include "evalsim/special_functions.hpp"

namespace evalsim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool condition, const std::string& what) {
    if (!condition) throw DomainError(what);
}

// Normalizing mass of N(mu, sigma^2) restricted to [0,1].
double trunc_normal_mass(double mu, double sigma) {
    return norm_cdf((1.0 - mu) / sigma) - norm_cdf((0.0 - mu) / sigma);
}

double beta_pdf(double alpha, double beta, double x) {
    if (x == 0.0) {
        if (alpha < 1.0) return kInf;
        if (alpha > 1.0) return 0.0;
        return std::exp((beta - 1.0) * std::log1p(-x) - log_beta(alpha, beta));
    }
    if (x == 1.0) {
        if (beta < 1.0) return kInf;
        if (beta > 1.0) return 0.0;
        return std::exp((alpha - 1.0) * std::log(x) - log_beta(alpha, beta));
    }
    return std::exp((alpha - 1.0) * std::log(x) + (beta - 1.0) * std::log1p(-x) -
                    log_beta(alpha, beta));
}

double binomial_pmf(int levels, double p, int k) {
    if (p == 0.0) return k == 0 ? 1.0 : 0.0;
    if (p == 1.0) return k == levels ? 1.0 : 0.0;
    return std::exp(log_choose(levels, k) + k * std::log(p) +
                    (levels - k) * std::log1p(-p));
}

double beta_binomial_pmf(int levels, double alpha, double beta, int k) {
    return std::exp(log_choose(levels, k) + log_beta(k + alpha, levels - k + beta) -
                    log_beta(alpha, beta));
}

int check_grade(const Marginal& marginal, double x) {
    const int levels = scale_of(marginal).levels();
    require(x == std::floor(x) && x >= 0.0 && x <= levels,
            family_name(marginal) + ": grade outside {0.." + std::to_string(levels) + "}");
    return static_cast<int>(x);
}

double discrete_pmf(const Marginal& marginal, int k) {
    if (const auto* u = std::get_if<DiscreteUniform>(&marginal)) {
        return 1.0 / (u->levels + 1);
    }
    if (const auto* b = std::get_if<BinomialDist>(&marginal)) {
        return binomial_pmf(b->levels, b->p, k);
    }
    const auto& bb = std::get<BetaBinomialDist>(marginal);
    return beta_binomial_pmf(bb.levels, bb.alpha, bb.beta, k);
}

// Beta quantile: bisection, then Newton once the bracket is tight.
double beta_quantile(double alpha, double beta, double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    double lo = 0.0, hi = 1.0;
    double x = 0.5;
    for (int iter = 0; iter < 200; ++iter) {
        const double f = reg_incomplete_beta(x, alpha, beta) - u;
        if (f > 0.0) {
            hi = x;
        } else {
            lo = x;
        }
        if (std::fabs(f) < 1e-14 || hi - lo < 1e-15) break;
        double next = x;
        const double pdf = beta_pdf(alpha, beta, x);
        if (pdf > 0.0 && std::isfinite(pdf)) next = x - f / pdf;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::fabs(next - x) < 1e-10 && std::fabs(f) < 1e-10) {
            x = next;
            break;
        }
        x = next;
    }
    return std::clamp(x, 0.0, 1.0);
}

const std::vector<double>& empirical_masses(const EmpiricalDist& e) {
    require(!e.masses.empty(), "empirical: needs at least one class");
    return e.masses;
}

}  // namespace

void validate_marginal(const Marginal& marginal) {
    std::visit(
        [](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, TruncNormal>) {
                require(m.sigma > 0.0, "trunc_normal: sigma must be > 0");
                require(std::isfinite(m.mu), "trunc_normal: mu must be finite");
            } else if constexpr (std::is_same_v<T, BetaDist>) {
                require(m.alpha > 0.0 && m.beta > 0.0, "beta: alpha, beta must be > 0");
            } else if constexpr (std::is_same_v<T, DiscreteUniform>) {
                require(m.levels >= 1, "discrete_uniform: K must be >= 1");
            } else if constexpr (std::is_same_v<T, BinomialDist>) {
                require(m.levels >= 1, "binomial: K must be >= 1");
                require(m.p >= 0.0 && m.p <= 1.0, "binomial: p outside [0,1]");
            } else if constexpr (std::is_same_v<T, BetaBinomialDist>) {
                require(m.levels >= 1, "beta_binomial: K must be >= 1");
                require(m.alpha > 0.0 && m.beta > 0.0,
                        "beta_binomial: alpha, beta must be > 0");
            } else if constexpr (std::is_same_v<T, EmpiricalDist>) {
                require(!m.masses.empty(), "empirical: needs at least one class");
                double total = 0.0;
                for (double mass : m.masses) {
                    require(mass >= 0.0, "empirical: class masses must be >= 0");
                    total += mass;
                }
                require(std::fabs(total - 1.0) <= 1e-9, "empirical: masses must sum to 1");
            }
        },
        marginal);
}

bool is_discrete(const Marginal& marginal) {
    return std::holds_alternative<DiscreteUniform>(marginal) ||
           std::holds_alternative<BinomialDist>(marginal) ||
           std::holds_alternative<BetaBinomialDist>(marginal);
}

Scale scale_of(const Marginal& marginal) {
    if (const auto* u = std::get_if<DiscreteUniform>(&marginal)) return Scale::discrete(u->levels);
    if (const auto* b = std::get_if<BinomialDist>(&marginal)) return Scale::discrete(b->levels);
    if (const auto* bb = std::get_if<BetaBinomialDist>(&marginal)) {
        return Scale::discrete(bb->levels);
    }
    return Scale::continuous();
}

std::string family_name(const Marginal& marginal) {
    struct Namer {
        std::string operator()(const Uniform01&) const { return "uniform"; }
        std::string operator()(const TruncNormal&) const { return "trunc_normal"; }
        std::string operator()(const BetaDist&) const { return "beta"; }
        std::string operator()(const DiscreteUniform&) const { return "discrete_uniform"; }
        std::string operator()(const BinomialDist&) const { return "binomial"; }
        std::string operator()(const BetaBinomialDist&) const { return "beta_binomial"; }
        std::string operator()(const EmpiricalDist&) const { return "empirical"; }
    };
    return std::visit(Namer{}, marginal);
}

double density(const Marginal& marginal, double x) {
    if (is_discrete(marginal)) return discrete_pmf(marginal, check_grade(marginal, x));
    require(x >= 0.0 && x <= 1.0, family_name(marginal) + ": point outside [0,1]");
    if (std::holds_alternative<Uniform01>(marginal)) return 1.0;
    if (const auto* tn = std::get_if<TruncNormal>(&marginal)) {
        const double z = (x - tn->mu) / tn->sigma;
        return norm_pdf(z) / (tn->sigma * trunc_normal_mass(tn->mu, tn->sigma));
    }
    if (const auto* b = std::get_if<BetaDist>(&marginal)) {
        return beta_pdf(b->alpha, b->beta, x);
    }
    const auto& masses = empirical_masses(std::get<EmpiricalDist>(marginal));
    const auto g = masses.size();
    const auto bin = std::min<std::size_t>(static_cast<std::size_t>(x * g), g - 1);
    return masses[bin] * g;
}

double cumulative(const Marginal& marginal, double x) {
    if (is_discrete(marginal)) {
        const int levels = scale_of(marginal).levels();
        if (x < 0.0) return 0.0;
        if (x >= levels) return 1.0;
        const int k = static_cast<int>(std::floor(x));
        double cdf = 0.0;
        for (int i = 0; i <= k; ++i) cdf += discrete_pmf(marginal, i);
        return std::min(cdf, 1.0);
    }
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    if (std::holds_alternative<Uniform01>(marginal)) return x;
    if (const auto* tn = std::get_if<TruncNormal>(&marginal)) {
        const double lower = norm_cdf((0.0 - tn->mu) / tn->sigma);
        return (norm_cdf((x - tn->mu) / tn->sigma) - lower) /
               trunc_normal_mass(tn->mu, tn->sigma);
    }
    if (const auto* b = std::get_if<BetaDist>(&marginal)) {
        return reg_incomplete_beta(x, b->alpha, b->beta);
    }
    const auto& masses = empirical_masses(std::get<EmpiricalDist>(marginal));
    const auto g = masses.size();
    const auto bin = std::min<std::size_t>(static_cast<std::size_t>(x * g), g - 1);
    double below = 0.0;
    for (std::size_t i = 0; i < bin; ++i) below += masses[i];
    return std::min(below + masses[bin] * (x * g - bin), 1.0);
}

double quantile(const Marginal& marginal, double u) {
    require(u >= 0.0 && u <= 1.0, "quantile: u outside [0,1]");
    if (is_discrete(marginal)) {
        const int levels = scale_of(marginal).levels();
        double cdf = 0.0;
        for (int k = 0; k < levels; ++k) {
            cdf += discrete_pmf(marginal, k);
            if (cdf >= u) return k;
        }
        return levels;
    }
    if (std::holds_alternative<Uniform01>(marginal)) return u;
    if (const auto* tn = std::get_if<TruncNormal>(&marginal)) {
        const double lower = norm_cdf((0.0 - tn->mu) / tn->sigma);
        const double mass = trunc_normal_mass(tn->mu, tn->sigma);
        const double x = tn->mu + tn->sigma * norm_quantile(lower + u * mass);
        return std::clamp(x, 0.0, 1.0);
    }
    if (const auto* b = std::get_if<BetaDist>(&marginal)) {
        return beta_quantile(b->alpha, b->beta, u);
    }
    const auto& masses = empirical_masses(std::get<EmpiricalDist>(marginal));
    const auto g = masses.size();
    if (u <= 0.0) return 0.0;
    double below = 0.0;
    for (std::size_t bin = 0; bin < g; ++bin) {
        if (below + masses[bin] >= u) {
            if (masses[bin] == 0.0) return static_cast<double>(bin) / g;
            return (bin + (u - below) / masses[bin]) / g;
        }
        below += masses[bin];
    }
    return 1.0;
}

double draw_standard_normal(RandomSource& source) {
    return norm_quantile(source.next_open());
}

double draw_gamma(double shape, RandomSource& source) {
    require(shape > 0.0, "draw_gamma: shape must be > 0");
    if (shape < 1.0) {
        // Boost: Gamma(a) = Gamma(a+1) * U^{1/a}.
        const double g = draw_gamma(shape + 1.0, source);
        return g * std::pow(source.next_open(), 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        const double x = draw_standard_normal(source);
        const double t = 1.0 + c * x;
        if (t <= 0.0) continue;
        const double v = t * t * t;
        const double u = source.next_open();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

double draw(const Marginal& marginal, RandomSource& source) {
    if (const auto* b = std::get_if<BetaDist>(&marginal)) {
        const double g1 = draw_gamma(b->alpha, source);
        const double g2 = draw_gamma(b->beta, source);
        return g1 / (g1 + g2);
    }
    if (const auto* bb = std::get_if<BetaBinomialDist>(&marginal)) {
        const double g1 = draw_gamma(bb->alpha, source);
        const double g2 = draw_gamma(bb->beta, source);
        const Marginal mixed = BinomialDist{bb->levels, g1 / (g1 + g2)};
        return quantile(mixed, source.next_open());
    }
    return quantile(marginal, source.next_open());
}

Moments moments(const Marginal& marginal) {
    struct Calc {
        Moments operator()(const Uniform01&) const { return {0.5, 1.0 / 12.0}; }
        Moments operator()(const TruncNormal& m) const {
            const double a = (0.0 - m.mu) / m.sigma;
            const double b = (1.0 - m.mu) / m.sigma;
            const double z = norm_cdf(b) - norm_cdf(a);
            const double ratio = (norm_pdf(a) - norm_pdf(b)) / z;
            const double mean = m.mu + m.sigma * ratio;
            const double variance =
                m.sigma * m.sigma *
                (1.0 + (a * norm_pdf(a) - b * norm_pdf(b)) / z - ratio * ratio);
            return {mean, variance};
        }
        Moments operator()(const BetaDist& m) const {
            const double s = m.alpha + m.beta;
            return {m.alpha / s, m.alpha * m.beta / (s * s * (s + 1.0))};
        }
        Moments operator()(const DiscreteUniform& m) const {
            const double k1 = m.levels + 1.0;
            return {m.levels / 2.0, (k1 * k1 - 1.0) / 12.0};
        }
        Moments operator()(const BinomialDist& m) const {
            return {m.levels * m.p, m.levels * m.p * (1.0 - m.p)};
        }
        Moments operator()(const BetaBinomialDist& m) const {
            const double s = m.alpha + m.beta;
            const double mean = m.levels * m.alpha / s;
            const double variance =
                m.levels * m.alpha * m.beta * (s + m.levels) / (s * s * (s + 1.0));
            return {mean, variance};
        }
        Moments operator()(const EmpiricalDist& m) const {
            const auto g = m.masses.size();
            const double width = 1.0 / static_cast<double>(g);
            double mean = 0.0, second = 0.0;
            for (std::size_t i = 0; i < g; ++i) {
                const double center = (i + 0.5) * width;
                mean += m.masses[i] * center;
                second += m.masses[i] * (center * center + width * width / 12.0);
            }
            return {mean, second - mean * mean};
        }
    };
    return std::visit(Calc{}, marginal);
}

}  // namespace evalsim
