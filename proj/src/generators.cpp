#include "evalsim/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

#include "evalsim/errors.hpp"

namespace evalsim {

namespace {

// Child-stream indices: voters take 0..n-1, auxiliary draws (candidate
// positions and the like) start here.
constexpr std::uint64_t kAuxStreamBase = 0x8000000000000000ULL;

void require(bool condition, const std::string& what) {
    if (!condition) throw DomainError(what);
}

void validate_probabilities(const std::vector<double>& p) {
    require(!p.empty(), "multinomial: p must be non-empty");
    double total = 0.0;
    for (double value : p) {
        require(value >= 0.0, "multinomial: p entries must be >= 0");
        total += value;
    }
    require(std::fabs(total - 1.0) <= 1e-12, "multinomial: p must sum to 1");
}

void validate_point_distribution(const PointDistribution& dist, std::size_t dim) {
    if (const auto* mix = std::get_if<GaussianMixture>(&dist)) {
        require(!mix->components.empty(), "gaussian mixture: needs >= 1 component");
        for (const auto& comp : mix->components) {
            require(comp.mean.size() == dim, "gaussian mixture: mean dimension != d");
            require(comp.sigma > 0.0, "gaussian mixture: sigma must be > 0");
            require(comp.weight > 0.0, "gaussian mixture: weight must be > 0");
        }
    }
}

void validate_shared_scale(const std::vector<Marginal>& marginals, const char* model_name) {
    require(!marginals.empty(), std::string(model_name) + ": needs >= 1 marginal");
    for (const auto& m : marginals) validate_marginal(m);
    const Scale scale = scale_of(marginals.front());
    for (const auto& m : marginals) {
        require(scale_of(m) == scale,
                std::string(model_name) + ": marginals must share one scale");
    }
}

// Generates one voter row. Holds whatever per-model precomputation the
// row loop needs so the per-voter cost stays flat.
class RowSampler {
public:
    explicit RowSampler(const GeneratorModel& model) : model_(model) {
        if (const auto* cop = std::get_if<CopulaModel>(&model)) {
            if (const auto* corr = std::get_if<CorrelationMatrix>(&cop->dependence)) {
                gaussian_.emplace(*corr, cop->marginals);
            }
        }
    }

    std::vector<double> operator()(RandomSource& source) const {
        if (const auto* iid = std::get_if<IidModel>(&model_)) {
            std::vector<double> row(iid->candidates);
            for (auto& value : row) value = draw(iid->marginal, source);
            return row;
        }
        if (const auto* idd = std::get_if<IddModel>(&model_)) {
            std::vector<double> row(idd->marginals.size());
            for (std::size_t c = 0; c < row.size(); ++c) {
                row[c] = draw(idd->marginals[c], source);
            }
            return row;
        }
        if (const auto* cop = std::get_if<CopulaModel>(&model_)) {
            if (gaussian_) return gaussian_->draw_row(source);
            return checkerboard_draw(std::get<CheckerboardCopula>(cop->dependence),
                                     cop->marginals, source);
        }
        if (const auto* multi = std::get_if<MultinomialModel>(&model_)) {
            return multinomial_row(multi->levels, multi->p, source);
        }
        const auto& dir = std::get<DirichletModel>(model_);
        return dirichlet_row(dir.alpha, source);
    }

private:
    const GeneratorModel& model_;
    std::optional<GaussianCopulaSampler> gaussian_;
};

}  // namespace

double link_apply(const LinkFunction& link, double delta) {
    require(delta >= 0.0, "link_apply: distance must be >= 0");
    if (const auto* lin = std::get_if<LinearTruncatedLink>(&link)) {
        return std::max(0.0, 1.0 - lin->ell * delta);
    }
    const auto& sig = std::get<SigmoidLink>(link);
    return 1.0 / (1.0 + std::exp(sig.lambda * (sig.beta * delta - 1.0)));
}

std::vector<double> draw_point(const PointDistribution& dist, std::size_t dim,
                               RandomSource& source) {
    std::vector<double> point(dim);
    if (std::holds_alternative<UniformCube>(dist)) {
        for (auto& x : point) x = source.next_double();
        return point;
    }
    const auto& mix = std::get<GaussianMixture>(dist);
    double total = 0.0;
    for (const auto& comp : mix.components) total += comp.weight;
    double u = source.next_double() * total;
    std::size_t pick = mix.components.size() - 1;
    for (std::size_t i = 0; i < mix.components.size(); ++i) {
        u -= mix.components[i].weight;
        if (u < 0.0) {
            pick = i;
            break;
        }
    }
    const auto& comp = mix.components[pick];
    for (std::size_t k = 0; k < dim; ++k) {
        point[k] = comp.mean[k] + comp.sigma * draw_standard_normal(source);
    }
    return point;
}

void validate_model(const GeneratorModel& model) {
    if (const auto* iid = std::get_if<IidModel>(&model)) {
        require(iid->candidates >= 1, "iid: needs m >= 1");
        validate_marginal(iid->marginal);
        return;
    }
    if (const auto* idd = std::get_if<IddModel>(&model)) {
        validate_shared_scale(idd->marginals, "idd");
        return;
    }
    if (const auto* cop = std::get_if<CopulaModel>(&model)) {
        validate_shared_scale(cop->marginals, "copula");
        if (const auto* corr = std::get_if<CorrelationMatrix>(&cop->dependence)) {
            require(corr->dim() == cop->marginals.size(),
                    "copula: correlation dim != marginal count");
            corr->validate();
        } else {
            require(std::get<CheckerboardCopula>(cop->dependence).dim() ==
                        cop->marginals.size(),
                    "copula: checkerboard dim != marginal count");
        }
        return;
    }
    if (const auto* multi = std::get_if<MultinomialModel>(&model)) {
        require(multi->levels >= 0, "multinomial: K must be >= 0");
        validate_probabilities(multi->p);
        return;
    }
    if (const auto* dir = std::get_if<DirichletModel>(&model)) {
        require(!dir->alpha.empty(), "dirichlet: alpha must be non-empty");
        for (double a : dir->alpha) require(a > 0.0, "dirichlet: alpha entries must be > 0");
        return;
    }
    const auto& spatial = std::get<SpatialModel>(model);
    require(spatial.dim >= 1, "spatial: needs d >= 1");
    validate_point_distribution(spatial.voters, spatial.dim);
    if (spatial.candidate_positions.empty()) {
        require(spatial.candidates >= 1, "spatial: needs fixed positions or m >= 1");
        if (spatial.candidate_dist) {
            validate_point_distribution(*spatial.candidate_dist, spatial.dim);
        }
    } else {
        for (const auto& y : spatial.candidate_positions) {
            if (y.size() != spatial.dim) {
                throw DimensionMismatch("spatial: candidate position dimension != d");
            }
        }
    }
    if (const auto* lin = std::get_if<LinearTruncatedLink>(&spatial.link)) {
        require(lin->ell > 0.0, "link: ell must be > 0");
    } else {
        const auto& sig = std::get<SigmoidLink>(spatial.link);
        require(sig.lambda > 0.0 && sig.beta > 0.0, "link: lambda, beta must be > 0");
    }
    if (spatial.levels) require(*spatial.levels >= 1, "spatial: K must be >= 1");
}

std::size_t model_candidates(const GeneratorModel& model) {
    if (const auto* iid = std::get_if<IidModel>(&model)) return iid->candidates;
    if (const auto* idd = std::get_if<IddModel>(&model)) return idd->marginals.size();
    if (const auto* cop = std::get_if<CopulaModel>(&model)) return cop->marginals.size();
    if (const auto* multi = std::get_if<MultinomialModel>(&model)) return multi->p.size();
    if (const auto* dir = std::get_if<DirichletModel>(&model)) return dir->alpha.size();
    const auto& spatial = std::get<SpatialModel>(model);
    return spatial.candidate_positions.empty() ? spatial.candidates
                                               : spatial.candidate_positions.size();
}

Scale model_scale(const GeneratorModel& model) {
    if (const auto* iid = std::get_if<IidModel>(&model)) return scale_of(iid->marginal);
    if (const auto* idd = std::get_if<IddModel>(&model)) {
        return scale_of(idd->marginals.front());
    }
    if (const auto* cop = std::get_if<CopulaModel>(&model)) {
        return scale_of(cop->marginals.front());
    }
    if (const auto* multi = std::get_if<MultinomialModel>(&model)) {
        return Scale::discrete(std::max(multi->levels, 1));
    }
    if (std::holds_alternative<DirichletModel>(model)) return Scale::continuous();
    const auto& spatial = std::get<SpatialModel>(model);
    return spatial.levels ? Scale::discrete(*spatial.levels) : Scale::continuous();
}

std::vector<double> multinomial_row(int levels, const std::vector<double>& p,
                                    RandomSource& source) {
    validate_probabilities(p);
    require(levels >= 0, "multinomial_row: K must be >= 0");
    const std::size_t m = p.size();
    std::vector<double> row(m, 0.0);
    int remaining = levels;
    double tail = 1.0;
    for (std::size_t c = 0; c + 1 < m && remaining > 0; ++c) {
        const double q = tail > 0.0 ? std::clamp(p[c] / tail, 0.0, 1.0) : 0.0;
        const Marginal slot = BinomialDist{remaining, q};
        const int x = static_cast<int>(quantile(slot, source.next_open()));
        row[c] = x;
        remaining -= x;
        tail -= p[c];
    }
    row[m - 1] = remaining;
    return row;
}

std::vector<double> dirichlet_row(const std::vector<double>& alpha, RandomSource& source) {
    require(!alpha.empty(), "dirichlet_row: alpha must be non-empty");
    std::vector<double> row(alpha.size());
    double total = 0.0;
    for (std::size_t c = 0; c < alpha.size(); ++c) {
        require(alpha[c] > 0.0, "dirichlet_row: alpha entries must be > 0");
        row[c] = draw_gamma(alpha[c], source);
        total += row[c];
    }
    for (auto& value : row) value /= total;
    return row;
}

double euclidean_distance(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw DimensionMismatch("euclidean_distance: dimensions differ");
    double sum = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double diff = a[k] - b[k];
        sum += diff * diff;
    }
    return std::sqrt(sum);
}

Profile profile_from_positions(const std::vector<std::vector<double>>& voter_positions,
                               const std::vector<std::vector<double>>& candidate_positions,
                               const LinkFunction& link, std::optional<int> levels) {
    const std::size_t n = voter_positions.size();
    const std::size_t m = candidate_positions.size();
    require(n >= 1 && m >= 1, "profile_from_positions: needs voters and candidates");

    std::vector<double> values(n * m);
    for (std::size_t v = 0; v < n; ++v) {
        for (std::size_t c = 0; c < m; ++c) {
            const double e =
                link_apply(link, euclidean_distance(voter_positions[v], candidate_positions[c]));
            values[v * m + c] = levels ? discretize(e, *levels) : e;
        }
    }
    const Scale scale = levels ? Scale::discrete(*levels) : Scale::continuous();
    return validate_profile(std::move(values), n, scale);
}

SpatialRealization spatial_generate(const SpatialModel& model, std::size_t voters,
                                    const RandomSource& source) {
    validate_model(GeneratorModel(model));
    require(voters >= 1, "spatial_generate: needs n >= 1");

    std::vector<std::vector<double>> candidates = model.candidate_positions;
    if (candidates.empty()) {
        const PointDistribution& dist =
            model.candidate_dist ? *model.candidate_dist : model.voters;
        RandomSource aux = source.child(kAuxStreamBase);
        candidates.reserve(model.candidates);
        for (std::size_t c = 0; c < model.candidates; ++c) {
            candidates.push_back(draw_point(dist, model.dim, aux));
        }
    }

    std::vector<std::vector<double>> positions(voters);
    for (std::size_t v = 0; v < voters; ++v) {
        RandomSource stream = source.child(v);
        positions[v] = draw_point(model.voters, model.dim, stream);
    }

    Profile profile = profile_from_positions(positions, candidates, model.link, model.levels);
    return {std::move(profile), std::move(positions), std::move(candidates)};
}

Profile generate(const GeneratorModel& model, std::size_t voters, const RandomSource& source,
                 unsigned threads) {
    validate_model(model);
    require(voters >= 1, "generate: needs n >= 1");

    if (const auto* spatial = std::get_if<SpatialModel>(&model)) {
        return spatial_generate(*spatial, voters, source).profile;
    }

    const std::size_t m = model_candidates(model);
    std::vector<double> values(voters * m);
    const RowSampler sampler(model);

    auto fill_range = [&](std::size_t begin, std::size_t end) {
        for (std::size_t v = begin; v < end; ++v) {
            RandomSource stream = source.child(v);
            const auto row = sampler(stream);
            std::copy(row.begin(), row.end(), values.begin() + v * m);
        }
    };

    if (threads <= 1 || voters < 2 * threads) {
        fill_range(0, voters);
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (voters + threads - 1) / threads;
        for (unsigned t = 0; t < threads; ++t) {
            const std::size_t begin = t * chunk;
            const std::size_t end = std::min(voters, begin + chunk);
            if (begin >= end) break;
            pool.emplace_back(fill_range, begin, end);
        }
        for (auto& worker : pool) worker.join();
    }

    return validate_profile(std::move(values), voters, model_scale(model));
}

}  // namespace evalsim
