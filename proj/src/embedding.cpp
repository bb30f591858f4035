#include "evalsim/embedding.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "evalsim/errors.hpp"

namespace evalsim {

namespace {

constexpr std::uint64_t kAuxStreamBase = 0x8000000000000000ULL;

using Points = std::vector<std::vector<double>>;

double sq(double x) { return x * x; }

Eigen::MatrixXd to_eigen(const Points& rows) {
    Eigen::MatrixXd out(rows.size(), rows.empty() ? 0 : rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < rows[i].size(); ++j) out(i, j) = rows[i][j];
    }
    return out;
}

// Applies the Moore-Penrose pseudoinverse of the V matrix of the
// bipartite weight pattern. When every weight equals w the action has a
// closed form (V = w [[m I, -J],[-J^T, n I]] up to the centering
// nullspace), so paper-sized profiles avoid the dense N x N solve.
class VPseudoInverse {
public:
    VPseudoInverse(const EmbeddingProblem& problem) {
        n_ = problem.voters;
        m_ = problem.candidates;
        uniform_weight_ = problem.weights[0];
        for (double w : problem.weights) {
            if (w != uniform_weight_) {
                uniform_weight_ = 0.0;
                break;
            }
        }
        if (uniform_weight_ > 0.0) return;

        const std::size_t total = n_ + m_;
        Eigen::MatrixXd v = Eigen::MatrixXd::Zero(total, total);
        for (std::size_t a = 0; a < n_; ++a) {
            for (std::size_t b = 0; b < m_; ++b) {
                const double w = problem.weight_at(a, b);
                v(a, n_ + b) -= w;
                v(n_ + b, a) -= w;
                v(a, a) += w;
                v(n_ + b, n_ + b) += w;
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(v);
        const double cutoff = 1e-10 * std::max(1.0, solver.eigenvalues().maxCoeff());
        Eigen::VectorXd inverted = solver.eigenvalues();
        for (Eigen::Index i = 0; i < inverted.size(); ++i) {
            inverted(i) = inverted(i) > cutoff ? 1.0 / inverted(i) : 0.0;
        }
        dense_ = solver.eigenvectors() * inverted.asDiagonal() *
                 solver.eigenvectors().transpose();
    }

    Eigen::MatrixXd apply(const Eigen::MatrixXd& rhs) const {
        if (uniform_weight_ <= 0.0) return dense_ * rhs;
        Eigen::MatrixXd out(rhs.rows(), rhs.cols());
        for (Eigen::Index col = 0; col < rhs.cols(); ++col) {
            // Center, then solve the two blocks.
            const double total = rhs.col(col).sum() / (n_ + m_);
            double voter_sum = 0.0;
            for (std::size_t a = 0; a < n_; ++a) voter_sum += rhs(a, col) - total;
            const double shift = voter_sum / (n_ + m_);
            for (std::size_t a = 0; a < n_; ++a) {
                out(a, col) = (rhs(a, col) - total - shift) / static_cast<double>(m_);
            }
            for (std::size_t b = 0; b < m_; ++b) {
                out(n_ + b, col) =
                    (rhs(n_ + b, col) - total + shift) / static_cast<double>(n_);
            }
        }
        return out / uniform_weight_;
    }

private:
    std::size_t n_ = 0, m_ = 0;
    double uniform_weight_ = 0.0;
    Eigen::MatrixXd dense_;
};

double raw_stress(const Eigen::MatrixXd& z, const EmbeddingProblem& problem) {
    double sigma = 0.0;
    for (std::size_t v = 0; v < problem.voters; ++v) {
        for (std::size_t c = 0; c < problem.candidates; ++c) {
            const double w = problem.weight_at(v, c);
            if (w == 0.0) continue;
            const double dist = (z.row(v) - z.row(problem.voters + c)).norm();
            sigma += w * sq(dist - problem.delta_at(v, c));
        }
    }
    return sigma;
}

// Kruskal stress-1: sqrt(sum w (d - delta)^2 / sum w d^2).
double stress_one(const Eigen::MatrixXd& z, const EmbeddingProblem& problem) {
    double numerator = 0.0, denominator = 0.0;
    for (std::size_t v = 0; v < problem.voters; ++v) {
        for (std::size_t c = 0; c < problem.candidates; ++c) {
            const double w = problem.weight_at(v, c);
            if (w == 0.0) continue;
            const double dist = (z.row(v) - z.row(problem.voters + c)).norm();
            numerator += w * sq(dist - problem.delta_at(v, c));
            denominator += w * sq(dist);
        }
    }
    if (denominator <= 0.0) return numerator <= 0.0 ? 0.0 : 1.0;
    return std::sqrt(numerator / denominator);
}

bool has_coincident_pair(const Eigen::MatrixXd& z, const EmbeddingProblem& problem) {
    for (std::size_t v = 0; v < problem.voters; ++v) {
        for (std::size_t c = 0; c < problem.candidates; ++c) {
            if (problem.weight_at(v, c) == 0.0) continue;
            if ((z.row(v) - z.row(problem.voters + c)).norm() < 1e-12) return true;
        }
    }
    return false;
}

Points from_eigen(const Eigen::MatrixXd& z, std::size_t begin, std::size_t count) {
    Points out(count, std::vector<double>(z.cols()));
    for (std::size_t i = 0; i < count; ++i) {
        for (Eigen::Index j = 0; j < z.cols(); ++j) out[i][j] = z(begin + i, j);
    }
    return out;
}

// Cholesky of a small positive-semidefinite matrix; zero pivots give
// zero columns (point-mass directions). Empty when the matrix is
// indefinite or inconsistent.
std::optional<std::vector<std::vector<double>>> chol_spd(
    const std::vector<std::vector<double>>& a) {
    const std::size_t d = a.size();
    std::vector<std::vector<double>> l(d, std::vector<double>(d, 0.0));
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double sum = a[i][j];
            for (std::size_t k = 0; k < j; ++k) sum -= l[i][k] * l[j][k];
            if (i == j) {
                if (sum < -1e-12) return std::nullopt;
                l[i][i] = sum > 0.0 ? std::sqrt(sum) : 0.0;
            } else if (l[j][j] > 0.0) {
                l[i][j] = sum / l[j][j];
            } else if (std::fabs(sum) > 1e-10) {
                return std::nullopt;
            }
        }
    }
    return l;
}

void add_ridge(std::vector<std::vector<double>>& a, double value) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i][i] += value;
}

// Strictly positive definite, with comfortable margin over roundoff.
bool is_positive_definite(const std::vector<std::vector<double>>& a) {
    const std::size_t d = a.size();
    std::vector<std::vector<double>> l(d, std::vector<double>(d, 0.0));
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double sum = a[i][j];
            for (std::size_t k = 0; k < j; ++k) sum -= l[i][k] * l[j][k];
            if (i == j) {
                if (sum <= 1e-12) return false;
                l[i][i] = std::sqrt(sum);
            } else {
                l[i][j] = sum / l[j][j];
            }
        }
    }
    return true;
}

std::vector<double> draw_gaussian_point(const std::vector<double>& mean,
                                        const std::vector<std::vector<double>>& chol,
                                        RandomSource& source) {
    const std::size_t d = mean.size();
    std::vector<double> z(d), point(mean);
    for (auto& value : z) value = draw_standard_normal(source);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j <= i; ++j) point[i] += chol[i][j] * z[j];
    }
    return point;
}

}  // namespace

void EmbeddingProblem::validate() const {
    if (voters == 0 || candidates == 0 || dim == 0) {
        throw DomainError("embedding problem: needs voters, candidates and d >= 1");
    }
    if (delta.size() != voters * candidates || weights.size() != voters * candidates) {
        throw DimensionMismatch("embedding problem: matrices must be n x m");
    }
    std::vector<bool> row_ok(voters, false), col_ok(candidates, false);
    for (std::size_t v = 0; v < voters; ++v) {
        for (std::size_t c = 0; c < candidates; ++c) {
            const double d = delta_at(v, c);
            const double w = weight_at(v, c);
            if (!std::isfinite(d) || d < 0.0) {
                throw DomainError("embedding problem: dissimilarities must be finite and >= 0");
            }
            if (!std::isfinite(w) || w < 0.0) {
                throw DomainError("embedding problem: weights must be finite and >= 0");
            }
            if (w > 0.0) row_ok[v] = col_ok[c] = true;
        }
    }
    if (!std::all_of(row_ok.begin(), row_ok.end(), [](bool b) { return b; }) ||
        !std::all_of(col_ok.begin(), col_ok.end(), [](bool b) { return b; })) {
        throw DomainError("embedding problem: every row and column needs a positive weight");
    }
}

EmbeddingProblem evals_to_dissimilarities(const Profile& profile,
                                          std::optional<LinkFunction> inverse_link,
                                          std::size_t dim) {
    const std::size_t n = profile.voters();
    const std::size_t m = profile.candidates();
    EmbeddingProblem problem;
    problem.voters = n;
    problem.candidates = m;
    problem.dim = dim;
    problem.delta.resize(n * m);
    problem.weights.assign(n * m, 1.0);

    const bool discrete = profile.scale().is_discrete();
    const double denominator = discrete ? profile.scale().levels() + 1.0 : 1.0;

    for (std::size_t v = 0; v < n; ++v) {
        for (std::size_t c = 0; c < m; ++c) {
            double e = profile.at(v, c);
            if (discrete) e = (e + 0.5) / denominator;
            double delta;
            if (!inverse_link) {
                delta = 1.0 - e;
            } else if (const auto* lin = std::get_if<LinearTruncatedLink>(&*inverse_link)) {
                // e = 0 is censored: any distance >= 1/ell produces it.
                delta = (1.0 - e) / lin->ell;
            } else {
                const auto& sig = std::get<SigmoidLink>(*inverse_link);
                const double clamped = std::clamp(e, 1e-6, 1.0 - 1e-6);
                delta = (1.0 + std::log((1.0 - clamped) / clamped) / sig.lambda) / sig.beta;
                delta = std::max(delta, 0.0);
            }
            problem.delta[v * m + c] = delta;
        }
    }
    problem.validate();
    return problem;
}

double stress(const Points& voter_positions, const Points& candidate_positions,
              const EmbeddingProblem& problem) {
    if (voter_positions.size() != problem.voters ||
        candidate_positions.size() != problem.candidates) {
        throw DimensionMismatch("stress: positions do not match the problem");
    }
    double sigma = 0.0;
    for (std::size_t v = 0; v < problem.voters; ++v) {
        for (std::size_t c = 0; c < problem.candidates; ++c) {
            const double w = problem.weight_at(v, c);
            if (w == 0.0) continue;
            const double dist =
                euclidean_distance(voter_positions[v], candidate_positions[c]);
            sigma += w * sq(dist - problem.delta_at(v, c));
        }
    }
    return sigma;
}

EmbeddingSolution smacof(const EmbeddingProblem& problem, const RandomSource& source,
                         const SmacofOptions& options) {
    problem.validate();
    if (options.max_iterations < 1) throw DomainError("smacof: max_iterations must be >= 1");
    if (!(options.epsilon > 0.0)) throw DomainError("smacof: epsilon must be > 0");

    const std::size_t n = problem.voters;
    const std::size_t m = problem.candidates;
    const std::size_t total = n + m;
    const auto d = static_cast<Eigen::Index>(problem.dim);

    Eigen::MatrixXd z(total, d);
    RandomSource init_stream = source.child(kAuxStreamBase);
    const bool user_init = !options.init_voters.empty() || !options.init_candidates.empty();
    if (user_init) {
        if (options.init_voters.size() != n || options.init_candidates.size() != m) {
            throw DimensionMismatch("smacof: init positions do not match the problem");
        }
        z.topRows(n) = to_eigen(options.init_voters);
        z.bottomRows(m) = to_eigen(options.init_candidates);
    } else if (options.init == SmacofOptions::Init::Random) {
        for (std::size_t i = 0; i < total; ++i) {
            for (Eigen::Index j = 0; j < d; ++j) z(i, j) = init_stream.next_double();
        }
    } else {
        // Rational start: squared dissimilarities factor as
        // |x|^2 + |y|^2 - 2 x.y, so double-centering leaves the centered
        // cross inner products; their SVD seeds both point sets.
        Eigen::MatrixXd squared(n, m);
        for (std::size_t v = 0; v < n; ++v) {
            for (std::size_t c = 0; c < m; ++c) squared(v, c) = sq(problem.delta_at(v, c));
        }
        const Eigen::VectorXd row_means = squared.rowwise().mean();
        const Eigen::VectorXd col_means = squared.colwise().mean();
        const double grand = squared.mean();
        for (std::size_t v = 0; v < n; ++v) {
            for (std::size_t c = 0; c < m; ++c) {
                squared(v, c) = -0.5 * (squared(v, c) - row_means(v) - col_means(c) + grand);
            }
        }
        Eigen::BDCSVD<Eigen::MatrixXd> svd(squared,
                                           Eigen::ComputeThinU | Eigen::ComputeThinV);
        const Eigen::Index rank = std::min<Eigen::Index>(d, svd.singularValues().size());
        z.setZero();
        for (Eigen::Index k = 0; k < rank; ++k) {
            const double scale = std::sqrt(svd.singularValues()(k));
            z.col(k).head(n) = svd.matrixU().col(k) * scale;
            z.col(k).tail(m) = svd.matrixV().col(k) * scale;
        }
        // Uniform rescale toward the dissimilarities, then seeded jitter
        // so distinct seeds explore distinct starts.
        double cross = 0.0, dist_sq = 0.0;
        for (std::size_t v = 0; v < n; ++v) {
            for (std::size_t c = 0; c < m; ++c) {
                const double dist = (z.row(v) - z.row(n + c)).norm();
                cross += problem.weight_at(v, c) * problem.delta_at(v, c) * dist;
                dist_sq += problem.weight_at(v, c) * dist * dist;
            }
        }
        if (dist_sq > 0.0) z *= cross / dist_sq;
        const double spread = std::max(z.norm() / std::sqrt(static_cast<double>(total)), 1e-3);
        for (std::size_t i = 0; i < total; ++i) {
            for (Eigen::Index j = 0; j < d; ++j) {
                z(i, j) += (init_stream.next_double() - 0.5) * 0.02 * spread;
            }
        }
    }

    for (int attempt = 0; has_coincident_pair(z, problem); ++attempt) {
        if (attempt >= 5) {
            throw NonConvergence(
                "smacof: degenerate initialization, coincident points after 5 jitters");
        }
        for (std::size_t i = 0; i < total; ++i) {
            for (Eigen::Index j = 0; j < d; ++j) {
                z(i, j) += (init_stream.next_double() - 0.5) * 1e-3;
            }
        }
    }

    const VPseudoInverse v_plus(problem);

    EmbeddingSolution solution;
    double sigma = raw_stress(z, problem);
    solution.stress_trace.push_back(sigma);

    Eigen::MatrixXd bz(total, d);
    for (std::size_t iter = 1; iter <= options.max_iterations; ++iter) {
        // Guttman transform: Z <- V^+ B(Z) Z.
        bz.setZero();
        for (std::size_t v = 0; v < n; ++v) {
            for (std::size_t c = 0; c < m; ++c) {
                const double w = problem.weight_at(v, c);
                if (w == 0.0) continue;
                const double dist = (z.row(v) - z.row(n + c)).norm();
                if (dist <= 0.0) continue;
                const double b = w * problem.delta_at(v, c) / dist;
                bz.row(v) += b * (z.row(v) - z.row(n + c));
                bz.row(n + c) += b * (z.row(n + c) - z.row(v));
            }
        }
        z = v_plus.apply(bz);

        const double updated = raw_stress(z, problem);
        solution.stress_trace.push_back(updated);
        solution.iterations = iter;
        const double decrease = (sigma - updated) / std::max(sigma, 1e-300);
        sigma = updated;
        if (sigma < 1e-30 || decrease < options.epsilon) {
            solution.converged = true;
            break;
        }
    }

    solution.voter_positions = from_eigen(z, 0, n);
    solution.candidate_positions = from_eigen(z, n, m);
    solution.stress = sigma;
    solution.normalized_stress = stress_one(z, problem);
    return solution;
}

LatentGaussian refit_gaussian(const Points& positions) {
    const std::size_t n = positions.size();
    if (n < 2) throw DomainError("refit_gaussian: needs n >= 2");
    const std::size_t d = positions[0].size();
    if (n < d + 2) throw DomainError("refit_gaussian: needs n >= d + 2");

    LatentGaussian out;
    out.mean.assign(d, 0.0);
    for (const auto& p : positions) {
        for (std::size_t k = 0; k < d; ++k) out.mean[k] += p[k];
    }
    for (auto& value : out.mean) value /= n;

    out.covariance.assign(d, std::vector<double>(d, 0.0));
    for (const auto& p : positions) {
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = 0; j < d; ++j) {
                out.covariance[i][j] += (p[i] - out.mean[i]) * (p[j] - out.mean[j]);
            }
        }
    }
    for (auto& row : out.covariance) {
        for (auto& value : row) value /= (n - 1.0);
    }
    if (!is_positive_definite(out.covariance)) {
        add_ridge(out.covariance, 1e-8);
        out.regularized = true;
    }
    return out;
}

LatentMixture refit_mixture(const Points& positions, std::size_t components,
                            const RandomSource& source) {
    const std::size_t n = positions.size();
    if (components < 1) throw DomainError("refit_mixture: needs k >= 1");
    if (n < components + 1) throw DomainError("refit_mixture: needs n > k");
    const std::size_t d = positions[0].size();

    RandomSource stream = source.child(kAuxStreamBase + 1);

    // k-means++ seeding.
    Points centers;
    centers.push_back(positions[stream.next_u64() % n]);
    std::vector<double> dist_sq(n);
    while (centers.size() < components) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& center : centers) {
                best = std::min(best, sq(euclidean_distance(positions[i], center)));
            }
            dist_sq[i] = best;
            total += best;
        }
        if (total <= 0.0) {
            centers.push_back(positions[stream.next_u64() % n]);
            continue;
        }
        double u = stream.next_double() * total;
        std::size_t pick = n - 1;
        for (std::size_t i = 0; i < n; ++i) {
            u -= dist_sq[i];
            if (u < 0.0) {
                pick = i;
                break;
            }
        }
        centers.push_back(positions[pick]);
    }

    std::vector<std::size_t> assignment(n, 0);
    for (int round = 0; round < 25; ++round) {
        bool changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t best = 0;
            double best_dist = std::numeric_limits<double>::infinity();
            for (std::size_t k = 0; k < components; ++k) {
                const double dist = sq(euclidean_distance(positions[i], centers[k]));
                if (dist < best_dist) {
                    best_dist = dist;
                    best = k;
                }
            }
            if (assignment[i] != best) changed = true;
            assignment[i] = best;
        }
        for (std::size_t k = 0; k < components; ++k) {
            std::vector<double> mean(d, 0.0);
            std::size_t count = 0;
            for (std::size_t i = 0; i < n; ++i) {
                if (assignment[i] != k) continue;
                for (std::size_t j = 0; j < d; ++j) mean[j] += positions[i][j];
                ++count;
            }
            if (count > 0) {
                for (auto& value : mean) value /= count;
                centers[k] = mean;
            }
        }
        if (!changed) break;
    }

    LatentMixture mixture;
    mixture.components.resize(components);
    std::vector<std::vector<double>> resp(n, std::vector<double>(components, 0.0));
    for (std::size_t i = 0; i < n; ++i) resp[i][assignment[i]] = 1.0;

    const Eigen::MatrixXd x = to_eigen(positions);
    auto m_step = [&]() {
        for (std::size_t k = 0; k < components; ++k) {
            auto& comp = mixture.components[k];
            double weight = 0.0;
            for (std::size_t i = 0; i < n; ++i) weight += resp[i][k];
            comp.weight = std::max(weight, 1e-10) / n;
            comp.mean.assign(d, 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < d; ++j) comp.mean[j] += resp[i][k] * x(i, j);
            }
            for (auto& value : comp.mean) value /= std::max(weight, 1e-10);
            comp.covariance.assign(d, std::vector<double>(d, 0.0));
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t a = 0; a < d; ++a) {
                    for (std::size_t b = 0; b < d; ++b) {
                        comp.covariance[a][b] += resp[i][k] * (x(i, a) - comp.mean[a]) *
                                                 (x(i, b) - comp.mean[b]);
                    }
                }
            }
            for (auto& row : comp.covariance) {
                for (auto& value : row) value /= std::max(weight, 1e-10);
            }
            if (!is_positive_definite(comp.covariance)) {
                add_ridge(comp.covariance, 1e-8);
                mixture.regularized = true;
            }
        }
    };

    m_step();
    for (int iter = 0; iter < 100; ++iter) {
        // E-step via log densities; one factorization per component.
        std::vector<Eigen::LLT<Eigen::MatrixXd>> factors(components);
        std::vector<double> log_norm(components);
        for (std::size_t k = 0; k < components; ++k) {
            const auto& comp = mixture.components[k];
            Eigen::MatrixXd cov(d, d);
            for (std::size_t a = 0; a < d; ++a) {
                for (std::size_t b = 0; b < d; ++b) cov(a, b) = comp.covariance[a][b];
            }
            factors[k].compute(cov);
            if (factors[k].info() != Eigen::Success) {
                cov += 1e-8 * Eigen::MatrixXd::Identity(d, d);
                factors[k].compute(cov);
                mixture.regularized = true;
            }
            double log_det = 0.0;
            for (std::size_t a = 0; a < d; ++a) {
                log_det += 2.0 * std::log(factors[k].matrixL()(a, a));
            }
            log_norm[k] =
                std::log(comp.weight) - 0.5 * (d * std::log(2.0 * M_PI) + log_det);
        }
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<double> log_p(components);
            double max_log = -std::numeric_limits<double>::infinity();
            for (std::size_t k = 0; k < components; ++k) {
                Eigen::VectorXd diff(d);
                for (std::size_t a = 0; a < d; ++a) {
                    diff(a) = x(i, a) - mixture.components[k].mean[a];
                }
                log_p[k] = log_norm[k] - 0.5 * diff.dot(factors[k].solve(diff));
                max_log = std::max(max_log, log_p[k]);
            }
            double total = 0.0;
            for (std::size_t k = 0; k < components; ++k) {
                resp[i][k] = std::exp(log_p[k] - max_log);
                total += resp[i][k];
            }
            for (std::size_t k = 0; k < components; ++k) resp[i][k] /= total;
        }
        m_step();
    }
    return mixture;
}

std::vector<double> draw_latent(const LatentDistribution& dist, RandomSource& source) {
    if (const auto* gaussian = std::get_if<LatentGaussian>(&dist)) {
        auto chol = chol_spd(gaussian->covariance);
        if (!chol) {
            auto cov = gaussian->covariance;
            add_ridge(cov, 1e-8);
            chol = chol_spd(cov);
            if (!chol) throw SingularMatrix("draw_latent: covariance not positive definite");
        }
        return draw_gaussian_point(gaussian->mean, *chol, source);
    }
    const auto& mixture = std::get<LatentMixture>(dist);
    double total = 0.0;
    for (const auto& comp : mixture.components) total += comp.weight;
    double u = source.next_double() * total;
    std::size_t pick = mixture.components.size() - 1;
    for (std::size_t k = 0; k < mixture.components.size(); ++k) {
        u -= mixture.components[k].weight;
        if (u < 0.0) {
            pick = k;
            break;
        }
    }
    const auto& comp = mixture.components[pick];
    auto chol = chol_spd(comp.covariance);
    if (!chol) {
        auto cov = comp.covariance;
        add_ridge(cov, 1e-8);
        chol = chol_spd(cov);
        if (!chol) throw SingularMatrix("draw_latent: covariance not positive definite");
    }
    return draw_gaussian_point(comp.mean, *chol, source);
}

Profile generate_from_embedding(const Points& candidate_positions,
                                const LatentDistribution& voter_dist, const LinkFunction& link,
                                std::size_t voters, const RandomSource& source,
                                std::optional<int> levels) {
    if (candidate_positions.empty()) {
        throw DomainError("generate_from_embedding: needs candidates");
    }
    if (voters == 0) throw DomainError("generate_from_embedding: needs n >= 1");
    Points positions(voters);
    for (std::size_t v = 0; v < voters; ++v) {
        RandomSource stream = source.child(v);
        positions[v] = draw_latent(voter_dist, stream);
        if (positions[v].size() != candidate_positions[0].size()) {
            throw DimensionMismatch("generate_from_embedding: dimension mismatch");
        }
    }
    return profile_from_positions(positions, candidate_positions, link, levels);
}

}  // namespace evalsim
