#include "evalsim/copula.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "evalsim/errors.hpp"
#include "evalsim/special_functions.hpp"

namespace evalsim {

namespace {

Eigen::MatrixXd to_eigen(const CorrelationMatrix& R) {
    const auto m = static_cast<Eigen::Index>(R.dim());
    Eigen::MatrixXd out(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = 0; j < m; ++j) out(i, j) = R(i, j);
    }
    return out;
}

// Semidefinite-tolerant Cholesky for sampling: zero pivots produce zero
// columns, so boundary cases like rho = 1 remain drawable. The
// reconstruction check catches genuinely indefinite input.
std::vector<std::vector<double>> cholesky_psd(const CorrelationMatrix& R) {
    const std::size_t m = R.dim();
    std::vector<std::vector<double>> L(m, std::vector<double>(m, 0.0));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double sum = R(i, j);
            for (std::size_t k = 0; k < j; ++k) sum -= L[i][k] * L[j][k];
            if (i == j) {
                L[i][i] = sum > 1e-12 ? std::sqrt(sum) : 0.0;
            } else {
                L[i][j] = L[j][j] > 0.0 ? sum / L[j][j] : 0.0;
            }
        }
    }
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double rebuilt = 0.0;
            for (std::size_t k = 0; k <= j; ++k) rebuilt += L[i][k] * L[j][k];
            if (std::fabs(rebuilt - R(i, j)) > 1e-8) {
                throw NotPositiveDefinite("correlation matrix is not positive semidefinite",
                                          R.min_eigenvalue());
            }
        }
    }
    return L;
}

}  // namespace

CorrelationMatrix::CorrelationMatrix(std::size_t dim) : dim_(dim), data_(dim * dim, 0.0) {
    if (dim == 0) throw DomainError("correlation matrix needs dim >= 1");
    for (std::size_t i = 0; i < dim; ++i) data_[i * dim + i] = 1.0;
}

CorrelationMatrix::CorrelationMatrix(std::vector<std::vector<double>> rows)
    : CorrelationMatrix(rows.size()) {
    for (std::size_t i = 0; i < dim_; ++i) {
        if (rows[i].size() != dim_) {
            throw DomainError("correlation matrix rows must all have length m");
        }
        for (std::size_t j = 0; j < dim_; ++j) data_[i * dim_ + j] = rows[i][j];
    }
}

void CorrelationMatrix::set(std::size_t i, std::size_t j, double value) {
    data_[i * dim_ + j] = value;
    data_[j * dim_ + i] = value;
}

CorrelationMatrix CorrelationMatrix::identity(std::size_t dim) {
    return CorrelationMatrix(dim);
}

double CorrelationMatrix::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(to_eigen(*this),
                                                          Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

void CorrelationMatrix::validate() const {
    for (std::size_t i = 0; i < dim_; ++i) {
        if (std::fabs((*this)(i, i) - 1.0) > 1e-12) {
            throw DomainError("correlation matrix diagonal must be 1");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (std::fabs((*this)(i, j) - (*this)(j, i)) > 1e-12) {
                throw DomainError("correlation matrix must be symmetric");
            }
            if (std::fabs((*this)(i, j)) > 1.0) {
                throw DomainError("correlation entries must lie in [-1,1]");
            }
        }
    }
    const double lambda = min_eigenvalue();
    if (lambda <= -1e-10) {
        throw NotPositiveDefinite("correlation matrix is not positive definite", lambda);
    }
}

CorrelationMatrix CorrelationMatrix::nearest_positive_definite() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(to_eigen(*this));
    Eigen::VectorXd lambda = solver.eigenvalues().cwiseMax(1e-8);
    Eigen::MatrixXd repaired =
        solver.eigenvectors() * lambda.asDiagonal() * solver.eigenvectors().transpose();
    CorrelationMatrix out(dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            const double scale = std::sqrt(repaired(i, i) * repaired(j, j));
            out.set(i, j, i == j ? 1.0 : repaired(i, j) / scale);
        }
    }
    return out;
}

std::vector<std::vector<double>> CorrelationMatrix::rows() const {
    std::vector<std::vector<double>> out(dim_, std::vector<double>(dim_));
    for (std::size_t i = 0; i < dim_; ++i) {
        for (std::size_t j = 0; j < dim_; ++j) out[i][j] = (*this)(i, j);
    }
    return out;
}

std::vector<std::vector<double>> cholesky(const CorrelationMatrix& R) {
    const std::size_t m = R.dim();
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (std::fabs(R(i, j) - R(j, i)) > 1e-12) {
                throw DomainError("cholesky: matrix must be symmetric");
            }
        }
    }
    std::vector<std::vector<double>> L(m, std::vector<double>(m, 0.0));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double sum = R(i, j);
            for (std::size_t k = 0; k < j; ++k) sum -= L[i][k] * L[j][k];
            if (i == j) {
                if (sum <= 1e-12) {
                    throw NotPositiveDefinite("cholesky: pivot <= 1e-12", sum);
                }
                L[i][j] = std::sqrt(sum);
            } else {
                L[i][j] = sum / L[j][j];
            }
        }
    }
    return L;
}

PseudoObservations pseudo_observations(const Profile& profile) {
    const std::size_t n = profile.voters();
    const std::size_t m = profile.candidates();
    if (n < 2) throw DomainError("pseudo_observations: needs n >= 2");

    PseudoObservations out;
    out.values.resize(n * m);
    out.voters = n;
    out.candidates = m;

    std::vector<std::size_t> order(n);
    for (std::size_t c = 0; c < m; ++c) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return profile.at(a, c) < profile.at(b, c);
        });
        // Mid-ranks over ties, mapped to rank/(n+1).
        std::size_t i = 0;
        while (i < n) {
            std::size_t j = i;
            while (j + 1 < n && profile.at(order[j + 1], c) == profile.at(order[i], c)) ++j;
            const double mid_rank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
            for (std::size_t k = i; k <= j; ++k) {
                out.values[order[k] * m + c] = mid_rank / (n + 1.0);
            }
            i = j + 1;
        }
        if (profile.at(order[0], c) == profile.at(order[n - 1], c)) {
            out.degenerate_columns.push_back(c);
        }
    }
    return out;
}

CheckerboardCopula::CheckerboardCopula(std::size_t dim, int cells_per_axis,
                                       std::map<std::vector<int>, double> mass)
    : dim_(dim), cells_per_axis_(cells_per_axis), mass_(std::move(mass)) {
    if (dim_ == 0) throw DomainError("checkerboard: dim must be >= 1");
    if (cells_per_axis_ < 1) throw DomainError("checkerboard: B must be >= 1");
    double total = 0.0;
    for (const auto& [cell, value] : mass_) {
        if (cell.size() != dim_) throw DomainError("checkerboard: cell index length != m");
        for (int b : cell) {
            if (b < 0 || b >= cells_per_axis_) {
                throw DomainError("checkerboard: cell index outside 0..B-1");
            }
        }
        if (value <= 0.0) throw DomainError("checkerboard: stored masses must be > 0");
        total += value;
        cumulative_.push_back(total);
    }
    if (std::fabs(total - 1.0) > 1e-12) {
        throw DomainError("checkerboard: masses must sum to 1");
    }
}

std::vector<double> CheckerboardCopula::draw_levels(RandomSource& source) const {
    const double u = source.next_double();
    auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), u);
    std::size_t pick = static_cast<std::size_t>(it - cumulative_.begin());
    if (pick >= cumulative_.size()) pick = cumulative_.size() - 1;
    auto cell_it = mass_.begin();
    std::advance(cell_it, pick);

    std::vector<double> levels(dim_);
    for (std::size_t c = 0; c < dim_; ++c) {
        levels[c] = (cell_it->first[c] + source.next_double()) / cells_per_axis_;
    }
    return levels;
}

CheckerboardCopula fit_checkerboard(const PseudoObservations& pseudo, int cells_per_axis) {
    if (cells_per_axis < 1) throw DomainError("fit_checkerboard: B must be >= 1");
    if (pseudo.voters == 0) throw DomainError("fit_checkerboard: needs n >= 1");

    std::map<std::vector<int>, double> counts;
    std::vector<int> cell(pseudo.candidates);
    for (std::size_t v = 0; v < pseudo.voters; ++v) {
        for (std::size_t c = 0; c < pseudo.candidates; ++c) {
            const int b = static_cast<int>(pseudo.at(v, c) * cells_per_axis);
            cell[c] = std::min(b, cells_per_axis - 1);
        }
        counts[cell] += 1.0;
    }
    for (auto& [key, value] : counts) value /= static_cast<double>(pseudo.voters);
    return CheckerboardCopula(pseudo.candidates, cells_per_axis, std::move(counts));
}

GaussianCopulaSampler::GaussianCopulaSampler(const CorrelationMatrix& correlation,
                                             std::vector<Marginal> marginals)
    : marginals_(std::move(marginals)) {
    if (correlation.dim() != marginals_.size()) {
        throw DimensionMismatch("gaussian copula: correlation dim != marginal count");
    }
    for (const auto& m : marginals_) validate_marginal(m);
    const bool discrete = is_discrete(marginals_.front());
    for (const auto& m : marginals_) {
        if (is_discrete(m) != discrete || !(scale_of(m) == scale_of(marginals_.front()))) {
            throw DomainError("gaussian copula: marginals must share one scale");
        }
    }
    factor_ = cholesky_psd(correlation);
}

std::vector<double> GaussianCopulaSampler::draw_row(RandomSource& source) const {
    const std::size_t m = marginals_.size();
    std::vector<double> z(m);
    for (auto& value : z) value = draw_standard_normal(source);

    std::vector<double> row(m);
    for (std::size_t c = 0; c < m; ++c) {
        double corr = 0.0;
        for (std::size_t k = 0; k <= c; ++k) corr += factor_[c][k] * z[k];
        row[c] = quantile(marginals_[c], norm_cdf(corr));
    }
    return row;
}

std::vector<double> gaussian_copula_draw(const CorrelationMatrix& correlation,
                                         const std::vector<Marginal>& marginals,
                                         RandomSource& source) {
    return GaussianCopulaSampler(correlation, marginals).draw_row(source);
}

std::vector<double> checkerboard_draw(const CheckerboardCopula& copula,
                                      const std::vector<Marginal>& marginals,
                                      RandomSource& source) {
    if (copula.dim() != marginals.size()) {
        throw DimensionMismatch("checkerboard draw: copula dim != marginal count");
    }
    const auto levels = copula.draw_levels(source);
    std::vector<double> row(levels.size());
    for (std::size_t c = 0; c < levels.size(); ++c) {
        row[c] = quantile(marginals[c], levels[c]);
    }
    return row;
}

}  // namespace evalsim
