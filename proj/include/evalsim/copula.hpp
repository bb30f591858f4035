#ifndef EVALSIM_COPULA_HPP_
#define EVALSIM_COPULA_HPP_

#include <cstddef>
#include <map>
#include <vector>

#include "evalsim/marginal.hpp"
#include "evalsim/profile.hpp"
#include "evalsim/rng.hpp"

namespace evalsim {

// Symmetric, unit-diagonal correlation matrix over m candidates.
class CorrelationMatrix {
public:
    explicit CorrelationMatrix(std::size_t dim);
    explicit CorrelationMatrix(std::vector<std::vector<double>> rows);

    std::size_t dim() const { return dim_; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * dim_ + j]; }
    void set(std::size_t i, std::size_t j, double value);

    static CorrelationMatrix identity(std::size_t dim);

    // Throws DomainError on shape violations, NotPositiveDefinite when the
    // smallest eigenvalue is below -1e-10.
    void validate() const;

    double min_eigenvalue() const;

    // Clip eigenvalues at 1e-8 and rescale to unit diagonal. Repairs the
    // semidefinite matrices that estimated correlations often produce.
    CorrelationMatrix nearest_positive_definite() const;

    std::vector<std::vector<double>> rows() const;

private:
    std::size_t dim_;
    std::vector<double> data_;
};

// Lower-triangular factor with L L^T = R; max|LL^T - R| <= 1e-10.
// Throws NotPositiveDefinite if a pivot falls to 1e-12 or below.
std::vector<std::vector<double>> cholesky(const CorrelationMatrix& R);

struct PseudoObservations {
    std::vector<double> values;  // row-major n x m, entries in (0,1)
    std::size_t voters = 0;
    std::size_t candidates = 0;
    std::vector<std::size_t> degenerate_columns;  // constant columns, flagged not fatal

    double at(std::size_t v, std::size_t c) const { return values[v * candidates + c]; }
};

// Rank transform rank/(n+1) per column, mid-ranks on ties.
PseudoObservations pseudo_observations(const Profile& profile);

// Piecewise-constant copula on a B-per-axis grid; only occupied cells
// are stored (B^m explodes for m > 3).
class CheckerboardCopula {
public:
    CheckerboardCopula(std::size_t dim, int cells_per_axis,
                       std::map<std::vector<int>, double> mass);

    std::size_t dim() const { return dim_; }
    int cells_per_axis() const { return cells_per_axis_; }
    const std::map<std::vector<int>, double>& mass() const { return mass_; }

    // Pseudo-level row in [0,1)^m: pick a cell by mass, then uniform
    // inside it.
    std::vector<double> draw_levels(RandomSource& source) const;

private:
    std::size_t dim_;
    int cells_per_axis_;
    std::map<std::vector<int>, double> mass_;
    std::vector<double> cumulative_;  // cell-selection CDF in map order
};

// Cell mass = frequency of pseudo-observation rows in the box; boxes are
// half-open with the top edge closed.
CheckerboardCopula fit_checkerboard(const PseudoObservations& pseudo, int cells_per_axis);

class GaussianCopulaSampler {
public:
    GaussianCopulaSampler(const CorrelationMatrix& correlation,
                          std::vector<Marginal> marginals);

    // z ~ N(0,R) by Cholesky, u_c = Phi(z_c), then marginal quantiles.
    std::vector<double> draw_row(RandomSource& source) const;

    std::size_t dim() const { return marginals_.size(); }

private:
    std::vector<std::vector<double>> factor_;
    std::vector<Marginal> marginals_;
};

std::vector<double> gaussian_copula_draw(const CorrelationMatrix& correlation,
                                         const std::vector<Marginal>& marginals,
                                         RandomSource& source);

std::vector<double> checkerboard_draw(const CheckerboardCopula& copula,
                                      const std::vector<Marginal>& marginals,
                                      RandomSource& source);

}  // namespace evalsim

#endif  // EVALSIM_COPULA_HPP_
