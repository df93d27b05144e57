#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "hyperstat/rng.hpp"
#include "hyperstat/sample.hpp"

namespace hyperstat::negtype {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Symmetric pairwise-distance matrix: zero diagonal, nonnegative entries,
/// symmetric to 1e-12 (relative to the largest entry). Entries are exactly
/// symmetrized after validation.
class DistanceMatrix {
  public:
    explicit DistanceMatrix(MatrixXd entries);

    int size() const { return static_cast<int>(entries_.rows()); }
    const MatrixXd& entries() const { return entries_; }
    double operator()(int i, int j) const { return entries_(i, j); }

  private:
    MatrixXd entries_;
};

/// B = -(1/2) J D J with J = I - 11^T/n. B annihilates the all-ones
/// vector; a configuration has negative type iff B is positive
/// semidefinite, and (for distinct points) strict negative type iff the
/// kernel of B is exactly span{1}.
struct CenteredMatrix {
    MatrixXd entries;
};

enum class Verdict { NotNegativeType, NegativeTypeNonstrict, Strict };

const char* to_string(Verdict v);

/// Classification result. The witness is a coefficient vector with zero
/// sum that documents a non-strict verdict: alpha^T D alpha > 0 for
/// NotNegativeType, ~0 for NegativeTypeNonstrict. Unit norm, sign fixed by
/// the first nonzero coordinate being positive.
struct NegTypeReport {
    Verdict verdict;
    VectorXd eigenvalues;  // eigenvalues of B, ascending
    std::optional<VectorXd> witness;
};

/// Pairwise distances of a sample as a DistanceMatrix.
DistanceMatrix distance_matrix(const metric::Sample& sample,
                               parallel::Mode mode = parallel::Mode::OpenMP);

/// The quadratic form sum_{i,j} alpha_i alpha_j D_ij. Only defined on the
/// hyperplane sum(alpha) = 0 (enforced to 1e-10, scaled by max|alpha|).
double quad_form(const DistanceMatrix& d, const VectorXd& alpha);

/// Red/blue form over two index lists of equal length m:
/// 2 sum d(red_i, blue_j) - sum d(red_i, red_j) - sum d(blue_i, blue_j).
/// Equals -quad_form with alpha = indicator(red) - indicator(blue);
/// negative type means this is >= 0 for every choice.
double red_blue_sum(const DistanceMatrix& d, const std::vector<int>& red, const std::vector<int>& blue);

/// Double centering B = -(1/2) J D J, computed entrywise as
/// B_ij = -(D_ij - rowmean_i - rowmean_j + grandmean) / 2.
CenteredMatrix double_center(const DistanceMatrix& d);

/// Spectral negative-type classification with relative eigenvalue
/// tolerance tol (threshold tol * lambda_max). Distances below 1e-12 on
/// the off-diagonal indicate duplicate points and are rejected, since
/// strictness is only defined for distinct points.
NegTypeReport classify(const DistanceMatrix& d, double tol = 1e-9);

/// Entrywise power transform D -> D^r for r in (0, 1]; preserves the
/// triangle inequality and upgrades negative type to strict.
DistanceMatrix snowflake(const DistanceMatrix& d, double r);

/// Random-configuration spec for search_violation: up to max_points
/// points with coordinates drawn per `coords` in dimension dim.
struct GeneratorSpec {
    enum class Coords {
        Uniform,  // iid uniform on [0, box]
        Lattice,  // iid uniform on {0, 1, ..., levels-1}
    };
    int dim = 3;
    int min_points = 3;  // per trial, point count is uniform on [min, max]
    int max_points = 8;
    Coords coords = Coords::Lattice;
    double box = 1.0;
    int levels = 3;
};

struct Violation {
    MatrixXd points;    // the offending configuration, one row per point
    DistanceMatrix distances;
    VectorXd witness;   // zero-sum alpha with alpha^T D alpha > 0
};

/// Random search for a configuration that fails negative type under the
/// given metric. Returns the first hit in trial order (seed-reproducible
/// regardless of parallelism) or nullopt. Absence of a find is a valid
/// outcome; hyperbolic and l2 searches never find one.
std::optional<Violation> search_violation(const GeneratorSpec& gen, const metric::MetricSpace& space,
                                          std::int64_t trials, std::uint64_t seed,
                                          parallel::Mode mode = parallel::Mode::OpenMP);

}  // namespace hyperstat::negtype
