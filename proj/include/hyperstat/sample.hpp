#pragma once

#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hyperstat/geometry.hpp"
#include "hyperstat/parallel.hpp"

namespace hyperstat::metric {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Metric tag for a sample: hyperbolic space (canonical hyperboloid
/// coordinates), R^dim with an l_p metric, or distances read from a
/// user-supplied matrix ("raw", points are row indices).
struct MetricSpace {
    enum class Kind { Hyperbolic, Euclidean, Raw };

    Kind kind = Kind::Hyperbolic;
    int dim = 2;
    double p = 2.0;  // l_p exponent; may be infinity
    std::shared_ptr<const MatrixXd> raw;  // distance matrix for Kind::Raw

    static MetricSpace hyperbolic(int dim);
    static MetricSpace euclidean(int dim, double p = 2.0);
    static MetricSpace raw_matrix(std::shared_ptr<const MatrixXd> d);

    bool same_as(const MetricSpace& other) const;
    std::string describe() const;
};

/// Finite empirical measure: a list of points in a tagged space. Rows of
/// `points` are coordinates (hyperboloid: dim+1 columns; euclidean: dim
/// columns; raw: a single column of row indices into the matrix).
struct Sample {
    MetricSpace space;
    MatrixXd points;

    int size() const { return static_cast<int>(points.rows()); }
    /// Row i as a validated hyperboloid point (hyperbolic spaces only).
    geometry::HyperboloidPoint point(int i) const;
};

/// Builds a hyperbolic sample from hyperboloid rows, validating each row.
Sample make_hyperbolic_sample(const MatrixXd& hyperboloid_rows);
/// Builds a euclidean sample (no constraints beyond finiteness).
Sample make_euclidean_sample(const MatrixXd& rows, double p = 2.0);
/// Builds a raw-matrix sample from row indices into d.
Sample make_raw_sample(std::shared_ptr<const MatrixXd> d, const std::vector<int>& indices);

/// Concatenation of two samples over the same space (raw samples must
/// share the backing matrix).
Sample pool_samples(const Sample& a, const Sample& b);

/// l_p distance between coordinate rows; p in [1, inf].
double lp_distance(const VectorXd& a, const VectorXd& b, double p);

/// Distance between points i of a and j of b. The spaces must match.
double distance(const Sample& a, int i, const Sample& b, int j);

/// Pairwise distances within a sample (symmetric, zero diagonal) and cross
/// distances between two samples. Entries are independent, so the OpenMP
/// and serial paths agree bitwise; the serial path is the test reference.
MatrixXd pairwise_distances(const Sample& s, parallel::Mode mode = parallel::Mode::OpenMP);
MatrixXd cross_distances(const Sample& a, const Sample& b, parallel::Mode mode = parallel::Mode::OpenMP);

}  // namespace hyperstat::metric
