#include "hyperstat/sample.hpp"

#include <cmath>
#include <limits>

namespace hyperstat::metric {

MetricSpace MetricSpace::hyperbolic(int dim) {
    geometry::check_dim(dim);
    MetricSpace s;
    s.kind = Kind::Hyperbolic;
    s.dim = dim;
    return s;
}

MetricSpace MetricSpace::euclidean(int dim, double p) {
    if (dim < 1) throw PreconditionError("euclidean space needs dim >= 1");
    if (!(p >= 1.0)) throw PreconditionError("l_p metric needs p >= 1");
    MetricSpace s;
    s.kind = Kind::Euclidean;
    s.dim = dim;
    s.p = p;
    return s;
}

MetricSpace MetricSpace::raw_matrix(std::shared_ptr<const MatrixXd> d) {
    if (!d || d->rows() == 0 || d->rows() != d->cols())
        throw PreconditionError("raw metric needs a square distance matrix");
    MetricSpace s;
    s.kind = Kind::Raw;
    s.dim = static_cast<int>(d->rows());
    s.raw = std::move(d);
    return s;
}

bool MetricSpace::same_as(const MetricSpace& other) const {
    if (kind != other.kind || dim != other.dim) return false;
    if (kind == Kind::Euclidean && p != other.p) return false;
    if (kind == Kind::Raw && raw != other.raw) return false;
    return true;
}

std::string MetricSpace::describe() const {
    switch (kind) {
        case Kind::Hyperbolic: return "hyperbolic(dim=" + std::to_string(dim) + ")";
        case Kind::Euclidean:
            return "euclidean(dim=" + std::to_string(dim) +
                   ", p=" + (std::isinf(p) ? std::string("inf") : std::to_string(p)) + ")";
        case Kind::Raw: return "raw(" + std::to_string(dim) + "x" + std::to_string(dim) + ")";
    }
    return "?";
}

geometry::HyperboloidPoint Sample::point(int i) const {
    if (space.kind != MetricSpace::Kind::Hyperbolic)
        throw PreconditionError("point(): sample is not hyperbolic");
    return geometry::HyperboloidPoint(points.row(i).transpose());
}

Sample make_hyperbolic_sample(const MatrixXd& hyperboloid_rows) {
    if (hyperboloid_rows.rows() == 0) throw PreconditionError("sample must be nonempty");
    const int dim = static_cast<int>(hyperboloid_rows.cols()) - 1;
    geometry::check_dim(dim);
    for (Eigen::Index i = 0; i < hyperboloid_rows.rows(); ++i)
        (void)geometry::HyperboloidPoint(hyperboloid_rows.row(i).transpose());  // validates
    return Sample{MetricSpace::hyperbolic(dim), hyperboloid_rows};
}

Sample make_euclidean_sample(const MatrixXd& rows, double p) {
    if (rows.rows() == 0) throw PreconditionError("sample must be nonempty");
    if (!rows.allFinite()) throw PreconditionError("sample coordinates must be finite");
    return Sample{MetricSpace::euclidean(static_cast<int>(rows.cols()), p), rows};
}

Sample make_raw_sample(std::shared_ptr<const MatrixXd> d, const std::vector<int>& indices) {
    auto space = MetricSpace::raw_matrix(std::move(d));
    if (indices.empty()) throw PreconditionError("sample must be nonempty");
    MatrixXd rows(indices.size(), 1);
    for (std::size_t i = 0; i < indices.size(); ++i) {
        if (indices[i] < 0 || indices[i] >= space.dim)
            throw PreconditionError("raw sample index out of range");
        rows(static_cast<Eigen::Index>(i), 0) = indices[i];
    }
    return Sample{std::move(space), std::move(rows)};
}

Sample pool_samples(const Sample& a, const Sample& b) {
    if (!a.space.same_as(b.space))
        throw PreconditionError("cannot pool samples over different spaces: " + a.space.describe() + " vs " +
                                b.space.describe());
    MatrixXd rows(a.points.rows() + b.points.rows(), a.points.cols());
    rows.topRows(a.points.rows()) = a.points;
    rows.bottomRows(b.points.rows()) = b.points;
    return Sample{a.space, std::move(rows)};
}

double lp_distance(const VectorXd& a, const VectorXd& b, double p) {
    if (a.size() != b.size()) throw PreconditionError("lp_distance: dimension mismatch");
    if (std::isinf(p)) return (a - b).cwiseAbs().maxCoeff();
    if (p == 2.0) return (a - b).norm();
    if (p == 1.0) return (a - b).cwiseAbs().sum();
    double s = 0.0;
    for (Eigen::Index i = 0; i < a.size(); ++i) s += std::pow(std::abs(a[i] - b[i]), p);
    return std::pow(s, 1.0 / p);
}

double distance(const Sample& a, int i, const Sample& b, int j) {
    if (!a.space.same_as(b.space))
        throw PreconditionError("space mismatch: " + a.space.describe() + " vs " + b.space.describe());
    switch (a.space.kind) {
        case MetricSpace::Kind::Hyperbolic: {
            // Identical rows are at distance exactly 0 (same convention as
            // geometry::dist); the dot product alone would round to ~1e-8.
            if (a.points.row(i) == b.points.row(j)) return 0.0;
            const double m = geometry::minkowski_dot(a.points.row(i).transpose(), b.points.row(j).transpose());
            if (m < 1.0 - 1e-9) throw NumericError("invalid hyperboloid rows in sample");
            const double u = m < 1.0 ? 0.0 : m - 1.0;
            return std::log1p(u + std::sqrt(u * (u + 2.0)));
        }
        case MetricSpace::Kind::Euclidean:
            return lp_distance(a.points.row(i).transpose(), b.points.row(j).transpose(), a.space.p);
        case MetricSpace::Kind::Raw: {
            const auto r = static_cast<Eigen::Index>(a.points(i, 0));
            const auto c = static_cast<Eigen::Index>(b.points(j, 0));
            return (*a.space.raw)(r, c);
        }
    }
    throw PreconditionError("bad space kind");
}

namespace {

// Row-block parallel fill. Entries are pure functions of the inputs, so
// scheduling cannot change the result.
template <class Entry>
void fill_rows(MatrixXd& out, parallel::Mode mode, Entry&& entry) {
    const auto rows = out.rows();
    const std::int64_t nb = parallel::block_count(rows, 64);
    parallel::map_blocks<int>(nb, mode, [&](std::int64_t blk) {
        const Eigen::Index lo = static_cast<Eigen::Index>(blk * 64);
        const Eigen::Index hi = std::min<Eigen::Index>(rows, lo + 64);
        for (Eigen::Index i = lo; i < hi; ++i)
            for (Eigen::Index j = 0; j < out.cols(); ++j) entry(i, j);
        return 0;
    });
}

}  // namespace

MatrixXd pairwise_distances(const Sample& s, parallel::Mode mode) {
    const int n = s.size();
    MatrixXd d(n, n);
    fill_rows(d, mode, [&](Eigen::Index i, Eigen::Index j) {
        if (j < i) return;  // fill upper triangle from each row
        d(i, j) = (i == j) ? 0.0 : distance(s, static_cast<int>(i), s, static_cast<int>(j));
    });
    // mirror for exact symmetry
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j) d(i, j) = d(j, i);
    return d;
}

MatrixXd cross_distances(const Sample& a, const Sample& b, parallel::Mode mode) {
    MatrixXd d(a.size(), b.size());
    fill_rows(d, mode, [&](Eigen::Index i, Eigen::Index j) {
        d(i, j) = distance(a, static_cast<int>(i), b, static_cast<int>(j));
    });
    return d;
}

}  // namespace hyperstat::metric
