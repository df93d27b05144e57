#include "hyperstat/negtype.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <utility>

#include "hyperstat/errors.hpp"
#include "hyperstat/geometry.hpp"
#include "hyperstat/parallel.hpp"

namespace hyperstat::negtype {

namespace {

constexpr double kDuplicateTol = 1e-12;

std::string entry_msg(const char* what, int i, int j, double v) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%s at entry (%d, %d): %.17g", what, i, j, v);
    return buf;
}

/// Unit-normalize, then fix the sign so the first coordinate that is not
/// numerically zero is positive.
void normalize_witness(VectorXd& v) {
    const double norm = v.norm();
    if (norm <= 0.0) throw NumericError("degenerate witness vector");
    v /= norm;
    for (int i = 0; i < v.size(); ++i) {
        if (std::abs(v[i]) > 1e-14) {
            if (v[i] < 0.0) v = -v;
            break;
        }
    }
}

/// Component of v orthogonal to the all-ones vector.
VectorXd project_zero_sum(const VectorXd& v) {
    return v.array() - v.mean();
}

}  // namespace

DistanceMatrix::DistanceMatrix(MatrixXd entries) : entries_(std::move(entries)) {
    const auto n = entries_.rows();
    if (n == 0 || entries_.cols() != n) throw PreconditionError("distance matrix must be square and nonempty");
    const double scale = std::max(1.0, entries_.cwiseAbs().maxCoeff());
    for (int i = 0; i < n; ++i) {
        if (std::abs(entries_(i, i)) > 1e-12 * scale)
            throw PreconditionError(entry_msg("nonzero diagonal", i, i, entries_(i, i)));
        for (int j = i + 1; j < n; ++j) {
            if (std::abs(entries_(i, j) - entries_(j, i)) > 1e-12 * scale)
                throw PreconditionError(entry_msg("asymmetric", i, j, entries_(i, j) - entries_(j, i)));
            if (entries_(i, j) < -1e-12 * scale || entries_(j, i) < -1e-12 * scale)
                throw PreconditionError(entry_msg("negative distance", i, j, std::min(entries_(i, j), entries_(j, i))));
        }
    }
    // Canonicalize: exact symmetry, exact zero diagonal, clamp tolerated dust.
    entries_ = ((entries_ + entries_.transpose()) / 2.0).cwiseMax(0.0).eval();
    entries_.diagonal().setZero();
}

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::NotNegativeType: return "NOT_NEGATIVE_TYPE";
        case Verdict::NegativeTypeNonstrict: return "NEGATIVE_TYPE_NONSTRICT";
        case Verdict::Strict: return "STRICT";
    }
    return "?";
}

DistanceMatrix distance_matrix(const metric::Sample& sample, parallel::Mode mode) {
    if (sample.size() < 2) throw PreconditionError("distance matrix needs at least 2 points");
    return DistanceMatrix(metric::pairwise_distances(sample, mode));
}

double quad_form(const DistanceMatrix& d, const VectorXd& alpha) {
    if (alpha.size() != d.size())
        throw PreconditionError("coefficient vector length " + std::to_string(alpha.size()) +
                                " does not match matrix size " + std::to_string(d.size()));
    const double scale = alpha.size() == 0 ? 1.0 : std::max(1.0, alpha.cwiseAbs().maxCoeff());
    if (std::abs(alpha.sum()) > 1e-10 * scale)
        throw PreconditionError("coefficients must sum to zero (got " + std::to_string(alpha.sum()) + ")");
    return alpha.dot(d.entries() * alpha);
}

double red_blue_sum(const DistanceMatrix& d, const std::vector<int>& red, const std::vector<int>& blue) {
    if (red.size() != blue.size()) throw PreconditionError("red and blue index lists must have equal length");
    const int n = d.size();
    for (int i : red)
        if (i < 0 || i >= n) throw PreconditionError("red index out of range: " + std::to_string(i));
    for (int j : blue)
        if (j < 0 || j >= n) throw PreconditionError("blue index out of range: " + std::to_string(j));
    double cross = 0.0, within_red = 0.0, within_blue = 0.0;
    for (int i : red)
        for (int j : blue) cross += d(i, j);
    for (int i : red)
        for (int j : red) within_red += d(i, j);
    for (int i : blue)
        for (int j : blue) within_blue += d(i, j);
    return 2.0 * cross - within_red - within_blue;
}

CenteredMatrix double_center(const DistanceMatrix& d) {
    const auto& m = d.entries();
    const int n = d.size();
    const VectorXd row_means = m.rowwise().mean();
    const double grand_mean = m.mean();
    MatrixXd b(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) b(i, j) = -0.5 * (m(i, j) - row_means[i] - row_means[j] + grand_mean);
    return CenteredMatrix{std::move(b)};
}

NegTypeReport classify(const DistanceMatrix& d, double tol) {
    if (tol < 0.0) throw PreconditionError("tolerance must be nonnegative");
    const int n = d.size();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (d(i, j) < kDuplicateTol)
                throw PreconditionError("points " + std::to_string(i) + " and " + std::to_string(j) +
                                        " coincide; strictness requires distinct points");

    if (n == 1) return {Verdict::Strict, VectorXd::Zero(1), std::nullopt};

    const CenteredMatrix centered = double_center(d);
    Eigen::SelfAdjointEigenSolver<MatrixXd> solver(centered.entries);
    if (solver.info() != Eigen::Success) throw NumericError("eigendecomposition failed");
    VectorXd eigs = solver.eigenvalues();  // ascending
    const MatrixXd& vecs = solver.eigenvectors();

    // Distinct points give trace(B) = n * grandmean / 2 > 0, so the top
    // eigenvalue is a positive scale for the relative threshold.
    const double lambda_max = eigs[n - 1];
    if (lambda_max <= 0.0) throw NumericError("centered matrix has no positive spectrum");
    const double threshold = tol * lambda_max;

    if (eigs[0] < -threshold) {
        VectorXd witness = project_zero_sum(vecs.col(0));
        normalize_witness(witness);
        return {Verdict::NotNegativeType, std::move(eigs), std::move(witness)};
    }
    if (eigs[1] <= threshold) {
        // Kernel meets the zero-sum hyperplane beyond span{1}: among the
        // near-null eigenvectors, the one retaining the most mass after
        // projecting out 1 is a stable witness.
        VectorXd best;
        double best_norm = -1.0;
        for (int k = 0; k < n && eigs[k] <= threshold; ++k) {
            VectorXd proj = project_zero_sum(vecs.col(k));
            const double norm = proj.norm();
            if (norm > best_norm) {
                best_norm = norm;
                best = std::move(proj);
            }
        }
        if (best_norm < 0.5) throw NumericError("kernel witness collapsed onto the all-ones direction");
        normalize_witness(best);
        return {Verdict::NegativeTypeNonstrict, std::move(eigs), std::move(best)};
    }
    return {Verdict::Strict, std::move(eigs), std::nullopt};
}

DistanceMatrix snowflake(const DistanceMatrix& d, double r) {
    if (!(r > 0.0 && r <= 1.0)) throw PreconditionError("snowflake exponent must lie in (0, 1]");
    if (r == 1.0) return d;
    return DistanceMatrix(d.entries().array().pow(r).matrix());
}

namespace {

MatrixXd draw_config(const GeneratorSpec& gen, const metric::MetricSpace& space, int m, rng::Stream& stream) {
    MatrixXd pts;
    if (space.kind == metric::MetricSpace::Kind::Hyperbolic) {
        // Coordinate draws in a box are not hyperboloid points; sample the
        // ball of radius `box` instead.
        pts.resize(m, space.dim + 1);
        for (int i = 0; i < m; ++i) pts.row(i) = geometry::random_point_ball(space.dim, gen.box, stream).coords();
        return pts;
    }
    pts.resize(m, gen.dim);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < gen.dim; ++j)
            pts(i, j) = gen.coords == GeneratorSpec::Coords::Uniform
                            ? gen.box * stream.uniform01()
                            : static_cast<double>(stream.below(static_cast<std::uint64_t>(gen.levels)));
    return pts;
}

std::optional<Violation> try_trial(const GeneratorSpec& gen, const metric::MetricSpace& space, std::int64_t trial,
                                   std::uint64_t seed) {
    rng::Stream stream = rng::make_stream(seed, "negtype.search_violation", static_cast<std::uint64_t>(trial));
    const int span = gen.max_points - gen.min_points + 1;
    const int m = gen.min_points + static_cast<int>(stream.below(static_cast<std::uint64_t>(span)));
    MatrixXd pts = draw_config(gen, space, m, stream);

    metric::Sample sample{space, pts};
    MatrixXd d = metric::pairwise_distances(sample, parallel::Mode::Serial);
    // Coincident draws (possible on the lattice) cannot be classified; not a hit.
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            if (d(i, j) < kDuplicateTol) return std::nullopt;

    DistanceMatrix dm(std::move(d));
    NegTypeReport report = classify(dm);
    if (report.verdict != Verdict::NotNegativeType) return std::nullopt;
    return Violation{std::move(pts), std::move(dm), std::move(*report.witness)};
}

}  // namespace

std::optional<Violation> search_violation(const GeneratorSpec& gen, const metric::MetricSpace& space,
                                          std::int64_t trials, std::uint64_t seed, parallel::Mode mode) {
    if (trials < 1) throw PreconditionError("trials must be >= 1");
    if (gen.min_points < 2 || gen.max_points < gen.min_points)
        throw PreconditionError("generator needs 2 <= min_points <= max_points");
    if (space.kind == metric::MetricSpace::Kind::Raw)
        throw PreconditionError("violation search needs a coordinate metric, not a raw matrix");
    if (gen.coords == GeneratorSpec::Coords::Lattice && gen.levels < 2)
        throw PreconditionError("lattice generator needs at least 2 levels");
    if (space.kind != metric::MetricSpace::Kind::Hyperbolic && gen.dim != space.dim)
        throw PreconditionError("generator dimension does not match metric dimension");

    constexpr std::int64_t kTrialBlock = 256;
    const std::int64_t nblocks = parallel::block_count(trials, kTrialBlock);
    const std::int64_t wave = std::max<std::int64_t>(4 * parallel::max_threads(), 8);

    using Hit = std::optional<Violation>;
    for (std::int64_t w0 = 0; w0 < nblocks; w0 += wave) {
        const std::int64_t nb = std::min(wave, nblocks - w0);
        std::vector<Hit> hits = parallel::map_blocks<Hit>(nb, mode, [&](std::int64_t b) -> Hit {
            const std::int64_t t0 = (w0 + b) * kTrialBlock;
            const std::int64_t t1 = std::min(trials, t0 + kTrialBlock);
            for (std::int64_t t = t0; t < t1; ++t)
                if (auto v = try_trial(gen, space, t, seed)) return v;
            return std::nullopt;
        });
        // First hit in trial order wins; blocks are folded in index order.
        for (auto& h : hits)
            if (h) return std::move(h);
    }
    return std::nullopt;
}

}  // namespace hyperstat::negtype
