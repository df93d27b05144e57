#include "hyperstat/geometry.hpp"

#include <cmath>
#include <optional>
#include <string>

namespace hyperstat::geometry {

namespace {

// Scale-aware tolerance for the on-sheet check: evaluating x0^2 - |x|^2
// rounds at the level of the squared coordinates, so the admissible slack
// grows with them.
bool on_sheet(const VectorXd& x, double tol = 1e-12) {
    const double q = minkowski_dot(x, x);
    const double scale = 1.0 + x.squaredNorm();
    return std::isfinite(q) && std::abs(q - 1.0) <= tol * scale && x[0] >= 1.0 - tol * scale;
}

double arccosh1p(double u) {
    // arccosh(1 + u) for u >= 0 without cancellation near u = 0
    return std::log1p(u + std::sqrt(u * (u + 2.0)));
}

}  // namespace

Model model_from_string(const std::string& name) {
    if (name == "hyperboloid") return Model::Hyperboloid;
    if (name == "klein") return Model::Klein;
    if (name == "poincare") return Model::Poincare;
    throw ParseError("unknown model '" + name + "' (expected hyperboloid, klein, or poincare)");
}

const char* to_string(Model m) {
    switch (m) {
        case Model::Hyperboloid: return "hyperboloid";
        case Model::Klein: return "klein";
        case Model::Poincare: return "poincare";
    }
    return "?";
}

void check_dim(int n) {
    if (n < 1 || n > kMaxDim)
        throw PreconditionError("dimension " + std::to_string(n) + " outside supported range [1, " +
                                std::to_string(kMaxDim) + "]");
}

double minkowski_dot(const VectorXd& a, const VectorXd& b) {
    if (a.size() != b.size()) throw PreconditionError("minkowski_dot: size mismatch");
    double s = a[0] * b[0];
    for (Eigen::Index i = 1; i < a.size(); ++i) s -= a[i] * b[i];
    return s;
}

HyperboloidPoint::HyperboloidPoint(VectorXd coords) : coords_(std::move(coords)) {
    if (coords_.size() < 2) throw PreconditionError("hyperboloid point needs at least 2 coordinates");
    if (!on_sheet(coords_))
        throw PreconditionError("coordinates do not lie on the unit hyperboloid upper sheet");
}

HyperboloidPoint unsafe_point(VectorXd coords) {
    HyperboloidPoint p;
    p.coords_ = std::move(coords);
    return p;
}

HyperboloidPoint HyperboloidPoint::from_klein(const VectorXd& k) {
    check_klein(k);
    const double s = std::sqrt(1.0 - k.squaredNorm());
    VectorXd x(k.size() + 1);
    x[0] = 1.0 / s;
    x.tail(k.size()) = k / s;
    return unsafe_point(std::move(x));
}

HyperboloidPoint HyperboloidPoint::from_poincare(const VectorXd& p) {
    check_poincare(p);
    const double q = p.squaredNorm();
    VectorXd x(p.size() + 1);
    x[0] = (1.0 + q) / (1.0 - q);
    x.tail(p.size()) = 2.0 * p / (1.0 - q);
    return unsafe_point(std::move(x));
}

HyperboloidPoint HyperboloidPoint::origin(int dim) {
    check_dim(dim);
    VectorXd x = VectorXd::Zero(dim + 1);
    x[0] = 1.0;
    return unsafe_point(std::move(x));
}

VectorXd HyperboloidPoint::to_klein() const { return spatial() / coords_[0]; }

VectorXd HyperboloidPoint::to_poincare() const { return spatial() / (1.0 + coords_[0]); }

void check_klein(const VectorXd& k) {
    if (k.size() < 1) throw PreconditionError("empty Klein coordinates");
    if (!k.allFinite() || k.norm() >= 1.0)
        throw PreconditionError("Klein coordinates must lie strictly inside the unit ball");
}

void check_poincare(const VectorXd& p) {
    if (p.size() < 1) throw PreconditionError("empty Poincare coordinates");
    if (!p.allFinite() || p.norm() >= 1.0)
        throw PreconditionError("Poincare coordinates must lie strictly inside the unit ball");
}

VectorXd convert(const VectorXd& coords, Model from, Model to) {
    if (from == to) {
        switch (from) {
            case Model::Hyperboloid: return HyperboloidPoint(coords).coords();
            case Model::Klein: check_klein(coords); return coords;
            case Model::Poincare: check_poincare(coords); return coords;
        }
    }
    // route through the hyperboloid model
    HyperboloidPoint h = [&] {
        switch (from) {
            case Model::Hyperboloid: return HyperboloidPoint(coords);
            case Model::Klein: return HyperboloidPoint::from_klein(coords);
            case Model::Poincare: return HyperboloidPoint::from_poincare(coords);
        }
        throw PreconditionError("bad model tag");
    }();
    switch (to) {
        case Model::Hyperboloid: return h.coords();
        case Model::Klein: return h.to_klein();
        case Model::Poincare: return h.to_poincare();
    }
    throw PreconditionError("bad model tag");
}

double dist(const HyperboloidPoint& a, const HyperboloidPoint& b) {
    // Bitwise-equal points are at distance exactly 0; the dot product alone
    // would round to cosh d ≈ 1 ± ulp and arccosh would amplify that to ~1e-8.
    if (a.coords().size() == b.coords().size() && a.coords() == b.coords()) return 0.0;
    const double m = minkowski_dot(a.coords(), b.coords());
    if (m < 1.0 - 1e-9) throw NumericError("Minkowski product below 1: points are not on the sheet");
    const double u = m < 1.0 ? 0.0 : m - 1.0;
    return arccosh1p(u);
}

double dist_klein(const VectorXd& u, const VectorXd& v) {
    check_klein(u);
    check_klein(v);
    if (u.size() != v.size()) throw PreconditionError("dist_klein: dimension mismatch");
    if (u == v) return 0.0;  // exact, matching dist()
    const double num = 1.0 - u.dot(v);
    const double den = std::sqrt((1.0 - u.squaredNorm()) * (1.0 - v.squaredNorm()));
    const double m = num / den;
    if (m < 1.0 - 1e-9) throw NumericError("invalid Klein pair: arccosh argument below 1");
    return arccosh1p(m < 1.0 ? 0.0 : m - 1.0);
}

HyperboloidPoint geodesic_point(const HyperboloidPoint& a, const HyperboloidPoint& b, double s) {
    const double L = dist(a, b);
    if (L == 0.0) throw PreconditionError("geodesic_point: endpoints coincide");
    if (s == 0.0) return a;
    if (s == 1.0) return b;
    VectorXd x = (std::sinh((1.0 - s) * L) * a.coords() + std::sinh(s * L) * b.coords()) / std::sinh(L);
    x /= std::sqrt(minkowski_dot(x, x));
    return unsafe_point(std::move(x));
}

Isometry::Isometry(MatrixXd matrix) : matrix_(std::move(matrix)) {
    const auto n1 = matrix_.rows();
    if (n1 < 2 || matrix_.cols() != n1) throw PreconditionError("isometry matrix must be square, size >= 2");
    VectorXd jdiag = -VectorXd::Ones(n1);
    jdiag[0] = 1.0;
    const MatrixXd J = jdiag.asDiagonal();
    const MatrixXd residual = matrix_.transpose() * J * matrix_ - J;
    if (residual.cwiseAbs().maxCoeff() > 1e-10)
        throw PreconditionError("matrix does not preserve the Minkowski form");
    if (!(matrix_(0, 0) > 0.0)) throw PreconditionError("matrix swaps the hyperboloid sheets");
}

Isometry Isometry::identity(int dim) {
    check_dim(dim);
    return Isometry(MatrixXd::Identity(dim + 1, dim + 1));
}

Isometry Isometry::boost(const VectorXd& direction, double t) {
    const auto n = direction.size();
    if (n < 1) throw PreconditionError("boost: empty direction");
    if (std::abs(direction.norm() - 1.0) > 1e-9) throw PreconditionError("boost direction must be a unit vector");
    const double ch = std::cosh(t), sh = std::sinh(t);
    MatrixXd m = MatrixXd::Identity(n + 1, n + 1);
    m(0, 0) = ch;
    for (Eigen::Index i = 0; i < n; ++i) {
        m(0, i + 1) = sh * direction[i];
        m(i + 1, 0) = sh * direction[i];
        for (Eigen::Index j = 0; j < n; ++j) m(i + 1, j + 1) = (i == j ? 1.0 : 0.0) + (ch - 1.0) * direction[i] * direction[j];
    }
    return Isometry(std::move(m));
}

Isometry Isometry::rotation(const MatrixXd& spatial_rotation) {
    const auto n = spatial_rotation.rows();
    if (n < 1 || spatial_rotation.cols() != n) throw PreconditionError("rotation block must be square");
    MatrixXd m = MatrixXd::Identity(n + 1, n + 1);
    m.bottomRightCorner(n, n) = spatial_rotation;
    return Isometry(std::move(m));
}

Isometry Isometry::translation_to_origin(const HyperboloidPoint& p) {
    const double r = p.spatial().norm();
    if (r == 0.0) return identity(p.dim());
    VectorXd e = p.spatial() / r;
    return boost(e, -arccosh1p(p.time() - 1.0));
}

Isometry Isometry::inverse() const {
    const auto n1 = matrix_.rows();
    VectorXd jdiag = -VectorXd::Ones(n1);
    jdiag[0] = 1.0;
    return Isometry(jdiag.asDiagonal() * matrix_.transpose() * jdiag.asDiagonal());
}

Isometry Isometry::compose(const Isometry& other) const { return Isometry(matrix_ * other.matrix()); }

HyperboloidPoint apply(const Isometry& g, const HyperboloidPoint& p) {
    if (g.dim() != p.dim()) throw PreconditionError("apply: dimension mismatch");
    VectorXd x = g.matrix() * p.coords();
    const double q = minkowski_dot(x, x);
    if (!(q > 0.0) || !std::isfinite(q)) throw NumericError("isometry image left the hyperboloid");
    x /= std::sqrt(q);
    if (x[0] < 0.0) throw NumericError("isometry image landed on the lower sheet");
    return unsafe_point(std::move(x));
}

VectorXd random_direction(int dim, rng::Stream& stream) {
    check_dim(dim);
    VectorXd v(dim);
    for (int i = 0; i < dim; ++i) v[i] = stream.normal();
    const double n = v.norm();
    if (n < 1e-12) {
        // essentially impossible; pick a fixed axis rather than redraw so
        // the stream position stays data-independent
        v.setZero();
        v[0] = 1.0;
        return v;
    }
    return v / n;
}

HyperboloidPoint random_point_ball(int dim, double R, rng::Stream& stream) {
    check_dim(dim);
    if (!(R > 0.0)) throw PreconditionError("random_point_ball: R must be positive");
    const VectorXd e = random_direction(dim, stream);
    const double u = stream.uniform01();
    double r;
    if (dim == 1) {
        // volume element dr: uniform radius
        r = u * R;
    } else if (dim == 2) {
        // CDF (cosh r - 1) / (cosh R - 1)
        r = arccosh1p(u * (std::cosh(R) - 1.0));
    } else {
        // density sinh^{n-1}(r); tabulated inverse CDF, cached per (dim, R)
        thread_local int cached_dim = -1;
        thread_local double cached_R = -1.0;
        thread_local std::optional<rng::InverseCdfTable> table;
        if (dim != cached_dim || R != cached_R) {
            table.emplace([dim](double r) { return std::pow(std::sinh(r), dim - 1); }, 0.0, R);
            cached_dim = dim;
            cached_R = R;
        }
        r = table->sample(u);
    }
    VectorXd x(dim + 1);
    x[0] = std::cosh(r);
    x.tail(dim) = std::sinh(r) * e;
    return unsafe_point(std::move(x));
}

Isometry random_isometry(int dim, rng::Stream& stream, double boost_max) {
    check_dim(dim);
    // Haar rotation: QR of a Gaussian matrix with the R-diagonal sign fix,
    // then a column flip to land in SO(n).
    MatrixXd g(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) g(i, j) = stream.normal();
    MatrixXd rot;
    if (dim == 1) {
        rot = MatrixXd::Ones(1, 1);
    } else {
        Eigen::HouseholderQR<MatrixXd> qr(g);
        MatrixXd q = qr.householderQ();
        const MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
        for (int j = 0; j < dim; ++j)
            if (r(j, j) < 0.0) q.col(j) = -q.col(j);
        if (q.determinant() < 0.0) q.col(dim - 1) = -q.col(dim - 1);
        rot = q;
    }
    const VectorXd e = random_direction(dim, stream);
    const double t = stream.uniform(0.0, boost_max);
    return Isometry::boost(e, t).compose(Isometry::rotation(rot));
}

}  // namespace hyperstat::geometry
