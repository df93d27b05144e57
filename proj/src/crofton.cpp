#include "hyperstat/crofton.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hyperstat::crofton {

HalfSpace::HalfSpace(double t, VectorXd omega) : t_(t), omega_(std::move(omega)) {
    if (!std::isfinite(t_)) throw PreconditionError("half-space foot distance must be finite");
    geometry::check_dim(static_cast<int>(omega_.size()));
    if (std::abs(omega_.norm() - 1.0) > 1e-12) throw PreconditionError("half-space direction must be a unit vector");
}

VectorXd HalfSpace::normal() const {
    VectorXd v(omega_.size() + 1);
    v[0] = std::sinh(t_);
    v.tail(omega_.size()) = std::cosh(t_) * omega_;
    return v;
}

bool contains(const HalfSpace& s, const geometry::HyperboloidPoint& p) {
    if (p.dim() != s.dim()) throw PreconditionError("half-space and point dimensions differ");
    return geometry::minkowski_dot(p.coords(), s.normal()) >= 0.0;
}

bool separates(const HalfSpace& s, const geometry::HyperboloidPoint& x, const geometry::HyperboloidPoint& y) {
    return contains(s, x) != contains(s, y);
}

double sphere_area(int m) {
    if (m < 0) throw PreconditionError("sphere dimension must be >= 0");
    const double half = 0.5 * (m + 1);
    return 2.0 * std::pow(M_PI, half) / std::tgamma(half);
}

double kappa(int n) {
    if (n < 1) throw PreconditionError("dimension must be >= 1");
    if (n == 1) return 0.5;
    return (n - 1) / (2.0 * sphere_area(n - 2));
}

double density(double t, int n) {
    return kappa(n) * std::pow(std::cosh(t), n - 1);
}

double cosh_power_integral(int m, double R) {
    if (m < 0 || !(R > 0.0)) throw PreconditionError("cosh_power_integral needs m >= 0 and R > 0");
    if (m == 0) return 2.0 * R;
    if (m == 1) return 2.0 * std::sinh(R);
    return (2.0 * std::sinh(R) * std::pow(std::cosh(R), m - 1) + (m - 1) * cosh_power_integral(m - 2, R)) / m;
}

CroftonSampler CroftonSampler::make(int dim, double R, std::int64_t n_samples, std::uint64_t seed) {
    CroftonSampler s;
    s.dim = dim;
    s.R = R;
    s.n_samples = n_samples;
    s.seed = seed;
    s.kappa_value = kappa(dim);
    s.validate();
    return s;
}

void CroftonSampler::validate() const {
    geometry::check_dim(dim);
    if (!(R > 0.0)) throw PreconditionError("window radius must be positive");
    if (n_samples < 1) throw PreconditionError("sample budget must be >= 1");
    if (!(kappa_value > 0.0)) throw PreconditionError("kappa must be positive");
}

double window_mass(const CroftonSampler& sampler) {
    return sampler.kappa_value * sphere_area(sampler.dim - 1) * cosh_power_integral(sampler.dim - 1, sampler.R);
}

namespace detail {

rng::InverseCdfTable foot_table(const CroftonSampler& sampler) {
    const int m = sampler.dim - 1;
    return rng::InverseCdfTable([m](double t) { return std::pow(std::cosh(t), m); }, -sampler.R, sampler.R);
}

}  // namespace detail

HalfSpaceStream::HalfSpaceStream(const CroftonSampler& sampler)
    : sampler_(sampler), table_(detail::foot_table(sampler)),
      weight_(window_mass(sampler) / static_cast<double>(sampler.n_samples)) {
    sampler_.validate();
}

std::optional<std::pair<HalfSpace, double>> HalfSpaceStream::next() {
    if (emitted_ >= sampler_.n_samples) return std::nullopt;
    if (emitted_ % parallel::kBlockSize == 0)
        draw_.emplace(sampler_, table_, emitted_ / parallel::kBlockSize);
    ++emitted_;
    return std::make_pair(draw_->next(), weight_);
}

SeparationEstimate cut_measure(const geometry::HyperboloidPoint& x, const geometry::HyperboloidPoint& y,
                               const CroftonSampler& sampler, Orientation orientation, parallel::Mode mode) {
    sampler.validate();
    if (x.dim() != sampler.dim || y.dim() != sampler.dim)
        throw PreconditionError("point dimension does not match sampler dimension");

    const double d = geometry::dist(x, y);
    if (d == 0.0) return SeparationEstimate{0.0, 0.0, sampler.n_samples};

    // Separating half-spaces cross the geodesic segment, so after moving
    // its midpoint to o every one of them has |t| <= d/2. Anything beyond
    // that would be truncated by the window.
    if (d / 2.0 > sampler.R)
        throw PreconditionError("pair at distance " + std::to_string(d) + " does not fit window radius " +
                                std::to_string(sampler.R) + " (need R >= d/2 about the midpoint)");

    const geometry::HyperboloidPoint mid = geometry::geodesic_point(x, y, 0.5);
    const geometry::Isometry recenter = geometry::Isometry::translation_to_origin(mid);
    const geometry::HyperboloidPoint xc = geometry::apply(recenter, x);
    const geometry::HyperboloidPoint yc = geometry::apply(recenter, y);

    if (orientation == Orientation::Both)
        return integrate(sampler, mode, [&](const HalfSpace& s) { return separates(s, xc, yc) ? 1.0 : 0.0; });
    return integrate(sampler, mode,
                     [&](const HalfSpace& s) { return contains(s, xc) && !contains(s, yc) ? 1.0 : 0.0; });
}

SeparationEstimate discrepancy_integral(const metric::Sample& mu1, const metric::Sample& mu2,
                                        const CroftonSampler& sampler, parallel::Mode mode) {
    sampler.validate();
    if (mu1.space.kind != metric::MetricSpace::Kind::Hyperbolic || mu2.space.kind != metric::MetricSpace::Kind::Hyperbolic)
        throw PreconditionError("discrepancy integral is defined for hyperbolic samples");
    if (mu1.space.dim != sampler.dim || mu2.space.dim != sampler.dim)
        throw PreconditionError("sample dimension does not match sampler dimension");
    if (mu1.size() == 0 || mu2.size() == 0) throw PreconditionError("discrepancy integral needs nonempty samples");

    const geometry::HyperboloidPoint o = geometry::HyperboloidPoint::origin(sampler.dim);
    for (const auto* s : {&mu1, &mu2})
        for (int i = 0; i < s->size(); ++i)
            if (geometry::dist(o, s->point(i)) > sampler.R / 2.0)
                throw PreconditionError("support point " + std::to_string(i) + " lies outside B(o, R/2)");

    const MatrixXd& p1 = mu1.points;
    const MatrixXd& p2 = mu2.points;
    const double inv1 = 1.0 / mu1.size();
    const double inv2 = 1.0 / mu2.size();

    return integrate(sampler, mode, [&](const HalfSpace& s) {
        VectorXd v = s.normal();
        v.tail(v.size() - 1) *= -1.0;  // Minkowski dot as a plain dot product
        double f1 = 0.0, f2 = 0.0;
        for (int i = 0; i < p1.rows(); ++i)
            if (p1.row(i).dot(v) >= 0.0) f1 += inv1;
        for (int i = 0; i < p2.rows(); ++i)
            if (p2.row(i).dot(v) >= 0.0) f2 += inv2;
        const double gap = f1 - f2;
        return gap * gap;
    });
}

double ks_distance(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw PreconditionError("KS distance needs nonempty samples");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double step_a = 1.0 / static_cast<double>(a.size());
    const double step_b = 1.0 / static_cast<double>(b.size());
    double fa = 0.0, fb = 0.0, best = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        // advance past ties together so the gap is evaluated between jump points
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] == x) {
            fa += step_a;
            ++i;
        }
        while (j < b.size() && b[j] == x) {
            fb += step_b;
            ++j;
        }
        best = std::max(best, std::abs(fa - fb));
    }
    return std::max(best, std::max(std::abs(1.0 - fb), std::abs(fa - 1.0)));
}

double cw_projection_gap(const MatrixXd& klein1, const MatrixXd& klein2, const std::vector<VectorXd>& directions,
                         const std::optional<ThresholdGrid>& grid) {
    if (klein1.rows() == 0 || klein2.rows() == 0) throw PreconditionError("projection gap needs nonempty samples");
    if (directions.empty()) throw PreconditionError("projection gap needs at least one direction");
    if (klein1.cols() != klein2.cols()) throw PreconditionError("samples have different dimensions");
    const int dim = static_cast<int>(klein1.cols());
    geometry::check_dim(dim);
    for (const MatrixXd* pts : {&klein1, &klein2})
        for (int i = 0; i < pts->rows(); ++i)
            if (pts->row(i).norm() >= 1.0)
                throw PreconditionError("Klein point at row " + std::to_string(i) + " is not inside the unit ball");
    if (grid && grid->count < 1) throw PreconditionError("threshold grid needs at least one point");

    double gap = 0.0;
    for (const VectorXd& raw : directions) {
        if (raw.size() != dim) throw PreconditionError("direction dimension mismatch");
        const double norm = raw.norm();
        if (std::abs(norm - 1.0) > 1e-9) throw PreconditionError("directions must be unit vectors");
        const VectorXd dir = raw / norm;

        std::vector<double> proj1(static_cast<std::size_t>(klein1.rows()));
        std::vector<double> proj2(static_cast<std::size_t>(klein2.rows()));
        for (int i = 0; i < klein1.rows(); ++i) proj1[static_cast<std::size_t>(i)] = klein1.row(i).dot(dir);
        for (int i = 0; i < klein2.rows(); ++i) proj2[static_cast<std::size_t>(i)] = klein2.row(i).dot(dir);

        if (!grid) {
            gap = std::max(gap, ks_distance(std::move(proj1), std::move(proj2)));
            continue;
        }
        // sup over the grid of |F1(tau) - F2(tau)|, F = empirical CDF
        std::sort(proj1.begin(), proj1.end());
        std::sort(proj2.begin(), proj2.end());
        for (int k = 0; k < grid->count; ++k) {
            const double tau =
                grid->count == 1 ? grid->lo : grid->lo + (grid->hi - grid->lo) * k / (grid->count - 1);
            const double f1 = static_cast<double>(std::upper_bound(proj1.begin(), proj1.end(), tau) - proj1.begin()) /
                              static_cast<double>(proj1.size());
            const double f2 = static_cast<double>(std::upper_bound(proj2.begin(), proj2.end(), tau) - proj2.begin()) /
                              static_cast<double>(proj2.size());
            gap = std::max(gap, std::abs(f1 - f2));
        }
    }
    return gap;
}

}  // namespace hyperstat::crofton
