#include "hyperstat/generators.hpp"

#include <cmath>

#include "hyperstat/errors.hpp"
#include "hyperstat/geometry.hpp"
#include "hyperstat/rng.hpp"

namespace hyperstat::gen {

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

MatrixXd draw_ball_rows(int dim, int n, double R, rng::Stream& stream) {
    MatrixXd rows(n, dim + 1);
    for (int i = 0; i < n; ++i) rows.row(i) = geometry::random_point_ball(dim, R, stream).coords();
    return rows;
}

void check_count(int n) {
    if (n < 1) throw PreconditionError("generator needs n >= 1");
}

}  // namespace

metric::Sample uniform_ball(int dim, int n, double R, std::uint64_t seed) {
    check_count(n);
    rng::Stream stream = rng::make_stream(seed, "gen.uniform-ball");
    return metric::Sample{metric::MetricSpace::hyperbolic(dim), draw_ball_rows(dim, n, R, stream)};
}

std::pair<metric::Sample, metric::Sample> two_ball(int dim, int n, double r1, double r2, std::uint64_t seed) {
    check_count(n);
    rng::Stream s1 = rng::make_stream(seed, "gen.two-ball.first");
    rng::Stream s2 = rng::make_stream(seed, "gen.two-ball.second");
    const metric::MetricSpace space = metric::MetricSpace::hyperbolic(dim);
    return {metric::Sample{space, draw_ball_rows(dim, n, r1, s1)},
            metric::Sample{space, draw_ball_rows(dim, n, r2, s2)}};
}

std::pair<metric::Sample, metric::Sample> paired_dependent(int dim, int n, double scale, std::uint64_t seed,
                                                           double ball_radius) {
    check_count(n);
    if (!(scale >= 0.0)) throw PreconditionError("noise scale must be >= 0");
    rng::Stream base = rng::make_stream(seed, "gen.paired-dependent.x");
    rng::Stream noise = rng::make_stream(seed, "gen.paired-dependent.noise");
    const metric::MetricSpace space = metric::MetricSpace::hyperbolic(dim);
    MatrixXd x(n, dim + 1), y(n, dim + 1);
    for (int i = 0; i < n; ++i) {
        const geometry::HyperboloidPoint p = geometry::random_point_ball(dim, ball_radius, base);
        const double t = noise.uniform(0.0, scale);
        const VectorXd dir = geometry::random_direction(dim, noise);
        const geometry::Isometry g = geometry::Isometry::boost(dir, t);
        x.row(i) = p.coords();
        y.row(i) = geometry::apply(g, p).coords();
    }
    return {metric::Sample{space, std::move(x)}, metric::Sample{space, std::move(y)}};
}

std::pair<metric::Sample, metric::Sample> paired_independent(int dim, int n, double R, std::uint64_t seed) {
    check_count(n);
    rng::Stream sx = rng::make_stream(seed, "gen.paired-independent.x");
    rng::Stream sy = rng::make_stream(seed, "gen.paired-independent.y");
    const metric::MetricSpace space = metric::MetricSpace::hyperbolic(dim);
    return {metric::Sample{space, draw_ball_rows(dim, n, R, sx)},
            metric::Sample{space, draw_ball_rows(dim, n, R, sy)}};
}

double boost_displacement_bound(double t, double rho) {
    const double c = 1.0 + (std::cosh(t) - 1.0) * std::cosh(rho) * std::cosh(rho);
    const double u = c - 1.0;
    return std::log1p(u + std::sqrt(u * (u + 2.0)));
}

}  // namespace hyperstat::gen
