#include <cmath>
#include <numbers>
#include <vector>

#include <doctest.h>

#include "hyperstat/crofton.hpp"
#include "hyperstat/energetics.hpp"
#include "hyperstat/geometry.hpp"
#include "hyperstat/rng.hpp"
#include "hyperstat/sample.hpp"

using namespace hyperstat;
using crofton::CroftonSampler;
using crofton::HalfSpace;
using geometry::HyperboloidPoint;

namespace {

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

HyperboloidPoint on_axis(int dim, int axis, double t) {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(dim + 1);
    x[0] = std::cosh(t);
    x[1 + axis] = std::sinh(t);
    return geometry::unsafe_point(std::move(x));
}

}  // namespace

TEST_CASE("half-space membership: the origin is inside iff t >= 0") {
    const HalfSpace pos(1.0, Eigen::VectorXd::Ones(1));
    const HalfSpace neg(-0.3, Eigen::VectorXd::Ones(1));
    const auto o = HyperboloidPoint::origin(1);
    CHECK(crofton::contains(pos, o));
    CHECK(!crofton::contains(neg, o));
    CHECK(crofton::contains(HalfSpace(0.0, Eigen::VectorXd::Ones(1)), o));
}

TEST_CASE("half-space separation along the axis has the sinh(t - s) sign") {
    // p at distance 2 along omega: <p, v> = sinh(t - 2), negative for t = 1
    const HalfSpace s(1.0, Eigen::VectorXd::Ones(1));
    const auto p = on_axis(1, 0, 2.0);
    CHECK(!crofton::contains(s, p));
    CHECK(crofton::separates(s, HyperboloidPoint::origin(1), p));
    CHECK(!crofton::separates(s, p, p));
    // boundary cases: feet beyond the pair never separate
    CHECK(!crofton::separates(HalfSpace(2.5, Eigen::VectorXd::Ones(1)), HyperboloidPoint::origin(1), p));
    CHECK(!crofton::separates(HalfSpace(-0.5, Eigen::VectorXd::Ones(1)), HyperboloidPoint::origin(1), p));
}

TEST_CASE("half-space construction validates its inputs") {
    CHECK_THROWS_AS(HalfSpace(0.0, Eigen::Vector2d(1.0, 1.0)), PreconditionError);  // not unit
    CHECK_THROWS_AS(HalfSpace(std::numeric_limits<double>::infinity(), Eigen::Vector2d(1.0, 0.0)),
                    PreconditionError);
    const HalfSpace s(0.7, Eigen::Vector2d(0.6, 0.8));
    CHECK(near(s.normal()[0], std::sinh(0.7), 1e-15));
    CHECK(near(s.normal()[1], 0.6 * std::cosh(0.7), 1e-15));
}

TEST_CASE("sphere areas and normalizations") {
    using std::numbers::pi;
    CHECK(near(crofton::sphere_area(0), 2.0, 1e-15));
    CHECK(near(crofton::sphere_area(1), 2 * pi, 1e-14));
    CHECK(near(crofton::sphere_area(2), 4 * pi, 1e-14));
    CHECK(near(crofton::kappa(1), 0.5, 1e-15));
    CHECK(near(crofton::kappa(2), 0.25, 1e-15));
    CHECK(near(crofton::kappa(3), 1.0 / (2 * pi), 1e-15));
    CHECK(near(crofton::kappa(4), 3.0 / (8 * pi), 1e-15));
    CHECK(near(crofton::density(0.0, 2), crofton::kappa(2), 1e-15));
    CHECK(near(crofton::density(1.3, 4), crofton::kappa(4) * std::pow(std::cosh(1.3), 3), 1e-14));
}

TEST_CASE("cosh power integrals: closed forms and a quadrature-frozen value") {
    CHECK(near(crofton::cosh_power_integral(0, 1.7), 3.4, 1e-15));
    CHECK(near(crofton::cosh_power_integral(1, 2.0), 2 * std::sinh(2.0), 1e-14));
    CHECK(near(crofton::cosh_power_integral(2, 2.0), 2.0 + std::sinh(2.0) * std::cosh(2.0), 1e-12));
    CHECK(near(crofton::cosh_power_integral(4, 1.3), 9.986951280157168, 1e-12));
}

TEST_CASE("window mass: H^1 oracle and quadrature-frozen values") {
    CHECK(near(crofton::window_mass(CroftonSampler::make(1, 1.0, 1, 0)), 2.0, 1e-14));
    CHECK(near(crofton::window_mass(CroftonSampler::make(2, 1.5, 1, 0)), 6.6893286935655558, 1e-12));
    CHECK(near(crofton::window_mass(CroftonSampler::make(3, 2.0, 1, 0)), 31.28991719712775, 1e-12));
    CHECK(near(crofton::window_mass(CroftonSampler::make(4, 1.0, 1, 0)), 8.0875141505630292, 1e-12));
}

TEST_CASE("sampler validation") {
    CHECK_THROWS_AS(CroftonSampler::make(0, 1.0, 10, 0).validate(), PreconditionError);
    CHECK_THROWS_AS(CroftonSampler::make(2, -1.0, 10, 0).validate(), PreconditionError);
    CHECK_THROWS_AS(CroftonSampler::make(2, 1.0, 0, 0).validate(), PreconditionError);
}

TEST_CASE("integrating 1 returns the window mass with zero variance") {
    const auto sampler = CroftonSampler::make(2, 1.5, 30000, 5);
    const auto est = crofton::integrate(sampler, parallel::Mode::OpenMP, [](const HalfSpace&) { return 1.0; });
    CHECK(near(est.value, crofton::window_mass(sampler), 1e-10));
    CHECK(est.std_error <= 1e-10);
    CHECK(est.n_samples == 30000);
}

TEST_CASE("the foot coordinate is symmetric about zero") {
    const auto sampler = CroftonSampler::make(2, 2.0, 100000, 6);
    const auto est =
        crofton::integrate(sampler, parallel::Mode::OpenMP, [](const HalfSpace& s) { return s.t() > 0 ? 1.0 : 0.0; });
    const double z = crofton::window_mass(sampler);
    CHECK(near(est.value, z / 2, 3 * est.std_error));
}

TEST_CASE("integration folds identically in serial and parallel modes") {
    const auto sampler = CroftonSampler::make(3, 1.5, 50000, 7);
    auto f = [](const HalfSpace& s) { return std::tanh(s.t()) + s.omega()[0] * s.omega()[0]; };
    const auto a = crofton::integrate(sampler, parallel::Mode::Serial, f);
    const auto b = crofton::integrate(sampler, parallel::Mode::OpenMP, f);
    CHECK(a.value == b.value);
    CHECK(a.std_error == b.std_error);
}

TEST_CASE("the half-space stream replays exactly the integration draws") {
    const auto sampler = CroftonSampler::make(2, 1.8, 20000, 8);
    const auto x = on_axis(2, 0, 0.6), y = on_axis(2, 1, -0.4);
    auto f = [&](const HalfSpace& s) { return crofton::separates(s, x, y) ? 1.0 : 0.0; };
    const auto est = crofton::integrate(sampler, parallel::Mode::OpenMP, f);
    crofton::HalfSpaceStream stream(sampler);
    double acc = 0;
    std::int64_t count = 0;
    const double expected_weight = crofton::window_mass(sampler) / 20000;
    while (auto draw = stream.next()) {
        CHECK(draw->second == expected_weight);
        acc += draw->second * f(draw->first);
        ++count;
    }
    CHECK(count == 20000);
    CHECK(!stream.next().has_value());
    CHECK(near(acc, est.value, 1e-12 * std::max(1.0, std::abs(est.value))));
}

TEST_CASE("cut measure: equal points have measure zero") {
    const auto x = on_axis(2, 0, 0.9);
    const auto est = crofton::cut_measure(x, x, CroftonSampler::make(2, 1.0, 1000, 9));
    CHECK(est.value == 0.0);
    CHECK(est.std_error == 0.0);
}

TEST_CASE("cut measure reproduces the distance in every dimension") {
    for (int dim : {1, 2, 3}) {
        const auto x = on_axis(dim, 0, -0.5), y = on_axis(dim, 0, 0.5);
        const auto sampler = CroftonSampler::make(dim, 0.75, 100000, 10 + dim);
        const auto both = crofton::cut_measure(x, y, sampler);
        CHECK(near(both.value, 1.0, 4 * both.std_error));
        const auto one = crofton::cut_measure(x, y, sampler, crofton::Orientation::FirstInSecondOut);
        CHECK(near(one.value, 0.5, 4 * one.std_error));
    }
}

TEST_CASE("cut measure needs a window covering half the distance") {
    const auto x = on_axis(2, 0, -1.0), y = on_axis(2, 0, 1.0);
    CHECK_THROWS_AS(crofton::cut_measure(x, y, CroftonSampler::make(2, 0.99, 1000, 11)), PreconditionError);
    CHECK_NOTHROW(crofton::cut_measure(x, y, CroftonSampler::make(2, 1.0, 1000, 11)));
}

TEST_CASE("cut measure is isometry invariant up to Monte Carlo error") {
    auto stream = rng::make_stream(23, "test.cut-invariance");
    const auto x = on_axis(2, 0, -0.7), y = on_axis(2, 1, 0.8);
    const auto sampler = CroftonSampler::make(2, 1.5, 200000, 12);
    const auto base = crofton::cut_measure(x, y, sampler);
    for (int k = 0; k < 3; ++k) {
        const auto g = geometry::random_isometry(2, stream, 1.0);
        const auto moved = crofton::cut_measure(geometry::apply(g, x), geometry::apply(g, y), sampler);
        CHECK(near(moved.value, base.value, 3 * std::hypot(moved.std_error, base.std_error)));
    }
}

TEST_CASE("cut measure is additive along a geodesic") {
    const auto x = on_axis(3, 0, -1.0), y = on_axis(3, 0, 1.0);
    const auto mid = geometry::geodesic_point(x, y, 0.5);
    const auto sampler = CroftonSampler::make(3, 1.5, 200000, 13);
    const auto whole = crofton::cut_measure(x, y, sampler);
    const auto left = crofton::cut_measure(x, mid, sampler);
    const auto right = crofton::cut_measure(mid, y, sampler);
    const double rss = std::sqrt(whole.std_error * whole.std_error + left.std_error * left.std_error +
                                 right.std_error * right.std_error);
    CHECK(near(whole.value, left.value + right.value, 3 * rss));
}

TEST_CASE("cut measure is identical across execution modes") {
    const auto x = on_axis(2, 0, -0.6), y = on_axis(2, 0, 0.6);
    const auto sampler = CroftonSampler::make(2, 1.0, 50000, 14);
    const auto s = crofton::cut_measure(x, y, sampler, crofton::Orientation::Both, parallel::Mode::Serial);
    const auto p = crofton::cut_measure(x, y, sampler, crofton::Orientation::Both, parallel::Mode::OpenMP);
    CHECK(s.value == p.value);
    CHECK(s.std_error == p.std_error);
}

TEST_CASE("discrepancy between point masses integrates to their distance") {
    Eigen::MatrixXd r1(1, 3), r2(1, 3);
    r1 << std::cosh(0.5), std::sinh(0.5), 0;
    r2 << std::cosh(0.5), -std::sinh(0.5), 0;
    const auto mu1 = metric::make_hyperbolic_sample(r1), mu2 = metric::make_hyperbolic_sample(r2);
    const auto est = crofton::discrepancy_integral(mu1, mu2, CroftonSampler::make(2, 1.2, 200000, 15));
    CHECK(near(est.value, 1.0, 3 * est.std_error));
    CHECK(est.std_error < 0.02);
}

TEST_CASE("twice the discrepancy integral matches the exact energy form") {
    auto stream = rng::make_stream(24, "test.discrepancy-energy");
    Eigen::MatrixXd r1(12, 3), r2(15, 3);
    for (int i = 0; i < r1.rows(); ++i) r1.row(i) = geometry::random_point_ball(2, 0.8, stream).coords().transpose();
    for (int i = 0; i < r2.rows(); ++i) r2.row(i) = geometry::random_point_ball(2, 0.8, stream).coords().transpose();
    const auto mu1 = metric::make_hyperbolic_sample(r1), mu2 = metric::make_hyperbolic_sample(r2);
    const double energy = energetics::energy_form(mu1, mu2);
    const auto est = crofton::discrepancy_integral(mu1, mu2, CroftonSampler::make(2, 1.6, 400000, 16));
    CHECK(near(2 * est.value, energy, 3 * 2 * est.std_error));
}

TEST_CASE("discrepancy input gates") {
    Eigen::MatrixXd far(1, 3);
    far << std::cosh(1.2), std::sinh(1.2), 0;
    const auto out = metric::make_hyperbolic_sample(far);
    Eigen::MatrixXd near_rows(1, 3);
    near_rows << 1, 0, 0;
    const auto origin = metric::make_hyperbolic_sample(near_rows);
    // support must fit in B(o, R/2): point at 1.2 vs R/2 = 1
    CHECK_THROWS_AS(crofton::discrepancy_integral(out, origin, CroftonSampler::make(2, 2.0, 100, 17)),
                    PreconditionError);
    Eigen::MatrixXd e(1, 2);
    e << 0, 0;
    CHECK_THROWS_AS(
        crofton::discrepancy_integral(metric::make_euclidean_sample(e, 2.0), origin, CroftonSampler::make(2, 2.0, 100, 17)),
        PreconditionError);
    // dimension mismatch between the sampler and the points
    CHECK_THROWS_AS(crofton::discrepancy_integral(origin, origin, CroftonSampler::make(3, 2.0, 100, 17)),
                    PreconditionError);
}

TEST_CASE("KS distance: frozen oracles including ties") {
    CHECK(crofton::ks_distance({0.0}, {1.0}) == 1.0);
    CHECK(crofton::ks_distance({0.0, 1.0}, {0.0, 1.0}) == 0.0);
    CHECK(crofton::ks_distance({0.0, 2.0}, {1.0, 3.0}) == 0.5);
    CHECK(near(crofton::ks_distance({1.0, 2.0, 3.0}, {1.5}), 2.0 / 3.0, 1e-15));
    CHECK(near(crofton::ks_distance({0.0, 0.0, 1.0}, {0.0, 1.0, 1.0}), 1.0 / 3.0, 1e-15));
    CHECK_THROWS_AS(crofton::ks_distance({}, {1.0}), PreconditionError);
}

TEST_CASE("projection gap: identical samples project identically") {
    Eigen::MatrixXd pts(5, 2);
    pts << 0.1, 0.2, -0.3, 0.4, 0.0, 0.0, 0.5, -0.5, -0.2, -0.1;
    const std::vector<Eigen::VectorXd> dirs = {Eigen::Vector2d(1, 0), Eigen::Vector2d(0.6, 0.8)};
    CHECK(crofton::cw_projection_gap(pts, pts, dirs) == 0.0);
}

TEST_CASE("projection gap separates atoms exactly along the right axis") {
    Eigen::MatrixXd a(1, 2), b(1, 2);
    a << 0.5, 0.0;
    b << -0.5, 0.0;
    CHECK(crofton::cw_projection_gap(a, b, {Eigen::Vector2d(1, 0)}) == 1.0);
    CHECK(crofton::cw_projection_gap(a, b, {Eigen::Vector2d(0, 1)}) == 0.0);
    CHECK(crofton::cw_projection_gap(a, b, {Eigen::Vector2d(0, 1), Eigen::Vector2d(1, 0)}) == 1.0);
    // the gridded variant agrees on atoms off the grid knots
    crofton::ThresholdGrid grid;
    CHECK(crofton::cw_projection_gap(a, b, {Eigen::Vector2d(1, 0)}, grid) == 1.0);
    CHECK(crofton::cw_projection_gap(a, b, {Eigen::Vector2d(0, 1)}, grid) == 0.0);
}

TEST_CASE("projection gap input gates") {
    Eigen::MatrixXd a(1, 2), edge(1, 2);
    a << 0.5, 0.0;
    edge << 1.0, 0.0;  // on the boundary, not inside
    CHECK_THROWS_AS(crofton::cw_projection_gap(a, edge, {Eigen::Vector2d(1, 0)}), PreconditionError);
    CHECK_THROWS_AS(crofton::cw_projection_gap(a, a, {}), PreconditionError);
    CHECK_THROWS_AS(crofton::cw_projection_gap(a, a, {Eigen::Vector2d(0, 0)}), PreconditionError);
    crofton::ThresholdGrid bad;
    bad.count = 0;
    CHECK_THROWS_AS(crofton::cw_projection_gap(a, a, {Eigen::Vector2d(1, 0)}, bad), PreconditionError);
}
