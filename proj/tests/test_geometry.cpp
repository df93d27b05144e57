#include <cmath>

#include <doctest.h>

#include "hyperstat/geometry.hpp"
#include "hyperstat/rng.hpp"

using namespace hyperstat;
using geometry::HyperboloidPoint;
using geometry::Isometry;
using geometry::Model;

namespace {

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

HyperboloidPoint boosted_origin(int dim, int axis, double t) {
    Eigen::VectorXd dir = Eigen::VectorXd::Zero(dim);
    dir[axis] = 1.0;
    return geometry::apply(Isometry::boost(dir, t), HyperboloidPoint::origin(dim));
}

}  // namespace

TEST_CASE("model names round-trip; unknown names are parse errors") {
    CHECK(geometry::model_from_string("hyperboloid") == Model::Hyperboloid);
    CHECK(geometry::model_from_string("klein") == Model::Klein);
    CHECK(geometry::model_from_string("poincare") == Model::Poincare);
    for (auto m : {Model::Hyperboloid, Model::Klein, Model::Poincare})
        CHECK(geometry::model_from_string(geometry::to_string(m)) == m);
    CHECK_THROWS_AS(geometry::model_from_string("Klein"), ParseError);
    CHECK_THROWS_AS(geometry::model_from_string(""), ParseError);
}

TEST_CASE("dimension guard accepts 1..16 only") {
    CHECK_NOTHROW(geometry::check_dim(1));
    CHECK_NOTHROW(geometry::check_dim(16));
    CHECK_THROWS_AS(geometry::check_dim(0), PreconditionError);
    CHECK_THROWS_AS(geometry::check_dim(17), PreconditionError);
    CHECK_THROWS_AS(geometry::check_dim(-3), PreconditionError);
}

TEST_CASE("minkowski form has signature (+,-,...,-)") {
    Eigen::Vector3d a(2, 1, 1), b(1, 0, 0);
    CHECK(geometry::minkowski_dot(a, b) == 2.0);
    CHECK(geometry::minkowski_dot(a, a) == 2.0);  // 4 - 1 - 1
    Eigen::Vector2d o(1, 0);
    CHECK(geometry::minkowski_dot(o, o) == 1.0);
}

TEST_CASE("points must lie on the upper sheet") {
    Eigen::Vector2d off(1.0, 0.5);  // <x,x> = 0.75
    CHECK_THROWS_AS(HyperboloidPoint{off}, PreconditionError);
    Eigen::Vector2d lower(-1.0, 0.0);  // on the sheet through -e0
    CHECK_THROWS_AS(HyperboloidPoint{lower}, PreconditionError);
    CHECK_NOTHROW(HyperboloidPoint(Eigen::Vector2d(std::cosh(2.0), std::sinh(2.0))));
    CHECK(HyperboloidPoint::origin(3).coords()[0] == 1.0);
}

TEST_CASE("distance: hyperbolic Pythagoras oracle and symmetry") {
    // orthogonal boosts a, b from the origin: d = arccosh(cosh a cosh b)
    const auto x = boosted_origin(2, 0, 0.8);
    const auto y = boosted_origin(2, 1, 1.3);
    CHECK(near(geometry::dist(x, y), 1.6243049583963074, 1e-12));
    CHECK(geometry::dist(x, y) == geometry::dist(y, x));
    CHECK(geometry::dist(x, x) == 0.0);
    // collinear boosts add
    const auto z = boosted_origin(2, 0, -1.1);
    CHECK(near(geometry::dist(x, z), 1.9, 1e-12));
}

TEST_CASE("distance rejects off-sheet inputs instead of returning NaN") {
    const auto bad = geometry::unsafe_point(Eigen::Vector2d(0.9, 0.0));
    CHECK_THROWS_AS(geometry::dist(bad, HyperboloidPoint::origin(1)), NumericError);
}

TEST_CASE("near-equal points clamp to zero distance") {
    const auto p = boosted_origin(2, 0, 0.5);
    const auto q = geometry::unsafe_point(p.coords() * (1.0 + 1e-14));
    CHECK(geometry::dist(p, q) >= 0.0);
    CHECK(geometry::dist(p, q) <= 1e-6);
}

TEST_CASE("klein and poincare views of a boosted point") {
    const auto p = boosted_origin(2, 0, 1.2);
    CHECK(near(p.to_klein()[0], std::tanh(1.2), 1e-15));
    CHECK(near(p.to_klein()[1], 0.0, 1e-15));
    CHECK(near(p.to_poincare()[0], std::tanh(0.6), 1e-15));
    // factor-of-two rule between the disc models on a diameter
    CHECK(near(p.to_klein()[0], 2 * p.to_poincare()[0] / (1 + p.to_poincare()[0] * p.to_poincare()[0]), 1e-15));
}

TEST_CASE("model conversions invert each other") {
    auto stream = rng::make_stream(11, "test.convert");
    for (int k = 0; k < 50; ++k) {
        const auto p = geometry::random_point_ball(3, 2.5, stream);
        const auto k1 = HyperboloidPoint::from_klein(p.to_klein());
        const auto p1 = HyperboloidPoint::from_poincare(p.to_poincare());
        CHECK((k1.coords() - p.coords()).cwiseAbs().maxCoeff() <= 1e-10);
        CHECK((p1.coords() - p.coords()).cwiseAbs().maxCoeff() <= 1e-10);
        // coordinate-level conversion agrees with the member functions
        const auto kc = geometry::convert(p.coords(), Model::Hyperboloid, Model::Klein);
        CHECK((kc - p.to_klein()).cwiseAbs().maxCoeff() == 0.0);
        const auto pc = geometry::convert(kc, Model::Klein, Model::Poincare);
        CHECK((pc - p.to_poincare()).cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("klein coordinates outside the unit ball are rejected") {
    CHECK_THROWS_AS(HyperboloidPoint::from_klein(Eigen::Vector2d(1.0, 0.0)), PreconditionError);
    CHECK_THROWS_AS(HyperboloidPoint::from_klein(Eigen::Vector2d(0.8, 0.7)), PreconditionError);
    CHECK_THROWS_AS(HyperboloidPoint::from_poincare(Eigen::Vector2d(0.0, 1.0)), PreconditionError);
}

TEST_CASE("dist_klein matches the hyperboloid distance") {
    const Eigen::Vector2d u(std::tanh(1.2), 0.0), v(-std::tanh(0.5), 0.0);
    CHECK(near(geometry::dist_klein(u, v), 1.7, 1e-12));  // boosts add on a diameter
    auto stream = rng::make_stream(12, "test.dist-klein");
    for (int k = 0; k < 50; ++k) {
        const auto p = geometry::random_point_ball(2, 2.0, stream);
        const auto q = geometry::random_point_ball(2, 2.0, stream);
        CHECK(near(geometry::dist_klein(p.to_klein(), q.to_klein()), geometry::dist(p, q), 1e-10));
    }
}

TEST_CASE("geodesic interpolation is metrically affine") {
    const auto a = boosted_origin(3, 0, -0.9);
    const auto b = boosted_origin(3, 1, 1.4);
    const double d = geometry::dist(a, b);
    CHECK((geometry::geodesic_point(a, b, 0.0).coords() - a.coords()).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((geometry::geodesic_point(a, b, 1.0).coords() - b.coords()).cwiseAbs().maxCoeff() <= 1e-12);
    for (double s : {0.25, 0.5, 0.75}) {
        const auto m = geometry::geodesic_point(a, b, s);
        CHECK(near(geometry::dist(a, m), s * d, 1e-11));
        CHECK(near(geometry::dist(m, b), (1 - s) * d, 1e-11));
    }
    CHECK_THROWS_AS(geometry::geodesic_point(a, a, 0.5), PreconditionError);  // direction undefined
}

TEST_CASE("isometries: construction validates the Lorentz condition") {
    Eigen::Matrix3d m = Eigen::Matrix3d::Identity();
    m(0, 0) = 2.0;
    CHECK_THROWS_AS(Isometry{m}, PreconditionError);
    CHECK_NOTHROW(Isometry::identity(2));
}

TEST_CASE("boost moves the origin the stated distance and inverts cleanly") {
    const auto g = Isometry::boost(Eigen::Vector2d(0.6, 0.8), 1.7);
    const auto p = geometry::apply(g, HyperboloidPoint::origin(2));
    CHECK(near(geometry::dist(HyperboloidPoint::origin(2), p), 1.7, 1e-12));
    const auto gi = g.inverse();
    CHECK((gi.matrix() * g.matrix() - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() <= 1e-12);
    const auto back = geometry::apply(gi, p);
    CHECK((back.coords() - HyperboloidPoint::origin(2).coords()).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("translation_to_origin centers its argument") {
    auto stream = rng::make_stream(13, "test.translate");
    for (int k = 0; k < 20; ++k) {
        const auto p = geometry::random_point_ball(2, 2.0, stream);
        const auto g = Isometry::translation_to_origin(p);
        const auto moved = geometry::apply(g, p);
        CHECK(geometry::dist(moved, HyperboloidPoint::origin(2)) <= 1e-10);
    }
}

TEST_CASE("isometries preserve distances") {
    auto stream = rng::make_stream(14, "test.isometry");
    for (int k = 0; k < 30; ++k) {
        const auto p = geometry::random_point_ball(3, 2.0, stream);
        const auto q = geometry::random_point_ball(3, 2.0, stream);
        const auto g = geometry::random_isometry(3, stream);
        CHECK(near(geometry::dist(geometry::apply(g, p), geometry::apply(g, q)), geometry::dist(p, q), 1e-9));
    }
}

TEST_CASE("composition applies right-to-left") {
    auto stream = rng::make_stream(15, "test.compose");
    const auto g = geometry::random_isometry(2, stream);
    const auto h = geometry::random_isometry(2, stream);
    const auto p = geometry::random_point_ball(2, 1.5, stream);
    const auto lhs = geometry::apply(g.compose(h), p);
    const auto rhs = geometry::apply(g, geometry::apply(h, p));
    CHECK((lhs.coords() - rhs.coords()).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("rotation fixes the origin") {
    Eigen::Matrix2d r;
    const double c = std::cos(0.4), s = std::sin(0.4);
    r << c, -s, s, c;
    const auto g = Isometry::rotation(r);
    const auto o = HyperboloidPoint::origin(2);
    CHECK((geometry::apply(g, o).coords() - o.coords()).cwiseAbs().maxCoeff() == 0.0);
    const auto p = boosted_origin(2, 0, 1.0);
    CHECK(near(geometry::dist(o, geometry::apply(g, p)), 1.0, 1e-12));
}

TEST_CASE("ball sampler stays inside the ball with the right radial law") {
    auto stream = rng::make_stream(16, "test.ball");
    const auto o2 = HyperboloidPoint::origin(2);
    int below_median = 0;
    const int n = 2000;
    for (int k = 0; k < n; ++k) {
        const auto p = geometry::random_point_ball(2, 2.0, stream);
        const double r = geometry::dist(o2, p);
        CHECK(r <= 2.0 + 1e-9);
        below_median += r < 1.513374006596504;  // area-median radius of B(o, 2) in H^2
    }
    CHECK(below_median > n / 2 - 150);  // ~4.5 sigma band
    CHECK(below_median < n / 2 + 150);
    // dim 3 sampler uses the tabulated inverse CDF; check its median too
    const auto o3 = HyperboloidPoint::origin(3);
    below_median = 0;
    for (int k = 0; k < n; ++k)
        below_median += geometry::dist(o3, geometry::random_point_ball(3, 2.0, stream)) < 1.7028343381302187;
    CHECK(below_median > n / 2 - 150);
    CHECK(below_median < n / 2 + 150);
    CHECK_THROWS_AS(geometry::random_point_ball(2, 0.0, stream), PreconditionError);
}

TEST_CASE("random directions are unit vectors") {
    auto stream = rng::make_stream(17, "test.direction");
    for (int k = 0; k < 100; ++k) {
        const auto w = geometry::random_direction(4, stream);
        CHECK(near(w.norm(), 1.0, 1e-12));
    }
}

TEST_CASE("random isometries stay within the boost budget") {
    auto stream = rng::make_stream(18, "test.random-isometry");
    const auto o = HyperboloidPoint::origin(2);
    for (int k = 0; k < 50; ++k) {
        const auto g = geometry::random_isometry(2, stream, 1.25);
        CHECK(geometry::dist(o, geometry::apply(g, o)) <= 1.25 + 1e-9);
    }
}
