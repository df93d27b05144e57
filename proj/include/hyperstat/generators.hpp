#pragma once

#include <cstdint>
#include <utility>

#include "hyperstat/sample.hpp"

namespace hyperstat::gen {

/// n points drawn uniformly (w.r.t. hyperbolic volume) from the closed
/// ball B(o, R) in H^dim. Deterministic given the seed.
metric::Sample uniform_ball(int dim, int n, double R, std::uint64_t seed);

/// Two independent uniform-ball samples of n points each, radii r1, r2.
std::pair<metric::Sample, metric::Sample> two_ball(int dim, int n, double r1, double r2, std::uint64_t seed);

/// Paired samples with dependence: x_i uniform in B(o, ball_radius), and
/// y_i = g_i x_i where g_i is a pure boost of magnitude uniform on
/// [0, scale] in a uniform random direction. Each displacement obeys
/// d(x_i, y_i) <= boost_displacement_bound(scale, ball_radius).
std::pair<metric::Sample, metric::Sample> paired_dependent(int dim, int n, double scale, std::uint64_t seed,
                                                           double ball_radius = 1.0);

/// Paired samples with independent coordinates: both marginals uniform in
/// B(o, R), drawn from unrelated substreams.
std::pair<metric::Sample, metric::Sample> paired_independent(int dim, int n, double R, std::uint64_t seed);

/// Sharp bound on how far a boost of magnitude t can move a point at
/// distance rho from o: arccosh(1 + (cosh t - 1) cosh^2 rho).
double boost_displacement_bound(double t, double rho);

}  // namespace hyperstat::gen
