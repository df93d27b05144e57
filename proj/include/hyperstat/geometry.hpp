#pragma once

#include <Eigen/Dense>

#include "hyperstat/errors.hpp"
#include "hyperstat/rng.hpp"

namespace hyperstat::geometry {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Supported coordinate models of hyperbolic n-space. The hyperboloid
/// (Lorentz) model is canonical: distances never involve boundary blow-up
/// and isometries act linearly. Klein and Poincare are views on it.
enum class Model { Hyperboloid, Klein, Poincare };

Model model_from_string(const std::string& name);
const char* to_string(Model m);

/// Dimensions 1 through 16 are supported everywhere a dimension is a
/// parameter (samplers, generators, CLI).
inline constexpr int kMaxDim = 16;
void check_dim(int n);

/// Minkowski bilinear form <a,b> = a0*b0 - sum_{i>=1} a_i*b_i.
double minkowski_dot(const VectorXd& a, const VectorXd& b);

/// Point on the upper sheet of the unit hyperboloid in R^{n+1}:
/// <x,x> = 1, x0 >= 1. Validated on construction; operations assume the
/// invariants afterwards.
class HyperboloidPoint {
  public:
    explicit HyperboloidPoint(VectorXd coords);

    /// Lifts Klein-ball coordinates: x = (1, k) / sqrt(1 - |k|^2).
    static HyperboloidPoint from_klein(const VectorXd& k);
    static HyperboloidPoint from_poincare(const VectorXd& p);
    /// The base point o = (1, 0, ..., 0).
    static HyperboloidPoint origin(int dim);

    int dim() const { return static_cast<int>(coords_.size()) - 1; }
    const VectorXd& coords() const { return coords_; }
    double time() const { return coords_[0]; }
    /// Spatial block (x1..xn).
    Eigen::VectorBlock<const VectorXd> spatial() const { return coords_.tail(dim()); }

    VectorXd to_klein() const;     // k_i = x_i / x0
    VectorXd to_poincare() const;  // p_i = x_i / (1 + x0)

  private:
    HyperboloidPoint() = default;
    VectorXd coords_;
    friend HyperboloidPoint unsafe_point(VectorXd);
};

/// Constructs without validation. Internal use for outputs that are
/// on-sheet by construction (after renormalization).
HyperboloidPoint unsafe_point(VectorXd coords);

/// Validates Klein coordinates (|k| < 1 strictly).
void check_klein(const VectorXd& k);
/// Validates Poincare coordinates (|p| < 1 strictly).
void check_poincare(const VectorXd& p);

/// Model conversions on bare coordinate vectors. Klein <-> hyperboloid is
/// k = spatial/x0; Poincare -> Klein is k = 2p / (1 + |p|^2).
VectorXd convert(const VectorXd& coords, Model from, Model to);

/// Hyperbolic distance d(a,b) = arccosh(<a,b>). Computed as
/// log1p(u + sqrt(u(u+2))) with u = <a,b> - 1, which stays accurate for
/// nearby points where arccosh(1 + u) cancels catastrophically.
/// <a,b> below 1 - 1e-9 means an off-sheet input and raises; values in
/// [1 - 1e-9, 1] clamp to distance 0.
double dist(const HyperboloidPoint& a, const HyperboloidPoint& b);

/// Distance in the Klein model:
/// arccosh( (1 - u.v) / sqrt((1 - |u|^2)(1 - |v|^2)) ).
double dist_klein(const VectorXd& u, const VectorXd& v);

/// Point at arclength fraction s from a toward b on the geodesic:
/// (sinh((1-s)L) a + sinh(sL) b) / sinh(L), L = d(a,b).
/// s = 0 and s = 1 reproduce the endpoints exactly.
HyperboloidPoint geodesic_point(const HyperboloidPoint& a, const HyperboloidPoint& b, double s);

/// Isometry of H^n as a Lorentz matrix on hyperboloid coordinates:
/// M^T J M = J with J = diag(1, -1, ..., -1), and M00 > 0 (upper sheet
/// preserved). Validated on construction to 1e-10 entrywise.
class Isometry {
  public:
    explicit Isometry(MatrixXd matrix);

    static Isometry identity(int dim);
    /// Boost of magnitude t along unit spatial direction e; maps o to
    /// (cosh t, sinh t * e).
    static Isometry boost(const VectorXd& direction, double t);
    /// Embeds an n x n rotation of the spatial block.
    static Isometry rotation(const MatrixXd& spatial_rotation);
    /// Boost taking p to the base point o (inverse of the canonical boost
    /// o -> p). Used to recenter measurement windows.
    static Isometry translation_to_origin(const HyperboloidPoint& p);

    int dim() const { return static_cast<int>(matrix_.rows()) - 1; }
    const MatrixXd& matrix() const { return matrix_; }
    Isometry inverse() const;                     // J M^T J
    Isometry compose(const Isometry& other) const;  // this after other

  private:
    MatrixXd matrix_;
};

/// Applies g and re-projects onto the hyperboloid (renormalizes the
/// Minkowski norm to 1) to absorb rounding drift.
HyperboloidPoint apply(const Isometry& g, const HyperboloidPoint& p);

/// Uniform point (w.r.t. hyperbolic volume) in the closed ball of radius R
/// about o: direction uniform on S^{n-1}, radius with density
/// proportional to sinh^{n-1}(r) on [0, R]. Deterministic given the stream.
HyperboloidPoint random_point_ball(int dim, double R, rng::Stream& stream);

/// Uniform direction on S^{n-1} (n standard normals, normalized).
VectorXd random_direction(int dim, rng::Stream& stream);

/// Random isometry: a Haar-uniform rotation of the spatial block composed
/// with a boost of magnitude uniform in [0, boost_max] along a uniform
/// direction. boost_max defaults to 2 to keep test points in a numerically
/// comfortable ball.
Isometry random_isometry(int dim, rng::Stream& stream, double boost_max = 2.0);

}  // namespace hyperstat::geometry
