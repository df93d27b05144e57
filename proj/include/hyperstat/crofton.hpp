#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "hyperstat/errors.hpp"
#include "hyperstat/geometry.hpp"
#include "hyperstat/parallel.hpp"
#include "hyperstat/rng.hpp"
#include "hyperstat/sample.hpp"

namespace hyperstat::crofton {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Geodesic closed half-space of H^n, parametrized by the foot of its
/// bounding hyperplane: t is the signed distance from o to the foot and
/// omega the direction of the foot. The Minkowski normal is
/// v(t, omega) = (sinh t, cosh t * omega) and S = {p : <p, v>_M >= 0},
/// so o lies in S iff t >= 0. Hyperplanes through o (t = 0) are a null
/// set and keep their omega chart.
class HalfSpace {
  public:
    HalfSpace(double t, VectorXd omega);

    double t() const { return t_; }
    const VectorXd& omega() const { return omega_; }
    int dim() const { return static_cast<int>(omega_.size()); }

    /// Minkowski normal v(t, omega), length dim+1.
    VectorXd normal() const;

  private:
    double t_;
    VectorXd omega_;
};

bool contains(const HalfSpace& s, const geometry::HyperboloidPoint& p);
bool separates(const HalfSpace& s, const geometry::HyperboloidPoint& x, const geometry::HyperboloidPoint& y);

/// Surface measure of the unit m-sphere S^m in R^{m+1}: 2 pi^{(m+1)/2} / Gamma((m+1)/2).
double sphere_area(int m);

/// Normalization constant of sigma: kappa_1 = 1/2 and
/// kappa_n = (n-1) / (2 vol(S^{n-2})) for n >= 2, fixed so that the
/// half-spaces containing o but not x have measure d(o, x)/2.
double kappa(int n);

/// sigma-density in (t, omega) coordinates: kappa_n * cosh^{n-1}(t),
/// against dt and surface measure on S^{n-1}.
double density(double t, int n);

/// Closed form of int_{-R}^{R} cosh^m t dt via the reduction
/// I_m = (2 sinh R cosh^{m-1} R + (m-1) I_{m-2}) / m, I_0 = 2R, I_1 = 2 sinh R.
double cosh_power_integral(int m, double R);

/// Monte Carlo configuration for sigma restricted to the window
/// {|t| <= R}: half-spaces whose boundary meets the closed ball B(o, R).
struct CroftonSampler {
    int dim = 2;
    double R = 1.0;
    std::int64_t n_samples = 100000;
    std::uint64_t seed = 0;
    double kappa_value = 0.0;

    /// Standard construction: kappa from dim.
    static CroftonSampler make(int dim, double R, std::int64_t n_samples, std::uint64_t seed);

    void validate() const;
};

/// Total sigma-mass of the window: Z_R = kappa_n * vol(S^{n-1}) * I_{n-1}(R).
/// Every sampled half-space carries importance weight Z_R / N.
double window_mass(const CroftonSampler& sampler);

struct SeparationEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::int64_t n_samples = 0;
};

enum class Orientation {
    Both,              // 1{S separates x, y}: both containment patterns
    FirstInSecondOut,  // 1{x in S, y not in S} only
};

namespace detail {

/// Draws the block'th substream of the sampler's half-space sequence.
/// The draw order is pinned: t first (one uniform through the inverse
/// CDF), then omega (2 dim uniforms through Box-Muller), so streams are
/// data-independent.
class BlockDraw {
  public:
    BlockDraw(const CroftonSampler& sampler, const rng::InverseCdfTable& table, std::int64_t block)
        : table_(table), stream_(rng::make_stream(sampler.seed, "crofton.sample", static_cast<std::uint64_t>(block))),
          dim_(sampler.dim) {}

    HalfSpace next() {
        const double t = table_.sample(stream_.uniform01());
        return HalfSpace(t, geometry::random_direction(dim_, stream_));
    }

  private:
    const rng::InverseCdfTable& table_;
    rng::Stream stream_;
    int dim_;
};

rng::InverseCdfTable foot_table(const CroftonSampler& sampler);

}  // namespace detail

/// Generic importance-sampled integral of f against sigma on the window:
/// estimate = (Z_R / N) * sum f(S_k), std_error from the weighted-value
/// sample variance. Samples are drawn in fixed blocks of
/// parallel::kBlockSize with per-block substreams and folded in block
/// order, so results are bit-identical for every thread count.
template <class F>
SeparationEstimate integrate(const CroftonSampler& sampler, parallel::Mode mode, F&& f) {
    sampler.validate();
    const rng::InverseCdfTable table = detail::foot_table(sampler);
    const std::int64_t n = sampler.n_samples;
    const std::int64_t nblocks = parallel::block_count(n, parallel::kBlockSize);

    struct Partial {
        double sum = 0.0;
        double sumsq = 0.0;
    };
    std::vector<Partial> partials = parallel::map_blocks<Partial>(nblocks, mode, [&](std::int64_t b) {
        detail::BlockDraw draw(sampler, table, b);
        const std::int64_t hi = std::min(n, (b + 1) * parallel::kBlockSize);
        Partial p;
        for (std::int64_t k = b * parallel::kBlockSize; k < hi; ++k) {
            const double v = f(draw.next());
            p.sum += v;
            p.sumsq += v * v;
        }
        return p;
    });

    double sum = 0.0, sumsq = 0.0;
    for (const Partial& p : partials) {
        sum += p.sum;
        sumsq += p.sumsq;
    }
    const double z = window_mass(sampler);
    const double mean = sum / static_cast<double>(n);
    SeparationEstimate est;
    est.n_samples = n;
    est.value = z * mean;
    if (n > 1) {
        // variance of the weighted values v_k = Z f_k
        const double var_f = std::max(0.0, (sumsq - sum * mean) / static_cast<double>(n - 1));
        est.std_error = z * std::sqrt(var_f / static_cast<double>(n));
    }
    return est;
}

/// Sequential view of the sampler's half-space sequence: exactly
/// n_samples draws, each weighted Z_R / N, identical to the draws made
/// by integrate (same substream blocks in the same order).
class HalfSpaceStream {
  public:
    explicit HalfSpaceStream(const CroftonSampler& sampler);

    // the active block draw refers into this object
    HalfSpaceStream(const HalfSpaceStream&) = delete;
    HalfSpaceStream& operator=(const HalfSpaceStream&) = delete;

    /// Next (half-space, weight) pair, or nullopt once the budget is spent.
    std::optional<std::pair<HalfSpace, double>> next();

  private:
    CroftonSampler sampler_;
    rng::InverseCdfTable table_;
    std::optional<detail::BlockDraw> draw_;
    std::int64_t emitted_ = 0;
    double weight_;
};

/// sigma-measure of the half-spaces separating x and y (or the single
/// orientation {x in S, y not in S}). Expectation d(x, y) for Both and
/// d(x, y)/2 for one orientation.
///
/// The window is recentered at the geodesic midpoint of x, y before
/// sampling (sigma is isometry invariant), so every separating
/// half-space has |t| <= d/2; the sampler must satisfy R >= d/2 or the
/// integrand would be truncated (precondition error).
SeparationEstimate cut_measure(const geometry::HyperboloidPoint& x, const geometry::HyperboloidPoint& y,
                               const CroftonSampler& sampler, Orientation orientation = Orientation::Both,
                               parallel::Mode mode = parallel::Mode::OpenMP);

/// Importance estimate of int (mu1(S) - mu2(S))^2 dsigma(S) for the
/// empirical measures of two hyperbolic samples. Both supports must lie
/// in B(o, R/2). Equals energy_form(mu1, mu2) / 2 in expectation.
SeparationEstimate discrepancy_integral(const metric::Sample& mu1, const metric::Sample& mu2,
                                        const CroftonSampler& sampler, parallel::Mode mode = parallel::Mode::OpenMP);

/// Evaluation grid for directional CDF comparison; when absent the exact
/// Kolmogorov-Smirnov distance over all jump points is used.
struct ThresholdGrid {
    double lo = -1.0;
    double hi = 1.0;
    int count = 512;
};

/// Exact two-sample Kolmogorov-Smirnov distance between the empirical
/// distributions of a and b.
double ks_distance(std::vector<double> a, std::vector<double> b);

/// Cramer-Wold projection check in the Klein model: the maximum over the
/// given directions of the KS distance between projected empirical
/// distributions. Zero iff all directional empirical CDFs coincide on the
/// given directions. Rows of klein1/klein2 are Klein coordinates,
/// strictly inside the unit ball.
double cw_projection_gap(const MatrixXd& klein1, const MatrixXd& klein2, const std::vector<VectorXd>& directions,
                         const std::optional<ThresholdGrid>& grid = std::nullopt);

}  // namespace hyperstat::crofton
