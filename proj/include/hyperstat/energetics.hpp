#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "hyperstat/parallel.hpp"
#include "hyperstat/sample.hpp"

namespace hyperstat::energetics {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Population-form (V-statistic) estimators are the default: means over
/// all ordered pairs with replacement, which is the shape the integral
/// identities hold in. The U-statistic variants exclude the diagonal
/// (and for dcov use U-centering, needing n >= 4).
enum class Estimator { VStat, UStat };

/// a_mu(x) = mean distance from probe point (row i of `probes`) to the
/// support of mu.
double a_mu(const metric::Sample& probes, int i, const metric::Sample& mu,
            parallel::Mode mode = parallel::Mode::OpenMP);

/// max over probe rows of |a_mu(x, mu1) - a_mu(x, mu2)|. Zero iff the two
/// empirical a-functions agree on the probe set.
double a_mu_gap(const metric::Sample& mu1, const metric::Sample& mu2, const metric::Sample& probes,
                parallel::Mode mode = parallel::Mode::OpenMP);

/// a_mu_gap probed on the pooled supports of mu1 and mu2.
double a_mu_gap(const metric::Sample& mu1, const metric::Sample& mu2,
                parallel::Mode mode = parallel::Mode::OpenMP);

/// Energy form E = 2 mean d(x_i, y_j) - mean d(x_i, x_j) - mean d(y_i, y_j),
/// i.e. -int d d(mu1 - mu2)^2 for the empirical measures. Nonnegative in
/// negative-type spaces, zero only for equal empirical distributions when
/// the space has strong negative type.
double energy_form(const metric::Sample& mu1, const metric::Sample& mu2, Estimator kind = Estimator::VStat,
                   parallel::Mode mode = parallel::Mode::OpenMP);

struct PermutationTestResult {
    double statistic = 0.0;
    double p_value = 1.0;  // (1 + #{permuted >= observed}) / (B + 1)
    int permutations = 0;
    std::uint64_t seed = 0;
};

/// Two-sample energy test: null distribution by pooling both samples and
/// re-splitting at the original sizes. The pooled distance matrix is
/// computed once; each permutation draws its own substream (indexed by
/// permutation number), so the result is deterministic for any thread
/// count.
PermutationTestResult energy_perm_test(const metric::Sample& mu1, const metric::Sample& mu2, int permutations,
                                       std::uint64_t seed, Estimator kind = Estimator::VStat,
                                       parallel::Mode mode = parallel::Mode::OpenMP);

/// Squared distance covariance of the paired samples (row i of sx with
/// row i of sy): V^2 = (1/n^2) sum_ij A_ij B_ij with A = J D_x J,
/// B = J D_y J. The marginal spaces may differ.
double dcov(const metric::Sample& sx, const metric::Sample& sy, Estimator kind = Estimator::VStat,
            parallel::Mode mode = parallel::Mode::OpenMP);

/// Independence test: null distribution by permuting the pairing of sy
/// against sx. Centered matrices are computed once and the permutation is
/// applied to rows and columns of the second one (centering commutes with
/// simultaneous row/column permutation).
PermutationTestResult dcov_perm_test(const metric::Sample& sx, const metric::Sample& sy, int permutations,
                                     std::uint64_t seed, Estimator kind = Estimator::VStat,
                                     parallel::Mode mode = parallel::Mode::OpenMP);

}  // namespace hyperstat::energetics
