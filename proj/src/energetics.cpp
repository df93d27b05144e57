#include "hyperstat/energetics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "hyperstat/errors.hpp"
#include "hyperstat/rng.hpp"

namespace hyperstat::energetics {

namespace {

/// Sum of f(i) over row blocks, folded in block order (thread-count
/// independent result).
template <class F>
double block_row_sum(std::int64_t rows, parallel::Mode mode, F&& f) {
    constexpr std::int64_t kRowBlock = 64;
    const std::int64_t nb = parallel::block_count(rows, kRowBlock);
    std::vector<double> partials = parallel::map_blocks<double>(nb, mode, [&](std::int64_t blk) {
        const std::int64_t hi = std::min(rows, (blk + 1) * kRowBlock);
        double s = 0.0;
        for (std::int64_t i = blk * kRowBlock; i < hi; ++i) s += f(i);
        return s;
    });
    double total = 0.0;
    for (double p : partials) total += p;
    return total;
}

/// Sum of d(a_i, b_j) over all ordered pairs. within_mean shares this op
/// sequence with cross_mean so the V-statistic cancels exactly on
/// identical samples (2c - c - c == 0 in IEEE arithmetic).
double pair_sum(const metric::Sample& a, const metric::Sample& b, parallel::Mode mode) {
    return block_row_sum(a.size(), mode, [&](std::int64_t i) {
        double s = 0.0;
        for (int j = 0; j < b.size(); ++j) s += metric::distance(a, static_cast<int>(i), b, j);
        return s;
    });
}

double cross_mean(const metric::Sample& a, const metric::Sample& b, parallel::Mode mode) {
    return pair_sum(a, b, mode) / (static_cast<double>(a.size()) * static_cast<double>(b.size()));
}

double within_mean(const metric::Sample& s, Estimator kind, parallel::Mode mode) {
    const double n = static_cast<double>(s.size());
    const double pairs = kind == Estimator::VStat ? n * n : n * (n - 1.0);
    return pair_sum(s, s, mode) / pairs;
}

/// Content order (size, then lexicographic coordinates) used to
/// canonicalize symmetric argument pairs.
bool content_less(const metric::Sample& a, const metric::Sample& b) {
    if (a.points.rows() != b.points.rows()) return a.points.rows() < b.points.rows();
    if (a.points.cols() != b.points.cols()) return a.points.cols() < b.points.cols();
    for (Eigen::Index i = 0; i < a.points.rows(); ++i)
        for (Eigen::Index j = 0; j < a.points.cols(); ++j) {
            if (a.points(i, j) != b.points(i, j)) return a.points(i, j) < b.points(i, j);
        }
    return false;
}

void check_common_space(const metric::Sample& a, const metric::Sample& b) {
    if (!a.space.same_as(b.space))
        throw PreconditionError("samples live in different spaces: " + a.space.describe() + " vs " +
                                b.space.describe());
}

/// Fisher-Yates permutation of 0..n-1 from the stream.
std::vector<int> draw_permutation(int n, rng::Stream& stream) {
    std::vector<int> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), 0);
    for (int i = n - 1; i > 0; --i) {
        const auto j = static_cast<int>(stream.below(static_cast<std::uint64_t>(i) + 1));
        std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
    }
    return idx;
}

/// Counts permuted statistics >= observed over blocks of permutation
/// indices, each permutation on its own substream.
template <class Stat>
int count_exceedances(int permutations, std::uint64_t seed, const char* label, parallel::Mode mode, double observed,
                      Stat&& permuted_stat) {
    constexpr std::int64_t kPermBlock = 16;
    const std::int64_t nb = parallel::block_count(permutations, kPermBlock);
    std::vector<int> counts = parallel::map_blocks<int>(nb, mode, [&](std::int64_t blk) {
        const std::int64_t hi = std::min<std::int64_t>(permutations, (blk + 1) * kPermBlock);
        int c = 0;
        for (std::int64_t k = blk * kPermBlock; k < hi; ++k) {
            rng::Stream stream = rng::make_stream(seed, label, static_cast<std::uint64_t>(k));
            if (permuted_stat(stream) >= observed) ++c;
        }
        return c;
    });
    int total = 0;
    for (int c : counts) total += c;
    return total;
}

/// Energy statistic from a pooled distance matrix and a pooled-index
/// permutation whose first n1 entries form group one. Uses
/// S_cross = (S_total - S_11 - S_22)/2, so only within-group sums are
/// accumulated.
double energy_from_pooled(const MatrixXd& d, const std::vector<int>& perm, int n1, double total_sum, Estimator kind) {
    const int n = static_cast<int>(perm.size());
    double s11 = 0.0, s22 = 0.0;
    for (int i = 0; i < n1; ++i)
        for (int j = i + 1; j < n1; ++j) s11 += d(perm[i], perm[j]);
    for (int i = n1; i < n; ++i)
        for (int j = i + 1; j < n; ++j) s22 += d(perm[i], perm[j]);
    s11 *= 2.0;
    s22 *= 2.0;
    const double n2 = n - n1;
    const double cross = (total_sum - s11 - s22) / 2.0;
    const double pairs1 = kind == Estimator::VStat ? static_cast<double>(n1) * n1 : static_cast<double>(n1) * (n1 - 1);
    const double pairs2 = kind == Estimator::VStat ? n2 * n2 : n2 * (n2 - 1.0);
    return 2.0 * cross / (static_cast<double>(n1) * n2) - s11 / pairs1 - s22 / pairs2;
}

/// Doubly centered matrix for dcov: J D J entrywise (no -1/2 factor).
MatrixXd v_center(const MatrixXd& d) {
    const auto n = d.rows();
    const VectorXd row_means = d.rowwise().mean();
    const double grand = d.mean();
    MatrixXd c(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) c(i, j) = d(i, j) - row_means[i] - row_means[j] + grand;
    return c;
}

/// U-centering of Szekely-Rizzo: row/col means over n-2, grand mean over
/// (n-1)(n-2), zero diagonal. Needs n >= 4.
MatrixXd u_center(const MatrixXd& d) {
    const auto n = d.rows();
    const VectorXd row_sums = d.rowwise().sum();
    const double total = d.sum();
    MatrixXd c(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            c(i, j) = i == j ? 0.0
                             : d(i, j) - row_sums[i] / (n - 2.0) - row_sums[j] / (n - 2.0) +
                                   total / ((n - 1.0) * (n - 2.0));
    return c;
}

/// dcov inner product of centered matrices under permutation pi of the
/// second sample's indices.
double dcov_inner(const MatrixXd& a, const MatrixXd& b, const std::vector<int>& perm, Estimator kind) {
    const int n = static_cast<int>(a.rows());
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
        const int pi = perm[i];
        for (int j = 0; j < n; ++j) s += a(i, j) * b(pi, perm[j]);
    }
    if (kind == Estimator::VStat) return s / (static_cast<double>(n) * n);
    return s / (static_cast<double>(n) * (n - 3.0));
}

std::vector<int> identity_perm(int n) {
    std::vector<int> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), 0);
    return idx;
}

}  // namespace

double a_mu(const metric::Sample& probes, int i, const metric::Sample& mu, parallel::Mode mode) {
    if (i < 0 || i >= probes.size()) throw PreconditionError("probe index out of range");
    if (mu.size() == 0) throw PreconditionError("a_mu needs a nonempty measure");
    check_common_space(probes, mu);
    const double sum =
        block_row_sum(mu.size(), mode, [&](std::int64_t j) { return metric::distance(probes, i, mu, static_cast<int>(j)); });
    return sum / mu.size();
}

double a_mu_gap(const metric::Sample& mu1, const metric::Sample& mu2, const metric::Sample& probes,
                parallel::Mode mode) {
    if (probes.size() == 0) throw PreconditionError("a_mu_gap needs at least one probe point");
    check_common_space(mu1, mu2);
    check_common_space(probes, mu1);
    double gap = 0.0;
    for (int i = 0; i < probes.size(); ++i)
        gap = std::max(gap, std::abs(a_mu(probes, i, mu1, mode) - a_mu(probes, i, mu2, mode)));
    return gap;
}

double a_mu_gap(const metric::Sample& mu1, const metric::Sample& mu2, parallel::Mode mode) {
    return a_mu_gap(mu1, mu2, metric::pool_samples(mu1, mu2), mode);
}

double energy_form(const metric::Sample& mu1, const metric::Sample& mu2, Estimator kind, parallel::Mode mode) {
    check_common_space(mu1, mu2);
    if (mu1.size() == 0 || mu2.size() == 0) throw PreconditionError("energy form needs nonempty samples");
    if (kind == Estimator::UStat && (mu1.size() < 2 || mu2.size() < 2))
        throw PreconditionError("U-statistic energy form needs >= 2 points per sample");
    // Canonical argument order: the float ops are then identical under
    // swap, so energy_form(b, a) == energy_form(a, b) bitwise.
    const bool flip = content_less(mu2, mu1);
    const metric::Sample& a = flip ? mu2 : mu1;
    const metric::Sample& b = flip ? mu1 : mu2;
    return 2.0 * cross_mean(a, b, mode) - within_mean(a, kind, mode) - within_mean(b, kind, mode);
}

PermutationTestResult energy_perm_test(const metric::Sample& mu1, const metric::Sample& mu2, int permutations,
                                       std::uint64_t seed, Estimator kind, parallel::Mode mode) {
    if (permutations < 99) throw PreconditionError("permutation test needs B >= 99");
    if (mu1.size() < 2 || mu2.size() < 2) throw PreconditionError("permutation test needs >= 2 points per sample");
    check_common_space(mu1, mu2);

    const metric::Sample pooled = metric::pool_samples(mu1, mu2);
    const MatrixXd d = metric::pairwise_distances(pooled, mode);
    const double total_sum = d.sum();
    const int n1 = mu1.size();
    const int n = pooled.size();

    const double observed = energy_from_pooled(d, identity_perm(n), n1, total_sum, kind);
    const int exceed = count_exceedances(permutations, seed, "energetics.energy_perm", mode, observed,
                                         [&](rng::Stream& stream) {
                                             const std::vector<int> perm = draw_permutation(n, stream);
                                             return energy_from_pooled(d, perm, n1, total_sum, kind);
                                         });
    PermutationTestResult r;
    r.statistic = observed;
    r.p_value = (1.0 + exceed) / (permutations + 1.0);
    r.permutations = permutations;
    r.seed = seed;
    return r;
}

double dcov(const metric::Sample& sx, const metric::Sample& sy, Estimator kind, parallel::Mode mode) {
    if (sx.size() != sy.size()) throw PreconditionError("dcov needs equally sized, row-paired samples");
    const int n = sx.size();
    if (n < 2) throw PreconditionError("dcov needs n >= 2");
    if (kind == Estimator::UStat && n < 4) throw PreconditionError("U-statistic dcov needs n >= 4");
    const MatrixXd dx = metric::pairwise_distances(sx, mode);
    const MatrixXd dy = metric::pairwise_distances(sy, mode);
    const MatrixXd a = kind == Estimator::VStat ? v_center(dx) : u_center(dx);
    const MatrixXd b = kind == Estimator::VStat ? v_center(dy) : u_center(dy);
    return dcov_inner(a, b, identity_perm(n), kind);
}

PermutationTestResult dcov_perm_test(const metric::Sample& sx, const metric::Sample& sy, int permutations,
                                     std::uint64_t seed, Estimator kind, parallel::Mode mode) {
    if (permutations < 99) throw PreconditionError("permutation test needs B >= 99");
    if (sx.size() != sy.size()) throw PreconditionError("dcov needs equally sized, row-paired samples");
    const int n = sx.size();
    if (n < 2) throw PreconditionError("dcov needs n >= 2");
    if (kind == Estimator::UStat && n < 4) throw PreconditionError("U-statistic dcov needs n >= 4");

    const MatrixXd dx = metric::pairwise_distances(sx, mode);
    const MatrixXd dy = metric::pairwise_distances(sy, mode);
    const MatrixXd a = kind == Estimator::VStat ? v_center(dx) : u_center(dx);
    const MatrixXd b = kind == Estimator::VStat ? v_center(dy) : u_center(dy);

    const double observed = dcov_inner(a, b, identity_perm(n), kind);
    const int exceed =
        count_exceedances(permutations, seed, "energetics.dcov_perm", mode, observed, [&](rng::Stream& stream) {
            const std::vector<int> perm = draw_permutation(n, stream);
            return dcov_inner(a, b, perm, kind);
        });
    PermutationTestResult r;
    r.statistic = observed;
    r.p_value = (1.0 + exceed) / (permutations + 1.0);
    r.permutations = permutations;
    r.seed = seed;
    return r;
}

}  // namespace hyperstat::energetics
