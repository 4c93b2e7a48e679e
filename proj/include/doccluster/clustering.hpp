#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "doccluster/error.hpp"
#include "doccluster/weighting.hpp"

namespace doccluster {

enum class Metric { euclidean, manhattan };
enum class Algorithm { kmeans, kmedoids };

constexpr std::string_view metric_name(Metric m) noexcept
{
    return m == Metric::euclidean ? "euclidean" : "manhattan";
}

constexpr std::string_view algorithm_name(Algorithm a) noexcept
{
    return a == Algorithm::kmeans ? "kmeans" : "kmedoids";
}

inline Metric parse_metric(std::string_view s)
{
    if (s == "euclidean")
        return Metric::euclidean;
    if (s == "manhattan")
        return Metric::manhattan;
    throw Error(ErrorKind::DomainError, "unknown metric '" + std::string(s) + "'");
}

inline Algorithm parse_algorithm(std::string_view s)
{
    if (s == "kmeans")
        return Algorithm::kmeans;
    if (s == "kmedoids")
        return Algorithm::kmedoids;
    throw Error(ErrorKind::DomainError, "unknown algorithm '" + std::string(s) + "'");
}

inline double distance(std::span<const double> a, std::span<const double> b, Metric m)
{
    if (a.size() != b.size())
        throw Error(ErrorKind::DimensionError,
                    "vectors of length " + std::to_string(a.size()) + " and " + std::to_string(b.size()));
    double acc = 0.0;
    if (m == Metric::euclidean) {
        for (std::size_t i = 0; i < a.size(); ++i) {
            const double d = a[i] - b[i];
            acc += d * d;
        }
        return std::sqrt(acc);
    }
    for (std::size_t i = 0; i < a.size(); ++i)
        acc += std::abs(a[i] - b[i]);
    return acc;
}

inline double distance(const WeightVector& a, const WeightVector& b, Metric m)
{
    return distance(a.weights, b.weights, m);
}

/// Result of one clustering run.
///
/// `representatives` holds the centroid vectors (K-means) or the medoid rows
/// (K-medoids); `medoids` holds the medoid row indices and is empty for K-means.
/// `history` is the objective trace: the initial cost followed by the cost after
/// every step that can change it.
struct Clustering {
    Algorithm algorithm = Algorithm::kmeans;
    Metric metric = Metric::manhattan;
    std::size_t k = 0;
    std::uint64_t seed = 0;
    std::vector<std::size_t> assignment;
    std::vector<std::vector<double>> representatives;
    std::vector<std::size_t> medoids;
    double objective = 0.0;
    std::size_t iterations = 0;
    std::vector<double> history;

    std::vector<std::size_t> members(std::size_t cluster) const
    {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < assignment.size(); ++i)
            if (assignment[i] == cluster)
                out.push_back(i);
        return out;
    }

    friend bool operator==(const Clustering&, const Clustering&) = default;
};

class MedoidSet {
public:
    MedoidSet(std::vector<std::size_t> indices, std::size_t n) : indices_(std::move(indices))
    {
        if (indices_.size() > n)
            throw Error(ErrorKind::TooManyClusters, std::to_string(indices_.size()) + " medoids for " +
                                                        std::to_string(n) + " rows");
        auto sorted = indices_;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw Error(ErrorKind::DomainError, "medoid indices must be distinct");
        if (!sorted.empty() && sorted.back() >= n)
            throw Error(ErrorKind::DomainError, "medoid index out of range");
    }

    std::span<const std::size_t> indices() const noexcept { return indices_; }
    std::size_t size() const noexcept { return indices_.size(); }

private:
    std::vector<std::size_t> indices_;
};

/// Seeded generator. std::mt19937_64 is fully specified by the standard; the
/// bounded draw is implemented here because std::uniform_int_distribution is not.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform integer in [0, bound), bound > 0, by rejection sampling.
    std::size_t below(std::size_t bound)
    {
        const std::uint64_t b = bound;
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                    std::numeric_limits<std::uint64_t>::max() % b;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return static_cast<std::size_t>(x % b);
    }

    /// k distinct values from [0, n), in draw order (partial Fisher-Yates).
    std::vector<std::size_t> sample_distinct(std::size_t n, std::size_t k)
    {
        std::vector<std::size_t> pool(n);
        std::iota(pool.begin(), pool.end(), std::size_t{0});
        for (std::size_t i = 0; i < k; ++i)
            std::swap(pool[i], pool[i + below(n - i)]);
        pool.resize(k);
        return pool;
    }

private:
    std::mt19937_64 engine_;
};

inline std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Seed of restart `i`. Restart 0 uses the master seed itself.
inline std::uint64_t derive_seed(std::uint64_t master, std::size_t i) noexcept
{
    if (i == 0)
        return master;
    return splitmix64(master ^ splitmix64(static_cast<std::uint64_t>(i)));
}

namespace detail {

inline void check_k(std::size_t k, std::size_t n)
{
    if (k < 1)
        throw Error(ErrorKind::DomainError, "k must be at least 1");
    if (k > n)
        throw Error(ErrorKind::TooManyClusters,
                    "k=" + std::to_string(k) + " exceeds the " + std::to_string(n) + " rows to cluster");
}

// Per-row contribution to the K-means objective: squared L2 or L1.
inline double kmeans_cost(std::span<const double> a, std::span<const double> b, Metric m)
{
    if (m == Metric::manhattan)
        return distance(a, b, m);
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

inline std::size_t nearest(std::span<const double> row, const std::vector<std::vector<double>>& centers, Metric m,
                           double& best_cost)
{
    std::size_t best = 0;
    best_cost = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < centers.size(); ++j) {
        const double c = kmeans_cost(row, centers[j], m);
        if (c < best_cost) {
            best_cost = c;
            best = j;
        }
    }
    return best;
}

inline double kmeans_objective(const WeightedMatrix& x, const std::vector<std::size_t>& assignment,
                               const std::vector<std::vector<double>>& centers, Metric m)
{
    double total = 0.0;
    for (std::size_t i = 0; i < assignment.size(); ++i)
        total += kmeans_cost(x.row(i), centers[assignment[i]], m);
    return total;
}

// Interval of minimizers of sum |v - c| over c: [lower, upper] median pair.
inline std::pair<double, double> median_interval(std::vector<double>& values)
{
    const std::size_t n = values.size();
    const std::size_t mid = n / 2;
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
    const double upper = values[mid];
    if (n % 2 == 1)
        return {upper, upper};
    return {*std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid)), upper};
}

} // namespace detail

/// Lloyd iteration. Centroids are component-wise means (euclidean) or medians
/// (manhattan); the objective is the sum of squared L2 or of L1 distances.
inline Clustering kmeans(const WeightedMatrix& x, std::size_t k, Metric metric, std::uint64_t seed,
                         std::size_t max_iter = 100)
{
    const std::size_t n = x.n_rows();
    const std::size_t dim = x.n_cols();
    detail::check_k(k, n);
    if (max_iter < 1)
        throw Error(ErrorKind::DomainError, "max_iter must be at least 1");

    Rng rng(seed);
    std::vector<std::vector<double>> centers;
    for (auto idx : rng.sample_distinct(n, k))
        centers.emplace_back(x.row(idx).begin(), x.row(idx).end());

    std::vector<std::size_t> assignment(n);
    auto assign = [&](std::vector<std::size_t>& out) {
        double total = 0.0, c = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            out[i] = detail::nearest(x.row(i), centers, metric, c);
            total += c;
        }
        return total;
    };

    Clustering result;
    result.algorithm = Algorithm::kmeans;
    result.metric = metric;
    result.k = k;
    result.seed = seed;

    double objective = assign(assignment);
    result.history.push_back(objective);

    std::vector<double> column;
    for (std::size_t iter = 0; iter < max_iter; ++iter) {
        // Update step.
        std::vector<std::vector<double>> updated(k, std::vector<double>(dim, 0.0));
        std::vector<std::size_t> sizes(k, 0);
        for (auto a : assignment)
            ++sizes[a];
        if (metric == Metric::euclidean) {
            for (std::size_t i = 0; i < n; ++i) {
                auto r = x.row(i);
                auto& c = updated[assignment[i]];
                for (std::size_t d = 0; d < dim; ++d)
                    c[d] += r[d];
            }
            for (std::size_t j = 0; j < k; ++j)
                if (sizes[j] > 0)
                    for (auto& v : updated[j])
                        v /= static_cast<double>(sizes[j]);
        } else {
            std::vector<std::vector<std::size_t>> members(k);
            for (std::size_t i = 0; i < n; ++i)
                members[assignment[i]].push_back(i);
            for (std::size_t j = 0; j < k; ++j) {
                if (members[j].empty())
                    continue;
                for (std::size_t d = 0; d < dim; ++d) {
                    column.clear();
                    for (auto i : members[j])
                        column.push_back(x.row(i)[d]);
                    // A coordinate already inside the median interval stays put, so a
                    // flat step never moves the centroid.
                    const auto [lower, upper] = detail::median_interval(column);
                    const double current = centers[j][d];
                    updated[j][d] = lower <= current && current <= upper ? current : lower + (upper - lower) / 2.0;
                }
            }
        }

        // Empty clusters take the row farthest from its own (updated) centroid.
        auto repaired = assignment;
        std::vector<bool> used(n, false);
        for (std::size_t j = 0; j < k; ++j) {
            if (sizes[j] > 0)
                continue;
            std::size_t far = n;
            double far_cost = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (used[i])
                    continue;
                const double c = detail::kmeans_cost(x.row(i), updated[repaired[i]], metric);
                if (c > far_cost) {
                    far_cost = c;
                    far = i;
                }
            }
            if (far == n) {
                updated[j] = centers[j];
                continue;
            }
            updated[j].assign(x.row(far).begin(), x.row(far).end());
            repaired[far] = j;
            used[far] = true;
        }

        const double updated_objective = detail::kmeans_objective(x, repaired, updated, metric);
        if (updated_objective > objective)
            break;  // rounding noise only; the previous centroids are already optimal
        centers = std::move(updated);
        result.history.push_back(updated_objective);
        result.iterations = iter + 1;

        // Assignment step.
        std::vector<std::size_t> next(n);
        objective = assign(next);
        result.history.push_back(objective);
        const bool changed = next != assignment;
        assignment = std::move(next);
        if (!changed)
            break;
    }

    result.assignment = std::move(assignment);
    result.representatives = std::move(centers);
    result.objective = objective;
    return result;
}

namespace detail {

class DistanceTable {
public:
    DistanceTable(const WeightedMatrix& x, Metric m) : n_(x.n_rows()), d_(n_ * n_, 0.0)
    {
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = i + 1; j < n_; ++j)
                d_[i * n_ + j] = d_[j * n_ + i] = distance(x.row(i), x.row(j), m);
    }

    double operator()(std::size_t i, std::size_t j) const noexcept { return d_[i * n_ + j]; }
    std::size_t size() const noexcept { return n_; }

    double cost(std::span<const std::size_t> medoids) const
    {
        double total = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (auto m : medoids)
                best = std::min(best, (*this)(i, m));
            total += best;
        }
        return total;
    }

private:
    std::size_t n_;
    std::vector<double> d_;
};

} // namespace detail

/// Sum over rows of the distance to the nearest medoid.
inline double total_cost(const WeightedMatrix& x, const MedoidSet& medoids, Metric metric)
{
    double total = 0.0;
    for (std::size_t i = 0; i < x.n_rows(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (auto m : medoids.indices())
            best = std::min(best, distance(x.row(i), x.row(m), metric));
        total += best;
    }
    return total;
}

/// Randomized swap search: a random untested (medoid, non-medoid) pair is
/// swapped in when it lowers the total cost. Stops once every pair has been
/// rejected since the last accepted swap, or after `max_swaps` accepted swaps
/// (0 selects 10*n*k).
inline Clustering kmedoids(const WeightedMatrix& x, std::size_t k, Metric metric, std::uint64_t seed,
                           std::size_t max_swaps = 0)
{
    const std::size_t n = x.n_rows();
    detail::check_k(k, n);
    if (max_swaps == 0)
        max_swaps = 10 * n * k;

    const detail::DistanceTable table(x, metric);
    Rng rng(seed);
    std::vector<std::size_t> medoids = rng.sample_distinct(n, k);
    double current = table.cost(medoids);

    Clustering result;
    result.algorithm = Algorithm::kmedoids;
    result.metric = metric;
    result.k = k;
    result.seed = seed;
    result.history.push_back(current);

    std::vector<std::pair<std::size_t, std::size_t>> untested;
    auto refill = [&] {
        untested.clear();
        std::vector<bool> is_medoid(n, false);
        for (auto m : medoids)
            is_medoid[m] = true;
        for (std::size_t slot = 0; slot < k; ++slot)
            for (std::size_t i = 0; i < n; ++i)
                if (!is_medoid[i])
                    untested.emplace_back(slot, i);
    };
    refill();

    std::size_t accepted = 0;
    std::vector<std::size_t> trial;
    while (!untested.empty() && accepted < max_swaps) {
        const std::size_t pick = rng.below(untested.size());
        const auto [slot, candidate] = untested[pick];
        untested[pick] = untested.back();
        untested.pop_back();

        trial = medoids;
        trial[slot] = candidate;
        const double swapped = table.cost(trial);
        if (swapped - current < 0.0) {
            medoids = trial;
            current = swapped;
            ++accepted;
            result.history.push_back(current);
            refill();
        }
    }

    result.assignment.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t slot = 0; slot < k; ++slot) {
            if (table(i, medoids[slot]) < best) {
                best = table(i, medoids[slot]);
                result.assignment[i] = slot;
            }
        }
    }
    for (auto m : medoids)
        result.representatives.emplace_back(x.row(m).begin(), x.row(m).end());
    result.medoids = medoids;
    result.objective = current;
    result.iterations = accepted;
    return result;
}

struct RunOptions {
    std::size_t max_iter = 100;  // K-means
    std::size_t max_swaps = 0;   // K-medoids; 0 selects 10*n*k
};

inline Clustering run_once(const WeightedMatrix& x, std::size_t k, Metric metric, Algorithm algorithm,
                           std::uint64_t seed, const RunOptions& opts = {})
{
    return algorithm == Algorithm::kmeans ? kmeans(x, k, metric, seed, opts.max_iter)
                                          : kmedoids(x, k, metric, seed, opts.max_swaps);
}

/// Best (lowest objective, earliest on ties) of `restarts` runs seeded by derive_seed.
inline Clustering run_restarts(const WeightedMatrix& x, std::size_t k, Metric metric, Algorithm algorithm,
                               std::uint64_t master_seed, std::size_t restarts, const RunOptions& opts = {})
{
    if (restarts < 1)
        throw Error(ErrorKind::DomainError, "restarts must be at least 1");
    Clustering best = run_once(x, k, metric, algorithm, derive_seed(master_seed, 0), opts);
    for (std::size_t i = 1; i < restarts; ++i) {
        auto run = run_once(x, k, metric, algorithm, derive_seed(master_seed, i), opts);
        if (run.objective < best.objective)
            best = std::move(run);
    }
    return best;
}

} // namespace doccluster
