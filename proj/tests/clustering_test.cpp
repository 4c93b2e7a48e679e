#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "doccluster/clustering.hpp"

using namespace doccluster;

namespace {

WeightedMatrix line(std::vector<double> xs)
{
    std::vector<std::vector<double>> rows;
    for (double x : xs)
        rows.push_back({x});
    return WeightedMatrix::from_values(rows);
}

WeightedMatrix random_points(std::mt19937_64& gen, std::size_t n, std::size_t dim)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<std::vector<double>> rows(n, std::vector<double>(dim));
    for (auto& r : rows)
        for (auto& v : r)
            v = u(gen);
    return WeightedMatrix::from_values(rows);
}

// Exhaustive K-medoids optimum over all C(n, k) medoid subsets.
double exhaustive_medoid_cost(const WeightedMatrix& m, std::size_t k, Metric metric)
{
    const std::size_t n = m.n_rows();
    std::vector<bool> pick(n, false);
    std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(k), true);
    double best = std::numeric_limits<double>::infinity();
    do {
        double cost = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double d = std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < n; ++j)
                if (pick[j])
                    d = std::min(d, distance(m.row(i), m.row(j), metric));
            cost += d;
        }
        best = std::min(best, cost);
    } while (std::prev_permutation(pick.begin(), pick.end()));
    return best;
}

double recomputed_kmeans_cost(const WeightedMatrix& m, const Clustering& c)
{
    double total = 0.0;
    for (std::size_t i = 0; i < m.n_rows(); ++i) {
        const double d = distance(m.row(i), c.representatives[c.assignment[i]], c.metric);
        total += c.metric == Metric::euclidean ? d * d : d;
    }
    return total;
}

void expect_nearest_assignment(const WeightedMatrix& m, const Clustering& c)
{
    for (std::size_t i = 0; i < m.n_rows(); ++i) {
        const double own = distance(m.row(i), c.representatives[c.assignment[i]], c.metric);
        for (std::size_t j = 0; j < c.k; ++j) {
            const double other = distance(m.row(i), c.representatives[j], c.metric);
            EXPECT_LE(own, other) << "row " << i;
            if (other == own) {
                EXPECT_LE(c.assignment[i], j) << "tie must go to the lowest ordinal";
            }
        }
    }
}

} // namespace

TEST(Distance, Examples)
{
    const std::vector<double> o{0, 0}, p{3, 4};
    EXPECT_EQ(distance(o, p, Metric::euclidean), 5.0);
    EXPECT_EQ(distance(o, p, Metric::manhattan), 7.0);
    EXPECT_EQ(distance(p, p, Metric::euclidean), 0.0);
    EXPECT_EQ(distance(p, p, Metric::manhattan), 0.0);
    try {
        distance(o, std::vector<double>{1, 2, 3}, Metric::euclidean);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::DimensionError);
    }
}

TEST(Distance, MetricAxiomsOnRandomVectors)
{
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int iter = 0; iter < 500; ++iter) {
        const std::size_t dim = 1 + gen() % 8;
        std::vector<double> a(dim), b(dim), c(dim);
        for (std::size_t i = 0; i < dim; ++i) {
            a[i] = u(gen);
            b[i] = u(gen);
            c[i] = u(gen);
        }
        for (auto m : {Metric::euclidean, Metric::manhattan}) {
            const double ab = distance(a, b, m), ba = distance(b, a, m);
            EXPECT_GE(ab, 0.0);
            EXPECT_EQ(ab, ba);
            EXPECT_EQ(distance(a, a, m), 0.0);
            EXPECT_GT(ab, 0.0);  // a != b almost surely
            EXPECT_LE(ab, distance(a, c, m) + distance(c, b, m) + 1e-12);
        }
    }
}

TEST(KMeans, OneDimensionalTwoClusters)
{
    auto m = line({0, 1, 9, 10});
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto c = kmeans(m, 2, Metric::euclidean, seed);
        EXPECT_DOUBLE_EQ(c.objective, 1.0) << seed;
        EXPECT_EQ(c.assignment[0], c.assignment[1]);
        EXPECT_EQ(c.assignment[2], c.assignment[3]);
        EXPECT_NE(c.assignment[0], c.assignment[2]);
        std::vector<double> cents{c.representatives[0][0], c.representatives[1][0]};
        std::sort(cents.begin(), cents.end());
        EXPECT_EQ(cents, (std::vector<double>{0.5, 9.5}));
    }
}

TEST(KMeans, KEqualsNAndKEqualsOne)
{
    auto m = WeightedMatrix::from_values({{0, 1}, {2, 5}, {4, 0}, {7, 7}});
    for (auto metric : {Metric::euclidean, Metric::manhattan}) {
        auto all = kmeans(m, 4, metric, 3);
        EXPECT_EQ(all.objective, 0.0);
        EXPECT_EQ(std::set<std::size_t>(all.assignment.begin(), all.assignment.end()).size(), 4u);
    }
    auto mean = kmeans(m, 1, Metric::euclidean, 1);
    EXPECT_EQ(mean.representatives[0], (std::vector<double>{13.0 / 4, 13.0 / 4}));
    // Any point of the median box [2, 4] x [1, 5] minimizes the L1 cost.
    auto median = kmeans(m, 1, Metric::manhattan, 1);
    EXPECT_GE(median.representatives[0][0], 2.0);
    EXPECT_LE(median.representatives[0][0], 4.0);
    EXPECT_GE(median.representatives[0][1], 1.0);
    EXPECT_LE(median.representatives[0][1], 5.0);
    EXPECT_EQ(median.objective, 20.0);
}

TEST(KMeans, Errors)
{
    auto m = line({0, 1, 2});
    try {
        kmeans(m, 4, Metric::euclidean, 0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::TooManyClusters);
    }
    try {
        kmeans(m, 0, Metric::euclidean, 0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::DomainError);
    }
    EXPECT_THROW(kmeans(m, 1, Metric::euclidean, 0, 0), Error);
}

TEST(KMeans, EmptyClusterRepair)
{
    // Any two initial rows among the duplicates leave cluster 1 empty at first.
    auto m = line({0, 0, 0, 10});
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        for (auto metric : {Metric::euclidean, Metric::manhattan}) {
            auto c = kmeans(m, 2, metric, seed);
            EXPECT_EQ(c.objective, 0.0) << seed;
            EXPECT_NE(c.assignment[3], c.assignment[0]);
        }
    }
}

TEST(KMeans, InvariantsOnRandomData)
{
    std::mt19937_64 gen(11);
    for (int iter = 0; iter < 60; ++iter) {
        auto m = random_points(gen, 10 + gen() % 30, 1 + gen() % 5);
        const std::size_t k = 1 + gen() % 5;
        for (auto metric : {Metric::euclidean, Metric::manhattan}) {
            auto c = kmeans(m, k, metric, gen());
            for (std::size_t t = 1; t < c.history.size(); ++t)
                EXPECT_LE(c.history[t], c.history[t - 1]);
            EXPECT_EQ(c.history.back(), c.objective);
            EXPECT_NEAR(c.objective, recomputed_kmeans_cost(m, c), 1e-9 * std::max(1.0, c.objective));
            expect_nearest_assignment(m, c);
            ASSERT_EQ(c.assignment.size(), m.n_rows());
            for (auto a : c.assignment)
                EXPECT_LT(a, k);
        }
    }
}

TEST(KMeans, Deterministic)
{
    std::mt19937_64 gen(2);
    auto m = random_points(gen, 40, 4);
    for (auto metric : {Metric::euclidean, Metric::manhattan})
        EXPECT_EQ(kmeans(m, 4, metric, 77), kmeans(m, 4, metric, 77));
}

TEST(KMeans, ScalingInvariance)
{
    std::mt19937_64 gen(3);
    for (int iter = 0; iter < 20; ++iter) {
        auto m = random_points(gen, 30, 3);
        auto big = scaled(m, 7.3);
        for (auto metric : {Metric::euclidean, Metric::manhattan}) {
            const auto seed = gen();
            auto a = kmeans(m, 3, metric, seed);
            auto b = kmeans(big, 3, metric, seed);
            EXPECT_EQ(a.assignment, b.assignment);
            EXPECT_EQ(a.iterations, b.iterations);
            const double factor = metric == Metric::euclidean ? 7.3 * 7.3 : 7.3;
            EXPECT_NEAR(b.objective, factor * a.objective, 1e-9 * b.objective);
        }
    }
}

TEST(TotalCost, Examples)
{
    auto m = line({0, 1, 9, 10});
    EXPECT_EQ(total_cost(m, MedoidSet({0, 1, 2, 3}, 4), Metric::manhattan), 0.0);
    EXPECT_EQ(total_cost(line({0, 10}), MedoidSet({0}, 2), Metric::manhattan), 10.0);
    EXPECT_EQ(total_cost(m, MedoidSet({0, 2}, 4), Metric::manhattan), 2.0);
}

TEST(MedoidSet, Validation)
{
    EXPECT_THROW(MedoidSet({0, 0}, 4), Error);
    EXPECT_THROW(MedoidSet({0, 4}, 4), Error);
    EXPECT_THROW(MedoidSet({0, 1, 2}, 2), Error);
}

TEST(KMedoids, OneDimensionalTwoClusters)
{
    auto m = line({0, 1, 9, 10});
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto c = kmedoids(m, 2, Metric::manhattan, seed);
        EXPECT_EQ(c.objective, 2.0);
        std::vector<std::size_t> med = c.medoids;
        std::sort(med.begin(), med.end());
        EXPECT_LE(med[0], 1u);
        EXPECT_GE(med[1], 2u);
    }
}

TEST(KMedoids, KEqualsN)
{
    auto m = line({3, 1, 4, 1.5});
    auto c = kmedoids(m, 4, Metric::euclidean, 8);
    EXPECT_EQ(c.objective, 0.0);
    std::vector<std::size_t> med = c.medoids;
    std::sort(med.begin(), med.end());
    EXPECT_EQ(med, (std::vector<std::size_t>{0, 1, 2, 3}));
}

TEST(KMedoids, SeparatedGroupsMatchExhaustiveOptimum)
{
    auto m = WeightedMatrix::from_values({{0, 0}, {0.5, 0.2}, {0.1, 0.7}, {8, 8}, {8.4, 7.7}, {7.6, 8.3}});
    for (auto metric : {Metric::euclidean, Metric::manhattan}) {
        auto best = run_restarts(m, 2, metric, Algorithm::kmedoids, 1, 20);
        EXPECT_NEAR(best.objective, exhaustive_medoid_cost(m, 2, metric), 1e-12);
    }
}

TEST(KMedoids, InvariantsOnRandomData)
{
    std::mt19937_64 gen(21);
    for (int iter = 0; iter < 60; ++iter) {
        auto m = random_points(gen, 6 + gen() % 25, 2);
        const std::size_t k = 1 + gen() % 4;
        for (auto metric : {Metric::euclidean, Metric::manhattan}) {
            auto c = kmedoids(m, k, metric, gen());
            for (std::size_t t = 1; t < c.history.size(); ++t)
                EXPECT_LT(c.history[t], c.history[t - 1]);
            EXPECT_EQ(c.iterations + 1, c.history.size());
            EXPECT_EQ(std::set<std::size_t>(c.medoids.begin(), c.medoids.end()).size(), k);
            for (std::size_t j = 0; j < k; ++j) {
                const auto r = m.row(c.medoids[j]);
                EXPECT_EQ(c.representatives[j], std::vector<double>(r.begin(), r.end()));
            }
            EXPECT_NEAR(c.objective, total_cost(m, MedoidSet(c.medoids, m.n_rows()), metric),
                        1e-9 * std::max(1.0, c.objective));
            expect_nearest_assignment(m, c);
            EXPECT_EQ(kmedoids(m, k, metric, c.seed), c);
        }
    }
}

TEST(KMedoids, MaxSwapsBoundsAcceptedSwaps)
{
    std::mt19937_64 gen(4);
    auto m = random_points(gen, 60, 2);
    auto c = kmedoids(m, 5, Metric::manhattan, 9, 1);
    EXPECT_LE(c.iterations, 1u);
}

TEST(KMedoids, TooManyClusters)
{
    EXPECT_THROW(kmedoids(line({1, 2}), 3, Metric::manhattan, 0), Error);
}

TEST(Restarts, SingleRestartEqualsSeededRun)
{
    std::mt19937_64 gen(8);
    auto m = random_points(gen, 30, 3);
    EXPECT_EQ(run_restarts(m, 3, Metric::euclidean, Algorithm::kmeans, 123, 1),
              kmeans(m, 3, Metric::euclidean, 123));
    EXPECT_EQ(run_restarts(m, 3, Metric::manhattan, Algorithm::kmedoids, 123, 1),
              kmedoids(m, 3, Metric::manhattan, 123));
    EXPECT_THROW(run_restarts(m, 3, Metric::manhattan, Algorithm::kmeans, 1, 0), Error);
}

TEST(Restarts, BestIsMinimumOfIndividualRuns)
{
    std::mt19937_64 gen(9);
    for (int iter = 0; iter < 10; ++iter) {
        auto m = random_points(gen, 25, 3);
        for (auto alg : {Algorithm::kmeans, Algorithm::kmedoids}) {
            const auto master = gen();
            auto best = run_restarts(m, 4, Metric::manhattan, alg, master, 8);
            for (std::size_t i = 0; i < 8; ++i) {
                auto run = run_once(m, 4, Metric::manhattan, alg, derive_seed(master, i));
                EXPECT_LE(best.objective, run.objective);
            }
        }
    }
}

TEST(Restarts, DerivedSeedsDistinct)
{
    std::set<std::uint64_t> seeds;
    for (std::size_t i = 0; i < 1000; ++i)
        seeds.insert(derive_seed(42, i));
    EXPECT_EQ(seeds.size(), 1000u);
    EXPECT_EQ(derive_seed(42, 0), 42u);
}

TEST(Rng, BelowIsInRangeAndSampleDistinct)
{
    Rng rng(1);
    for (int i = 0; i < 1000; ++i)
        EXPECT_LT(rng.below(7), 7u);
    auto s = rng.sample_distinct(10, 10);
    EXPECT_EQ(std::set<std::size_t>(s.begin(), s.end()).size(), 10u);
}
