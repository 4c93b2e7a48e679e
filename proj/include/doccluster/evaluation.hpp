#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "doccluster/clustering.hpp"
#include "doccluster/corpus.hpp"
#include "doccluster/error.hpp"

namespace doccluster {

/// Efficiency in hundredths of a percent, rounded half-up with exact integer
/// arithmetic: round(10000 * majority / size).
constexpr std::uint64_t efficiency_hundredths(std::uint64_t majority, std::uint64_t size)
{
    return (20000 * majority + size) / (2 * size);
}

/// "27.78" for 5/18.
inline std::string format_efficiency(std::uint64_t majority, std::uint64_t size)
{
    const auto h = efficiency_hundredths(majority, size);
    std::string frac = std::to_string(h % 100);
    if (frac.size() < 2)
        frac.insert(0, "0");
    return std::to_string(h / 100) + "." + frac;
}

/// Two-decimal half-up rendering of an arbitrary percentage.
inline std::string format_percent(double pct)
{
    const auto h = static_cast<std::uint64_t>(pct * 100.0 + 0.5);
    std::string frac = std::to_string(h % 100);
    if (frac.size() < 2)
        frac.insert(0, "0");
    return std::to_string(h / 100) + "." + frac;
}

struct ClusterScore {
    std::size_t cluster = 0;
    std::size_t size = 0;
    DomainLabel majority_label;
    std::size_t majority_count = 0;
    double efficiency = 0.0;  // exact 100 * majority_count / size

    static ClusterScore make(std::size_t cluster, std::size_t size, DomainLabel label, std::size_t majority)
    {
        if (size == 0 || majority < 1 || majority > size)
            throw Error(ErrorKind::DomainError, "invalid cluster score " + std::to_string(majority) + "/" +
                                                    std::to_string(size));
        return {cluster, size, std::move(label), majority,
                100.0 * static_cast<double>(majority) / static_cast<double>(size)};
    }

    std::string display() const { return format_efficiency(majority_count, size); }

    friend bool operator==(const ClusterScore&, const ClusterScore&) = default;
};

inline std::uint64_t corpus_fingerprint(const Corpus& corpus)
{
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (const auto& d : corpus.docs()) {
        for (char c : d.id + '\n') {
            h ^= static_cast<unsigned char>(c);
            h *= 0x100000001B3ULL;
        }
    }
    return h;
}

/// Per-cluster majority-label purity of one clustering.
/// mean_efficiency is document-weighted: 100 * total_majority / doc_count.
struct EfficiencyReport {
    Algorithm algorithm = Algorithm::kmeans;
    std::vector<ClusterScore> scores;
    double mean_efficiency = 0.0;
    std::size_t total_majority = 0;
    std::size_t doc_count = 0;
    std::uint64_t fingerprint = 0;

    static EfficiencyReport from_scores(Algorithm algorithm, std::vector<ClusterScore> scores,
                                        std::uint64_t fingerprint = 0)
    {
        EfficiencyReport r{algorithm, std::move(scores), 0.0, 0, 0, fingerprint};
        for (const auto& s : r.scores) {
            r.doc_count += s.size;
            r.total_majority += s.majority_count;
        }
        if (r.doc_count > 0)
            r.mean_efficiency = 100.0 * static_cast<double>(r.total_majority) / static_cast<double>(r.doc_count);
        return r;
    }

    friend bool operator==(const EfficiencyReport&, const EfficiencyReport&) = default;
};

inline EfficiencyReport cluster_efficiency(const Clustering& clustering, const Corpus& corpus)
{
    if (clustering.assignment.size() != corpus.size())
        throw Error(ErrorKind::DimensionError, "clustering covers " + std::to_string(clustering.assignment.size()) +
                                                   " documents, corpus has " + std::to_string(corpus.size()));

    std::vector<std::map<DomainLabel, std::size_t>> counts(clustering.k);
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const auto& doc = corpus[i];
        if (!doc.label)
            throw Error(ErrorKind::UnlabeledDocument, "document '" + doc.id + "' has no domain label");
        if (clustering.assignment[i] >= clustering.k)
            throw Error(ErrorKind::DomainError, "cluster ordinal out of range for '" + doc.id + "'");
        ++counts[clustering.assignment[i]][*doc.label];
    }

    std::vector<ClusterScore> scores;
    for (std::size_t c = 0; c < clustering.k; ++c) {
        if (counts[c].empty())
            continue;
        std::size_t size = 0;
        const std::pair<const DomainLabel, std::size_t>* best = nullptr;
        // std::map iterates labels in ascending order, so strict > keeps the smallest on ties.
        for (const auto& entry : counts[c]) {
            size += entry.second;
            if (!best || entry.second > best->second)
                best = &entry;
        }
        scores.push_back(ClusterScore::make(c, size, best->first, best->second));
    }
    return EfficiencyReport::from_scores(clustering.algorithm, std::move(scores), corpus_fingerprint(corpus));
}

/// Highest efficiency; ties go to the larger cluster, then the lower ordinal.
inline std::size_t best_cluster(const EfficiencyReport& report)
{
    if (report.scores.empty())
        throw Error(ErrorKind::EmptyCluster, "report has no clusters");
    const ClusterScore* best = &report.scores.front();
    for (const auto& s : report.scores) {
        // Compare m1/s1 against m2/s2 exactly.
        const auto lhs = s.majority_count * best->size;
        const auto rhs = best->majority_count * s.size;
        if (lhs > rhs || (lhs == rhs && (s.size > best->size || (s.size == best->size && s.cluster < best->cluster))))
            best = &s;
    }
    return best->cluster;
}

struct ComparisonTable {
    std::vector<EfficiencyReport> reports;
    std::optional<Algorithm> winner;  // empty for a single report or a tie

    bool tie() const noexcept { return reports.size() == 2 && !winner; }

    static ComparisonTable single(EfficiencyReport report) { return {{std::move(report)}, std::nullopt}; }

    friend bool operator==(const ComparisonTable&, const ComparisonTable&) = default;
};

inline ComparisonTable compare(const EfficiencyReport& a, const EfficiencyReport& b)
{
    if (a.scores.empty() || b.scores.empty())
        throw Error(ErrorKind::IncomparableReports, "cannot compare an empty report");
    if (a.doc_count != b.doc_count || a.fingerprint != b.fingerprint)
        throw Error(ErrorKind::IncomparableReports, "reports were computed over different corpora");

    ComparisonTable t{{a, b}, std::nullopt};
    // Exact comparison of total_majority / doc_count.
    if (a.total_majority != b.total_majority)
        t.winner = a.total_majority > b.total_majority ? a.algorithm : b.algorithm;
    return t;
}

} // namespace doccluster
