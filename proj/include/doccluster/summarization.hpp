#pragma once

#include <algorithm>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "doccluster/clustering.hpp"
#include "doccluster/corpus.hpp"
#include "doccluster/error.hpp"
#include "doccluster/preprocess.hpp"
#include "doccluster/weighting.hpp"

namespace doccluster {

struct ScoredSentence {
    Sentence sentence;
    double weight = 0.0;

    friend bool operator==(const ScoredSentence&, const ScoredSentence&) = default;
};

struct Summary {
    std::string doc_id;
    std::vector<ScoredSentence> selected;  // original document order
    std::size_t n_requested = 0;

    friend bool operator==(const Summary&, const Summary&) = default;
};

struct SummaryOptions {
    bool length_normalized = false;  // divide a sentence's weight by its token count
    const StopList* stop = nullptr;  // nullptr selects default_stop_list()
};

/// Sum of the document-row weights of the sentence's tokens, with multiplicity.
/// Out-of-vocabulary tokens contribute 0.
inline double sentence_weight(const Sentence& s, std::span<const double> doc_row, const Vocabulary& vocab)
{
    double total = 0.0;
    for (const auto& t : s.tokens)
        if (auto j = vocab.index(t))
            total += doc_row[*j];
    return total;
}

/// Indices of the top-n weights (ties -> earlier index), returned ascending.
inline std::vector<std::size_t> top_n_in_order(std::span<const double> weights, std::size_t n)
{
    std::vector<std::size_t> order(weights.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return weights[a] > weights[b]; });
    order.resize(std::min(n, order.size()));
    std::sort(order.begin(), order.end());
    return order;
}

inline Summary summarize(const Document& doc, const WeightedMatrix& matrix, std::size_t n,
                         const SummaryOptions& opts = {})
{
    if (n < 1)
        throw Error(ErrorKind::DomainError, "summary length must be at least 1 sentence");
    const auto row = matrix.row_of(doc.id);
    if (!row)
        throw Error(ErrorKind::UnknownDocument, "document '" + doc.id + "' is not a matrix row");

    const StopList& stop = opts.stop ? *opts.stop : default_stop_list();
    auto sentences = split_sentences(doc.text, stop);
    if (sentences.empty())
        throw Error(ErrorKind::EmptyDocument, "document '" + doc.id + "' has no sentences");

    std::vector<double> weights;
    weights.reserve(sentences.size());
    for (const auto& s : sentences) {
        double w = sentence_weight(s, matrix.row(*row), matrix.vocab);
        if (opts.length_normalized && !s.tokens.empty())
            w /= static_cast<double>(s.tokens.size());
        weights.push_back(w);
    }

    Summary summary{doc.id, {}, n};
    for (auto i : top_n_in_order(weights, n))
        summary.selected.push_back({std::move(sentences[i]), weights[i]});
    return summary;
}

/// Summaries of every document in `cluster`, in corpus order. When `skipped`
/// is given, documents without sentences are skipped and reported there
/// instead of raising EmptyDocument.
inline std::vector<Summary> summarize_cluster(std::size_t cluster, const Clustering& clustering, const Corpus& corpus,
                                              const WeightedMatrix& matrix, std::size_t n,
                                              const SummaryOptions& opts = {}, Warnings* skipped = nullptr)
{
    const auto members = clustering.members(cluster);
    if (members.empty())
        throw Error(ErrorKind::EmptyCluster, "cluster " + std::to_string(cluster) + " has no documents");

    std::vector<Summary> out;
    for (auto i : members) {
        try {
            out.push_back(summarize(corpus[i], matrix, n, opts));
        } catch (const Error& e) {
            if (!skipped || e.kind() != ErrorKind::EmptyDocument)
                throw;
            skipped->push_back(e.what());
        }
    }
    return out;
}

} // namespace doccluster
