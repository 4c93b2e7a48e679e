#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "doccluster/corpus.hpp"
#include "doccluster/error.hpp"
#include "doccluster/numfmt.hpp"
#include "doccluster/preprocess.hpp"

namespace doccluster {

enum class Scheme { frequency, tfidf };

constexpr std::string_view scheme_name(Scheme s) noexcept
{
    return s == Scheme::frequency ? "frequency" : "tfidf";
}

inline Scheme parse_scheme(std::string_view s)
{
    if (s == "frequency")
        return Scheme::frequency;
    if (s == "tfidf")
        return Scheme::tfidf;
    throw Error(ErrorKind::DomainError, "unknown weighting scheme '" + std::string(s) + "'");
}

/// Ordered term axis of the matrix. index(term) is the column ordinal.
class Vocabulary {
public:
    Vocabulary() = default;
    explicit Vocabulary(std::vector<std::string> terms) : terms_(std::move(terms))
    {
        index_.reserve(terms_.size());
        for (std::size_t i = 0; i < terms_.size(); ++i)
            if (!index_.emplace(terms_[i], i).second)
                throw Error(ErrorKind::DomainError, "duplicate vocabulary term '" + terms_[i] + "'");
    }

    std::size_t size() const noexcept { return terms_.size(); }
    bool empty() const noexcept { return terms_.empty(); }
    const std::vector<std::string>& terms() const noexcept { return terms_; }
    const std::string& operator[](std::size_t i) const { return terms_.at(i); }

    std::optional<std::size_t> index(std::string_view term) const
    {
        auto it = index_.find(std::string(term));
        if (it == index_.end())
            return std::nullopt;
        return it->second;
    }

    friend bool operator==(const Vocabulary& a, const Vocabulary& b) { return a.terms_ == b.terms_; }

private:
    std::vector<std::string> terms_;
    std::unordered_map<std::string, std::size_t> index_;
};

struct WeightVector {
    std::string doc_id;
    std::vector<double> weights;

    friend bool operator==(const WeightVector&, const WeightVector&) = default;
};

struct WeightedMatrix {
    Vocabulary vocab;
    std::vector<WeightVector> rows;
    Scheme scheme = Scheme::tfidf;
    Warnings warnings;

    std::size_t n_rows() const noexcept { return rows.size(); }
    std::size_t n_cols() const noexcept { return vocab.size(); }
    std::span<const double> row(std::size_t i) const { return rows.at(i).weights; }

    std::optional<std::size_t> row_of(std::string_view doc_id) const
    {
        for (std::size_t i = 0; i < rows.size(); ++i)
            if (rows[i].doc_id == doc_id)
                return i;
        return std::nullopt;
    }

    /// Builds a matrix from raw values, for data that does not come from a corpus.
    /// Columns are named t1..tN and rows r1..rM unless ids are given.
    static WeightedMatrix from_values(const std::vector<std::vector<double>>& values,
                                      std::vector<std::string> ids = {}, Scheme scheme = Scheme::tfidf)
    {
        const std::size_t cols = values.empty() ? 0 : values.front().size();
        std::vector<std::string> terms;
        for (std::size_t j = 0; j < cols; ++j)
            terms.push_back("t" + std::to_string(j + 1));
        WeightedMatrix m{Vocabulary(std::move(terms)), {}, scheme, {}};
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (values[i].size() != cols)
                throw Error(ErrorKind::DimensionError, "ragged matrix row " + std::to_string(i));
            m.rows.push_back({ids.empty() ? "r" + std::to_string(i + 1) : ids.at(i), values[i]});
        }
        return m;
    }
};

/// Returns a copy with every entry multiplied by `factor`.
inline WeightedMatrix scaled(WeightedMatrix m, double factor)
{
    for (auto& r : m.rows)
        for (auto& w : r.weights)
            w *= factor;
    return m;
}

namespace detail {

inline std::vector<std::vector<Token>> corpus_tokens(const Corpus& corpus, const StopList& stop)
{
    std::vector<std::vector<Token>> out;
    out.reserve(corpus.size());
    for (const auto& doc : corpus.docs())
        out.push_back(document_tokens(doc.text, stop));
    return out;
}

// Presence-based document frequency of every token.
inline std::map<std::string, std::size_t> document_frequencies(const std::vector<std::vector<Token>>& docs)
{
    std::map<std::string, std::size_t> df;
    for (const auto& tokens : docs) {
        std::vector<Token> uniq(tokens.begin(), tokens.end());
        std::sort(uniq.begin(), uniq.end());
        uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
        for (auto& t : uniq)
            ++df[t];
    }
    return df;
}

} // namespace detail

/// Union of post-stop-word tokens ordered by descending document frequency
/// (ties lexicographic), optionally truncated to `max_terms`.
inline Vocabulary build_vocabulary(const Corpus& corpus, const StopList& stop,
                                   std::optional<std::size_t> max_terms = std::nullopt)
{
    auto df = detail::document_frequencies(detail::corpus_tokens(corpus, stop));
    if (df.empty())
        throw Error(ErrorKind::EmptyVocabulary, "every document is empty after stop-word removal");

    std::vector<std::pair<std::string, std::size_t>> ranked(df.begin(), df.end());
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    if (max_terms && *max_terms < ranked.size())
        ranked.resize(*max_terms);

    std::vector<std::string> terms;
    terms.reserve(ranked.size());
    for (auto& [term, _] : ranked)
        terms.push_back(term);
    return Vocabulary(std::move(terms));
}

/// count(t) / |tokens|. An empty token sequence yields zeros and a warning.
inline WeightVector frequency_weight(std::span<const Token> doc_tokens, const Vocabulary& vocab,
                                    std::string doc_id = {}, Warnings* warnings = nullptr)
{
    WeightVector v{std::move(doc_id), std::vector<double>(vocab.size(), 0.0)};
    if (doc_tokens.empty()) {
        if (warnings)
            warnings->push_back("EmptyDocument: '" + v.doc_id + "' has no tokens after stop-word removal");
        return v;
    }
    std::vector<std::size_t> counts(vocab.size(), 0);
    for (const auto& t : doc_tokens)
        if (auto j = vocab.index(t))
            ++counts[*j];
    const auto total = static_cast<double>(doc_tokens.size());
    for (std::size_t j = 0; j < counts.size(); ++j)
        v.weights[j] = static_cast<double>(counts[j]) / total;
    return v;
}

inline double term_frequency(std::size_t count)
{
    return std::sqrt(static_cast<double>(count));
}

/// Natural-log idf: ln(D / df), defined for 1 <= df <= D.
inline double inverse_document_frequency(std::size_t df, std::size_t total_docs)
{
    if (df == 0 || total_docs == 0 || df > total_docs)
        throw Error(ErrorKind::DomainError, "idf undefined for df=" + std::to_string(df) +
                                                ", D=" + std::to_string(total_docs));
    return std::log(static_cast<double>(total_docs) / static_cast<double>(df));
}

inline double tfidf_weight(std::size_t count, std::size_t df, std::size_t total_docs)
{
    return term_frequency(count) * inverse_document_frequency(df, total_docs);
}

/// One row per corpus document (corpus order), columns in vocabulary order.
inline WeightedMatrix build_matrix(const Corpus& corpus, const Vocabulary& vocab, Scheme scheme,
                                   const StopList& stop)
{
    if (vocab.empty())
        throw Error(ErrorKind::EmptyVocabulary, "cannot build a matrix over an empty vocabulary");

    const auto tokens = detail::corpus_tokens(corpus, stop);
    WeightedMatrix m{vocab, {}, scheme, {}};
    m.rows.reserve(corpus.size());

    if (scheme == Scheme::frequency) {
        for (std::size_t i = 0; i < corpus.size(); ++i)
            m.rows.push_back(frequency_weight(tokens[i], vocab, corpus[i].id, &m.warnings));
        return m;
    }

    const auto df_all = detail::document_frequencies(tokens);
    std::vector<std::size_t> df(vocab.size(), 0);
    for (std::size_t j = 0; j < vocab.size(); ++j)
        if (auto it = df_all.find(vocab[j]); it != df_all.end())
            df[j] = it->second;

    for (std::size_t i = 0; i < corpus.size(); ++i) {
        std::vector<std::size_t> counts(vocab.size(), 0);
        for (const auto& t : tokens[i])
            if (auto j = vocab.index(t))
                ++counts[*j];
        WeightVector row{corpus[i].id, std::vector<double>(vocab.size(), 0.0)};
        for (std::size_t j = 0; j < vocab.size(); ++j)
            if (counts[j] > 0)
                row.weights[j] = tfidf_weight(counts[j], df[j], corpus.size());
        if (tokens[i].empty())
            m.warnings.push_back("EmptyDocument: '" + row.doc_id + "' has no tokens after stop-word removal");
        m.rows.push_back(std::move(row));
    }
    return m;
}

namespace detail {

inline std::string csv_field(std::string_view s)
{
    if (s.find_first_of(",\"\r\n") == std::string_view::npos)
        return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

} // namespace detail

/// CSV with header "doc,<term1>,<term2>,..." and shortest round-trip decimals.
inline std::size_t write_matrix_csv(const WeightedMatrix& m, std::ostream& out)
{
    std::string text = "doc";
    for (const auto& t : m.vocab.terms())
        text += "," + detail::csv_field(t);
    text += '\n';
    for (const auto& r : m.rows) {
        text += detail::csv_field(r.doc_id);
        for (double w : r.weights)
            text += "," + detail::shortest(w);
        text += '\n';
    }
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out)
        throw Error(ErrorKind::IoError, "failed writing matrix CSV");
    return text.size();
}

} // namespace doccluster
