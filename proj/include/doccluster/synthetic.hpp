#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "doccluster/clustering.hpp"
#include "doccluster/corpus.hpp"
#include "doccluster/error.hpp"
#include "doccluster/preprocess.hpp"

namespace doccluster {

// Labeled synthetic corpus. Each domain owns a disjoint topical vocabulary and
// all domains share one common pool; documents draw 80% of their tokens from
// their domain's vocabulary and 20% from the pool.
struct SyntheticSpec {
    std::size_t n_domains = 5;
    std::size_t docs_per_domain = 20;
    std::uint64_t seed = 42;
    std::size_t topical_terms = 30;
    std::size_t shared_terms = 30;
    std::size_t min_tokens = 100;
    std::size_t max_tokens = 200;
};

struct SyntheticDomain {
    std::string prefix;
    std::string label;
};

/// Filename prefix and label of domain `d`. The first five follow the
/// e/l/s/p/z scheme of LabelRule::standard_prefixes().
inline SyntheticDomain synthetic_domain(std::size_t d)
{
    static const SyntheticDomain named[] = {
        {"e", "entertainment"}, {"l", "literature"}, {"s", "sport"}, {"p", "political"}, {"z", "zoology"}};
    static constexpr std::string_view spare = "abcdfghijkmnoqrtuvwxy";
    if (d < 5)
        return named[d];
    if (d - 5 < spare.size())
        return {std::string(1, spare[d - 5]), "domain" + std::to_string(d + 1)};
    throw Error(ErrorKind::DomainError, "at most 26 synthetic domains are supported");
}

/// Deterministic pseudo-word for ordinal `i`: three consonant-vowel syllables.
inline std::string synthetic_word(std::size_t i)
{
    static constexpr std::string_view consonants = "bdfgklmnprstvz";
    static constexpr std::string_view vowels = "aeiou";
    constexpr std::size_t syllables = 14 * 5;
    constexpr std::size_t space = syllables * syllables * syllables;
    // Odd multiplier coprime to `space` scatters neighbouring ordinals.
    std::size_t x = (i * 7919 + 12345) % space;
    std::string w;
    for (int s = 0; s < 3; ++s) {
        const std::size_t syl = x % syllables;
        x /= syllables;
        w.push_back(consonants[syl / 5]);
        w.push_back(vowels[syl % 5]);
    }
    // 'x' never occurs otherwise, so the suffix keeps words distinct.
    if (default_stop_list().contains(w))
        w.push_back('x');
    return w;
}

struct SyntheticDocument {
    std::string id;
    std::string label;
    std::string text;
};

inline std::vector<SyntheticDocument> generate_corpus(const SyntheticSpec& spec)
{
    if (spec.n_domains < 1)
        throw Error(ErrorKind::DomainError, "n_domains must be at least 1");
    if (spec.docs_per_domain < 1)
        throw Error(ErrorKind::DomainError, "docs_per_domain must be at least 1");
    if (spec.min_tokens < 1 || spec.min_tokens > spec.max_tokens)
        throw Error(ErrorKind::DomainError, "invalid document length range");

    const std::size_t pool_base = spec.n_domains * spec.topical_terms;
    Rng rng(spec.seed);
    std::vector<SyntheticDocument> docs;
    for (std::size_t d = 0; d < spec.n_domains; ++d) {
        const auto domain = synthetic_domain(d);
        for (std::size_t n = 1; n <= spec.docs_per_domain; ++n) {
            const std::size_t length = spec.min_tokens + rng.below(spec.max_tokens - spec.min_tokens + 1);
            std::string text;
            std::size_t in_sentence = 0, sentence_len = 6 + rng.below(9);
            for (std::size_t t = 0; t < length; ++t) {
                const bool topical = rng.below(5) < 4;
                const std::size_t ordinal = topical ? d * spec.topical_terms + rng.below(spec.topical_terms)
                                                    : pool_base + rng.below(spec.shared_terms);
                std::string word = synthetic_word(ordinal);
                if (in_sentence == 0) {
                    word[0] = static_cast<char>(word[0] - 'a' + 'A');
                    if (!text.empty())
                        text += ' ';
                } else {
                    text += ' ';
                }
                text += word;
                if (++in_sentence == sentence_len || t + 1 == length) {
                    text += '.';
                    in_sentence = 0;
                    sentence_len = 6 + rng.below(9);
                }
            }
            text += '\n';
            docs.push_back({domain.prefix + std::to_string(n), domain.label, std::move(text)});
        }
    }
    return docs;
}

/// Writes <id>.txt per document into `out_dir`. When domains beyond the
/// default five are used, also writes labels.ini with their prefix table.
inline std::size_t write_synthetic_corpus(const SyntheticSpec& spec, const std::filesystem::path& out_dir)
{
    const auto docs = generate_corpus(spec);
    std::filesystem::create_directories(out_dir);
    for (const auto& d : docs) {
        std::ofstream out(out_dir / (d.id + ".txt"), std::ios::binary);
        out << d.text;
        if (!out)
            throw Error(ErrorKind::IoError, "cannot write '" + (out_dir / (d.id + ".txt")).string() + "'");
    }
    if (spec.n_domains > 5) {
        std::string table;
        for (std::size_t d = 0; d < spec.n_domains; ++d) {
            const auto dom = synthetic_domain(d);
            table += (d ? "," : "") + dom.prefix + ":" + dom.label;
        }
        std::ofstream ini(out_dir / "labels.ini");
        ini << "prefix-labels=" << table << "\n";
        if (!ini)
            throw Error(ErrorKind::IoError, "cannot write labels.ini");
    }
    return docs.size();
}

/// Prefix table covering the first `n_domains` synthetic domains.
inline LabelRule synthetic_label_rule(std::size_t n_domains)
{
    LabelRule rule;
    for (std::size_t d = 0; d < n_domains; ++d) {
        const auto dom = synthetic_domain(d);
        rule.prefixes[dom.prefix] = dom.label;
    }
    return rule;
}

} // namespace doccluster
