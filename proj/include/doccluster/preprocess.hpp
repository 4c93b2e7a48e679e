#pragma once

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "doccluster/error.hpp"

namespace doccluster {

// A token is a lowercase run of ASCII letters/digits.
using Token = std::string;

namespace detail {

inline bool is_token_char(char c) noexcept
{
    return std::isalnum(static_cast<unsigned char>(c)) != 0 && static_cast<unsigned char>(c) < 0x80;
}

inline char ascii_lower(char c) noexcept
{
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

inline bool is_space(char c) noexcept
{
    return std::isspace(static_cast<unsigned char>(c)) != 0;
}

} // namespace detail

class StopList {
public:
    StopList() = default;
    StopList(std::initializer_list<std::string_view> words)
    {
        for (auto w : words)
            insert(w);
    }

    void insert(std::string_view word)
    {
        std::string w;
        w.reserve(word.size());
        for (char c : word)
            w.push_back(detail::ascii_lower(c));
        if (!w.empty())
            words_.insert(std::move(w));
    }

    bool contains(std::string_view token) const { return words_.find(token) != words_.end(); }
    std::size_t size() const noexcept { return words_.size(); }
    const std::set<std::string, std::less<>>& words() const noexcept { return words_; }

    friend bool operator==(const StopList&, const StopList&) = default;

private:
    std::set<std::string, std::less<>> words_;
};

/// Built-in English stop list (articles, pronouns, prepositions, conjunctions,
/// auxiliaries, common adverbs). Mirrors data/stopwords.txt.
inline const StopList& default_stop_list()
{
    static const StopList list{
        "a", "about", "above", "after", "again", "against", "all", "also", "am", "an",
        "and", "any", "are", "as", "at", "be", "because", "been", "before", "being",
        "below", "between", "both", "but", "by", "can", "could", "did", "do", "does",
        "doing", "down", "during", "each", "either", "else", "even", "ever", "every", "few",
        "for", "from", "further", "had", "has", "have", "having", "he", "her", "here",
        "hers", "herself", "him", "himself", "his", "how", "however", "i", "if", "in",
        "into", "is", "it", "its", "itself", "just", "may", "me", "might", "more",
        "most", "much", "must", "my", "myself", "neither", "no", "nor", "not", "now",
        "of", "off", "often", "on", "once", "only", "or", "other", "our", "ours",
        "ourselves", "out", "over", "own", "quite", "rather", "same", "shall", "she", "should",
        "so", "some", "such", "than", "that", "the", "their", "theirs", "them", "themselves",
        "then", "there", "these", "they", "this", "those", "though", "through", "thus", "to",
        "too", "under", "until", "up", "upon", "us", "very", "was", "we", "were",
        "what", "when", "where", "whether", "which", "while", "who", "whom", "whose", "why",
        "will", "with", "within", "without", "would", "yet", "you", "your", "yours", "yourself",
        "yourselves",
    };
    return list;
}

/// Reads a stop list file: one word per line, '#' starts a comment, case-insensitive.
inline StopList load_stop_list(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorKind::IngestError, "cannot read stop list '" + path.string() + "'");
    StopList list;
    std::string line;
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        auto first = std::find_if_not(line.begin(), line.end(), detail::is_space);
        auto last = std::find_if_not(line.rbegin(), line.rend(), detail::is_space).base();
        if (first < last)
            list.insert(std::string_view(&*first, static_cast<std::size_t>(last - first)));
    }
    return list;
}

/// Lowercases and splits on every maximal run of non-alphanumeric characters.
inline std::vector<Token> tokenize(std::string_view text)
{
    std::vector<Token> tokens;
    Token current;
    for (char c : text) {
        if (detail::is_token_char(c)) {
            current.push_back(detail::ascii_lower(c));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty())
        tokens.push_back(std::move(current));
    return tokens;
}

inline std::vector<Token> remove_stopwords(std::span<const Token> tokens, const StopList& stop)
{
    std::vector<Token> kept;
    kept.reserve(tokens.size());
    for (const auto& t : tokens)
        if (!stop.contains(t))
            kept.push_back(t);
    return kept;
}

struct Sentence {
    std::size_t index = 0;
    std::string text;           // raw, whitespace-trimmed
    std::vector<Token> tokens;  // after stop-word removal

    friend bool operator==(const Sentence&, const Sentence&) = default;
};

/// Splits after '.', '!' or '?' when followed by whitespace or end of text.
/// A trailing fragment without terminator becomes the last sentence;
/// fragments with no alphanumeric character are dropped.
inline std::vector<Sentence> split_sentences(std::string_view text, const StopList& stop = default_stop_list())
{
    std::vector<Sentence> out;
    auto emit = [&](std::size_t begin, std::size_t end) {
        while (begin < end && detail::is_space(text[begin]))
            ++begin;
        while (end > begin && detail::is_space(text[end - 1]))
            --end;
        auto piece = text.substr(begin, end - begin);
        auto raw = tokenize(piece);
        if (raw.empty())
            return;
        Sentence s;
        s.index = out.size();
        s.text = std::string(piece);
        s.tokens = remove_stopwords(raw, stop);
        out.push_back(std::move(s));
    };

    std::size_t start = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if ((c == '.' || c == '!' || c == '?') && (i + 1 == text.size() || detail::is_space(text[i + 1]))) {
            emit(start, i + 1);
            start = i + 1;
        }
    }
    if (start < text.size())
        emit(start, text.size());
    return out;
}

/// Post-stop-word tokens of a whole document.
inline std::vector<Token> document_tokens(std::string_view text, const StopList& stop)
{
    return remove_stopwords(tokenize(text), stop);
}

} // namespace doccluster
