#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "doccluster/error.hpp"

namespace doccluster {

/// Domain (class) label of a document, e.g. "sport".
class DomainLabel {
public:
    DomainLabel() = default;
    explicit DomainLabel(std::string name) : name_(std::move(name))
    {
        if (name_.empty())
            throw Error(ErrorKind::DomainError, "domain label must be non-empty");
    }

    const std::string& name() const noexcept { return name_; }

    friend auto operator<=>(const DomainLabel&, const DomainLabel&) = default;

private:
    std::string name_;
};

struct Document {
    std::string id;                    // filename stem
    std::optional<DomainLabel> label;  // absent when no prefix rule matched
    std::string text;
    std::size_t byte_len = 0;
};

/// Maps filename prefixes to labels. The longest alphabetic prefix of a stem
/// is looked up ("e12" -> "e").
struct LabelRule {
    std::map<std::string, std::string> prefixes;
    bool require_labels = false;

    static LabelRule standard_prefixes()
    {
        return LabelRule{{{"e", "entertainment"},
                          {"l", "literature"},
                          {"p", "political"},
                          {"s", "sport"},
                          {"z", "zoology"}},
                         false};
    }

    std::optional<DomainLabel> label_for(std::string_view stem) const
    {
        std::size_t n = 0;
        while (n < stem.size() && std::isalpha(static_cast<unsigned char>(stem[n])))
            ++n;
        auto it = prefixes.find(std::string(stem.substr(0, n)));
        if (it == prefixes.end())
            return std::nullopt;
        return DomainLabel(it->second);
    }
};

class Corpus {
public:
    Corpus() = default;

    /// Sorts by id; rejects duplicate ids and corpora smaller than two documents.
    explicit Corpus(std::vector<Document> docs) : docs_(std::move(docs))
    {
        if (docs_.size() < 2)
            throw Error(ErrorKind::CorpusEmpty,
                        "a corpus needs at least 2 documents, got " + std::to_string(docs_.size()));
        std::sort(docs_.begin(), docs_.end(),
                  [](const Document& a, const Document& b) { return a.id < b.id; });
        for (std::size_t i = 1; i < docs_.size(); ++i)
            if (docs_[i].id == docs_[i - 1].id)
                throw Error(ErrorKind::IngestError, "duplicate document id '" + docs_[i].id + "'");
        for (const auto& d : docs_)
            if (d.label)
                labels_.insert(*d.label);
    }

    const std::vector<Document>& docs() const noexcept { return docs_; }
    const std::set<DomainLabel>& label_set() const noexcept { return labels_; }
    std::size_t size() const noexcept { return docs_.size(); }
    const Document& operator[](std::size_t i) const { return docs_.at(i); }

    std::optional<std::size_t> index_of(std::string_view id) const
    {
        auto it = std::lower_bound(docs_.begin(), docs_.end(), id,
                                   [](const Document& d, std::string_view key) { return d.id < key; });
        if (it == docs_.end() || it->id != id)
            return std::nullopt;
        return static_cast<std::size_t>(it - docs_.begin());
    }

    friend bool operator==(const Corpus& a, const Corpus& b)
    {
        if (a.docs_.size() != b.docs_.size())
            return false;
        for (std::size_t i = 0; i < a.docs_.size(); ++i) {
            const auto &x = a.docs_[i], &y = b.docs_[i];
            if (x.id != y.id || x.label != y.label || x.text != y.text)
                return false;
        }
        return true;
    }

private:
    std::vector<Document> docs_;
    std::set<DomainLabel> labels_;
};

namespace detail {

// Replaces every invalid UTF-8 sequence with U+FFFD.
inline std::string repair_utf8(std::string_view in)
{
    static constexpr std::string_view replacement = "\xEF\xBF\xBD";
    std::string out;
    out.reserve(in.size());
    std::size_t i = 0;
    while (i < in.size()) {
        auto c = static_cast<unsigned char>(in[i]);
        std::size_t len = 0;
        std::uint32_t min_cp = 0;
        if (c < 0x80) {
            out.push_back(static_cast<char>(c));
            ++i;
            continue;
        }
        if ((c & 0xE0) == 0xC0) { len = 2; min_cp = 0x80; }
        else if ((c & 0xF0) == 0xE0) { len = 3; min_cp = 0x800; }
        else if ((c & 0xF8) == 0xF0) { len = 4; min_cp = 0x10000; }

        bool ok = len != 0 && i + len <= in.size();
        std::uint32_t cp = ok ? (c & (0x7F >> len)) : 0;
        for (std::size_t j = 1; ok && j < len; ++j) {
            auto cc = static_cast<unsigned char>(in[i + j]);
            if ((cc & 0xC0) != 0x80)
                ok = false;
            cp = (cp << 6) | (cc & 0x3F);
        }
        if (ok && (cp < min_cp || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)))
            ok = false;
        if (ok) {
            out.append(in.substr(i, len));
            i += len;
        } else {
            out.append(replacement);
            ++i;
        }
    }
    return out;
}

} // namespace detail

/// Loads every regular *.txt file directly under `root`.
inline Corpus load_corpus(const std::filesystem::path& root, const LabelRule& rule = LabelRule::standard_prefixes())
{
    namespace fs = std::filesystem;
    std::error_code ec;
    if (!fs::is_directory(root, ec))
        throw Error(ErrorKind::IngestError, "corpus directory '" + root.string() + "' does not exist");

    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(root)) {
        if (entry.is_regular_file() && entry.path().extension() == ".txt")
            files.push_back(entry.path());
    }
    if (files.size() < 2)
        throw Error(ErrorKind::CorpusEmpty, "'" + root.string() + "' contains " + std::to_string(files.size()) +
                                                " text file(s); at least 2 are required");

    std::vector<Document> docs;
    docs.reserve(files.size());
    for (const auto& path : files) {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw Error(ErrorKind::IngestError, "cannot read '" + path.string() + "'");
        std::ostringstream buf;
        buf << in.rdbuf();
        if (in.bad())
            throw Error(ErrorKind::IngestError, "read failure on '" + path.string() + "'");
        std::string raw = buf.str();
        if (raw.empty())
            throw Error(ErrorKind::IngestError, "'" + path.string() + "' is empty");

        Document doc;
        doc.id = path.stem().string();
        doc.label = rule.label_for(doc.id);
        if (!doc.label && rule.require_labels)
            throw Error(ErrorKind::UnlabeledDocument, "no prefix rule matches '" + doc.id + "'");
        doc.byte_len = raw.size();
        doc.text = detail::repair_utf8(raw);
        docs.push_back(std::move(doc));
    }
    return Corpus(std::move(docs));
}

inline DomainLabel label_of(const Corpus& corpus, std::string_view id)
{
    auto idx = corpus.index_of(id);
    if (!idx)
        throw Error(ErrorKind::UnknownDocument, "no document '" + std::string(id) + "'");
    const auto& doc = corpus[*idx];
    if (!doc.label)
        throw Error(ErrorKind::UnlabeledDocument, "document '" + doc.id + "' has no label");
    return *doc.label;
}

} // namespace doccluster
