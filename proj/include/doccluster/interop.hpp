#pragma once

#include <algorithm>
#include <cctype>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "doccluster/clustering.hpp"
#include "doccluster/corpus.hpp"
#include "doccluster/error.hpp"
#include "doccluster/evaluation.hpp"
#include "doccluster/numfmt.hpp"
#include "doccluster/summarization.hpp"
#include "doccluster/weighting.hpp"

namespace doccluster {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// ARFF
// ---------------------------------------------------------------------------

/// The ARFF subset written by write_arff: numeric attributes w1..wN followed
/// by one nominal attribute listing the document ids.
struct ArffDocument {
    struct Row {
        std::vector<double> values;
        std::string id;
        friend bool operator==(const Row&, const Row&) = default;
    };

    std::string relation_name;
    std::vector<std::string> numeric_attrs;
    std::string nominal_attr = "doc";
    std::vector<std::string> nominal_values;
    std::vector<Row> rows;

    friend bool operator==(const ArffDocument&, const ArffDocument&) = default;
};

namespace detail {

inline void write_all(std::ostream& out, const std::string& text, std::string_view what)
{
    if (!out)
        throw Error(ErrorKind::IoError, "sink is not writable (" + std::string(what) + ")");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.flush();
    if (!out)
        throw Error(ErrorKind::IoError, "write failed (" + std::string(what) + ")");
}

inline std::string arff_quote(std::string_view s)
{
    const bool plain = !s.empty() && s.find_first_of(" \t\r\n,{}'\"%\\") == std::string_view::npos;
    if (plain)
        return std::string(s);
    std::string out = "'";
    for (char c : s) {
        if (c == '\'' || c == '\\')
            out.push_back('\\');
        if (c == '\n')
            out += "\\n";
        else if (c == '\r')
            out += "\\r";
        else if (c == '\t')
            out += "\\t";
        else
            out.push_back(c);
    }
    out.push_back('\'');
    return out;
}

[[noreturn]] inline void parse_fail(std::size_t line, const std::string& msg)
{
    throw Error(ErrorKind::ParseError, "line " + std::to_string(line) + ": " + msg);
}

// Splits a comma-separated list honoring ARFF single/double quoting.
inline std::vector<std::string> arff_fields(std::string_view s, std::size_t line)
{
    std::vector<std::string> out;
    std::size_t i = 0;
    auto skip_ws = [&] {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t'))
            ++i;
    };
    while (true) {
        skip_ws();
        std::string field;
        if (i < s.size() && (s[i] == '\'' || s[i] == '"')) {
            const char q = s[i++];
            bool closed = false;
            while (i < s.size()) {
                char c = s[i++];
                if (c == '\\' && i < s.size()) {
                    char e = s[i++];
                    field.push_back(e == 'n' ? '\n' : e == 'r' ? '\r' : e == 't' ? '\t' : e);
                } else if (c == q) {
                    closed = true;
                    break;
                } else {
                    field.push_back(c);
                }
            }
            if (!closed)
                parse_fail(line, "unterminated quoted value");
            skip_ws();
        } else {
            while (i < s.size() && s[i] != ',')
                field.push_back(s[i++]);
            while (!field.empty() && (field.back() == ' ' || field.back() == '\t'))
                field.pop_back();
        }
        out.push_back(std::move(field));
        if (i >= s.size())
            break;
        if (s[i] != ',')
            parse_fail(line, "expected ',' after value");
        ++i;
    }
    return out;
}

inline std::string lower(std::string_view s)
{
    std::string out(s);
    for (auto& c : out)
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

} // namespace detail

/// Writes the matrix as ARFF: @relation, w1..wN numeric attributes, the
/// nominal "doc" attribute, then one data row per document. Returns bytes written.
inline std::size_t write_arff(const WeightedMatrix& m, std::string_view relation_name, std::ostream& out)
{
    if (m.rows.empty() || m.vocab.empty())
        throw Error(ErrorKind::EmptyVocabulary, "cannot write ARFF for an empty matrix");

    std::string text = "@relation " + detail::arff_quote(relation_name) + "\n";
    for (std::size_t j = 1; j <= m.n_cols(); ++j)
        text += "@attribute w" + std::to_string(j) + " numeric\n";
    text += "@attribute doc {";
    for (std::size_t i = 0; i < m.rows.size(); ++i) {
        if (i)
            text += ',';
        text += detail::arff_quote(m.rows[i].doc_id);
    }
    text += "}\n@data\n";
    for (const auto& r : m.rows) {
        for (double w : r.weights)
            text += detail::shortest(w) + ',';
        text += detail::arff_quote(r.doc_id) + '\n';
    }
    detail::write_all(out, text, "ARFF");
    return text.size();
}

inline ArffDocument read_arff(std::istream& in)
{
    ArffDocument doc;
    std::string line;
    std::size_t lineno = 0;
    bool seen_relation = false, seen_nominal = false, in_data = false;

    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        std::string_view sv = line;
        while (!sv.empty() && std::isspace(static_cast<unsigned char>(sv.front())))
            sv.remove_prefix(1);
        if (sv.empty() || (!in_data && sv.front() == '%'))
            continue;

        if (in_data) {
            auto fields = detail::arff_fields(sv, lineno);
            if (fields.size() != doc.numeric_attrs.size() + 1)
                detail::parse_fail(lineno, "expected " + std::to_string(doc.numeric_attrs.size() + 1) +
                                               " values, found " + std::to_string(fields.size()));
            ArffDocument::Row row;
            for (std::size_t j = 0; j < doc.numeric_attrs.size(); ++j) {
                auto v = detail::parse_double(fields[j]);
                if (!v)
                    detail::parse_fail(lineno, "'" + fields[j] + "' is not numeric");
                row.values.push_back(*v);
            }
            row.id = fields.back();
            if (std::find(doc.nominal_values.begin(), doc.nominal_values.end(), row.id) == doc.nominal_values.end())
                detail::parse_fail(lineno, "'" + row.id + "' is not a declared value of " + doc.nominal_attr);
            doc.rows.push_back(std::move(row));
            continue;
        }

        auto space = sv.find_first_of(" \t");
        const auto keyword = detail::lower(sv.substr(0, space));
        std::string_view rest = space == std::string_view::npos ? std::string_view{} : sv.substr(space);
        while (!rest.empty() && std::isspace(static_cast<unsigned char>(rest.front())))
            rest.remove_prefix(1);
        while (!rest.empty() && std::isspace(static_cast<unsigned char>(rest.back())))
            rest.remove_suffix(1);

        if (keyword == "@relation") {
            auto f = detail::arff_fields(rest, lineno);
            if (f.size() != 1 || f[0].empty())
                detail::parse_fail(lineno, "malformed @relation");
            doc.relation_name = f[0];
            seen_relation = true;
        } else if (keyword == "@attribute") {
            if (!seen_relation)
                detail::parse_fail(lineno, "@attribute before @relation");
            if (seen_nominal)
                detail::parse_fail(lineno, "attribute after the nominal document attribute");
            std::string name;
            std::size_t pos = 0;
            if (!rest.empty() && (rest.front() == '\'' || rest.front() == '"')) {
                auto close = rest.find(rest.front(), 1);
                if (close == std::string_view::npos)
                    detail::parse_fail(lineno, "unterminated attribute name");
                name = std::string(rest.substr(1, close - 1));
                pos = close + 1;
            } else {
                pos = rest.find_first_of(" \t");
                if (pos == std::string_view::npos)
                    detail::parse_fail(lineno, "attribute without a type");
                name = std::string(rest.substr(0, pos));
            }
            std::string_view type = rest.substr(pos);
            while (!type.empty() && std::isspace(static_cast<unsigned char>(type.front())))
                type.remove_prefix(1);
            if (!type.empty() && type.front() == '{') {
                if (type.back() != '}')
                    detail::parse_fail(lineno, "unterminated nominal value set");
                doc.nominal_attr = name;
                doc.nominal_values = detail::arff_fields(type.substr(1, type.size() - 2), lineno);
                std::set<std::string> uniq(doc.nominal_values.begin(), doc.nominal_values.end());
                if (uniq.size() != doc.nominal_values.size())
                    detail::parse_fail(lineno, "duplicate nominal values");
                seen_nominal = true;
            } else {
                const auto t = detail::lower(type);
                if (t != "numeric" && t != "real" && t != "integer")
                    detail::parse_fail(lineno, "unsupported attribute type '" + std::string(type) + "'");
                doc.numeric_attrs.push_back(std::move(name));
            }
        } else if (keyword == "@data") {
            if (!seen_relation || !seen_nominal)
                detail::parse_fail(lineno, "@data before the header is complete");
            in_data = true;
        } else {
            detail::parse_fail(lineno, "unexpected '" + std::string(sv.substr(0, space)) + "'");
        }
    }
    if (!in_data)
        detail::parse_fail(lineno, "missing @data section");
    return doc;
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

inline json clustering_to_json(const Clustering& c, const WeightedMatrix& m)
{
    json assignment = json::object();
    for (std::size_t i = 0; i < c.assignment.size(); ++i)
        assignment[m.rows.at(i).doc_id] = c.assignment[i];
    json reps = json::array();
    if (c.algorithm == Algorithm::kmedoids) {
        for (auto idx : c.medoids)
            reps.push_back(m.rows.at(idx).doc_id);
    } else {
        for (const auto& r : c.representatives)
            reps.push_back(r);
    }
    return json{{"algorithm", algorithm_name(c.algorithm)},
                {"metric", metric_name(c.metric)},
                {"k", c.k},
                {"seed", c.seed},
                {"objective", c.objective},
                {"iterations", c.iterations},
                {"assignment", std::move(assignment)},
                {"representatives", std::move(reps)}};
}

/// Rebuilds a clustering over `corpus` order from its JSON export.
/// K-medoids representatives are resolved to row indices only.
inline Clustering clustering_from_json(const json& j, const Corpus& corpus)
{
    try {
        Clustering c;
        c.algorithm = parse_algorithm(j.at("algorithm").get<std::string>());
        c.metric = parse_metric(j.at("metric").get<std::string>());
        c.k = j.at("k").get<std::size_t>();
        c.seed = j.at("seed").get<std::uint64_t>();
        c.objective = j.at("objective").get<double>();
        c.iterations = j.at("iterations").get<std::size_t>();

        const auto& assignment = j.at("assignment");
        if (assignment.size() != corpus.size())
            throw Error(ErrorKind::IncomparableReports, "clustering covers " + std::to_string(assignment.size()) +
                                                            " documents, corpus has " + std::to_string(corpus.size()));
        c.assignment.resize(corpus.size());
        for (std::size_t i = 0; i < corpus.size(); ++i) {
            auto it = assignment.find(corpus[i].id);
            if (it == assignment.end())
                throw Error(ErrorKind::UnknownDocument, "clustering has no entry for '" + corpus[i].id + "'");
            c.assignment[i] = it->get<std::size_t>();
            if (c.assignment[i] >= c.k)
                throw Error(ErrorKind::ParseError, "cluster ordinal out of range for '" + corpus[i].id + "'");
        }
        for (const auto& r : j.at("representatives")) {
            if (c.algorithm == Algorithm::kmedoids) {
                auto idx = corpus.index_of(r.get<std::string>());
                if (!idx)
                    throw Error(ErrorKind::UnknownDocument, "unknown medoid '" + r.get<std::string>() + "'");
                c.medoids.push_back(*idx);
            } else {
                c.representatives.push_back(r.get<std::vector<double>>());
            }
        }
        return c;
    } catch (const json::exception& e) {
        throw Error(ErrorKind::ParseError, std::string("clustering JSON: ") + e.what());
    }
}

inline void to_json(json& j, const ClusterScore& s)
{
    j = json{{"cluster", s.cluster},
             {"size", s.size},
             {"majority_label", s.majority_label.name()},
             {"majority_count", s.majority_count},
             {"efficiency", s.efficiency},
             {"efficiency_display", s.display()}};
}

inline void from_json(const json& j, ClusterScore& s)
{
    s = ClusterScore::make(j.at("cluster").get<std::size_t>(), j.at("size").get<std::size_t>(),
                           DomainLabel(j.at("majority_label").get<std::string>()),
                           j.at("majority_count").get<std::size_t>());
}

inline void to_json(json& j, const EfficiencyReport& r)
{
    j = json{{"algorithm", algorithm_name(r.algorithm)},
             {"scores", r.scores},
             {"mean_efficiency", r.mean_efficiency},
             {"total_majority", r.total_majority},
             {"doc_count", r.doc_count},
             {"fingerprint", r.fingerprint}};
}

inline void from_json(const json& j, EfficiencyReport& r)
{
    r = EfficiencyReport::from_scores(parse_algorithm(j.at("algorithm").get<std::string>()),
                                      j.at("scores").get<std::vector<ClusterScore>>(),
                                      j.at("fingerprint").get<std::uint64_t>());
}

inline void to_json(json& j, const ComparisonTable& t)
{
    j = json{{"reports", t.reports},
             {"winner", t.winner ? json(algorithm_name(*t.winner)) : json(nullptr)},
             {"tie", t.tie()}};
}

inline void from_json(const json& j, ComparisonTable& t)
{
    t.reports = j.at("reports").get<std::vector<EfficiencyReport>>();
    const auto& w = j.at("winner");
    t.winner = w.is_null() ? std::nullopt : std::optional(parse_algorithm(w.get<std::string>()));
}

inline void to_json(json& j, const Summary& s)
{
    json sentences = json::array();
    for (const auto& ss : s.selected)
        sentences.push_back({{"index", ss.sentence.index}, {"weight", ss.weight}, {"text", ss.sentence.text}});
    j = json{{"doc_id", s.doc_id}, {"sentences", std::move(sentences)}};
}

/// Token lists are not serialized; they are re-derived from the text.
inline void from_json(const json& j, Summary& s)
{
    s.doc_id = j.at("doc_id").get<std::string>();
    s.selected.clear();
    for (const auto& e : j.at("sentences")) {
        ScoredSentence ss;
        ss.sentence.index = e.at("index").get<std::size_t>();
        ss.sentence.text = e.at("text").get<std::string>();
        ss.weight = e.at("weight").get<double>();
        s.selected.push_back(std::move(ss));
    }
    s.n_requested = s.selected.size();
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

enum class ReportFormat { text, json };

inline std::string_view display_name(Algorithm a)
{
    return a == Algorithm::kmeans ? "K-Means" : "K-Medoids";
}

namespace detail {

inline std::string pad(std::string s, std::size_t width)
{
    if (s.size() < width)
        s.append(width - s.size(), ' ');
    return s;
}

inline std::string table_text(const std::vector<EfficiencyReport>& reports)
{
    constexpr std::size_t w1 = 12, w2 = 16, w3 = 21;
    std::string out = pad("Algorithm", w1) + pad("Cluster number", w2) + pad("Number of documents", w3) +
                      "Efficiency\n";
    for (const auto& r : reports) {
        bool first = true;
        for (const auto& s : r.scores) {
            out += pad(first ? std::string(display_name(r.algorithm)) : "", w1);
            out += pad(std::to_string(s.cluster), w2) + pad(std::to_string(s.size), w3) + s.display() + "%\n";
            first = false;
        }
    }
    return out;
}

inline std::string render_text(const EfficiencyReport& r)
{
    return table_text({r}) + "Mean efficiency: " + format_percent(r.mean_efficiency) + "%\n";
}

inline std::string render_text(const ComparisonTable& t)
{
    std::string out = table_text(t.reports);
    for (const auto& r : t.reports)
        out += "Mean efficiency (" + std::string(display_name(r.algorithm)) + "): " +
               format_percent(r.mean_efficiency) + "%\n";
    if (t.winner)
        out += "Winner: " + std::string(display_name(*t.winner)) + "\n";
    else if (t.tie())
        out += "Winner: tie\n";
    return out;
}

inline std::string render_text(const std::vector<Summary>& summaries)
{
    std::string out;
    for (const auto& s : summaries) {
        out += "== " + s.doc_id + " ==\n";
        for (const auto& ss : s.selected)
            out += ss.sentence.text + "\n";
        out += "\n";
    }
    return out;
}

} // namespace detail

/// Serializes a report as text or stable-key-ordered JSON. Returns bytes written.
template <typename Report>
std::size_t write_report(const Report& report, ReportFormat format, std::ostream& out)
{
    std::string text;
    if (format == ReportFormat::json)
        text = json(report).dump(2) + "\n";
    else
        text = detail::render_text(report);
    detail::write_all(out, text, "report");
    return text.size();
}

} // namespace doccluster
