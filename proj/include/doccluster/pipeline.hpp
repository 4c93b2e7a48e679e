#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "doccluster/clustering.hpp"
#include "doccluster/corpus.hpp"
#include "doccluster/error.hpp"
#include "doccluster/evaluation.hpp"
#include "doccluster/interop.hpp"
#include "doccluster/preprocess.hpp"
#include "doccluster/summarization.hpp"
#include "doccluster/synthetic.hpp"
#include "doccluster/weighting.hpp"

namespace doccluster {

enum class AlgorithmChoice { kmeans, kmedoids, both };

inline AlgorithmChoice parse_algorithm_choice(std::string_view s)
{
    if (s == "both")
        return AlgorithmChoice::both;
    return parse_algorithm(s) == Algorithm::kmeans ? AlgorithmChoice::kmeans : AlgorithmChoice::kmedoids;
}

inline std::vector<Algorithm> selected_algorithms(AlgorithmChoice c)
{
    switch (c) {
    case AlgorithmChoice::kmeans: return {Algorithm::kmeans};
    case AlgorithmChoice::kmedoids: return {Algorithm::kmedoids};
    case AlgorithmChoice::both: break;
    }
    return {Algorithm::kmeans, Algorithm::kmedoids};
}

/// "e:entertainment,s:sport" -> {e: entertainment, s: sport}.
inline std::map<std::string, std::string> parse_prefix_labels(std::string_view text)
{
    std::map<std::string, std::string> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto end = text.find(',', pos);
        if (end == std::string_view::npos)
            end = text.size();
        auto item = text.substr(pos, end - pos);
        while (!item.empty() && item.front() == ' ')
            item.remove_prefix(1);
        while (!item.empty() && item.back() == ' ')
            item.remove_suffix(1);
        if (!item.empty()) {
            auto colon = item.find(':');
            if (colon == std::string_view::npos || colon == 0 || colon + 1 == item.size())
                throw Error(ErrorKind::ParseError, "prefix label entry '" + std::string(item) +
                                                       "' is not of the form prefix:label");
            out[std::string(item.substr(0, colon))] = std::string(item.substr(colon + 1));
        }
        pos = end + 1;
    }
    return out;
}

struct PipelineConfig {
    std::filesystem::path corpus_dir;
    std::map<std::string, std::string> prefix_labels;  // empty -> e/l/s/p/z defaults
    std::optional<std::filesystem::path> stoplist_path;
    Scheme scheme = Scheme::tfidf;
    std::size_t k = 5;
    Metric metric = Metric::manhattan;
    AlgorithmChoice algorithm = AlgorithmChoice::both;
    std::uint64_t seed = 42;
    std::size_t restarts = 10;
    std::optional<std::size_t> max_terms;
    std::size_t summary_sentences = 3;
    bool length_normalized = false;
    std::filesystem::path out_dir = "out";
    std::string relation_name = "documents";

    void validate() const
    {
        if (k < 1)
            throw Error(ErrorKind::DomainError, "k must be at least 1");
        if (restarts < 1)
            throw Error(ErrorKind::DomainError, "restarts must be at least 1");
        if (summary_sentences < 1)
            throw Error(ErrorKind::DomainError, "summary-sentences must be at least 1");
    }

    LabelRule label_rule(bool require) const
    {
        LabelRule rule = prefix_labels.empty() ? LabelRule::standard_prefixes() : LabelRule{prefix_labels, false};
        rule.require_labels = require;
        return rule;
    }
};

inline std::filesystem::path clustering_path(const PipelineConfig& cfg, Algorithm a)
{
    return cfg.out_dir / ("clustering_" + std::string(algorithm_name(a)) + ".json");
}

namespace detail {

// Tracks the pipeline stage so failures can be attributed.
struct Stage {
    std::string name = "config";
};

inline int report_failure(const Stage& stage, const std::exception& e, std::ostream& err)
{
    err << "error [" << stage.name << "]: " << e.what() << "\n";
    return 1;
}

template <typename Fn>
int guarded(Stage& stage, std::ostream& err, Fn&& fn)
{
    try {
        return fn();
    } catch (const Error& e) {
        return report_failure(stage, e, err);
    } catch (const std::exception& e) {
        return report_failure(stage, e, err);
    }
}

struct Prepared {
    Corpus corpus;
    StopList stop;
    WeightedMatrix matrix;
};

inline Prepared prepare(const PipelineConfig& cfg, bool require_labels, Stage& stage, std::ostream& err)
{
    stage.name = "config";
    cfg.validate();
    stage.name = "ingest";
    Corpus corpus = load_corpus(cfg.corpus_dir, cfg.label_rule(require_labels));
    stage.name = "preprocess";
    StopList stop = cfg.stoplist_path ? load_stop_list(*cfg.stoplist_path) : default_stop_list();
    stage.name = "matrix";
    auto vocab = build_vocabulary(corpus, stop, cfg.max_terms);
    auto matrix = build_matrix(corpus, vocab, cfg.scheme, stop);
    for (const auto& w : matrix.warnings)
        err << "warning: " << w << "\n";
    return {std::move(corpus), std::move(stop), std::move(matrix)};
}

inline void write_file(const std::filesystem::path& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary);
    detail::write_all(out, content, path.string());
}

inline std::vector<std::pair<Algorithm, Clustering>> load_clusterings(const PipelineConfig& cfg, const Corpus& corpus)
{
    std::vector<std::pair<Algorithm, Clustering>> out;
    for (auto a : selected_algorithms(cfg.algorithm)) {
        const auto path = clustering_path(cfg, a);
        if (!std::filesystem::exists(path))
            continue;
        std::ifstream in(path);
        json j;
        try {
            in >> j;
        } catch (const json::exception& e) {
            throw Error(ErrorKind::ParseError, path.string() + ": " + e.what());
        }
        out.emplace_back(a, clustering_from_json(j, corpus));
    }
    if (out.empty())
        throw Error(ErrorKind::IngestError, "no clustering files found in '" + cfg.out_dir.string() +
                                                "'; run the cluster command first");
    return out;
}

inline ComparisonTable build_comparison(const std::vector<std::pair<Algorithm, Clustering>>& runs,
                                        const Corpus& corpus)
{
    std::vector<EfficiencyReport> reports;
    for (const auto& [a, c] : runs)
        reports.push_back(cluster_efficiency(c, corpus));
    if (reports.size() == 1)
        return ComparisonTable::single(std::move(reports.front()));
    return compare(reports[0], reports[1]);
}

} // namespace detail

/// ingest -> preprocess -> matrix -> clustering; writes matrix.csv and
/// clustering_<algorithm>.json into out_dir.
inline int cmd_cluster(const PipelineConfig& cfg, std::ostream& out, std::ostream& err)
{
    detail::Stage stage;
    return detail::guarded(stage, err, [&] {
        auto prep = detail::prepare(cfg, false, stage, err);

        std::vector<std::pair<Algorithm, Clustering>> runs;
        stage.name = "clustering";
        for (auto a : selected_algorithms(cfg.algorithm))
            runs.emplace_back(a, run_restarts(prep.matrix, cfg.k, cfg.metric, a, cfg.seed, cfg.restarts));

        stage.name = "write";
        std::filesystem::create_directories(cfg.out_dir);
        {
            std::ofstream csv(cfg.out_dir / "matrix.csv", std::ios::binary);
            write_matrix_csv(prep.matrix, csv);
        }
        for (const auto& [a, c] : runs) {
            detail::write_file(clustering_path(cfg, a), clustering_to_json(c, prep.matrix).dump(2) + "\n");
            out << algorithm_name(a) << ": objective " << detail::shortest(c.objective) << ", seed " << c.seed
                << ", " << c.iterations << " iteration(s)\n";
        }
        return 0;
    });
}

/// Scores the stored clusterings against domain labels and writes
/// comparison.txt / comparison.json.
inline int cmd_evaluate(const PipelineConfig& cfg, std::ostream& out, std::ostream& err)
{
    detail::Stage stage;
    return detail::guarded(stage, err, [&] {
        cfg.validate();
        stage.name = "ingest";
        const auto corpus = load_corpus(cfg.corpus_dir, cfg.label_rule(true));
        stage.name = "evaluate";
        const auto runs = detail::load_clusterings(cfg, corpus);
        const auto table = detail::build_comparison(runs, corpus);

        stage.name = "write";
        std::ostringstream text;
        write_report(table, ReportFormat::text, text);
        detail::write_file(cfg.out_dir / "comparison.txt", text.str());
        std::ostringstream js;
        write_report(table, ReportFormat::json, js);
        detail::write_file(cfg.out_dir / "comparison.json", js.str());
        out << text.str();
        return 0;
    });
}

/// Summarizes every document of the best cluster of the winning algorithm.
inline int cmd_summarize(const PipelineConfig& cfg, std::ostream& out, std::ostream& err)
{
    detail::Stage stage;
    return detail::guarded(stage, err, [&] {
        auto prep = detail::prepare(cfg, true, stage, err);
        stage.name = "evaluate";
        const auto runs = detail::load_clusterings(cfg, prep.corpus);
        const auto table = detail::build_comparison(runs, prep.corpus);
        const Algorithm chosen = table.winner.value_or(table.reports.front().algorithm);
        const EfficiencyReport* report = nullptr;
        const Clustering* clustering = nullptr;
        for (std::size_t i = 0; i < runs.size(); ++i) {
            if (runs[i].first == chosen) {
                clustering = &runs[i].second;
                report = &table.reports[i];
            }
        }
        const std::size_t cluster = best_cluster(*report);

        stage.name = "summarize";
        Warnings skipped;
        SummaryOptions opts{cfg.length_normalized, &prep.stop};
        const auto summaries =
            summarize_cluster(cluster, *clustering, prep.corpus, prep.matrix, cfg.summary_sentences, opts, &skipped);
        for (const auto& w : skipped)
            err << "warning: skipped " << w << "\n";

        stage.name = "write";
        const auto dir = cfg.out_dir / "summaries";
        std::filesystem::create_directories(dir);
        for (const auto& s : summaries) {
            std::ostringstream text;
            write_report(std::vector<Summary>{s}, ReportFormat::text, text);
            detail::write_file(dir / (s.doc_id + ".txt"), text.str());
        }
        std::ostringstream js;
        write_report(summaries, ReportFormat::json, js);
        detail::write_file(cfg.out_dir / "summaries.json", js.str());

        const auto& score = *std::find_if(report->scores.begin(), report->scores.end(),
                                          [&](const ClusterScore& s) { return s.cluster == cluster; });
        out << "best cluster: " << display_name(chosen) << " cluster " << cluster << " (" << score.size
            << " documents, " << score.display() << "% " << score.majority_label.name() << ")\n"
            << "wrote " << summaries.size() << " summaries to " << dir.string() << "\n";
        return 0;
    });
}

inline int cmd_export_arff(const PipelineConfig& cfg, std::ostream& out, std::ostream& err)
{
    detail::Stage stage;
    return detail::guarded(stage, err, [&] {
        auto prep = detail::prepare(cfg, false, stage, err);
        stage.name = "write";
        std::filesystem::create_directories(cfg.out_dir);
        const auto path = cfg.out_dir / "corpus.arff";
        std::ofstream file(path, std::ios::binary);
        const auto bytes = write_arff(prep.matrix, cfg.relation_name, file);
        out << "wrote " << path.string() << " (" << prep.matrix.n_cols() << " terms, " << prep.matrix.n_rows()
            << " documents, " << bytes << " bytes)\n";
        return 0;
    });
}

inline int cmd_gen_corpus(std::size_t n_domains, std::size_t docs_per_domain, std::uint64_t seed,
                          const std::filesystem::path& out_dir, std::ostream& out, std::ostream& err)
{
    detail::Stage stage{"generate"};
    return detail::guarded(stage, err, [&] {
        SyntheticSpec spec;
        spec.n_domains = n_domains;
        spec.docs_per_domain = docs_per_domain;
        spec.seed = seed;
        const auto n = write_synthetic_corpus(spec, out_dir);
        out << "wrote " << n << " documents to " << out_dir.string() << "\n";
        return 0;
    });
}

} // namespace doccluster
