// doccluster: command-line front end for the clustering/summarization pipeline.
//
//   doccluster gen-corpus --out-dir corpus
//   doccluster cluster    --corpus-dir corpus --out-dir out
//   doccluster evaluate   --corpus-dir corpus --out-dir out
//   doccluster summarize  --corpus-dir corpus --out-dir out
//   doccluster export-arff --corpus-dir corpus --out-dir out
//
// Every pipeline option may also come from a key=value file given with
// --config; flags on the command line win.

#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "doccluster/pipeline.hpp"

int main(int argc, char** argv)
{
    using namespace doccluster;

    CLI::App app{"Document clustering (K-means / K-medoids) and extractive summarization"};
    app.set_config("--config", "", "key=value configuration file");
    app.require_subcommand(1);
    app.fallthrough();

    std::string corpus_dir, prefix_labels, stoplist, out_dir = "out";
    std::string scheme = "tfidf", metric = "manhattan", algorithm = "both";
    std::size_t k = 5, restarts = 10, summary_sentences = 3, max_terms = 0;
    std::uint64_t seed = 42;
    bool length_normalized = false;

    app.add_option("--corpus-dir", corpus_dir, "Directory of .txt documents");
    app.add_option("--prefix-labels", prefix_labels, "Filename prefix table, e.g. e:entertainment,s:sport")
        ->delimiter(',')
        ->multi_option_policy(CLI::MultiOptionPolicy::Join);
    app.add_option("--stoplist", stoplist, "Stop list file (one word per line)");
    app.add_option("--scheme", scheme, "Term weighting: frequency | tfidf")
        ->check(CLI::IsMember({"frequency", "tfidf"}));
    app.add_option("--k", k, "Number of clusters");
    app.add_option("--metric", metric, "euclidean | manhattan")->check(CLI::IsMember({"euclidean", "manhattan"}));
    app.add_option("--algorithm", algorithm, "kmeans | kmedoids | both")
        ->check(CLI::IsMember({"kmeans", "kmedoids", "both"}));
    app.add_option("--seed", seed, "Master seed");
    app.add_option("--restarts", restarts, "Seeded restarts per algorithm");
    app.add_option("--max-terms", max_terms, "Keep only the N highest document-frequency terms (0 = all)");
    app.add_option("--summary-sentences", summary_sentences, "Sentences per summary");
    app.add_flag("--length-normalized", length_normalized, "Divide sentence weights by token count");
    app.add_option("--out-dir", out_dir, "Output directory");

    auto* gen = app.add_subcommand("gen-corpus", "Write a labeled synthetic corpus");
    std::size_t n_domains = 5, docs_per_domain = 20;
    gen->add_option("--n-domains", n_domains, "Number of domains");
    gen->add_option("--docs-per-domain", docs_per_domain, "Documents per domain");

    auto* cluster = app.add_subcommand("cluster", "Build the weighted matrix and cluster it");
    auto* evaluate = app.add_subcommand("evaluate", "Score clusterings and compare algorithms");
    auto* summarize = app.add_subcommand("summarize", "Summarize the documents of the best cluster");
    auto* export_arff = app.add_subcommand("export-arff", "Write the weighted matrix as ARFF");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (gen->parsed())
        return cmd_gen_corpus(n_domains, docs_per_domain, seed, out_dir, std::cout, std::cerr);

    PipelineConfig cfg;
    try {
        cfg.corpus_dir = corpus_dir;
        cfg.prefix_labels = parse_prefix_labels(prefix_labels);
        if (!stoplist.empty())
            cfg.stoplist_path = stoplist;
        cfg.scheme = parse_scheme(scheme);
        cfg.k = k;
        cfg.metric = parse_metric(metric);
        cfg.algorithm = parse_algorithm_choice(algorithm);
        cfg.seed = seed;
        cfg.restarts = restarts;
        if (max_terms > 0)
            cfg.max_terms = max_terms;
        cfg.summary_sentences = summary_sentences;
        cfg.length_normalized = length_normalized;
        cfg.out_dir = out_dir;
    } catch (const Error& e) {
        std::cerr << "error [config]: " << e.what() << "\n";
        return 2;
    }
    if (corpus_dir.empty()) {
        std::cerr << "error [config]: --corpus-dir is required\n";
        return 2;
    }

    if (cluster->parsed())
        return cmd_cluster(cfg, std::cout, std::cerr);
    if (evaluate->parsed())
        return cmd_evaluate(cfg, std::cout, std::cerr);
    if (summarize->parsed())
        return cmd_summarize(cfg, std::cout, std::cerr);
    if (export_arff->parsed())
        return cmd_export_arff(cfg, std::cout, std::cerr);
    return 2;
}
