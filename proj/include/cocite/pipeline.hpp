#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "cocite/analytics.hpp"
#include "cocite/categories.hpp"
#include "cocite/count_matrix.hpp"
#include "cocite/csv.hpp"
#include "cocite/dissim.hpp"
#include "cocite/errors.hpp"
#include "cocite/ingest.hpp"
#include "cocite/network_export.hpp"
#include "cocite/profiles.hpp"
#include "cocite/records.hpp"
#include "cocite/registry.hpp"
#include "cocite/similarity.hpp"

namespace cocite {

struct PipelineConfig {
    std::string citations_path;
    std::string categories_path;  // empty = run without category analytics
    int year_min = 0;
    int year_max = 9999;
    std::uint64_t min_inbound_citations = 10;  // network export node floor
    std::uint32_t min_refs = 10;               // article floor for deciles and journal means
    std::string multidisciplinary_label = "Multidisciplinary Sciences";
    StorageMode storage = StorageMode::sparse;
    double sparsity_floor = 0.0;
    unsigned threads = 1;
    std::string out_dir;
    double histogram_bin_width = 0.02;
};

// Artifact layout inside the output directory. Stages communicate through
// these files only, so any stage can be rerun from its predecessors' output.
struct ArtifactPaths {
    explicit ArtifactPaths(const std::string& out_dir) : dir(out_dir) {}

    std::string registry() const { return (dir / "registry.csv").string(); }
    std::string records() const { return (dir / "records.csv").string(); }
    std::string corpus() const { return (dir / "corpus.csv").string(); }
    std::string summary() const { return (dir / "summary.txt").string(); }
    std::string matrix(StorageMode m) const {
        return (dir / (m == StorageMode::dense ? "matrix.bin" : "matrix.csv")).string();
    }
    std::string matrix_diagnostics() const { return (dir / "matrix_diagnostics.csv").string(); }
    std::string article_results() const { return (dir / "article_dissimilarity.csv").string(); }
    std::string journal_results() const { return (dir / "journal_dissimilarity.csv").string(); }
    std::string histogram() const { return (dir / "histogram.csv").string(); }
    std::string decile_report() const { return (dir / "decile_report.csv").string(); }
    std::string category_diversity() const { return (dir / "category_diversity.csv").string(); }
    std::string article_categories() const { return (dir / "article_categories.csv").string(); }
    std::string map_file() const { return (dir / "map.txt").string(); }
    std::string network_file() const { return (dir / "network.txt").string(); }

    std::filesystem::path dir;
};

namespace detail {

// Removes a stage's output files if the stage throws, so a failed run never
// leaves half-written artifacts behind.
class ArtifactGuard {
public:
    ArtifactGuard() = default;
    ArtifactGuard(const ArtifactGuard&) = delete;
    ArtifactGuard& operator=(const ArtifactGuard&) = delete;
    ~ArtifactGuard() {
        if (!armed_) return;
        for (const auto& p : paths_) {
            std::error_code ec;
            std::filesystem::remove(p, ec);
        }
    }

    const std::string& track(const std::string& path) {
        paths_.push_back(path);
        return paths_.back();
    }
    void dismiss() { armed_ = false; }

private:
    std::vector<std::string> paths_;
    bool armed_ = true;
};

template <class Fn>
void write_artifact(const std::string& path, Fn&& fn) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw StageError("cannot create " + path);
    fn(out);
    out.flush();
    if (!out) throw StageError("failed writing " + path);
}

inline void ensure_out_dir(const PipelineConfig& config) {
    if (config.out_dir.empty()) throw ConfigError("no output directory given");
    std::error_code ec;
    std::filesystem::create_directories(config.out_dir, ec);
    if (ec) throw ConfigError("cannot create output directory " + config.out_dir);
}

inline void validate(const PipelineConfig& config) {
    if (config.year_min > config.year_max) {
        throw ConfigError("year window start exceeds its end");
    }
    if (!(config.histogram_bin_width > 0.0) || config.histogram_bin_width > 1.0) {
        throw ConfigError("histogram bin width must be in (0, 1]");
    }
    if (config.sparsity_floor < 0.0 || config.sparsity_floor >= 1.0) {
        throw ConfigError("sparsity floor must be in [0, 1)");
    }
}

inline JournalRegistry load_registry(const ArtifactPaths& paths) {
    return JournalRegistry::read_csv(paths.registry());
}

inline SimilarityMatrix load_matrix(const ArtifactPaths& paths, const PipelineConfig& config,
                                    JournalId n) {
    SimilarityMatrix matrix;
    if (config.storage == StorageMode::dense) {
        matrix = SimilarityMatrix::open_dense(paths.matrix(StorageMode::dense));
    } else {
        matrix = read_matrix_csv(paths.matrix(StorageMode::sparse), n);
    }
    if (matrix.dim() != n) {
        throw StageError("similarity matrix dimension does not match the registry");
    }
    return matrix;
}

inline void write_diagnostics_csv(std::ostream& out, const std::vector<JournalId>& ids) {
    std::string buf = "journal_id\n";
    for (const JournalId g : ids) {
        buf += std::to_string(g);
        buf += '\n';
    }
    out << buf;
}

inline std::vector<JournalId> read_diagnostics_csv(const std::string& path, JournalId n) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open diagnostics file: " + path);
    std::vector<JournalId> ids;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line_no == 1 && line == "journal_id") continue;
        auto id = csv::parse_int(line);
        if (!id || *id < 0 || *id >= static_cast<std::int64_t>(n)) {
            throw ParseError(path, line_no, "invalid journal id");
        }
        ids.push_back(static_cast<JournalId>(*id));
    }
    return ids;
}

}  // namespace detail

// --- stages ------------------------------------------------------------------

struct IngestStageResult {
    IngestSummary summary;
    std::vector<std::string> warnings;
    std::uint64_t rows_outside_window = 0;
};

inline IngestStageResult run_ingest(const PipelineConfig& config) {
    detail::validate(config);
    if (config.citations_path.empty()) throw ConfigError("no citations file given");
    detail::ensure_out_dir(config);
    const ArtifactPaths paths(config.out_dir);

    IngestConfig in;
    in.year_min = config.year_min;
    in.year_max = config.year_max;
    IngestResult ingest = parse_citations(config.citations_path, in);
    const IngestSummary summary = ingest_report(ingest.corpus);

    detail::ArtifactGuard guard;
    detail::write_artifact(guard.track(paths.registry()),
                           [&](std::ostream& out) { ingest.registry.write_csv(out); });
    detail::write_artifact(guard.track(paths.records()),
                           [&](std::ostream& out) { write_records_csv(out, ingest.records); });
    detail::write_artifact(guard.track(paths.corpus()),
                           [&](std::ostream& out) { write_corpus_csv(out, ingest.corpus); });
    detail::write_artifact(guard.track(paths.summary()), [&](std::ostream& out) {
        out << "articles=" << summary.articles << '\n'
            << "citing_journals=" << summary.citing_journals << '\n'
            << "cited_journals=" << summary.cited_journals << '\n'
            << "total_citations=" << summary.total_citations << '\n'
            << "unmatched_references=" << summary.unmatched_references << '\n'
            << "match_rate=" << csv::format_double(summary.match_rate) << '\n'
            << "rows_outside_window=" << ingest.rows_outside_window << '\n';
    });
    guard.dismiss();

    return {summary, std::move(ingest.warnings), ingest.rows_outside_window};
}

struct SimilarityStageResult {
    JournalId journals = 0;
    std::size_t stored_entries = 0;
    std::size_t empty_profiles = 0;
};

inline SimilarityStageResult run_similarity(const PipelineConfig& config) {
    detail::validate(config);
    detail::ensure_out_dir(config);
    const ArtifactPaths paths(config.out_dir);

    const JournalRegistry registry = detail::load_registry(paths);
    const auto records = read_records_csv(paths.records(), registry.size());
    const CountMatrix counts = aggregate_counts(records, registry.size());
    const ProfileSet profiles = build_profiles(counts);

    SimilarityOptions opts;
    opts.storage = config.storage;
    opts.sparsity_floor = config.sparsity_floor;
    opts.threads = config.threads;

    detail::ArtifactGuard guard;
    opts.dense_path = paths.matrix(StorageMode::dense);
    if (config.storage == StorageMode::dense) guard.track(opts.dense_path);

    const SimilarityMatrix matrix = pairwise_similarity(profiles, opts);
    if (config.storage == StorageMode::sparse) {
        detail::write_artifact(guard.track(paths.matrix(StorageMode::sparse)),
                               [&](std::ostream& out) { write_matrix_csv(out, matrix); });
    }
    detail::write_artifact(guard.track(paths.matrix_diagnostics()), [&](std::ostream& out) {
        detail::write_diagnostics_csv(out, profiles.empty_profiles);
    });
    guard.dismiss();

    return {registry.size(), matrix.stored_entries(), profiles.empty_profiles.size()};
}

struct DissimStageResult {
    std::size_t scored = 0;
    std::size_t unscored = 0;
    std::size_t articles_kept = 0;  // after the min-refs floor
    double retained_citation_share = 0.0;
    std::size_t journals = 0;
};

inline DissimStageResult run_dissim(const PipelineConfig& config) {
    detail::validate(config);
    detail::ensure_out_dir(config);
    const ArtifactPaths paths(config.out_dir);

    const JournalRegistry registry = detail::load_registry(paths);
    const JournalId n = registry.size();
    const auto records = read_records_csv(paths.records(), n);
    const Corpus corpus = read_corpus_csv(paths.corpus(), records, n);
    SimilarityMatrix matrix = detail::load_matrix(paths, config, n);
    matrix.set_empty_profiles(detail::read_diagnostics_csv(paths.matrix_diagnostics(), n));

    const auto results = corpus_dissimilarities(corpus, matrix);
    const FilterResult filtered = filter_by_min_refs(results, config.min_refs);
    const auto journals = journal_mean_dissimilarity(filtered.kept, n);

    detail::ArtifactGuard guard;
    detail::write_artifact(guard.track(paths.article_results()),
                           [&](std::ostream& out) { write_results_csv(out, results); });
    detail::write_artifact(guard.track(paths.journal_results()), [&](std::ostream& out) {
        write_journal_csv(out, journals, registry);
    });
    guard.dismiss();

    DissimStageResult r;
    r.unscored = filtered.unscored;
    r.scored = results.size() - filtered.unscored;
    r.articles_kept = filtered.kept.size();
    r.retained_citation_share = filtered.retained_citation_share;
    r.journals = journals.size();
    return r;
}

struct ReportStageResult {
    std::size_t scored_articles = 0;
    std::size_t filtered_articles = 0;
    std::size_t cohort_articles = 0;  // filtered minus multidisciplinary venues
};

inline ReportStageResult run_report(const PipelineConfig& config) {
    detail::validate(config);
    detail::ensure_out_dir(config);
    const ArtifactPaths paths(config.out_dir);

    const JournalRegistry registry = detail::load_registry(paths);
    const JournalId n = registry.size();
    const auto records = read_records_csv(paths.records(), n);
    const Corpus corpus = read_corpus_csv(paths.corpus(), records, n);
    const auto results = read_results_csv(paths.article_results());
    const CategoryMap categories =
        config.categories_path.empty()
            ? CategoryMap(n)
            : parse_categories(config.categories_path, registry, config.multidisciplinary_label);

    const Histogram dist = histogram(results, config.histogram_bin_width);
    const auto filtered = filter_by_min_refs(results, config.min_refs).kept;
    const DecileClasses classes = decile_classes(filtered);
    const DecileShareReport shares = multidisciplinary_share(classes, filtered, categories);

    // Diversity means are reported over articles from venues that are not
    // themselves multidisciplinary, with deciles recomputed on that cohort.
    std::vector<ArticleDissimilarity> cohort;
    cohort.reserve(filtered.size());
    for (const auto& r : filtered) {
        if (!categories.is_multidisciplinary(r.published_journal)) cohort.push_back(r);
    }
    const DecileClasses cohort_classes = decile_classes(cohort);
    const DiversityReport diversity =
        category_diversity_by_decile(cohort_classes, cohort, corpus, categories);

    std::unordered_map<std::string, const ArticleRecord*> by_id;
    by_id.reserve(corpus.size());
    for (const auto& article : corpus) by_id.emplace(article.article_id, &article);
    std::vector<ArticleCategoryBreakdown> breakdowns;
    breakdowns.reserve(filtered.size());
    for (const auto& r : filtered) {
        const auto it = by_id.find(r.article_id);
        if (it == by_id.end()) throw StageError("article missing from corpus: " + r.article_id);
        breakdowns.push_back(article_category_breakdown(*it->second, categories));
    }

    detail::ArtifactGuard guard;
    detail::write_artifact(guard.track(paths.histogram()),
                           [&](std::ostream& out) { write_histogram_csv(out, dist); });
    detail::write_artifact(guard.track(paths.decile_report()), [&](std::ostream& out) {
        write_decile_report(out, classes, shares);
    });
    detail::write_artifact(guard.track(paths.category_diversity()), [&](std::ostream& out) {
        write_diversity_report(out, diversity);
    });
    detail::write_artifact(guard.track(paths.article_categories()), [&](std::ostream& out) {
        write_breakdown_csv(out, breakdowns);
    });
    guard.dismiss();

    return {results.size(), filtered.size(), cohort.size()};
}

inline NetworkExportStats run_export(const PipelineConfig& config) {
    detail::validate(config);
    detail::ensure_out_dir(config);
    const ArtifactPaths paths(config.out_dir);

    const JournalRegistry registry = detail::load_registry(paths);
    const JournalId n = registry.size();
    const auto records = read_records_csv(paths.records(), n);
    const Corpus corpus = read_corpus_csv(paths.corpus(), records, n);
    const CountMatrix counts = aggregate_counts(records, n);
    const SimilarityMatrix matrix = detail::load_matrix(paths, config, n);
    const auto journal_stats = read_journal_csv(paths.journal_results());
    const auto article_counts = articles_per_journal(corpus, n);

    detail::ArtifactGuard guard;
    NetworkExportStats stats;
    detail::write_artifact(guard.track(paths.map_file()), [&](std::ostream& map_out) {
        detail::write_artifact(guard.track(paths.network_file()), [&](std::ostream& net_out) {
            stats = export_network(map_out, net_out, matrix, counts.inbound_total, article_counts,
                                   journal_stats, registry, config.min_inbound_citations);
        });
    });
    guard.dismiss();
    return stats;
}

struct PipelineResult {
    IngestStageResult ingest;
    SimilarityStageResult similarity;
    DissimStageResult dissim;
    ReportStageResult report;
    NetworkExportStats network;
};

// Full pipeline: each stage persists its artifacts and the next one reads
// them back, so a `run` leaves the same files behind as running the stages
// one by one.
inline PipelineResult run_pipeline(const PipelineConfig& config) {
    PipelineResult r;
    r.ingest = run_ingest(config);
    r.similarity = run_similarity(config);
    r.dissim = run_dissim(config);
    r.report = run_report(config);
    r.network = run_export(config);
    return r;
}

}  // namespace cocite
