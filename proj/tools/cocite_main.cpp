#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "cocite/pipeline.hpp"

namespace {

struct CliState {
    cocite::PipelineConfig config;
    std::string storage_name = "sparse";
};

// Every stage takes the same settings, so the options live on the top-level
// app and the stage subcommands pass unmatched flags up to it. This also
// lets a --config file use bare key=value entries regardless of the stage.
void register_options(CLI::App& app, CliState& state) {
    app.set_config("--config", "", "Read options from a key=value file");
    app.add_option("--out", state.config.out_dir, "Directory for stage artifacts")
        ->envname("COCITE_OUT");
    app.add_option("--citations", state.config.citations_path,
                   "Citations CSV: pub_year,article_id,citing_journal,cited_journal")
        ->envname("COCITE_CITATIONS");
    app.add_option("--categories", state.config.categories_path,
                   "Journal categories CSV: journal,category")
        ->envname("COCITE_CATEGORIES");
    app.add_option("--min-citations", state.config.min_inbound_citations,
                   "Inbound-citation floor for exported network nodes")
        ->envname("COCITE_MIN_CITATIONS")
        ->capture_default_str();
    app.add_option("--min-refs", state.config.min_refs,
                   "Matched-reference floor for journal means and decile reports")
        ->envname("COCITE_MIN_REFS")
        ->capture_default_str();
    app.add_option("--multidisciplinary-label", state.config.multidisciplinary_label,
                   "Subject category marking a journal as multidisciplinary")
        ->envname("COCITE_MULTIDISCIPLINARY_LABEL")
        ->capture_default_str();
    app.add_option("--threads", state.config.threads, "Worker threads for the similarity stage")
        ->check(CLI::Range(1u, 1024u))
        ->envname("COCITE_THREADS")
        ->capture_default_str();
    app.add_option("--storage", state.storage_name, "Similarity matrix backend")
        ->check(CLI::IsMember({"sparse", "dense"}))
        ->envname("COCITE_STORAGE")
        ->capture_default_str();
    app.add_option("--year-min", state.config.year_min, "Earliest publication year kept")
        ->envname("COCITE_YEAR_MIN")
        ->capture_default_str();
    app.add_option("--year-max", state.config.year_max, "Latest publication year kept")
        ->envname("COCITE_YEAR_MAX")
        ->capture_default_str();
    app.add_option("--bin-width", state.config.histogram_bin_width,
                   "Histogram bin width for the dissimilarity distribution")
        ->envname("COCITE_BIN_WIDTH")
        ->capture_default_str();
    app.add_option("--sparsity-floor", state.config.sparsity_floor,
                   "Drop sparse similarities at or below this value")
        ->envname("COCITE_SPARSITY_FLOOR")
        ->capture_default_str();
}

void print_ingest(const cocite::IngestStageResult& r) {
    std::cout << "ingested " << r.summary.articles << " articles from "
              << r.summary.citing_journals << " journals; " << r.summary.total_citations
              << " citations to " << r.summary.cited_journals << " journals (match rate "
              << cocite::csv::format_double(r.summary.match_rate) << ")\n";
    if (r.rows_outside_window > 0) {
        std::cerr << "note: " << r.rows_outside_window << " rows outside the year window\n";
    }
    for (const auto& w : r.warnings) std::cerr << "warning: " << w << '\n';
}

void print_similarity(const cocite::SimilarityStageResult& r) {
    std::cout << "similarity matrix over " << r.journals << " journals: " << r.stored_entries
              << " stored entries, " << r.empty_profiles << " empty profiles\n";
}

void print_dissim(const cocite::DissimStageResult& r) {
    std::cout << "scored " << r.scored << " articles (" << r.unscored
              << " unscored); reference floor kept " << r.articles_kept
              << " covering citation share "
              << cocite::csv::format_double(r.retained_citation_share) << "; " << r.journals
              << " journal means\n";
}

void print_report(const cocite::ReportStageResult& r) {
    std::cout << "reports over " << r.filtered_articles << " articles ("
              << r.cohort_articles << " outside multidisciplinary venues, "
              << r.scored_articles << " scored in total)\n";
}

void print_export(const cocite::NetworkExportStats& r) {
    std::cout << "exported " << r.nodes << " nodes and " << r.edges << " edges\n";
}

int dispatch(const std::string& command, const cocite::PipelineConfig& config) {
    if (command == "ingest") {
        print_ingest(cocite::run_ingest(config));
    } else if (command == "similarity") {
        print_similarity(cocite::run_similarity(config));
    } else if (command == "dissim") {
        print_dissim(cocite::run_dissim(config));
    } else if (command == "report") {
        print_report(cocite::run_report(config));
    } else if (command == "export") {
        print_export(cocite::run_export(config));
    } else {
        const cocite::PipelineResult r = cocite::run_pipeline(config);
        print_ingest(r.ingest);
        print_similarity(r.similarity);
        print_dissim(r.dissim);
        print_report(r.report);
        print_export(r.network);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Journal co-citation similarity and dissimilarity toolkit"};
    app.require_subcommand(1);
    app.footer("Options may be given before or after the stage name.");

    CliState state;
    register_options(app, state);
    const std::pair<const char*, const char*> stages[] = {
        {"ingest", "Parse citations into corpus artifacts"},
        {"similarity", "Compute pairwise journal similarities"},
        {"dissim", "Score article and journal mean dissimilarities"},
        {"report", "Build distribution and decile reports"},
        {"export", "Write map and network files"},
        {"run", "Run the whole pipeline"},
    };
    for (const auto& [name, description] : stages) {
        app.add_subcommand(name, description)->fallthrough(true);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    state.config.storage =
        state.storage_name == "dense" ? cocite::StorageMode::dense : cocite::StorageMode::sparse;
    const std::string command = app.get_subcommands().front()->get_name();

    try {
        return dispatch(command, state.config);
    } catch (const cocite::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
