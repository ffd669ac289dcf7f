#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cocite/csv.hpp"
#include "cocite/errors.hpp"
#include "cocite/records.hpp"
#include "cocite/registry.hpp"

namespace cocite {

// Column layout of the citations file. Defaults match the common export:
// pub_year,article_id,citing_journal,cited_journal with an optional ignored
// trailing column. Rows outside [year_min, year_max] are dropped.
struct IngestConfig {
    char delimiter = ',';
    int year_column = 0;
    int article_column = 1;
    int citing_column = 2;
    int cited_column = 3;
    int year_min = 0;
    int year_max = 9999;
};

struct IngestResult {
    JournalRegistry registry;
    Corpus corpus;
    std::vector<CitationRecord> records;
    std::vector<std::string> warnings;
    std::uint64_t rows_outside_window = 0;
    bool header_skipped = false;
};

namespace detail {

struct RawCitationRow {
    int year;
    std::string article_id;
    std::string citing;
    std::string cited;  // empty = reference that did not resolve to a journal
};

}  // namespace detail

// Parses the citations file into a registry, per-article records and the
// flat citation list. The registry covers every journal string seen, citing
// or cited, in one id space; a journal that is never cited still gets an
// entry (its inbound profile stays empty). Articles keep the order of first
// appearance; cited occurrences keep file order including duplicates.
inline IngestResult parse_citations(const std::string& path, const IngestConfig& config = {}) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open citations file: " + path);

    const int max_column = std::max(std::max(config.year_column, config.article_column),
                                    std::max(config.citing_column, config.cited_column));

    IngestResult result;
    std::vector<detail::RawCitationRow> rows;
    std::string line;
    std::vector<std::string> fields;
    std::size_t line_no = 0;
    bool saw_content_row = false;

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (csv::trim(line).empty()) continue;
        if (!csv::split_line(line, config.delimiter, fields)) {
            throw ParseError(path, line_no, "unterminated quoted field");
        }
        if (static_cast<int>(fields.size()) <= max_column) {
            throw ParseError(path, line_no,
                             "expected at least " + std::to_string(max_column + 1) + " columns, got " +
                                 std::to_string(fields.size()));
        }
        auto year = csv::parse_int(fields[config.year_column]);
        if (!year) {
            // A non-numeric year in the very first content row is a header.
            if (!saw_content_row) {
                result.header_skipped = true;
                saw_content_row = true;
                continue;
            }
            throw ParseError(path, line_no, "publication year is not an integer: '" +
                                                fields[config.year_column] + "'");
        }
        saw_content_row = true;

        std::string article_id(csv::trim(fields[config.article_column]));
        if (article_id.empty()) throw ParseError(path, line_no, "empty article id");
        std::string citing = normalize_name(fields[config.citing_column]);
        if (citing.empty()) throw ParseError(path, line_no, "empty citing journal");
        std::string cited = normalize_name(fields[config.cited_column]);

        if (*year < config.year_min || *year > config.year_max) {
            result.rows_outside_window++;
            continue;
        }
        rows.push_back({static_cast<int>(*year), std::move(article_id), std::move(citing),
                        std::move(cited)});
    }

    if (rows.empty()) {
        result.warnings.push_back("no data rows in " + path);
        return result;
    }

    RegistryBuilder builder;
    for (const auto& row : rows) {
        builder.note(row.citing, JournalRegistry::kCiting);
        if (!row.cited.empty()) builder.note(row.cited, JournalRegistry::kCited);
    }
    result.registry = builder.build();

    std::unordered_map<std::string, std::size_t> article_index;
    article_index.reserve(rows.size() / 4 + 1);
    result.records.reserve(rows.size());
    std::size_t publication_conflicts = 0;

    for (auto& row : rows) {
        const JournalId citing_id = *result.registry.find(row.citing);
        auto [it, inserted] = article_index.emplace(row.article_id, result.corpus.size());
        if (inserted) {
            ArticleRecord article;
            article.article_id = row.article_id;
            article.published_journal = citing_id;
            article.pub_year = row.year;
            result.corpus.push_back(std::move(article));
        }
        ArticleRecord& article = result.corpus[it->second];
        if (article.published_journal != citing_id) {
            // Conflicting publication venue for the same article id; the
            // first row wins, the reference itself is still counted.
            ++publication_conflicts;
        }
        if (row.cited.empty()) {
            article.unmatched_refs++;
            continue;
        }
        const JournalId cited_id = *result.registry.find(row.cited);
        article.cited_occurrences.push_back(cited_id);
        result.records.push_back(
            {std::move(row.article_id), row.year, citing_id, cited_id});
    }

    if (publication_conflicts > 0) {
        result.warnings.push_back(std::to_string(publication_conflicts) +
                                  " rows disagree on an article's publication journal"
                                  " (first occurrence kept)");
    }
    return result;
}

struct IngestSummary {
    std::uint64_t articles = 0;
    std::uint64_t citing_journals = 0;  // distinct journals articles were published in
    std::uint64_t cited_journals = 0;   // distinct journals appearing in references
    std::uint64_t total_citations = 0;  // matched reference occurrences
    std::uint64_t unmatched_references = 0;
    double match_rate = 0.0;  // matched / (matched + unmatched); 0 on an empty corpus
};

inline IngestSummary ingest_report(const Corpus& corpus) {
    IngestSummary s;
    s.articles = corpus.size();
    std::vector<JournalId> citing;
    std::vector<JournalId> cited;
    for (const auto& article : corpus) {
        citing.push_back(article.published_journal);
        s.total_citations += article.n_refs();
        s.unmatched_references += article.unmatched_refs;
        cited.insert(cited.end(), article.cited_occurrences.begin(),
                     article.cited_occurrences.end());
    }
    std::sort(citing.begin(), citing.end());
    citing.erase(std::unique(citing.begin(), citing.end()), citing.end());
    std::sort(cited.begin(), cited.end());
    cited.erase(std::unique(cited.begin(), cited.end()), cited.end());
    s.citing_journals = citing.size();
    s.cited_journals = cited.size();
    const std::uint64_t total_refs = s.total_citations + s.unmatched_references;
    s.match_rate = total_refs == 0 ? 0.0
                                   : static_cast<double>(s.total_citations) /
                                         static_cast<double>(total_refs);
    return s;
}

// --- stage artifacts -------------------------------------------------------
//
// records.csv keeps the resolved citation rows (numeric ids), corpus.csv the
// per-article bookkeeping. Together with registry.csv they reconstruct the
// corpus exactly, so later stages can run without re-parsing the raw export.

inline void write_records_csv(std::ostream& out, const std::vector<CitationRecord>& records) {
    std::string buf;
    buf.reserve(32 * (records.size() + 1));
    csv::append_row(buf, {"pub_year", "article_id", "citing_id", "cited_id"});
    for (const auto& r : records) {
        csv::append_row(buf, {std::to_string(r.pub_year), r.article_id,
                              std::to_string(r.citing_journal), std::to_string(r.cited_journal)});
    }
    out << buf;
}

inline void write_corpus_csv(std::ostream& out, const Corpus& corpus) {
    std::string buf;
    buf.reserve(32 * (corpus.size() + 1));
    csv::append_row(buf, {"article_id", "pub_year", "journal_id", "n_refs", "unmatched_refs"});
    for (const auto& a : corpus) {
        csv::append_row(buf, {a.article_id, std::to_string(a.pub_year),
                              std::to_string(a.published_journal), std::to_string(a.n_refs()),
                              std::to_string(a.unmatched_refs)});
    }
    out << buf;
}

inline std::vector<CitationRecord> read_records_csv(const std::string& path,
                                                    JournalId n_journals) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open records file: " + path);
    std::vector<CitationRecord> records;
    std::string line;
    std::vector<std::string> fields;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (!csv::split_line(line, ',', fields) || fields.size() != 4) {
            throw ParseError(path, line_no, "expected pub_year,article_id,citing_id,cited_id");
        }
        if (line_no == 1 && fields[0] == "pub_year") continue;
        auto year = csv::parse_int(fields[0]);
        auto citing = csv::parse_int(fields[2]);
        auto cited = csv::parse_int(fields[3]);
        if (!year || !citing || !cited || *citing < 0 || *cited < 0 ||
            *citing >= static_cast<std::int64_t>(n_journals) ||
            *cited >= static_cast<std::int64_t>(n_journals)) {
            throw ParseError(path, line_no, "invalid record row");
        }
        records.push_back({fields[1], static_cast<int>(*year), static_cast<JournalId>(*citing),
                           static_cast<JournalId>(*cited)});
    }
    return records;
}

inline Corpus read_corpus_csv(const std::string& path, const std::vector<CitationRecord>& records,
                              JournalId n_journals) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open corpus file: " + path);
    Corpus corpus;
    std::unordered_map<std::string, std::size_t> index;
    std::string line;
    std::vector<std::string> fields;
    std::size_t line_no = 0;
    std::vector<std::uint32_t> expected_refs;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (!csv::split_line(line, ',', fields) || fields.size() != 5) {
            throw ParseError(path, line_no,
                             "expected article_id,pub_year,journal_id,n_refs,unmatched_refs");
        }
        if (line_no == 1 && fields[0] == "article_id") continue;
        auto year = csv::parse_int(fields[1]);
        auto journal = csv::parse_int(fields[2]);
        auto n_refs = csv::parse_int(fields[3]);
        auto unmatched = csv::parse_int(fields[4]);
        if (!year || !journal || !n_refs || !unmatched || *journal < 0 ||
            *journal >= static_cast<std::int64_t>(n_journals) || *n_refs < 0 || *unmatched < 0) {
            throw ParseError(path, line_no, "invalid corpus row");
        }
        ArticleRecord article;
        article.article_id = fields[0];
        article.pub_year = static_cast<int>(*year);
        article.published_journal = static_cast<JournalId>(*journal);
        article.unmatched_refs = static_cast<std::uint32_t>(*unmatched);
        article.cited_occurrences.reserve(static_cast<std::size_t>(*n_refs));
        if (!index.emplace(article.article_id, corpus.size()).second) {
            throw ParseError(path, line_no, "duplicate article id: " + article.article_id);
        }
        expected_refs.push_back(static_cast<std::uint32_t>(*n_refs));
        corpus.push_back(std::move(article));
    }
    for (const auto& r : records) {
        auto it = index.find(r.article_id);
        if (it == index.end()) {
            throw StageError("records file mentions unknown article: " + r.article_id);
        }
        corpus[it->second].cited_occurrences.push_back(r.cited_journal);
    }
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        if (corpus[i].n_refs() != expected_refs[i]) {
            throw StageError("corpus/records mismatch for article " + corpus[i].article_id);
        }
    }
    return corpus;
}

}  // namespace cocite
