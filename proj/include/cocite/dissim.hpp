#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include "cocite/csv.hpp"
#include "cocite/errors.hpp"
#include "cocite/records.hpp"
#include "cocite/registry.hpp"
#include "cocite/similarity.hpp"

namespace cocite {

struct ArticleDissimilarity {
    std::string article_id;
    JournalId published_journal = 0;
    double mean_dissimilarity = 0.0;  // meaningful only when scored
    std::uint32_t matched_refs = 0;   // reference occurrences behind the mean
    std::uint32_t skipped_refs = 0;   // unresolved or outside the matrix universe
    bool scored = false;
    // The publishing journal itself has an empty citation profile, so every
    // off-diagonal similarity in the mean was 0 by convention.
    bool published_profile_empty = false;
};

// Mean dissimilarity of one article: 1 minus the average similarity between
// the publishing journal and the journal of each reference occurrence.
// Duplicate cited journals count once per occurrence. References that do not
// resolve to a journal in the matrix are skipped, touching neither numerator
// nor denominator. An article with nothing left to average stays unscored.
inline ArticleDissimilarity article_mean_dissimilarity(const ArticleRecord& article,
                                                       const SimilarityMatrix& matrix) {
    if (article.published_journal >= matrix.dim()) {
        throw StageError("article " + article.article_id +
                         " was published in a journal outside the similarity matrix");
    }
    ArticleDissimilarity r;
    r.article_id = article.article_id;
    r.published_journal = article.published_journal;
    r.skipped_refs = article.unmatched_refs;
    double sum = 0.0;
    for (const JournalId h : article.cited_occurrences) {
        if (h >= matrix.dim()) {
            r.skipped_refs++;
            continue;
        }
        sum += matrix.lookup(article.published_journal, h);
        r.matched_refs++;
    }
    if (r.matched_refs == 0) return r;
    const double d = 1.0 - sum / static_cast<double>(r.matched_refs);
    r.mean_dissimilarity = std::min(1.0, std::max(0.0, d));
    r.scored = true;
    return r;
}

// Scores the whole corpus in input order and flags articles whose publishing
// journal has an empty profile (taken from the matrix diagnostics).
inline std::vector<ArticleDissimilarity> corpus_dissimilarities(const Corpus& corpus,
                                                                const SimilarityMatrix& matrix) {
    std::vector<std::uint8_t> profile_empty(matrix.dim(), 0);
    for (const JournalId g : matrix.empty_profiles()) {
        if (g < matrix.dim()) profile_empty[g] = 1;
    }
    std::vector<ArticleDissimilarity> results;
    results.reserve(corpus.size());
    for (const auto& article : corpus) {
        auto r = article_mean_dissimilarity(article, matrix);
        r.published_profile_empty = profile_empty[r.published_journal] != 0;
        results.push_back(std::move(r));
    }
    return results;
}

struct FilterResult {
    std::vector<ArticleDissimilarity> kept;
    std::size_t dropped = 0;   // scored articles below the reference floor
    std::size_t unscored = 0;  // articles that never had a value
    // Matched references of kept articles over matched references of all
    // scored articles; 1 when nothing was dropped.
    double retained_citation_share = 0.0;
};

inline FilterResult filter_by_min_refs(const std::vector<ArticleDissimilarity>& results,
                                       std::uint32_t min_refs) {
    FilterResult f;
    std::uint64_t kept_refs = 0;
    std::uint64_t scored_refs = 0;
    for (const auto& r : results) {
        if (!r.scored) {
            f.unscored++;
            continue;
        }
        scored_refs += r.matched_refs;
        if (r.matched_refs >= min_refs) {
            kept_refs += r.matched_refs;
            f.kept.push_back(r);
        } else {
            f.dropped++;
        }
    }
    f.retained_citation_share = scored_refs == 0 ? 0.0
                                                 : static_cast<double>(kept_refs) /
                                                       static_cast<double>(scored_refs);
    return f;
}

struct JournalDissimilarity {
    JournalId journal = 0;
    std::uint64_t article_count = 0;
    double mean_dissimilarity = 0.0;
};

// Unweighted mean of article values per publishing journal. Journals without
// a scored article are omitted. Values are summed in ascending order so the
// journal mean does not depend on article order.
inline std::vector<JournalDissimilarity> journal_mean_dissimilarity(
    const std::vector<ArticleDissimilarity>& results, JournalId n_journals) {
    std::vector<std::vector<double>> values(n_journals);
    for (const auto& r : results) {
        if (!r.scored) continue;
        if (r.published_journal >= n_journals) {
            throw StageError("article " + r.article_id + " published in unknown journal " +
                             std::to_string(r.published_journal));
        }
        values[r.published_journal].push_back(r.mean_dissimilarity);
    }
    std::vector<JournalDissimilarity> journals;
    for (JournalId g = 0; g < n_journals; ++g) {
        auto& v = values[g];
        if (v.empty()) continue;
        std::sort(v.begin(), v.end());
        double sum = 0.0;
        for (const double d : v) sum += d;
        journals.push_back({g, v.size(), sum / static_cast<double>(v.size())});
    }
    return journals;
}

// --- stage artifacts -------------------------------------------------------

inline void write_results_csv(std::ostream& out, const std::vector<ArticleDissimilarity>& results) {
    std::string buf;
    buf.reserve(48 * (results.size() + 1));
    csv::append_row(buf,
                    {"article_id", "journal_id", "mean_dissimilarity", "matched_refs",
                     "skipped_refs"});
    for (const auto& r : results) {
        if (!r.scored) continue;
        csv::append_row(buf, {r.article_id, std::to_string(r.published_journal),
                              csv::format_double(r.mean_dissimilarity),
                              std::to_string(r.matched_refs), std::to_string(r.skipped_refs)});
    }
    out << buf;
}

inline std::vector<ArticleDissimilarity> read_results_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open results file: " + path);
    std::vector<ArticleDissimilarity> results;
    std::string line;
    std::vector<std::string> fields;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (!csv::split_line(line, ',', fields) || fields.size() != 5) {
            throw ParseError(path, line_no,
                             "expected article_id,journal_id,mean_dissimilarity,"
                             "matched_refs,skipped_refs");
        }
        if (line_no == 1 && fields[0] == "article_id") continue;
        auto journal = csv::parse_int(fields[1]);
        auto value = csv::parse_double(fields[2]);
        auto matched = csv::parse_int(fields[3]);
        auto skipped = csv::parse_int(fields[4]);
        if (!journal || !value || !matched || !skipped || *journal < 0 || *matched < 1 ||
            *skipped < 0 || *value < 0.0 || *value > 1.0) {
            throw ParseError(path, line_no, "invalid result row");
        }
        ArticleDissimilarity r;
        r.article_id = fields[0];
        r.published_journal = static_cast<JournalId>(*journal);
        r.mean_dissimilarity = *value;
        r.matched_refs = static_cast<std::uint32_t>(*matched);
        r.skipped_refs = static_cast<std::uint32_t>(*skipped);
        r.scored = true;
        results.push_back(std::move(r));
    }
    return results;
}

inline void write_journal_csv(std::ostream& out, const std::vector<JournalDissimilarity>& journals,
                              const JournalRegistry& registry) {
    std::string buf;
    buf.reserve(48 * (journals.size() + 1));
    csv::append_row(buf, {"journal_id", "name", "article_count", "mean_dissimilarity"});
    for (const auto& j : journals) {
        csv::append_row(buf, {std::to_string(j.journal), registry.name(j.journal),
                              std::to_string(j.article_count),
                              csv::format_double(j.mean_dissimilarity)});
    }
    out << buf;
}

inline std::vector<JournalDissimilarity> read_journal_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open journal results file: " + path);
    std::vector<JournalDissimilarity> journals;
    std::string line;
    std::vector<std::string> fields;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (!csv::split_line(line, ',', fields) || fields.size() != 4) {
            throw ParseError(path, line_no,
                             "expected journal_id,name,article_count,mean_dissimilarity");
        }
        if (line_no == 1 && fields[0] == "journal_id") continue;
        auto journal = csv::parse_int(fields[0]);
        auto count = csv::parse_int(fields[2]);
        auto value = csv::parse_double(fields[3]);
        if (!journal || !count || !value || *journal < 0 || *count < 1 || *value < 0.0 ||
            *value > 1.0) {
            throw ParseError(path, line_no, "invalid journal row");
        }
        journals.push_back({static_cast<JournalId>(*journal),
                            static_cast<std::uint64_t>(*count), *value});
    }
    return journals;
}

}  // namespace cocite
