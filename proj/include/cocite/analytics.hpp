#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cocite/categories.hpp"
#include "cocite/csv.hpp"
#include "cocite/dissim.hpp"
#include "cocite/errors.hpp"
#include "cocite/records.hpp"

namespace cocite {

// --- distribution -----------------------------------------------------------

struct Histogram {
    double bin_width = 0.0;
    std::vector<std::uint64_t> counts;

    double lower(std::size_t k) const { return static_cast<double>(k) * bin_width; }
    double upper(std::size_t k) const {
        return k + 1 == counts.size() ? 1.0 : static_cast<double>(k + 1) * bin_width;
    }
};

// Counts scored values into half-open bins [k*w, (k+1)*w); the last bin is
// closed at 1 so a value of exactly 1 lands in it. Bin assignment happens in
// double precision: index = min(floor(v / w), bins - 1).
inline Histogram histogram(const std::vector<ArticleDissimilarity>& results, double bin_width) {
    if (!(bin_width > 0.0) || bin_width > 1.0) {
        throw ConfigError("histogram bin width must be in (0, 1]");
    }
    Histogram h;
    h.bin_width = bin_width;
    const std::size_t bins = static_cast<std::size_t>(std::ceil(1.0 / bin_width));
    h.counts.assign(bins, 0);
    for (const auto& r : results) {
        if (!r.scored) continue;
        const std::size_t k =
            std::min(static_cast<std::size_t>(r.mean_dissimilarity / bin_width), bins - 1);
        h.counts[k]++;
    }
    return h;
}

inline void write_histogram_csv(std::ostream& out, const Histogram& h) {
    std::string buf;
    csv::append_row(buf, {"bin_lower", "bin_upper", "count"});
    for (std::size_t k = 0; k < h.counts.size(); ++k) {
        csv::append_row(buf, {csv::format_double(h.lower(k)), csv::format_double(h.upper(k)),
                              std::to_string(h.counts[k])});
    }
    out << buf;
}

// --- decile classes ---------------------------------------------------------

// Ten classes over the scored article set, split at the 10%..90% empirical
// quantiles. Quantiles use the nearest-rank method (no interpolation) and
// tied values always fall into the lower class, so membership depends on
// value ranks only.
struct DecileClasses {
    std::array<double, 9> breakpoints{};
    std::array<std::vector<std::size_t>, 10> members;  // indices into the input results

    double lower(std::size_t k) const { return k == 0 ? 0.0 : breakpoints[k - 1]; }
    double upper(std::size_t k) const { return k == 9 ? 1.0 : breakpoints[k]; }
    std::size_t size(std::size_t k) const { return members[k].size(); }
};

inline DecileClasses decile_classes(const std::vector<ArticleDissimilarity>& results) {
    const std::size_t n = results.size();
    if (n < 10) throw StageError("decile classes need at least 10 scored articles");
    std::vector<double> sorted;
    sorted.reserve(n);
    for (const auto& r : results) {
        if (!r.scored) throw StageError("unscored article in decile input: " + r.article_id);
        sorted.push_back(r.mean_dissimilarity);
    }
    std::sort(sorted.begin(), sorted.end());

    DecileClasses c;
    for (std::size_t k = 0; k < 9; ++k) {
        // nearest-rank quantile at p = (k+1)/10: rank = ceil(p * n), 1-based
        const std::size_t rank = ((k + 1) * n + 9) / 10;
        c.breakpoints[k] = sorted[rank - 1];
    }
    for (std::size_t i = 0; i < n; ++i) {
        const double v = results[i].mean_dissimilarity;
        const auto it = std::lower_bound(c.breakpoints.begin(), c.breakpoints.end(), v);
        const std::size_t k = static_cast<std::size_t>(it - c.breakpoints.begin());
        c.members[k].push_back(i);
    }
    return c;
}

// --- multidisciplinary shares -----------------------------------------------

struct DecileShareReport {
    std::array<double, 10> multidisciplinary_share{};  // 0 for an empty class
};

inline DecileShareReport multidisciplinary_share(const DecileClasses& classes,
                                                 const std::vector<ArticleDissimilarity>& results,
                                                 const CategoryMap& categories) {
    DecileShareReport report;
    for (std::size_t k = 0; k < 10; ++k) {
        const auto& members = classes.members[k];
        if (members.empty()) continue;
        std::size_t flagged = 0;
        for (const std::size_t i : members) {
            if (categories.is_multidisciplinary(results.at(i).published_journal)) ++flagged;
        }
        report.multidisciplinary_share[k] =
            static_cast<double>(flagged) / static_cast<double>(members.size());
    }
    return report;
}

inline void write_decile_report(std::ostream& out, const DecileClasses& classes,
                                const DecileShareReport& shares) {
    std::string buf;
    csv::append_row(buf, {"class", "lower", "upper", "size", "multidisciplinary_share"});
    for (std::size_t k = 0; k < 10; ++k) {
        csv::append_row(buf, {std::to_string(k + 1), csv::format_double(classes.lower(k)),
                              csv::format_double(classes.upper(k)),
                              std::to_string(classes.size(k)),
                              csv::format_double(shares.multidisciplinary_share[k])});
    }
    out << buf;
}

// --- cited-category analytics -----------------------------------------------

struct ArticleCategoryBreakdown {
    std::string article_id;
    // (category, share) sorted by category; shares sum to 1 over the
    // categorized citations.
    std::vector<std::pair<std::string, double>> shares;
    std::size_t distinct_categories = 0;
    std::uint32_t uncategorized_refs = 0;  // occurrences whose journal has no category
    bool empty = false;                    // nothing categorized to break down
};

// Each categorized reference occurrence carries weight 1, split equally
// across its journal's categories. Occurrences whose journal has no category
// are left out of the shares and counted separately.
inline ArticleCategoryBreakdown article_category_breakdown(const ArticleRecord& article,
                                                           const CategoryMap& categories) {
    ArticleCategoryBreakdown b;
    b.article_id = article.article_id;
    std::map<std::string, double> weight;
    std::uint32_t categorized = 0;
    for (const JournalId h : article.cited_occurrences) {
        const auto& cats = categories.categories(h);
        if (cats.empty()) {
            b.uncategorized_refs++;
            continue;
        }
        ++categorized;
        const double w = 1.0 / static_cast<double>(cats.size());
        for (const auto& cat : cats) weight[cat] += w;
    }
    if (categorized == 0) {
        b.empty = true;
        return b;
    }
    b.shares.reserve(weight.size());
    for (auto& [cat, w] : weight) {
        b.shares.emplace_back(cat, w / static_cast<double>(categorized));
    }
    b.distinct_categories = b.shares.size();
    return b;
}

// Number of distinct categories across the journals an article cites.
// Uncategorized journals contribute nothing; duplicates of a journal do not
// add new categories.
inline std::size_t distinct_cited_categories(const ArticleRecord& article,
                                             const CategoryMap& categories) {
    std::set<std::string> seen;
    for (const JournalId h : article.cited_occurrences) {
        for (const auto& cat : categories.categories(h)) seen.insert(cat);
    }
    return seen.size();
}

struct DiversityReport {
    std::array<double, 10> mean_distinct_categories{};  // 0 for an empty class
};

// Mean distinct-category count per decile class. The classes are expected to
// be computed over whatever cohort the caller chose (typically articles from
// non-multidisciplinary journals); this function just averages within them.
inline DiversityReport category_diversity_by_decile(const DecileClasses& classes,
                                                    const std::vector<ArticleDissimilarity>& results,
                                                    const Corpus& corpus,
                                                    const CategoryMap& categories) {
    std::unordered_map<std::string, const ArticleRecord*> by_id;
    by_id.reserve(corpus.size());
    for (const auto& article : corpus) by_id.emplace(article.article_id, &article);

    DiversityReport report;
    for (std::size_t k = 0; k < 10; ++k) {
        const auto& members = classes.members[k];
        if (members.empty()) continue;
        std::uint64_t total = 0;
        for (const std::size_t i : members) {
            const auto& id = results.at(i).article_id;
            const auto it = by_id.find(id);
            if (it == by_id.end()) throw StageError("article missing from corpus: " + id);
            total += distinct_cited_categories(*it->second, categories);
        }
        report.mean_distinct_categories[k] =
            static_cast<double>(total) / static_cast<double>(members.size());
    }
    return report;
}

inline void write_diversity_report(std::ostream& out, const DiversityReport& report) {
    std::string buf;
    csv::append_row(buf, {"class", "mean_distinct_categories"});
    for (std::size_t k = 0; k < 10; ++k) {
        csv::append_row(buf, {std::to_string(k + 1),
                              csv::format_double(report.mean_distinct_categories[k])});
    }
    out << buf;
}

inline void write_breakdown_csv(std::ostream& out,
                                const std::vector<ArticleCategoryBreakdown>& breakdowns) {
    std::string buf;
    csv::append_row(buf, {"article_id", "category", "share"});
    for (const auto& b : breakdowns) {
        for (const auto& [cat, share] : b.shares) {
            csv::append_row(buf, {b.article_id, cat, csv::format_double(share)});
        }
    }
    out << buf;
}

}  // namespace cocite
