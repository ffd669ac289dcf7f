#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cocite/registry.hpp"

namespace cocite {

// One reference occurrence: an article in `citing_journal` cites an article
// in `cited_journal`. Duplicates are meaningful and kept.
struct CitationRecord {
    std::string article_id;
    int pub_year = 0;
    JournalId citing_journal = 0;
    JournalId cited_journal = 0;
};

struct ArticleRecord {
    std::string article_id;
    JournalId published_journal = 0;
    int pub_year = 0;
    std::vector<JournalId> cited_occurrences;  // one per reference, order and duplicates kept
    std::uint32_t unmatched_refs = 0;          // references with no resolvable cited journal

    std::uint32_t n_refs() const { return static_cast<std::uint32_t>(cited_occurrences.size()); }
};

using Corpus = std::vector<ArticleRecord>;

inline std::vector<std::uint64_t> articles_per_journal(const Corpus& corpus, JournalId n_journals) {
    std::vector<std::uint64_t> counts(n_journals, 0);
    for (const auto& article : corpus) counts.at(article.published_journal)++;
    return counts;
}

}  // namespace cocite
