#pragma once

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "cocite/records.hpp"
#include "cocite/registry.hpp"

namespace cocite {

// Citation counts c_jg aggregated over articles: how often articles
// published in citing journal j reference cited journal g. Stored column by
// column, one column per cited journal, entries sorted by citing journal id.
// Every journal in the registry owns a column; journals nobody cites have an
// empty one.
struct CountMatrix {
    std::vector<std::size_t> col_start;     // n_journals + 1 offsets into the entry arrays
    std::vector<JournalId> citing;          // ascending within each column
    std::vector<std::uint64_t> count;
    std::vector<std::uint64_t> inbound_total;  // per cited journal, sum of its column

    JournalId journals() const { return static_cast<JournalId>(inbound_total.size()); }
    std::size_t entries() const { return citing.size(); }

    std::size_t begin(JournalId cited) const { return col_start[cited]; }
    std::size_t end(JournalId cited) const { return col_start[cited + 1]; }
};

inline CountMatrix aggregate_counts(const std::vector<CitationRecord>& records,
                                    JournalId n_journals) {
    std::vector<std::pair<JournalId, JournalId>> pairs;  // (cited, citing)
    pairs.reserve(records.size());
    for (const auto& r : records) pairs.emplace_back(r.cited_journal, r.citing_journal);
    std::sort(pairs.begin(), pairs.end());

    CountMatrix m;
    m.col_start.assign(static_cast<std::size_t>(n_journals) + 1, 0);
    m.inbound_total.assign(n_journals, 0);
    std::size_t i = 0;
    for (JournalId g = 0; g < n_journals; ++g) {
        m.col_start[g] = m.citing.size();
        while (i < pairs.size() && pairs[i].first == g) {
            const JournalId j = pairs[i].second;
            std::uint64_t c = 0;
            while (i < pairs.size() && pairs[i].first == g && pairs[i].second == j) {
                ++c;
                ++i;
            }
            m.citing.push_back(j);
            m.count.push_back(c);
            m.inbound_total[g] += c;
        }
    }
    m.col_start[n_journals] = m.citing.size();
    return m;
}

}  // namespace cocite
