#pragma once

#include <cstdint>
#include <vector>

#include "cocite/count_matrix.hpp"
#include "cocite/registry.hpp"

namespace cocite {

// Normalized citation profiles: share[k] = count / inbound_total for each
// column entry of the count matrix, so each non-empty column sums to 1 (up
// to rounding). Layout mirrors CountMatrix.
struct ProfileSet {
    std::vector<std::size_t> col_start;
    std::vector<JournalId> citing;  // ascending within each column
    std::vector<double> share;
    std::vector<JournalId> empty_profiles;  // ascending; columns with no inbound citations

    JournalId journals() const { return static_cast<JournalId>(col_start.size()) - 1; }
    std::size_t entries() const { return citing.size(); }

    std::size_t begin(JournalId cited) const { return col_start[cited]; }
    std::size_t end(JournalId cited) const { return col_start[cited + 1]; }
    bool empty_profile(JournalId cited) const { return begin(cited) == end(cited); }
};

// Applies an inbound-citation floor while normalizing: a journal cited fewer
// than min_inbound times keeps an empty profile, the same as a journal
// nobody cites. Pass 0 to keep every column.
inline ProfileSet build_profiles(const CountMatrix& counts, std::uint64_t min_inbound = 0) {
    ProfileSet p;
    const JournalId n = counts.journals();
    p.col_start.assign(static_cast<std::size_t>(n) + 1, 0);
    p.citing.reserve(counts.entries());
    p.share.reserve(counts.entries());
    for (JournalId g = 0; g < n; ++g) {
        p.col_start[g] = p.citing.size();
        const std::uint64_t total = counts.inbound_total[g];
        if (total == 0 || total < min_inbound) {
            p.empty_profiles.push_back(g);
            continue;
        }
        const double denom = static_cast<double>(total);
        for (std::size_t k = counts.begin(g); k < counts.end(g); ++k) {
            p.citing.push_back(counts.citing[k]);
            p.share.push_back(static_cast<double>(counts.count[k]) / denom);
        }
    }
    p.col_start[n] = p.citing.size();
    return p;
}

}  // namespace cocite
