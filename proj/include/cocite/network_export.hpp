#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "cocite/csv.hpp"
#include "cocite/dissim.hpp"
#include "cocite/errors.hpp"
#include "cocite/registry.hpp"
#include "cocite/similarity.hpp"

namespace cocite {

struct NetworkExportStats {
    std::size_t nodes = 0;
    std::size_t edges = 0;
};

// Writes the node map and edge list consumed by graph-visualization tools.
// Nodes are the journals cited at least min_inbound_citations times; each
// carries the journal's article count as weight and its mean dissimilarity
// as score (0 when the journal published no scored article). Edges are the
// stored similarity entries between retained nodes, upper triangle only.
inline NetworkExportStats export_network(std::ostream& map_out, std::ostream& net_out,
                                         const SimilarityMatrix& matrix,
                                         const std::vector<std::uint64_t>& inbound_totals,
                                         const std::vector<std::uint64_t>& article_counts,
                                         const std::vector<JournalDissimilarity>& journal_stats,
                                         const JournalRegistry& registry,
                                         std::uint64_t min_inbound_citations) {
    const JournalId n = matrix.dim();
    if (inbound_totals.size() != n || article_counts.size() != n || registry.size() != n) {
        throw StageError("network export inputs disagree on the journal count");
    }

    std::vector<std::uint8_t> retained(n, 0);
    NetworkExportStats stats;
    for (JournalId g = 0; g < n; ++g) {
        if (inbound_totals[g] >= min_inbound_citations) {
            retained[g] = 1;
            stats.nodes++;
        }
    }
    if (stats.nodes == 0) {
        throw StageError("no journal meets the inbound-citation threshold of " +
                         std::to_string(min_inbound_citations));
    }

    std::vector<double> score(n, 0.0);
    for (const auto& j : journal_stats) {
        if (j.journal < n) score[j.journal] = j.mean_dissimilarity;
    }

    std::string buf;
    buf.reserve(64 * 1024);
    buf += "id\tlabel\tweight\tscore\n";
    for (JournalId g = 0; g < n; ++g) {
        if (!retained[g]) continue;
        buf += std::to_string(g);
        buf += '\t';
        buf += registry.name(g);
        buf += '\t';
        buf += std::to_string(article_counts[g]);
        buf += '\t';
        buf += csv::format_double(score[g]);
        buf += '\n';
    }
    map_out << buf;

    buf.clear();
    buf += "id1\tid2\tweight\n";
    matrix.for_each_entry([&](JournalId g, JournalId h, double v) {
        if (!retained[g] || !retained[h] || v <= 0.0) return;
        stats.edges++;
        buf += std::to_string(g);
        buf += '\t';
        buf += std::to_string(h);
        buf += '\t';
        buf += csv::format_double(v);
        buf += '\n';
        if (buf.size() >= 48 * 1024) {
            net_out << buf;
            buf.clear();
        }
    });
    net_out << buf;
    return stats;
}

}  // namespace cocite
