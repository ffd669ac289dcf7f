#pragma once

#include <algorithm>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "cocite/csv.hpp"
#include "cocite/errors.hpp"
#include "cocite/registry.hpp"

namespace cocite {

// Journal -> subject categories, aligned to the registry's id space. A
// journal can carry several categories; category strings are normalized the
// same way journal names are, so label matching is case- and
// whitespace-insensitive.
class CategoryMap {
public:
    CategoryMap() = default;
    explicit CategoryMap(JournalId n_journals)
        : categories_(n_journals), multidisciplinary_(n_journals, 0) {}

    JournalId size() const { return static_cast<JournalId>(categories_.size()); }

    const std::vector<std::string>& categories(JournalId id) const { return categories_.at(id); }
    bool has_categories(JournalId id) const { return !categories_.at(id).empty(); }
    bool is_multidisciplinary(JournalId id) const { return multidisciplinary_.at(id) != 0; }

    // Rows in the categories file whose journal is not in the registry,
    // with occurrence counts. Kept for diagnostics; they do not affect
    // any computation.
    const std::map<std::string, std::size_t>& unresolved() const { return unresolved_; }

    void add(JournalId id, std::string category, bool matches_label) {
        auto& cats = categories_.at(id);
        auto it = std::lower_bound(cats.begin(), cats.end(), category);
        if (it != cats.end() && *it == category) return;
        cats.insert(it, std::move(category));
        if (matches_label) multidisciplinary_.at(id) = 1;
    }

    void note_unresolved(const std::string& name) { unresolved_[name]++; }

    std::size_t multidisciplinary_count() const {
        std::size_t n = 0;
        for (auto flag : multidisciplinary_)
            if (flag) ++n;
        return n;
    }

private:
    std::vector<std::vector<std::string>> categories_;  // sorted, unique per journal
    std::vector<std::uint8_t> multidisciplinary_;
    std::map<std::string, std::size_t> unresolved_;
};

// Reads the journal,category file. Journals are matched against the
// registry by normalized name; rows naming unknown journals are retained as
// diagnostics only. A journal is flagged multidisciplinary when any of its
// categories equals the given label after normalization.
inline CategoryMap parse_categories(const std::string& path, const JournalRegistry& registry,
                                    const std::string& multidisciplinary_label) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open categories file: " + path);

    const std::string label = normalize_name(multidisciplinary_label);
    CategoryMap map(registry.size());
    std::string line;
    std::vector<std::string> fields;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (csv::trim(line).empty()) continue;
        if (!csv::split_line(line, ',', fields)) {
            throw ParseError(path, line_no, "unterminated quoted field");
        }
        if (fields.size() < 2) {
            throw ParseError(path, line_no, "expected journal,category");
        }
        std::string journal = normalize_name(fields[0]);
        std::string category = normalize_name(fields[1]);
        if (line_no == 1 && journal == "journal" && category == "category") continue;
        if (journal.empty()) throw ParseError(path, line_no, "empty journal name");
        if (category.empty()) throw ParseError(path, line_no, "empty category");
        auto id = registry.find(journal);
        if (!id) {
            map.note_unresolved(journal);
            continue;
        }
        const bool matches_label = category == label;
        map.add(*id, std::move(category), matches_label);
    }
    return map;
}

}  // namespace cocite
