#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cocite/csv.hpp"
#include "cocite/errors.hpp"

namespace cocite {

using JournalId = std::uint32_t;

// Journal identity is decided on a normalized form: trimmed, internal
// whitespace runs collapsed to one space, ASCII letters lowercased. Source
// exports vary in casing and spacing; numeric identifiers pass through
// unchanged.
inline std::string normalize_name(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    bool pending_space = false;
    for (char ch : raw) {
        const bool space =
            ch == ' ' || ch == '\t' || ch == '\r' || ch == '\n' || ch == '\f' || ch == '\v';
        if (space) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        if (ch >= 'A' && ch <= 'Z') ch = static_cast<char>(ch - 'A' + 'a');
        out.push_back(ch);
    }
    return out;
}

// Dense contiguous ids over the union of citing and cited journals, one id
// space for both roles. Ids follow the lexicographic order of the
// normalized names, so the same input always yields the same numbering.
class JournalRegistry {
public:
    static constexpr std::uint8_t kCiting = 1;
    static constexpr std::uint8_t kCited = 2;

    JournalRegistry() = default;

    JournalRegistry(std::vector<std::string> names, std::vector<std::uint8_t> roles)
        : names_(std::move(names)), roles_(std::move(roles)) {
        index_.reserve(names_.size());
        for (JournalId id = 0; id < names_.size(); ++id) {
            index_.emplace(names_[id], id);
        }
    }

    JournalId size() const { return static_cast<JournalId>(names_.size()); }

    const std::string& name(JournalId id) const { return names_.at(id); }
    bool is_citing(JournalId id) const { return (roles_.at(id) & kCiting) != 0; }
    bool is_cited(JournalId id) const { return (roles_.at(id) & kCited) != 0; }

    std::optional<JournalId> find(std::string_view normalized) const {
        auto it = index_.find(std::string(normalized));
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    JournalId require(std::string_view normalized) const {
        auto id = find(normalized);
        if (!id) throw StageError("journal not in registry: " + std::string(normalized));
        return *id;
    }

    void write_csv(std::ostream& out) const {
        std::string buf;
        buf.reserve(64 * (names_.size() + 1));
        csv::append_row(buf, {"journal_id", "name", "is_citing", "is_cited"});
        for (JournalId id = 0; id < size(); ++id) {
            csv::append_row(buf, {std::to_string(id), names_[id], is_citing(id) ? "1" : "0",
                                  is_cited(id) ? "1" : "0"});
        }
        out << buf;
    }

    static JournalRegistry read_csv(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open registry file: " + path);
        std::string line;
        std::vector<std::string> fields;
        std::vector<std::string> names;
        std::vector<std::uint8_t> roles;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;
            if (!csv::split_line(line, ',', fields) || fields.size() != 4) {
                throw ParseError(path, line_no, "expected journal_id,name,is_citing,is_cited");
            }
            if (line_no == 1 && fields[0] == "journal_id") continue;
            auto id = csv::parse_int(fields[0]);
            if (!id || *id != static_cast<std::int64_t>(names.size())) {
                throw ParseError(path, line_no, "journal ids must be contiguous from 0");
            }
            std::uint8_t role = 0;
            if (fields[2] == "1") role |= kCiting;
            if (fields[3] == "1") role |= kCited;
            if (role == 0) throw ParseError(path, line_no, "journal has no role flag");
            names.push_back(fields[1]);
            roles.push_back(role);
        }
        return JournalRegistry(std::move(names), std::move(roles));
    }

private:
    std::vector<std::string> names_;
    std::vector<std::uint8_t> roles_;
    std::unordered_map<std::string, JournalId> index_;
};

// Accumulates (normalized name, role) pairs and assigns ids once all names
// are known. std::map keeps the lexicographic order that fixes the ids.
class RegistryBuilder {
public:
    void note(std::string normalized, std::uint8_t role) {
        entries_[std::move(normalized)] |= role;
    }

    JournalRegistry build() const {
        std::vector<std::string> names;
        std::vector<std::uint8_t> roles;
        names.reserve(entries_.size());
        roles.reserve(entries_.size());
        for (const auto& [name, role] : entries_) {
            names.push_back(name);
            roles.push_back(role);
        }
        return JournalRegistry(std::move(names), std::move(roles));
    }

private:
    std::map<std::string, std::uint8_t> entries_;
};

}  // namespace cocite
