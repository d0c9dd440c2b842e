#include "mathtools/query.hpp"

namespace mathtools::query {

namespace detail {
extern const std::string_view kShippedPathsTsv;
}

PathLibrary PathLibrary::from_tsv(std::string_view tsv) {
    PathLibrary lib;
    std::size_t line_no = 0;
    while (!tsv.empty()) {
        const auto nl = tsv.find('\n');
        std::string_view line = tsv.substr(0, nl);
        tsv = nl == std::string_view::npos ? std::string_view{} : tsv.substr(nl + 1);
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty() || line.front() == '#') continue;

        const auto tab1 = line.find('\t');
        const auto tab2 = tab1 == std::string_view::npos ? tab1 : line.find('\t', tab1 + 1);
        if (tab2 == std::string_view::npos || line.find('\t', tab2 + 1) != std::string_view::npos) {
            throw Error("path library line " + std::to_string(line_no) + ": expected 3 tab-separated fields");
        }
        LibraryEntry entry;
        entry.name = std::string(line.substr(0, tab1));
        entry.text = std::string(line.substr(tab1 + 1, tab2 - tab1 - 1));
        entry.description = std::string(line.substr(tab2 + 1));
        if (entry.name.empty()) throw Error("path library line " + std::to_string(line_no) + ": empty name");
        entry.query = parse_query(entry.text);
        const std::string name = entry.name;
        if (!lib.entries_.emplace(name, std::move(entry)).second) {
            throw Error("path library: duplicate entry '" + name + "'");
        }
    }
    return lib;
}

const PathLibrary& PathLibrary::shipped() {
    static const PathLibrary lib = from_tsv(detail::kShippedPathsTsv);
    return lib;
}

const LibraryEntry& PathLibrary::get(std::string_view name) const {
    const auto it = entries_.find(name);
    if (it == entries_.end()) throw UnknownName(std::string(name));
    return it->second;
}

bool PathLibrary::contains(std::string_view name) const { return entries_.find(name) != entries_.end(); }

std::vector<const LibraryEntry*> PathLibrary::entries() const {
    std::vector<const LibraryEntry*> out;
    for (const auto& [name, entry] : entries_) out.push_back(&entry);
    return out;
}

std::string PathLibrary::to_tsv() const {
    std::string out;
    for (const auto& [name, entry] : entries_) {
        out += name + '\t' + entry.text + '\t' + entry.description + '\n';
    }
    return out;
}

const Query& library_get(std::string_view name) { return PathLibrary::shipped().get(name).query; }

}  // namespace mathtools::query
