#include "mathtools/gold.hpp"

#include <algorithm>
#include <set>

#include "mathtools/operations.hpp"
#include "mathtools/parser.hpp"

namespace mathtools::gold {

namespace {

using nlohmann::json;

std::optional<std::int64_t> read_id(const json& obj) {
    const auto it = obj.find("id");
    if (it == obj.end() || !it->is_number_integer()) return std::nullopt;
    const std::int64_t id = it->get<std::int64_t>();
    if (id <= 0) return std::nullopt;
    return id;
}

const std::string& require_string(const json& obj, const char* key, std::int64_t id) {
    const auto it = obj.find(key);
    if (it == obj.end()) throw SchemaError(std::string("missing field '") + key + "'", id);
    if (!it->is_string()) throw SchemaError(std::string("field '") + key + "' must be a string", id);
    return it->get_ref<const std::string&>();
}

std::optional<std::string> optional_string(const json& obj, const char* key, std::int64_t id) {
    const auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return std::nullopt;
    if (!it->is_string()) throw SchemaError(std::string("field '") + key + "' must be a string", id);
    return it->get<std::string>();
}

GoldEntry read_entry(const json& obj, std::size_t position) {
    if (!obj.is_object()) throw SchemaError("element " + std::to_string(position) + " is not an object");
    if (!obj.contains("id")) throw SchemaError("element " + std::to_string(position) + ": missing field 'id'");
    const auto id = read_id(obj);
    if (!id) throw SchemaError("element " + std::to_string(position) + ": 'id' must be a positive integer");

    GoldEntry entry;
    entry.id = *id;
    entry.tex = require_string(obj, "tex", *id);
    if (entry.tex.empty()) throw SchemaError("field 'tex' is empty", *id);
    entry.mathml = require_string(obj, "mathml", *id);
    entry.title = optional_string(obj, "title", *id);
    entry.uri = optional_string(obj, "uri", *id);
    if (const auto it = obj.find("check"); it != obj.end() && !it->is_null()) {
        if (!it->is_object()) throw SchemaError("field 'check' must be an object", *id);
        for (const auto& [tool, verdict] : it->items()) {
            if (!verdict.is_string()) throw SchemaError("check verdict for '" + tool + "' must be a string", *id);
            entry.check.emplace(tool, verdict.get<std::string>());
        }
    }
    static const std::set<std::string> kKnown = {"id", "tex", "mathml", "title", "uri", "check"};
    for (const auto& [key, value] : obj.items()) {
        if (!kKnown.contains(key)) entry.extra[key] = value;
    }
    return entry;
}

void require_valid_mathml(const GoldEntry& entry) {
    try {
        const auto parsed = parse(entry.mathml, ParseMode::strict);
        if (!parsed.doc.presentation_root()) throw InvalidGoldMathML(entry.id, "no presentation branch");
        if (!parsed.doc.content_root()) throw InvalidGoldMathML(entry.id, "no content branch");
    } catch (const InvalidGoldMathML&) {
        throw;
    } catch (const Error& e) {
        throw InvalidGoldMathML(entry.id, e.what());
    }
}

json to_json(const GoldEntry& entry) {
    json obj = entry.extra.is_object() ? entry.extra : json::object();
    obj["id"] = entry.id;
    obj["tex"] = entry.tex;
    obj["mathml"] = entry.mathml;
    if (entry.title) obj["title"] = *entry.title;
    if (entry.uri) obj["uri"] = *entry.uri;
    if (!entry.check.empty()) obj["check"] = entry.check;
    return obj;
}

}  // namespace

std::vector<GoldEntry> load_gold(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("not valid JSON: ") + e.what());
    }
    if (!doc.is_array()) throw SchemaError("gold file must be a JSON array");

    std::vector<GoldEntry> entries;
    std::set<std::int64_t> seen;
    for (std::size_t i = 0; i < doc.size(); ++i) {
        GoldEntry entry = read_entry(doc[i], i);
        if (!seen.insert(entry.id).second) throw SchemaError("duplicate id", entry.id);
        require_valid_mathml(entry);
        entries.push_back(std::move(entry));
    }
    return entries;
}

std::string save_gold(std::vector<GoldEntry> entries) {
    std::stable_sort(entries.begin(), entries.end(),
                     [](const GoldEntry& a, const GoldEntry& b) { return a.id < b.id; });
    json out = json::array();
    for (const auto& entry : entries) out.push_back(to_json(entry));
    return out.dump(2);
}

std::string_view to_string(FindingKind kind) {
    switch (kind) {
        case FindingKind::invalid_mathml: return "invalid-mathml";
        case FindingKind::missing_presentation_branch: return "missing-presentation-branch";
        case FindingKind::missing_content_branch: return "missing-content-branch";
        case FindingKind::dangling_xref: return "dangling-xref";
        case FindingKind::missing_tex_annotation: return "missing-tex-annotation";
        case FindingKind::tex_mismatch: return "tex-mismatch";
    }
    return "unknown";
}

std::vector<Finding> validate_entry(const GoldEntry& entry) {
    std::vector<Finding> findings;
    std::optional<ParseResult> parsed;
    try {
        parsed = parse(entry.mathml, ParseMode::strict);
    } catch (const Error& e) {
        findings.push_back({FindingKind::invalid_mathml, e.what()});
        return findings;
    }
    const MathDoc& doc = parsed->doc;
    if (!doc.presentation_root()) {
        findings.push_back({FindingKind::missing_presentation_branch, "no presentation branch"});
    }
    if (!doc.content_root()) {
        findings.push_back({FindingKind::missing_content_branch, "no content branch"});
    }
    for (const auto& d : doc.dangling_xrefs()) {
        findings.push_back({FindingKind::dangling_xref,
                            "<" + doc.node(d.node).name + "> references unknown id '" + d.target + "'"});
    }
    const auto tex = get_tex(doc);
    if (!tex) {
        findings.push_back({FindingKind::missing_tex_annotation, "no application/x-tex annotation"});
    } else if (*tex != entry.tex) {
        findings.push_back({FindingKind::tex_mismatch, "tex '" + entry.tex + "' differs from annotation '" + *tex + "'"});
    }
    return findings;
}

}  // namespace mathtools::gold
