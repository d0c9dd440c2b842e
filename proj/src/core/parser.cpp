#include "mathtools/parser.hpp"

#include <algorithm>
#include <iterator>
#include <map>
#include <utility>

#include "mathtools/error.hpp"
#include "xml_reader.hpp"

namespace mathtools {

namespace {

struct EntityEntry {
    std::string_view name;
    const char* utf8;
};

constexpr EntityEntry kEntities[] = {
#include "entity_table.inc"
};

constexpr std::string_view kXmlNamespace = "http://www.w3.org/XML/1998/namespace";

int rule_rank(RepairKind kind) {
    switch (kind) {
        case RepairKind::namespace_inserted: return 0;
        case RepairKind::entity_replaced: return 1;
        case RepairKind::attribute_namespace_dropped: return 2;
    }
    return 3;
}

std::pair<std::string_view, std::string_view> split_qname(std::string_view qname) {
    const auto colon = qname.find(':');
    if (colon == std::string_view::npos) return {{}, qname};
    return {qname.substr(0, colon), qname.substr(colon + 1)};
}

std::optional<std::string> trimmed(std::string_view s) {
    const auto is_ws = [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; };
    while (!s.empty() && is_ws(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_ws(s.back())) s.remove_suffix(1);
    if (s.empty()) return std::nullopt;
    return std::string(s);
}

bool is_declaration(std::string_view key) { return key == "xmlns" || key.starts_with("xmlns:"); }

// Namespace resolution over the raw element tree, producing MathNodes and
// prefix repairs.
class NamespaceResolver {
public:
    NamespaceResolver(ParseMode mode, std::vector<Repair>& repairs) : mode_(mode), repairs_(repairs) {}

    MathNode resolve_root(const detail::RawElement& raw) {
        const auto [prefix, local] = split_qname(raw.qname);
        if (local != "math") throw MalformedInput("no math element (root is <" + raw.qname + ">)", raw.offset);
        const bool declares = std::any_of(raw.attributes.begin(), raw.attributes.end(),
                                          [](const auto& a) { return is_declaration(a.qname); });
        if (!declares) {
            if (mode_ == ParseMode::strict) {
                throw MalformedInput("math element lacks a namespace declaration", raw.offset);
            }
            repairs_.push_back({RepairKind::namespace_inserted, raw.name_end});
            bindings_.emplace_back(std::string(prefix), std::string(kMathMLNamespace));
        }
        return resolve(raw);
    }

private:
    std::optional<std::string_view> lookup(std::string_view prefix) const {
        if (prefix == "xml") return kXmlNamespace;
        for (auto it = bindings_.rbegin(); it != bindings_.rend(); ++it) {
            if (it->first == prefix) return std::string_view(it->second);
        }
        return std::nullopt;
    }

    MathNode resolve(const detail::RawElement& raw) {
        const std::size_t scope_mark = bindings_.size();
        for (const auto& attr : raw.attributes) {
            if (attr.qname == "xmlns") bindings_.emplace_back("", attr.value);
            else if (attr.qname.starts_with("xmlns:")) bindings_.emplace_back(attr.qname.substr(6), attr.value);
        }

        const auto [prefix, local] = split_qname(raw.qname);
        auto uri = lookup(prefix);
        if (!prefix.empty() && !uri) {
            throw MalformedInput("unbound namespace prefix '" + std::string(prefix) + "'", raw.offset);
        }

        const bool at_root = std::exchange(at_root_, false);
        MathNode node;
        if (!uri || uri->empty()) {
            // Element in no namespace below a prefixed math element.
            if (mode_ == ParseMode::strict) {
                throw MalformedInput("element <" + raw.qname + "> is outside the MathML namespace", raw.offset);
            }
            repairs_.push_back({RepairKind::namespace_inserted, raw.name_end});
            bindings_.emplace_back("", std::string(kMathMLNamespace));
            node = resolve_mathml(raw, local);
        } else if (*uri == kMathMLNamespace) {
            if (!prefix.empty()) drop_prefix(raw.qname, raw.offset + 1);
            node = resolve_mathml(raw, local);
        } else {
            if (at_root) {
                throw MalformedInput("math element is in namespace '" + std::string(*uri) + "', not MathML", raw.offset);
            }
            node = resolve_foreign_boundary(raw);
        }
        bindings_.resize(scope_mark);
        return node;
    }

    void drop_prefix(const std::string& qname, std::size_t offset) {
        if (mode_ == ParseMode::strict) {
            throw MalformedInput("MathML namespace prefix on '" + qname + "'", offset);
        }
        repairs_.push_back({RepairKind::attribute_namespace_dropped, offset});
    }

    MathNode resolve_mathml(const detail::RawElement& raw, std::string_view local) {
        MathNode node;
        node.name = std::string(local);
        for (const auto& attr : raw.attributes) {
            if (is_declaration(attr.qname)) {
                if (attr.value != kMathMLNamespace) node.attributes.push_back({attr.qname, attr.value});
                continue;
            }
            const auto [prefix, key] = split_qname(attr.qname);
            std::string stored = attr.qname;
            if (!prefix.empty()) {
                const auto uri = lookup(prefix);
                if (!uri) {
                    throw MalformedInput("unbound namespace prefix '" + std::string(prefix) + "'", attr.offset);
                }
                if (*uri == kMathMLNamespace) {
                    drop_prefix(attr.qname, attr.offset);
                    stored = std::string(key);
                }
            }
            if (node.attribute(stored)) {
                throw MalformedInput("duplicate attribute '" + stored + "' after prefix removal", attr.offset);
            }
            node.attributes.push_back({std::move(stored), attr.value});
        }
        node.text = trimmed(raw.text);
        node.children.reserve(raw.children.size());
        for (const auto& child : raw.children) node.children.push_back(resolve(child));
        return node;
    }

    // A foreign element is kept verbatim. Declarations it relies on from
    // enclosing elements are copied onto it so the subtree stands alone.
    MathNode resolve_foreign_boundary(const detail::RawElement& raw) {
        MathNode node = verbatim(raw);
        std::map<std::string, std::string> inherited;
        for (const auto& [prefix, uri] : bindings_) {
            if (uri != kMathMLNamespace) inherited[prefix] = uri;
            else inherited.erase(prefix);
        }
        for (const auto& [prefix, uri] : inherited) {
            const std::string key = prefix.empty() ? "xmlns" : "xmlns:" + prefix;
            if (!node.attribute(key)) node.attributes.push_back({key, uri});
        }
        return node;
    }

    static MathNode verbatim(const detail::RawElement& raw) {
        MathNode node;
        node.name = raw.qname;
        for (const auto& attr : raw.attributes) node.attributes.push_back({attr.qname, attr.value});
        node.text = trimmed(raw.text);
        for (const auto& child : raw.children) node.children.push_back(verbatim(child));
        return node;
    }

    ParseMode mode_;
    std::vector<Repair>& repairs_;
    std::vector<std::pair<std::string, std::string>> bindings_;
    bool at_root_ = true;
};

}  // namespace

std::string_view to_string(RepairKind kind) {
    switch (kind) {
        case RepairKind::namespace_inserted: return "namespace-inserted";
        case RepairKind::entity_replaced: return "entity-replaced";
        case RepairKind::attribute_namespace_dropped: return "attribute-namespace-dropped";
    }
    return "unknown";
}

const char* lookup_html_entity(std::string_view name) {
    const auto it = std::lower_bound(std::begin(kEntities), std::end(kEntities), name,
                                     [](const EntityEntry& e, std::string_view n) { return e.name < n; });
    if (it == std::end(kEntities) || it->name != name) return nullptr;
    return it->utf8;
}

ParseResult parse(std::string_view input, ParseMode mode) {
    std::vector<Repair> repairs;
    const detail::EntityResolver resolve_entity =
        [&](std::string_view name, std::size_t offset) -> std::optional<std::string> {
        const char* replacement = lookup_html_entity(name);
        if (!replacement) return std::nullopt;
        if (mode == ParseMode::strict) {
            throw MalformedInput("named entity '&" + std::string(name) + ";' is not declared in XML", offset);
        }
        repairs.push_back({RepairKind::entity_replaced, offset});
        return std::string(replacement);
    };

    const detail::RawElement raw = detail::read_xml(input, resolve_entity);
    NamespaceResolver resolver(mode, repairs);
    MathNode root = resolver.resolve_root(raw);

    std::stable_sort(repairs.begin(), repairs.end(), [](const Repair& a, const Repair& b) {
        if (rule_rank(a.kind) != rule_rank(b.kind)) return rule_rank(a.kind) < rule_rank(b.kind);
        return a.location < b.location;
    });

    ParseResult result{MathDoc::from_tree(std::move(root)), {}};
    result.report.repairs = std::move(repairs);
    result.report.dangling_xrefs = result.doc.dangling_xrefs();
    return result;
}

}  // namespace mathtools
