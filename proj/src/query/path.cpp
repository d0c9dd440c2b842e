#include "mathtools/query.hpp"

#include <algorithm>
#include <optional>

namespace mathtools::query {

namespace {

bool is_name_char(char c) {
    const auto u = static_cast<unsigned char>(c);
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' ||
           c == '_' || c == '.' || c == ':' || u >= 0x80;
}

class PathParser {
public:
    explicit PathParser(std::string_view text) : text_(text) {}

    Query query() {
        Query q;
        q.paths.push_back(path());
        skip_space();
        while (!at_end()) {
            if (peek() != '|') fail("expected '|' or end of expression");
            ++pos_;
            q.paths.push_back(path());
            skip_space();
        }
        return q;
    }

    PathExpr single_path() {
        PathExpr p = path();
        skip_space();
        if (!at_end()) fail("unexpected trailing input");
        return p;
    }

private:
    [[noreturn]] void fail(const std::string& what) const { throw SyntaxError(what, pos_); }

    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return at_end() ? '\0' : text_[pos_]; }

    void skip_space() {
        while (!at_end() && (peek() == ' ' || peek() == '\t')) ++pos_;
    }

    // Consumes "/" or "//" if present.
    std::optional<Axis> separator() {
        if (peek() != '/') return std::nullopt;
        ++pos_;
        if (peek() == '/') {
            ++pos_;
            return Axis::descendant;
        }
        return Axis::child;
    }

    PathExpr path() {
        skip_space();
        if (at_end()) fail("empty path");
        PathExpr p;
        Axis axis = separator().value_or(Axis::child);
        for (;;) {
            p.steps.push_back(step(axis));
            auto next = separator();
            if (!next) break;
            axis = *next;
        }
        return p;
    }

    std::string name(const char* what) {
        const std::size_t start = pos_;
        while (!at_end() && is_name_char(peek())) ++pos_;
        if (pos_ == start) fail(std::string("expected ") + what);
        return std::string(text_.substr(start, pos_ - start));
    }

    Step step(Axis axis) {
        Step s;
        s.axis = axis;
        if (peek() == '*') {
            ++pos_;
            s.test = "*";
        } else {
            s.test = name("element name or '*'");
        }
        while (peek() == '[') {
            ++pos_;
            skip_space();
            if (peek() != '@') fail("expected '@' in predicate");
            ++pos_;
            Predicate pred;
            pred.key = name("attribute name");
            skip_space();
            if (peek() != '=') fail("expected '=' in predicate");
            ++pos_;
            skip_space();
            const char quote = peek();
            if (quote != '\'' && quote != '"') fail("expected quoted value");
            ++pos_;
            const std::size_t close = text_.find(quote, pos_);
            if (close == std::string_view::npos) fail("unterminated string");
            pred.value = std::string(text_.substr(pos_, close - pos_));
            pos_ = close + 1;
            skip_space();
            if (peek() != ']') fail("expected ']'");
            ++pos_;
            s.predicates.push_back(std::move(pred));
        }
        return s;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

bool matches(const MathNode& node, const Step& step) {
    if (step.test != "*" && node.name != step.test) return false;
    return std::all_of(step.predicates.begin(), step.predicates.end(), [&](const Predicate& p) {
        const std::string* v = node.attribute(p.key);
        return v && *v == p.value;
    });
}

}  // namespace

PathExpr parse_path(std::string_view text) { return PathParser(text).single_path(); }

Query parse_query(std::string_view text) { return PathParser(text).query(); }

std::string render(const PathExpr& expr) {
    std::string out;
    for (const auto& step : expr.steps) {
        out += step.axis == Axis::descendant ? "//" : "/";
        out += step.test;
        for (const auto& p : step.predicates) {
            const char quote = p.value.find('\'') == std::string::npos ? '\'' : '"';
            out += "[@" + p.key + "=" + quote + p.value + quote + "]";
        }
    }
    return out;
}

std::string render(const Query& query) {
    std::string out;
    for (const auto& path : query.paths) {
        if (!out.empty()) out += " | ";
        out += render(path);
    }
    return out;
}

std::vector<NodeId> select(const MathDoc& doc, const PathExpr& expr) {
    const std::size_t n = doc.size();
    // Context nodes for the next step, as a preorder bitmap. The first step
    // is applied to the (virtual) document node whose only child is root.
    std::vector<char> current(n, 0);
    bool first = true;
    for (const auto& step : expr.steps) {
        std::vector<char> next(n, 0);
        if (first) {
            if (step.axis == Axis::child) {
                if (matches(doc.root(), step)) next[0] = 1;
            } else {
                for (std::size_t i = 0; i < n; ++i) next[i] = matches(doc.node(NodeId{i}), step);
            }
            first = false;
        } else if (step.axis == Axis::child) {
            for (std::size_t c = 0; c < n; ++c) {
                if (!current[c]) continue;
                const NodeId ctx{c};
                for (std::size_t i = c + 1; i < doc.subtree_end(ctx); i = doc.subtree_end(NodeId{i})) {
                    if (matches(doc.node(NodeId{i}), step)) next[i] = 1;
                }
            }
        } else {
            // A context nested in an earlier context adds nothing new.
            std::size_t covered_until = 0;
            for (std::size_t c = 0; c < n; ++c) {
                if (!current[c] || c < covered_until) continue;
                const std::size_t end = doc.subtree_end(NodeId{c});
                for (std::size_t i = c + 1; i < end; ++i) {
                    if (matches(doc.node(NodeId{i}), step)) next[i] = 1;
                }
                covered_until = end;
            }
        }
        current = std::move(next);
    }
    std::vector<NodeId> out;
    for (std::size_t i = 0; i < n; ++i) {
        if (current[i]) out.push_back(NodeId{i});
    }
    return out;
}

std::vector<NodeId> select(const MathDoc& doc, const Query& query) {
    std::vector<NodeId> out;
    for (const auto& path : query.paths) {
        const auto part = select(doc, path);
        out.insert(out.end(), part.begin(), part.end());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace mathtools::query
