#include "mathtools/serializer.hpp"

namespace mathtools {

namespace {

void escape_text(std::string& out, std::string_view s) {
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
}

void escape_attribute(std::string& out, std::string_view s) {
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '"': out += "&quot;"; break;
            case '\t': out += "&#9;"; break;
            case '\n': out += "&#10;"; break;
            case '\r': out += "&#13;"; break;
            default: out += c;
        }
    }
}

class Writer {
public:
    explicit Writer(bool pretty) : pretty_(pretty) {}

    void element(const MathNode& node, std::size_t depth, bool declare_namespace) {
        indent(depth);
        out_ += '<';
        out_ += node.name;
        if (declare_namespace) {
            out_ += " xmlns=\"";
            out_ += kMathMLNamespace;
            out_ += '"';
        }
        for (const auto& attr : node.attributes) {
            out_ += ' ';
            out_ += attr.key;
            out_ += "=\"";
            escape_attribute(out_, attr.value);
            out_ += '"';
        }
        if (!node.text && node.children.empty()) {
            out_ += "/>";
            newline();
            return;
        }
        out_ += '>';
        if (node.children.empty()) {
            escape_text(out_, *node.text);
        } else {
            newline();
            if (node.text) {
                indent(depth + 1);
                escape_text(out_, *node.text);
                newline();
            }
            for (const auto& child : node.children) element(child, depth + 1, false);
            indent(depth);
        }
        out_ += "</";
        out_ += node.name;
        out_ += '>';
        newline();
    }

    std::string take() { return std::move(out_); }

private:
    void indent(std::size_t depth) {
        if (pretty_) out_.append(2 * depth, ' ');
    }
    void newline() {
        if (pretty_) out_ += '\n';
    }

    bool pretty_;
    std::string out_;
};

}  // namespace

std::string serialize(const MathDoc& doc, SerializeOptions options) {
    Writer writer(options.pretty);
    writer.element(doc.root(), 0, true);
    return writer.take();
}

std::string serialize_node(const MathNode& node, SerializeOptions options) {
    Writer writer(options.pretty);
    writer.element(node, 0, false);
    return writer.take();
}

}  // namespace mathtools
