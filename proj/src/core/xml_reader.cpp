#include "xml_reader.hpp"

#include <cstdint>

#include "mathtools/error.hpp"

namespace mathtools::detail {

namespace {

constexpr std::size_t kMaxDepth = 2048;

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

bool is_name_char(char c) {
    const auto u = static_cast<unsigned char>(c);
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' ||
           c == '_' || c == '.' || c == ':' || u >= 0x80;
}

bool is_name_start(char c) {
    return is_name_char(c) && c != '-' && c != '.' && !(c >= '0' && c <= '9');
}

void append_utf8(std::string& out, std::uint32_t cp) {
    if (cp < 0x80) {
        out += static_cast<char>(cp);
    } else if (cp < 0x800) {
        out += static_cast<char>(0xC0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
        out += static_cast<char>(0xE0 | (cp >> 12));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
        out += static_cast<char>(0xF0 | (cp >> 18));
        out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    }
}

class Reader {
public:
    Reader(std::string_view input, const EntityResolver& resolve) : in_(input), resolve_(resolve) {}

    RawElement read_document() {
        if (in_.substr(0, 3) == "\xEF\xBB\xBF") pos_ = 3;
        skip_misc();
        if (at_end()) fail("no math element");
        if (peek() != '<') fail("text outside of the root element");
        RawElement root = read_element(0);
        skip_misc();
        if (!at_end()) {
            if (peek() == '<') fail("more than one top-level element");
            fail("text after the root element");
        }
        return root;
    }

private:
    [[noreturn]] void fail(const std::string& what) const { throw MalformedInput(what, pos_); }

    bool at_end() const { return pos_ >= in_.size(); }
    char peek(std::size_t ahead = 0) const { return pos_ + ahead < in_.size() ? in_[pos_ + ahead] : '\0'; }
    bool starts_with(std::string_view s) const { return in_.substr(pos_, s.size()) == s; }

    void expect(std::string_view s) {
        if (!starts_with(s)) fail("expected '" + std::string(s) + "'");
        pos_ += s.size();
    }

    void skip_space() {
        while (!at_end() && is_space(in_[pos_])) ++pos_;
    }

    void skip_until(std::string_view terminator, const char* what) {
        const std::size_t end = in_.find(terminator, pos_);
        if (end == std::string_view::npos) fail(std::string("unterminated ") + what);
        pos_ = end + terminator.size();
    }

    // Whitespace, comments, processing instructions and DOCTYPE outside the root.
    void skip_misc() {
        for (;;) {
            skip_space();
            if (starts_with("<!--")) {
                skip_until("-->", "comment");
            } else if (starts_with("<?")) {
                skip_until("?>", "processing instruction");
            } else if (starts_with("<!DOCTYPE")) {
                skip_doctype();
            } else {
                return;
            }
        }
    }

    void skip_doctype() {
        int brackets = 0;
        while (!at_end()) {
            const char c = in_[pos_++];
            if (c == '[') ++brackets;
            if (c == ']') --brackets;
            if (c == '>' && brackets <= 0) return;
        }
        fail("unterminated DOCTYPE");
    }

    std::string read_name() {
        const std::size_t start = pos_;
        if (at_end() || !is_name_start(peek())) fail("expected a name");
        while (!at_end() && is_name_char(peek())) ++pos_;
        return std::string(in_.substr(start, pos_ - start));
    }

    // At '&'.
    void read_reference(std::string& out) {
        const std::size_t start = pos_;
        ++pos_;
        const std::size_t semi = in_.find(';', pos_);
        if (semi == std::string_view::npos || semi - pos_ > 64) fail("unterminated reference");
        const std::string_view body = in_.substr(pos_, semi - pos_);
        pos_ = semi + 1;
        if (body.empty()) {
            pos_ = start;
            fail("empty reference");
        }
        if (body[0] == '#') {
            std::uint32_t cp = 0;
            const bool hex = body.size() > 1 && (body[1] == 'x' || body[1] == 'X');
            const std::string_view digits = body.substr(hex ? 2 : 1);
            if (digits.empty()) fail("bad character reference");
            for (char c : digits) {
                int d = -1;
                if (c >= '0' && c <= '9') d = c - '0';
                else if (hex && c >= 'a' && c <= 'f') d = c - 'a' + 10;
                else if (hex && c >= 'A' && c <= 'F') d = c - 'A' + 10;
                if (d < 0 || cp > 0x10FFFF) {
                    pos_ = start;
                    fail("bad character reference");
                }
                cp = cp * (hex ? 16 : 10) + static_cast<std::uint32_t>(d);
            }
            if (cp == 0 || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
                pos_ = start;
                fail("character reference out of range");
            }
            append_utf8(out, cp);
            return;
        }
        if (body == "lt") out += '<';
        else if (body == "gt") out += '>';
        else if (body == "amp") out += '&';
        else if (body == "quot") out += '"';
        else if (body == "apos") out += '\'';
        else if (auto replacement = resolve_(body, start)) out += *replacement;
        else {
            pos_ = start;
            fail("undeclared entity '&" + std::string(body) + ";'");
        }
    }

    std::string read_attribute_value() {
        const char quote = peek();
        if (quote != '"' && quote != '\'') fail("expected a quoted attribute value");
        ++pos_;
        std::string value;
        for (;;) {
            if (at_end()) fail("unterminated attribute value");
            const char c = in_[pos_];
            if (c == quote) {
                ++pos_;
                return value;
            }
            if (c == '<') fail("'<' in attribute value");
            if (c == '&') {
                read_reference(value);
            } else {
                value += c;
                ++pos_;
            }
        }
    }

    RawElement read_element(std::size_t depth) {
        if (depth > kMaxDepth) fail("elements nested too deeply");
        RawElement el;
        el.offset = pos_;
        expect("<");
        el.qname = read_name();
        el.name_end = pos_;
        for (;;) {
            const bool had_space = !at_end() && is_space(peek());
            skip_space();
            if (starts_with("/>")) {
                pos_ += 2;
                return el;
            }
            if (starts_with(">")) {
                ++pos_;
                break;
            }
            if (!had_space) fail("expected whitespace before attribute");
            RawAttribute attr;
            attr.offset = pos_;
            attr.qname = read_name();
            skip_space();
            expect("=");
            skip_space();
            attr.value = read_attribute_value();
            for (const auto& other : el.attributes) {
                if (other.qname == attr.qname) {
                    pos_ = attr.offset;
                    fail("duplicate attribute '" + attr.qname + "'");
                }
            }
            el.attributes.push_back(std::move(attr));
        }
        read_content(el, depth);
        return el;
    }

    void read_content(RawElement& el, std::size_t depth) {
        for (;;) {
            if (at_end()) fail("unclosed element <" + el.qname + ">");
            const char c = peek();
            if (c == '<') {
                if (starts_with("</")) {
                    const std::size_t close_at = pos_;
                    pos_ += 2;
                    const std::string name = read_name();
                    skip_space();
                    expect(">");
                    if (name != el.qname) {
                        pos_ = close_at;
                        fail("mismatched closing tag </" + name + "> for <" + el.qname + ">");
                    }
                    return;
                }
                if (starts_with("<!--")) {
                    skip_until("-->", "comment");
                } else if (starts_with("<![CDATA[")) {
                    pos_ += 9;
                    const std::size_t end = in_.find("]]>", pos_);
                    if (end == std::string_view::npos) fail("unterminated CDATA section");
                    el.text.append(in_.substr(pos_, end - pos_));
                    pos_ = end + 3;
                } else if (starts_with("<?")) {
                    skip_until("?>", "processing instruction");
                } else {
                    el.children.push_back(read_element(depth + 1));
                }
            } else if (c == '&') {
                read_reference(el.text);
            } else {
                el.text += c;
                ++pos_;
            }
        }
    }

    std::string_view in_;
    const EntityResolver& resolve_;
    std::size_t pos_ = 0;
};

}  // namespace

RawElement read_xml(std::string_view input, const EntityResolver& resolve_entity) {
    return Reader(input, resolve_entity).read_document();
}

}  // namespace mathtools::detail
