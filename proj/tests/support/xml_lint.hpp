#pragma once

// Minimal XML well-formedness checker used as an oracle for the SVG
// renderers: prolog, balanced tags, quoted attributes, escaped text. Not a
// general XML parser; strict enough to catch broken emission.

#include <cctype>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace xml_lint {

struct XmlError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline bool name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == ':' ||
           c == '.';
}

inline void check_text(std::string_view text) {
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '<' || text[i] == '>') throw XmlError("unescaped angle bracket in text");
        if (text[i] == '&') {
            const auto semi = text.find(';', i);
            if (semi == std::string_view::npos || semi - i > 8) {
                throw XmlError("bare ampersand in text");
            }
            i = semi;
        }
    }
}

} // namespace detail

/// Throws XmlError unless `doc` is a well-formed XML document with one
/// root element.
inline void check_well_formed(std::string_view doc) {
    std::size_t i = 0;
    std::vector<std::string> stack;
    bool seen_root = false;

    auto skip_ws = [&] {
        while (i < doc.size() && std::isspace(static_cast<unsigned char>(doc[i]))) ++i;
    };

    skip_ws();
    if (doc.compare(i, 5, "<?xml") == 0) {
        const auto end = doc.find("?>", i);
        if (end == std::string_view::npos) throw XmlError("unterminated XML prolog");
        i = end + 2;
    }

    while (i < doc.size()) {
        const auto lt = doc.find('<', i);
        if (lt == std::string_view::npos) {
            detail::check_text(doc.substr(i));
            break;
        }
        detail::check_text(doc.substr(i, lt - i));
        if (stack.empty()) {
            // outside any element only whitespace is allowed
            for (std::size_t j = i; j < lt; ++j) {
                if (!std::isspace(static_cast<unsigned char>(doc[j]))) {
                    throw XmlError("text outside the root element");
                }
            }
        }
        i = lt + 1;
        if (i >= doc.size()) throw XmlError("dangling '<'");

        if (doc.compare(i, 3, "!--") == 0) {
            const auto end = doc.find("-->", i);
            if (end == std::string_view::npos) throw XmlError("unterminated comment");
            i = end + 3;
            continue;
        }
        const bool closing = doc[i] == '/';
        if (closing) ++i;

        std::string name;
        while (i < doc.size() && detail::name_char(doc[i])) name.push_back(doc[i++]);
        if (name.empty()) throw XmlError("empty tag name");

        if (closing) {
            while (i < doc.size() && std::isspace(static_cast<unsigned char>(doc[i]))) ++i;
            if (i >= doc.size() || doc[i] != '>') throw XmlError("malformed closing tag");
            ++i;
            if (stack.empty() || stack.back() != name) {
                throw XmlError("mismatched closing tag </" + name + ">");
            }
            stack.pop_back();
            continue;
        }

        // attributes
        bool self_closing = false;
        for (;;) {
            while (i < doc.size() && std::isspace(static_cast<unsigned char>(doc[i]))) ++i;
            if (i >= doc.size()) throw XmlError("unterminated tag <" + name + ">");
            if (doc[i] == '>') {
                ++i;
                break;
            }
            if (doc[i] == '/') {
                ++i;
                if (i >= doc.size() || doc[i] != '>') throw XmlError("malformed self-close");
                ++i;
                self_closing = true;
                break;
            }
            std::string attr;
            while (i < doc.size() && detail::name_char(doc[i])) attr.push_back(doc[i++]);
            if (attr.empty()) throw XmlError("bad attribute in <" + name + ">");
            while (i < doc.size() && std::isspace(static_cast<unsigned char>(doc[i]))) ++i;
            if (i >= doc.size() || doc[i] != '=') throw XmlError("attribute without value");
            ++i;
            while (i < doc.size() && std::isspace(static_cast<unsigned char>(doc[i]))) ++i;
            if (i >= doc.size() || (doc[i] != '"' && doc[i] != '\'')) {
                throw XmlError("unquoted attribute value");
            }
            const char quote = doc[i++];
            const auto end = doc.find(quote, i);
            if (end == std::string_view::npos) throw XmlError("unterminated attribute value");
            detail::check_text(doc.substr(i, end - i));
            i = end + 1;
        }

        if (stack.empty()) {
            if (seen_root) throw XmlError("multiple root elements");
            seen_root = true;
        }
        if (!self_closing) stack.push_back(name);
    }

    if (!stack.empty()) throw XmlError("unclosed element <" + stack.back() + ">");
    if (!seen_root) throw XmlError("no root element");
}

/// Number of occurrences of a literal substring (e.g. legend group opens).
inline std::size_t count_occurrences(std::string_view doc, std::string_view needle) {
    std::size_t count = 0;
    for (auto pos = doc.find(needle); pos != std::string_view::npos;
         pos = doc.find(needle, pos + 1)) {
        ++count;
    }
    return count;
}

} // namespace xml_lint
