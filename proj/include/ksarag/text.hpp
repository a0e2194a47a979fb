#pragma once
// Deterministic tokenizer plus small text helpers. The token is the unit for
// chunk windows, context budgets and prompt size estimates, so the rules are
// fixed: split on Unicode whitespace, then peel leading/trailing ASCII
// punctuation off each word as single-character tokens. Interior punctuation
// (hyphens, apostrophes) stays inside the word.
//
// Emitted tokens re-tokenize to themselves, so joining tokens with a single
// space round-trips: tokenize(join(tokenize(t))) == tokenize(t).

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ksarag::text {

namespace detail {

inline bool is_unicode_space(char32_t cp) {
    switch (cp) {
        case 0x09: case 0x0A: case 0x0B: case 0x0C: case 0x0D:
        case 0x20: case 0x85: case 0xA0: case 0x1680:
        case 0x2028: case 0x2029: case 0x202F: case 0x205F: case 0x3000:
            return true;
        default:
            return cp >= 0x2000 && cp <= 0x200A;
    }
}

inline bool is_ascii_punct(unsigned char c) {
    return (c >= 0x21 && c <= 0x2F) || (c >= 0x3A && c <= 0x40) ||
           (c >= 0x5B && c <= 0x60) || (c >= 0x7B && c <= 0x7E);
}

// Decodes one UTF-8 code point at i; advances i. Malformed bytes are passed
// through as single code units so tokenization never fails.
inline char32_t decode_utf8(std::string_view s, std::size_t& i) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    std::size_t len = 1;
    char32_t cp = c;
    if (c >= 0xF0) {
        len = 4;
        cp = c & 0x07u;
    } else if (c >= 0xE0) {
        len = 3;
        cp = c & 0x0Fu;
    } else if (c >= 0xC0) {
        len = 2;
        cp = c & 0x1Fu;
    }
    if (i + len > s.size()) len = 1, cp = c;
    for (std::size_t k = 1; k < len; ++k) {
        unsigned char cc = static_cast<unsigned char>(s[i + k]);
        if ((cc & 0xC0) != 0x80) {
            len = 1;
            cp = c;
            break;
        }
        cp = (cp << 6) | (cc & 0x3Fu);
    }
    i += len;
    return cp;
}

inline void emit_word(std::string_view word, std::vector<std::string>& out) {
    std::size_t b = 0;
    std::size_t e = word.size();
    while (b < e && is_ascii_punct(static_cast<unsigned char>(word[b]))) ++b;
    while (e > b && is_ascii_punct(static_cast<unsigned char>(word[e - 1]))) --e;
    for (std::size_t i = 0; i < b; ++i) out.emplace_back(1, word[i]);
    if (b < e) out.emplace_back(word.substr(b, e - b));
    for (std::size_t i = e; i < word.size(); ++i) out.emplace_back(1, word[i]);
}

} // namespace detail

inline std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> out;
    std::size_t i = 0;
    std::size_t word_start = 0;
    bool in_word = false;
    while (i < text.size()) {
        std::size_t at = i;
        char32_t cp = detail::decode_utf8(text, i);
        if (detail::is_unicode_space(cp)) {
            if (in_word) {
                detail::emit_word(text.substr(word_start, at - word_start), out);
                in_word = false;
            }
        } else if (!in_word) {
            in_word = true;
            word_start = at;
        }
    }
    if (in_word) detail::emit_word(text.substr(word_start), out);
    return out;
}

inline std::size_t token_count(std::string_view text) {
    return tokenize(text).size();
}

inline std::string join_tokens(const std::vector<std::string>& tokens,
                               std::size_t begin, std::size_t end) {
    std::string out;
    for (std::size_t i = begin; i < end; ++i) {
        if (i > begin) out.push_back(' ');
        out += tokens[i];
    }
    return out;
}

inline std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && (static_cast<unsigned char>(s[b]) <= 0x20)) ++b;
    while (e > b && (static_cast<unsigned char>(s[e - 1]) <= 0x20)) --e;
    return std::string(s.substr(b, e - b));
}

// Strips an optional leading UTF-8 BOM and a single outer markdown code fence
// (``` or ```json). Model responses routinely arrive wrapped this way.
inline std::string strip_code_fences(std::string_view raw) {
    std::string_view s = raw;
    if (s.size() >= 3 && s.substr(0, 3) == "\xEF\xBB\xBF") s.remove_prefix(3);
    std::string t = trim(s);
    if (t.size() >= 3 && t.compare(0, 3, "```") == 0) {
        std::size_t nl = t.find('\n');
        if (nl == std::string::npos) return t;
        std::size_t close = t.rfind("```");
        if (close > nl) {
            return trim(std::string_view(t).substr(nl + 1, close - nl - 1));
        }
    }
    return t;
}

inline std::string to_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    return out;
}

} // namespace ksarag::text
