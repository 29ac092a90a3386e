#include "poa/text.hpp"

#include <algorithm>
#include <cctype>

namespace poa {

namespace {

bool is_ascii_space(unsigned char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

// Decode one UTF-8 codepoint starting at `i`; returns its length in bytes.
size_t decode_utf8(std::string_view s, size_t i, uint32_t& cp) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    if (c < 0x80) {
        cp = c;
        return 1;
    }
    size_t len = (c >= 0xF0) ? 4 : (c >= 0xE0) ? 3 : 2;
    if (i + len > s.size()) {
        cp = c;
        return 1;
    }
    static const uint32_t first_mask[5] = {0, 0x7F, 0x1F, 0x0F, 0x07};
    cp = c & first_mask[len];
    for (size_t k = 1; k < len; ++k) {
        unsigned char cc = static_cast<unsigned char>(s[i + k]);
        if ((cc & 0xC0) != 0x80) {
            cp = c;
            return 1;
        }
        cp = (cp << 6) | (cc & 0x3F);
    }
    return len;
}

bool is_unicode_space(uint32_t cp) {
    if (cp < 0x80) return is_ascii_space(static_cast<unsigned char>(cp));
    return cp == 0x00A0 || (cp >= 0x2000 && cp <= 0x200A) || cp == 0x2028 ||
           cp == 0x2029 || cp == 0x202F || cp == 0x205F || cp == 0x3000;
}

bool is_ascii_punct(unsigned char c) { return std::ispunct(c) != 0; }

// Punctuation-only codepoints commonly found in prose.
bool is_unicode_punct(uint32_t cp) {
    switch (cp) {
        case 0x2013:  // en dash
        case 0x2014:  // em dash
        case 0x2018:
        case 0x2019:
        case 0x201C:
        case 0x201D:
        case 0x2026:  // ellipsis
        case 0x00AB:
        case 0x00BB:
            return true;
        default:
            return cp < 0x80 && is_ascii_punct(static_cast<unsigned char>(cp));
    }
}

// Strip leading/trailing punctuation codepoints from a UTF-8 piece.
std::string strip_edge_punct(std::string_view piece) {
    // Leading.
    size_t begin = 0;
    while (begin < piece.size()) {
        uint32_t cp;
        size_t len = decode_utf8(piece, begin, cp);
        if (!is_unicode_punct(cp)) break;
        begin += len;
    }
    // Trailing: walk forward remembering the last non-punct end.
    size_t end = begin;
    size_t i = begin;
    while (i < piece.size()) {
        uint32_t cp;
        size_t len = decode_utf8(piece, i, cp);
        i += len;
        if (!is_unicode_punct(cp)) end = i;
    }
    return std::string(piece.substr(begin, end - begin));
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    size_t i = 0;
    size_t start = 0;
    bool in_piece = false;
    auto flush = [&](size_t piece_end) {
        if (!in_piece) return;
        std::string token = strip_edge_punct(text.substr(start, piece_end - start));
        if (!token.empty()) tokens.push_back(std::move(token));
        in_piece = false;
    };
    while (i < text.size()) {
        uint32_t cp;
        size_t len = decode_utf8(text, i, cp);
        if (is_unicode_space(cp)) {
            flush(i);
        } else if (!in_piece) {
            start = i;
            in_piece = true;
        }
        i += len;
    }
    flush(text.size());
    return tokens;
}

std::string to_lower(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string trim(std::string_view text) {
    size_t b = 0;
    size_t e = text.size();
    while (b < e && is_ascii_space(static_cast<unsigned char>(text[b]))) ++b;
    while (e > b && is_ascii_space(static_cast<unsigned char>(text[e - 1]))) --e;
    return std::string(text.substr(b, e - b));
}

namespace {

bool ends_with(std::string_view s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

bool is_vowel(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u'; }

// After stripping -ing/-ed, collapse a doubled final consonant (cropping ->
// cropp -> crop) and leave short stems alone.
std::string fix_stem(std::string s) {
    if (s.size() >= 3) {
        char a = s[s.size() - 1];
        char b = s[s.size() - 2];
        if (a == b && !is_vowel(a) && a != 'l' && a != 's') s.pop_back();
    }
    return s;
}

}  // namespace

std::string lemmatize(std::string_view token) {
    std::string w = to_lower(token);
    if (ends_with(w, "'s")) w.resize(w.size() - 2);
    if (w.size() > 4 && ends_with(w, "ies")) {
        w.resize(w.size() - 3);
        w += 'y';
    } else if (w.size() > 4 && (ends_with(w, "ses") || ends_with(w, "xes") ||
                                ends_with(w, "zes") || ends_with(w, "ches") ||
                                ends_with(w, "shes"))) {
        w.resize(w.size() - 2);
    } else if (w.size() > 3 && ends_with(w, "s") && !ends_with(w, "ss") &&
               !ends_with(w, "us") && !ends_with(w, "is")) {
        w.resize(w.size() - 1);
    }
    if (w.size() > 5 && ends_with(w, "ing")) {
        w.resize(w.size() - 3);
        w = fix_stem(std::move(w));
    } else if (w.size() > 4 && ends_with(w, "ed")) {
        w.resize(w.size() - 2);
        w = fix_stem(std::move(w));
    }
    return w;
}

const std::vector<std::string>& default_stopwords() {
    static const std::vector<std::string> words = {
        "a",       "an",      "and",    "are",   "as",     "at",    "be",    "been",
        "being",   "but",     "by",     "can",   "could",  "did",   "do",    "does",
        "for",     "from",    "had",    "has",   "have",   "he",    "her",   "his",
        "i",       "if",      "in",     "into",  "is",     "it",    "its",   "may",
        "might",   "more",    "most",   "much",  "must",   "no",    "nor",   "not",
        "of",      "on",      "onto",   "or",    "our",    "she",   "should", "so",
        "some",    "such",    "than",   "that",  "the",    "their", "them",  "then",
        "there",   "these",   "they",   "this",  "those",  "through", "to",  "too",
        "upon",    "very",    "was",    "we",    "were",   "what",  "when",  "where",
        "which",   "while",   "who",    "will",  "with",   "within", "without", "would",
        "it's",    "also",    "each",   "other", "own",    "same",  "how",   "why",
        "between", "about",   "above",  "below", "over",   "under", "again", "further",
        "here",    "all",     "any",    "both",  "few",    "only",  "out",   "up",
        "down",    "off",     "across", "along", "around", "among", "toward", "towards",
    };
    return words;
}

bool starts_with_ci(std::string_view text, std::string_view prefix) {
    if (text.size() < prefix.size()) return false;
    for (size_t i = 0; i < prefix.size(); ++i) {
        if (std::tolower(static_cast<unsigned char>(text[i])) !=
            std::tolower(static_cast<unsigned char>(prefix[i]))) {
            return false;
        }
    }
    return true;
}

bool contains_word_ci(std::string_view text, std::string_view word) {
    if (word.empty()) return false;
    std::string lt = to_lower(text);
    std::string lw = to_lower(word);
    size_t pos = 0;
    auto is_letter = [](unsigned char c) { return std::isalpha(c) != 0; };
    while ((pos = lt.find(lw, pos)) != std::string::npos) {
        bool left_ok = pos == 0 || !is_letter(static_cast<unsigned char>(lt[pos - 1]));
        size_t end = pos + lw.size();
        bool right_ok = end == lt.size() || !is_letter(static_cast<unsigned char>(lt[end]));
        if (left_ok && right_ok) return true;
        ++pos;
    }
    return false;
}

}  // namespace poa
