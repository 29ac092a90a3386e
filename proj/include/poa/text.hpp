#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace poa {

// Shared tokenizer for every word-count statistic: split on whitespace
// (ASCII plus the common Unicode space codepoints), then strip leading and
// trailing punctuation from each piece. Interior hyphens are kept, so
// hyphenated words stay whole. Pieces that are all punctuation are dropped.
std::vector<std::string> tokenize(std::string_view text);

std::string to_lower(std::string_view text);

std::string trim(std::string_view text);

// Lowercase + plural/verb suffix stripping. A crude normalizer for term
// ranking, not a linguistic lemmatizer: handles -ies/-es/-s plurals and
// -ing/-ed verb forms with a doubled-consonant fixup.
std::string lemmatize(std::string_view token);

// Words carrying no content for term-frequency ranking.
const std::vector<std::string>& default_stopwords();

bool starts_with_ci(std::string_view text, std::string_view prefix);

// True if `word` occurs in `text` delimited by non-letter characters,
// case-insensitively.
bool contains_word_ci(std::string_view text, std::string_view word);

}  // namespace poa
