#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace worldgen {

/// Lowercases and splits on anything that is not an ASCII letter or digit.
/// Bytes >= 0x80 are kept inside tokens so UTF-8 words survive intact.
std::vector<std::string> tokenize(std::string_view text);

/// Trim, collapse internal whitespace to one space, ASCII-lowercase.
/// This is the key used for all name resolution.
std::string fold_name(std::string_view name);

std::string trim(std::string_view s);
std::string to_lower(std::string_view s);

/// Splits on whitespace, keeping punctuation attached to words.
std::vector<std::string> split_words(std::string_view text);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

}  // namespace worldgen
