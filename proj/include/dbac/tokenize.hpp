#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace dbac {

// Shared tokenizer used by every text-consuming module: lowercase, strip
// punctuation except the <...> delimiters of mask tokens, split on whitespace.
// Tokens that normalize to the empty string (pure punctuation) are dropped.
std::vector<std::string> tokenize(std::string_view text);

// Normalization applied to a single whitespace-delimited raw token.
std::string normalize_token(std::string_view raw);

// Raw whitespace split, no normalization. Masking uses this so that unmasked
// tokens keep their original spelling.
std::vector<std::string> split_whitespace(std::string_view text);

// True for tokens of the form "<...>" (mask tokens, "<unk>").
bool is_mask_token(std::string_view token);

std::string join_tokens(const std::vector<std::string>& tokens);

}  // namespace dbac
