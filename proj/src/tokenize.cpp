#include "dbac/tokenize.hpp"

#include <cctype>

namespace dbac {

std::string normalize_token(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    for (char c : raw) {
        unsigned char uc = static_cast<unsigned char>(c);
        if (std::isalnum(uc) || c == '<' || c == '>' || uc >= 0x80) {
            out.push_back(static_cast<char>(std::tolower(uc)));
        }
    }
    return out;
}

std::vector<std::string> split_whitespace(std::string_view text) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        std::size_t start = i;
        while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        if (i > start) out.emplace_back(text.substr(start, i - start));
    }
    return out;
}

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> out;
    for (const std::string& raw : split_whitespace(text)) {
        std::string norm = normalize_token(raw);
        if (!norm.empty()) out.push_back(std::move(norm));
    }
    return out;
}

bool is_mask_token(std::string_view token) {
    return token.size() >= 3 && token.front() == '<' && token.back() == '>';
}

std::string join_tokens(const std::vector<std::string>& tokens) {
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i) out.push_back(' ');
        out += tokens[i];
    }
    return out;
}

}  // namespace dbac
