#include "dbac/masking.hpp"

#include <fstream>

#include "dbac/error.hpp"
#include "dbac/tokenize.hpp"

namespace dbac {

namespace {

std::string strip(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

void add_word(Lexicon& lex, const std::string& word, bool plural_forms) {
    std::string norm = normalize_token(word);
    // Mask-shaped words would break idempotence, so they are never lexicon entries.
    if (norm.empty() || is_mask_token(norm)) return;
    lex.words.insert(norm);
    if (plural_forms) {
        lex.words.insert(norm + "s");
        lex.words.insert(norm + "es");
    }
}

}  // namespace

Lexicon make_lexicon(const std::vector<std::string>& words, const std::string& mask_token,
                     bool plural_forms) {
    if (!is_mask_token(mask_token)) {
        throw ConfigError("mask token must have the form \"<...>\", got \"" + mask_token + "\"");
    }
    Lexicon lex;
    lex.mask_token = mask_token;
    for (const std::string& w : words) add_word(lex, w, plural_forms);
    if (lex.words.empty()) {
        throw ConfigError("lexicon for mask token " + mask_token + " has no words");
    }
    return lex;
}

Lexicon load_lexicon(const std::string& path, const std::string& mask_token,
                     bool plural_forms) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open lexicon file " + path);
    }
    std::vector<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::string w = strip(line);
        if (!w.empty()) words.push_back(w);
    }
    if (words.empty()) {
        throw DataError("lexicon file " + path + " contains no words");
    }
    return make_lexicon(words, mask_token, plural_forms);
}

const std::vector<std::string>& default_gender_words() {
    static const std::vector<std::string> kWords = {
        "man", "woman", "men", "women", "he", "she", "him", "her", "his", "hers",
        "boy", "girl", "boys", "girls", "male", "female", "gentleman", "lady",
        "guy", "guys"};
    return kWords;
}

Lexicon default_gender_lexicon(const std::string& mask_token, bool plural_forms) {
    return make_lexicon(default_gender_words(), mask_token, plural_forms);
}

std::string mask_caption(const std::string& caption, const Lexicon& lex) {
    std::vector<std::string> raw = split_whitespace(caption);
    for (std::string& tok : raw) {
        if (lex.words.count(normalize_token(tok))) tok = lex.mask_token;
    }
    return join_tokens(raw);
}

std::string mask_attribute(const std::string& caption, const Lexicon& lex) {
    return mask_caption(caption, lex);
}

std::string mask_task(const std::string& caption, const Lexicon& lex) {
    return mask_caption(caption, lex);
}

}  // namespace dbac
