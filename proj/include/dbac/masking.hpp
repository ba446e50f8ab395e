#pragma once

#include <set>
#include <string>
#include <vector>

namespace dbac {

// A set of words to hide plus the token that replaces them. Words are stored
// normalized (lowercase); matching is whole-token and case-insensitive.
struct Lexicon {
    std::set<std::string> words;
    std::string mask_token;
};

// Builds a lexicon from a word list. When `plural_forms` is set, "+s" and
// "+es" variants of every word are added too.
Lexicon make_lexicon(const std::vector<std::string>& words, const std::string& mask_token,
                     bool plural_forms = false);

// Word-list file: one word per line, '#' starts a comment, surrounding
// whitespace is stripped, blank lines ignored. Throws DataError on I/O.
Lexicon load_lexicon(const std::string& path, const std::string& mask_token,
                     bool plural_forms = false);

// The built-in gender word list (man, woman, he, she, ...).
const std::vector<std::string>& default_gender_words();
Lexicon default_gender_lexicon(const std::string& mask_token = "<gender>",
                               bool plural_forms = false);

// Replaces every whitespace token whose normalized form is in the lexicon by
// the mask token. Unmasked tokens keep their original spelling; token count
// is preserved; masking is idempotent (mask tokens never match the lexicon).
std::string mask_caption(const std::string& caption, const Lexicon& lex);

// Attribute-side masking (default mask token "<gender>").
std::string mask_attribute(const std::string& caption, const Lexicon& lex);

// Task-side masking (default mask token "<Obj>"). The lexicon should carry
// the dataset's task words plus plural forms.
std::string mask_task(const std::string& caption, const Lexicon& lex);

}  // namespace dbac
