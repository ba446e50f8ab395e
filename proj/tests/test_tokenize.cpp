#include "doctest.h"

#include <string>
#include <vector>

#include "dbac/rng.hpp"
#include "dbac/tokenize.hpp"

using namespace dbac;

TEST_CASE("tokenize lowercases and strips punctuation") {
    CHECK(tokenize("A man, riding; a horse!") ==
          std::vector<std::string>{"a", "man", "riding", "a", "horse"});
    CHECK(tokenize("") == std::vector<std::string>{});
    CHECK(tokenize("   \t  ") == std::vector<std::string>{});
    CHECK(tokenize("Hello???") == std::vector<std::string>{"hello"});
    CHECK(tokenize("it's") == std::vector<std::string>{"its"});
    CHECK(tokenize("x2 3y") == std::vector<std::string>{"x2", "3y"});
}

TEST_CASE("tokenize keeps mask delimiters") {
    CHECK(tokenize("the <Obj> shines") ==
          std::vector<std::string>{"the", "<obj>", "shines"});
    CHECK(tokenize("a <gender> walks") ==
          std::vector<std::string>{"a", "<gender>", "walks"});
}

TEST_CASE("tokens that are only punctuation disappear") {
    CHECK(tokenize("a -- b") == std::vector<std::string>{"a", "b"});
    CHECK(tokenize("...") == std::vector<std::string>{});
}

TEST_CASE("normalize_token is idempotent") {
    // Hand-rolled generator: random printable ASCII strings.
    Rng rng(20240816);
    for (int trial = 0; trial < 1000; ++trial) {
        std::string s;
        std::size_t len = rng.next_index(12);
        for (std::size_t i = 0; i < len; ++i) {
            s.push_back(static_cast<char>(32 + rng.next_index(95)));
        }
        std::string once = normalize_token(s);
        CHECK(normalize_token(once) == once);
    }
}

TEST_CASE("split_whitespace preserves raw tokens") {
    CHECK(split_whitespace("A man,  riding") ==
          std::vector<std::string>{"A", "man,", "riding"});
    CHECK(split_whitespace("") == std::vector<std::string>{});
}

TEST_CASE("join_tokens is the inverse of split_whitespace on clean text") {
    std::string s = "a man rides a horse";
    CHECK(join_tokens(split_whitespace(s)) == s);
    CHECK(join_tokens({}) == "");
}

TEST_CASE("is_mask_token shape rules") {
    CHECK(is_mask_token("<g>"));
    CHECK(is_mask_token("<gender>"));
    CHECK(is_mask_token("<unk>"));
    CHECK(is_mask_token("<Obj>"));
    CHECK_FALSE(is_mask_token("<>"));
    CHECK_FALSE(is_mask_token("gender"));
    CHECK_FALSE(is_mask_token("x<y>"));
    CHECK_FALSE(is_mask_token("<y>x"));
    CHECK_FALSE(is_mask_token(""));
}
