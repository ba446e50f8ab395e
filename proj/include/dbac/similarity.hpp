#pragma once

#include <string>
#include <utility>
#include <vector>

namespace dbac {

// Unigram alignment between a reference and a hypothesis: exact matches only,
// chosen to maximize the match count and, among those, minimize the number of
// contiguous chunks.
struct AlignmentResult {
    std::size_t matches = 0;   // m
    std::size_t chunks = 0;    // ch (0 when m == 0)
    std::size_t hyp_len = 0;
    std::size_t ref_len = 0;
};

// Sentences up to 12 tokens are aligned by exhaustive search (with chunk
// pruning); longer ones by a position-monotone greedy pass that still attains
// the maximum match count.
AlignmentResult align_tokens(const std::vector<std::string>& ref_tokens,
                             const std::vector<std::string>& hyp_tokens);

// Exact-match METEOR score:
//   P = m / hyp_len, R = m / ref_len, F = 10PR / (R + 9P),
//   penalty = 0.5 * (ch / m)^3, score = F * (1 - penalty); m == 0 -> 0.
double meteor_score(const AlignmentResult& a);

double meteor(const std::vector<std::string>& ref_tokens,
              const std::vector<std::string>& hyp_tokens);

// Convenience: runs both sides through the shared tokenizer first.
double meteor(const std::string& reference, const std::string& hypothesis);

// Mean sentence score over (reference, hypothesis) pairs; empty input is an error.
double corpus_meteor(const std::vector<std::pair<std::string, std::string>>& pairs);

}  // namespace dbac
