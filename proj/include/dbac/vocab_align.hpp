#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "dbac/embedding.hpp"

namespace dbac {

inline constexpr const char* kUnkToken = "<unk>";

// HGC-side and MGC-side vocabularies (normalized tokens, mask tokens excluded).
struct VocabPair {
    std::set<std::string> v_hgc;
    std::set<std::string> v_mgc;
};

// Outcome of building a substitution map for the out-of-vocabulary words
// V_HGC \ V_MGC. Counts are over word types, not occurrences.
struct SubstitutionStats {
    double delta = 0.0;
    std::size_t total_oov = 0;
    std::size_t contextual = 0;               // replaced by a near neighbor
    std::size_t unk = 0;                      // fell back to "<unk>"
    std::map<std::string, std::string> per_word;  // oov word -> replacement
};

struct AlignedCorpus {
    std::vector<std::string> captions;  // normalized, space-joined tokens
    SubstitutionStats stats;
};

// Unique normalized tokens across a caption corpus; mask tokens ("<...>")
// are never vocabulary entries.
std::set<std::string> extract_vocab(const std::vector<std::string>& corpus);

VocabPair make_vocab_pair(const std::vector<std::string>& hgc_corpus,
                          const std::vector<std::string>& mgc_corpus);

// Builds the OOV substitution map without rewriting any text. For each word
// v in V_HGC \ V_MGC: the nearest V_MGC word by cosine distance if that
// distance is < delta, otherwise "<unk>"; words without vectors map to
// "<unk>". delta must be > 0.
SubstitutionStats build_substitution_map(const VocabPair& vocab, const EmbeddingTable& table,
                                         double delta);

// Rewrites every HGC caption through the contextual substitution map. One
// replacement per word type, applied to all its occurrences; mask tokens and
// "<unk>" pass through untouched. MGC captions are never rewritten.
AlignedCorpus contextual_substitute(const std::vector<std::string>& hgc_corpus,
                                    const VocabPair& vocab, const EmbeddingTable& table,
                                    double delta);

// Baseline: every OOV word becomes "<unk>".
AlignedCorpus constant_substitute(const std::vector<std::string>& hgc_corpus,
                                  const VocabPair& vocab);

// contextual / total_oov; defined as 1.0 when there is nothing to replace.
double substitution_rate(const SubstitutionStats& stats);

}  // namespace dbac
