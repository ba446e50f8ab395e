#include "dbac/vocab_align.hpp"

#include "dbac/error.hpp"
#include "dbac/tokenize.hpp"

namespace dbac {

std::set<std::string> extract_vocab(const std::vector<std::string>& corpus) {
    std::set<std::string> vocab;
    for (const std::string& caption : corpus) {
        for (const std::string& tok : tokenize(caption)) {
            if (!is_mask_token(tok)) vocab.insert(tok);
        }
    }
    return vocab;
}

VocabPair make_vocab_pair(const std::vector<std::string>& hgc_corpus,
                          const std::vector<std::string>& mgc_corpus) {
    return VocabPair{extract_vocab(hgc_corpus), extract_vocab(mgc_corpus)};
}

SubstitutionStats build_substitution_map(const VocabPair& vocab, const EmbeddingTable& table,
                                         double delta) {
    if (!(delta > 0.0)) {
        throw ConfigError("substitution threshold delta must be > 0");
    }

    SubstitutionStats stats;
    stats.delta = delta;
    for (const std::string& v : vocab.v_hgc) {
        if (vocab.v_mgc.count(v)) continue;
        ++stats.total_oov;
        auto nn = nearest_in_vocab(v, vocab.v_mgc, table);
        if (nn && nn->distance < delta) {
            stats.per_word[v] = nn->word;
            ++stats.contextual;
        } else {
            stats.per_word[v] = kUnkToken;
            ++stats.unk;
        }
    }
    return stats;
}

namespace {

std::vector<std::string> apply_map(const std::vector<std::string>& corpus,
                                   const std::map<std::string, std::string>& per_word) {
    std::vector<std::string> out;
    out.reserve(corpus.size());
    for (const std::string& caption : corpus) {
        std::vector<std::string> toks = tokenize(caption);
        for (std::string& tok : toks) {
            if (is_mask_token(tok)) continue;
            auto it = per_word.find(tok);
            if (it != per_word.end()) tok = it->second;
        }
        out.push_back(join_tokens(toks));
    }
    return out;
}

}  // namespace

AlignedCorpus contextual_substitute(const std::vector<std::string>& hgc_corpus,
                                    const VocabPair& vocab, const EmbeddingTable& table,
                                    double delta) {
    AlignedCorpus out;
    out.stats = build_substitution_map(vocab, table, delta);
    out.captions = apply_map(hgc_corpus, out.stats.per_word);
    return out;
}

AlignedCorpus constant_substitute(const std::vector<std::string>& hgc_corpus,
                                  const VocabPair& vocab) {
    AlignedCorpus out;
    for (const std::string& v : vocab.v_hgc) {
        if (vocab.v_mgc.count(v)) continue;
        ++out.stats.total_oov;
        ++out.stats.unk;
        out.stats.per_word[v] = kUnkToken;
    }
    out.captions = apply_map(hgc_corpus, out.stats.per_word);
    return out;
}

double substitution_rate(const SubstitutionStats& stats) {
    if (stats.total_oov == 0) return 1.0;
    return static_cast<double>(stats.contextual) / static_cast<double>(stats.total_oov);
}

}  // namespace dbac
