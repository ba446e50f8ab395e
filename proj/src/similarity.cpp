#include "dbac/similarity.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <unordered_map>

#include "dbac/error.hpp"
#include "dbac/tokenize.hpp"

namespace dbac {

namespace {

constexpr std::size_t kExhaustiveLimit = 12;
constexpr std::uint64_t kNodeBudget = 20'000'000;

// Word ids local to one sentence pair, so the search works on ints.
struct PairIndex {
    std::vector<int> ref;                       // word id per ref position
    std::vector<int> hyp;                       // word id per hyp position
    std::vector<std::vector<std::size_t>> ref_pos;  // word id -> ref positions
    std::vector<std::size_t> need;              // word id -> matches required
    std::size_t total_matches = 0;
};

PairIndex build_index(const std::vector<std::string>& ref_tokens,
                      const std::vector<std::string>& hyp_tokens) {
    PairIndex ix;
    std::unordered_map<std::string, int> ids;
    auto id_of = [&](const std::string& w) {
        auto [it, fresh] = ids.emplace(w, static_cast<int>(ids.size()));
        if (fresh) ix.ref_pos.emplace_back();
        return it->second;
    };
    std::vector<std::size_t> ref_count, hyp_count;
    for (const std::string& w : ref_tokens) {
        int id = id_of(w);
        ix.ref.push_back(id);
        if (ref_count.size() <= static_cast<std::size_t>(id)) ref_count.resize(id + 1, 0);
        ++ref_count[id];
        ix.ref_pos[id].push_back(ix.ref.size() - 1);
    }
    for (const std::string& w : hyp_tokens) {
        int id = id_of(w);
        ix.hyp.push_back(id);
        if (hyp_count.size() <= static_cast<std::size_t>(id)) hyp_count.resize(id + 1, 0);
        ++hyp_count[id];
    }
    ref_count.resize(ids.size(), 0);
    hyp_count.resize(ids.size(), 0);
    ix.need.resize(ids.size(), 0);
    for (std::size_t id = 0; id < ids.size(); ++id) {
        ix.need[id] = std::min(ref_count[id], hyp_count[id]);
        ix.total_matches += ix.need[id];
    }
    return ix;
}

// Exhaustive search over all maximum matchings, pruning on the chunk count
// (which only grows as pairs are appended in hypothesis order).
struct Exhaustive {
    const PairIndex& ix;
    std::vector<std::size_t> need;            // remaining per word id
    std::vector<std::size_t> hyp_left;        // occurrences of id at position >= i
    std::vector<bool> ref_used;
    std::size_t best_chunks = std::numeric_limits<std::size_t>::max();
    std::uint64_t nodes = 0;
    bool exhausted_budget = false;

    explicit Exhaustive(const PairIndex& index) : ix(index), need(index.need) {}

    void run() {
        ref_used.assign(ix.ref.size(), false);
        dfs(0, 0, std::numeric_limits<std::size_t>::max(),
            std::numeric_limits<std::size_t>::max());
    }

    // i: next hyp position; prev_h/prev_r: last matched pair (max() = none).
    void dfs(std::size_t i, std::size_t chunks, std::size_t prev_h, std::size_t prev_r) {
        if (++nodes > kNodeBudget) {
            exhausted_budget = true;
            return;
        }
        if (chunks >= best_chunks) return;
        if (i == ix.hyp.size()) {
            best_chunks = chunks;  // all `need` are zero here by construction
            return;
        }
        int id = ix.hyp[i];

        // Option A: leave hyp position i unmatched, if enough later
        // occurrences of this word remain to satisfy the match budget.
        std::size_t later = 0;
        for (std::size_t k = i + 1; k < ix.hyp.size() && later < need[id]; ++k) {
            if (ix.hyp[k] == id) ++later;
        }
        if (later >= need[id]) {
            dfs(i + 1, chunks, prev_h, prev_r);
            if (exhausted_budget) return;
        }

        // Option B: match it to each unused reference occurrence.
        if (need[id] > 0) {
            --need[id];
            for (std::size_t r : ix.ref_pos[id]) {
                if (ref_used[r]) continue;
                bool contiguous = prev_h != std::numeric_limits<std::size_t>::max() &&
                                  i == prev_h + 1 && r == prev_r + 1;
                ref_used[r] = true;
                dfs(i + 1, chunks + (contiguous ? 0 : 1), i, r);
                ref_used[r] = false;
                if (exhausted_budget) {
                    ++need[id];
                    return;
                }
            }
            ++need[id];
        }
    }
};

// Greedy: matched hypothesis occurrences are the earliest ones per word
// (which attains the maximum match count); each is assigned the reference
// position that extends the current chunk when possible, else the leftmost
// unused occurrence.
std::size_t greedy_chunks(const PairIndex& ix) {
    std::vector<std::size_t> need = ix.need;
    std::vector<bool> ref_used(ix.ref.size(), false);
    std::size_t chunks = 0;
    std::size_t prev_h = std::numeric_limits<std::size_t>::max();
    std::size_t prev_r = std::numeric_limits<std::size_t>::max();

    for (std::size_t i = 0; i < ix.hyp.size(); ++i) {
        int id = ix.hyp[i];
        if (need[id] == 0) continue;
        --need[id];

        std::size_t chosen = std::numeric_limits<std::size_t>::max();
        bool contiguous_ok = prev_h != std::numeric_limits<std::size_t>::max() &&
                             i == prev_h + 1 && prev_r + 1 < ix.ref.size() &&
                             ix.ref[prev_r + 1] == id && !ref_used[prev_r + 1];
        if (contiguous_ok) {
            chosen = prev_r + 1;
        } else {
            for (std::size_t r : ix.ref_pos[id]) {
                if (!ref_used[r]) {
                    chosen = r;
                    break;
                }
            }
        }
        ref_used[chosen] = true;
        bool contiguous = prev_h != std::numeric_limits<std::size_t>::max() &&
                          i == prev_h + 1 && chosen == prev_r + 1;
        chunks += contiguous ? 0 : 1;
        prev_h = i;
        prev_r = chosen;
    }
    return chunks;
}

}  // namespace

AlignmentResult align_tokens(const std::vector<std::string>& ref_tokens,
                             const std::vector<std::string>& hyp_tokens) {
    AlignmentResult out;
    out.ref_len = ref_tokens.size();
    out.hyp_len = hyp_tokens.size();

    PairIndex ix = build_index(ref_tokens, hyp_tokens);
    out.matches = ix.total_matches;
    if (out.matches == 0) return out;

    if (std::max(out.ref_len, out.hyp_len) <= kExhaustiveLimit) {
        Exhaustive search(ix);
        search.run();
        if (!search.exhausted_budget) {
            out.chunks = search.best_chunks;
            return out;
        }
        // Pathologically repetitive input: fall through to the greedy pass.
    }
    out.chunks = greedy_chunks(ix);
    return out;
}

double meteor_score(const AlignmentResult& a) {
    if (a.matches == 0) return 0.0;
    double m = static_cast<double>(a.matches);
    double precision = m / static_cast<double>(a.hyp_len);
    double recall = m / static_cast<double>(a.ref_len);
    double f = 10.0 * precision * recall / (recall + 9.0 * precision);
    double frag = static_cast<double>(a.chunks) / m;
    double penalty = 0.5 * frag * frag * frag;
    return f * (1.0 - penalty);
}

double meteor(const std::vector<std::string>& ref_tokens,
              const std::vector<std::string>& hyp_tokens) {
    if (ref_tokens.empty() || hyp_tokens.empty()) return 0.0;
    return meteor_score(align_tokens(ref_tokens, hyp_tokens));
}

double meteor(const std::string& reference, const std::string& hypothesis) {
    return meteor(tokenize(reference), tokenize(hypothesis));
}

double corpus_meteor(const std::vector<std::pair<std::string, std::string>>& pairs) {
    if (pairs.empty()) {
        throw DataError("corpus_meteor needs at least one (reference, hypothesis) pair");
    }
    double sum = 0.0;
    for (const auto& [ref, hyp] : pairs) {
        sum += meteor(ref, hyp);
    }
    return sum / static_cast<double>(pairs.size());
}

}  // namespace dbac
