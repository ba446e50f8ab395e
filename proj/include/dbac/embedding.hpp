#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace dbac {

// Word-vector table loaded from whitespace-separated text (GloVe layout; a
// fastText "<count> <dim>" first line is detected and skipped). Lookup is
// case-folded; duplicate words keep the first vector.
class EmbeddingTable {
public:
    EmbeddingTable() = default;
    EmbeddingTable(std::size_t dim, std::map<std::string, std::vector<double>> vectors,
                   std::size_t duplicate_count = 0)
        : dim_(dim), vectors_(std::move(vectors)), duplicates_(duplicate_count) {}

    std::size_t dim() const { return dim_; }
    std::size_t size() const { return vectors_.size(); }
    std::size_t duplicate_count() const { return duplicates_; }

    bool contains(const std::string& word) const;
    const std::vector<double>* find(const std::string& word) const;

    const std::map<std::string, std::vector<double>>& vectors() const { return vectors_; }

private:
    std::size_t dim_ = 0;
    std::map<std::string, std::vector<double>> vectors_;
    std::size_t duplicates_ = 0;
};

// Parses an embedding text file. Errors cite the offending line number.
EmbeddingTable load_embeddings(const std::string& path);

// 1 - cos(u, v), in [0, 2]. Throws NumericError on zero-magnitude input or
// mismatched dimensions.
double cosine_distance(const std::vector<double>& u, const std::vector<double>& v);

// Nearest target word by cosine distance, linear scan over `targets`.
// Words without vectors (query or target) are skipped; exact ties break
// lexicographically; returns nullopt when nothing is comparable.
struct Neighbor {
    std::string word;
    double distance;
};
std::optional<Neighbor> nearest_in_vocab(const std::string& word,
                                         const std::set<std::string>& targets,
                                         const EmbeddingTable& table);

}  // namespace dbac
