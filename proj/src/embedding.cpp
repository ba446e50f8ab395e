#include "dbac/embedding.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "dbac/error.hpp"
#include "dbac/tokenize.hpp"

namespace dbac {

namespace {

std::string fold_case(const std::string& w) {
    std::string out = w;
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

bool is_integer_field(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (c < '0' || c > '9') return false;
    }
    return true;
}

bool parse_double(const std::string& s, double& out) {
    const char* b = s.data();
    const char* e = s.data() + s.size();
    auto [p, ec] = std::from_chars(b, e, out);
    return ec == std::errc() && p == e;
}

}  // namespace

bool EmbeddingTable::contains(const std::string& word) const {
    return vectors_.count(fold_case(word)) > 0;
}

const std::vector<double>* EmbeddingTable::find(const std::string& word) const {
    auto it = vectors_.find(fold_case(word));
    return it == vectors_.end() ? nullptr : &it->second;
}

EmbeddingTable load_embeddings(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open embedding file " + path);
    }

    std::map<std::string, std::vector<double>> vectors;
    std::size_t dim = 0;
    std::size_t duplicates = 0;
    std::string line;
    std::size_t line_no = 0;
    bool first_content_line = true;

    while (std::getline(in, line)) {
        ++line_no;
        std::vector<std::string> fields = split_whitespace(line);
        if (fields.empty()) continue;

        // fastText files start with "<word_count> <dim>".
        if (first_content_line && fields.size() == 2 && is_integer_field(fields[0]) &&
            is_integer_field(fields[1])) {
            first_content_line = false;
            continue;
        }
        first_content_line = false;

        if (fields.size() < 2) {
            std::ostringstream os;
            os << path << ":" << line_no << ": expected a word followed by vector components";
            throw DataError(os.str());
        }

        std::vector<double> vec;
        vec.reserve(fields.size() - 1);
        for (std::size_t i = 1; i < fields.size(); ++i) {
            double v = 0.0;
            if (!parse_double(fields[i], v)) {
                std::ostringstream os;
                os << path << ":" << line_no << ": non-numeric vector component \""
                   << fields[i] << "\"";
                throw DataError(os.str());
            }
            vec.push_back(v);
        }

        if (dim == 0) {
            dim = vec.size();
        } else if (vec.size() != dim) {
            std::ostringstream os;
            os << path << ":" << line_no << ": vector has " << vec.size()
               << " components, expected " << dim;
            throw DataError(os.str());
        }

        std::string word = fold_case(fields[0]);
        if (!vectors.emplace(std::move(word), std::move(vec)).second) {
            ++duplicates;  // keep the first occurrence
        }
    }

    if (vectors.empty()) {
        throw DataError("embedding file " + path + " contains no vectors");
    }
    return EmbeddingTable(dim, std::move(vectors), duplicates);
}

double cosine_distance(const std::vector<double>& u, const std::vector<double>& v) {
    if (u.size() != v.size()) {
        throw NumericError("cosine distance on vectors of different dimension");
    }
    double dot = 0.0, nu = 0.0, nv = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        dot += u[i] * v[i];
        nu += u[i] * u[i];
        nv += v[i] * v[i];
    }
    if (nu == 0.0 || nv == 0.0) {
        throw NumericError("cosine distance on a zero-magnitude vector");
    }
    double d = 1.0 - dot / (std::sqrt(nu) * std::sqrt(nv));
    if (d < 0.0) d = 0.0;
    if (d > 2.0) d = 2.0;
    return d;
}

std::optional<Neighbor> nearest_in_vocab(const std::string& word,
                                         const std::set<std::string>& targets,
                                         const EmbeddingTable& table) {
    const std::vector<double>* query = table.find(word);
    if (!query) return std::nullopt;

    std::optional<Neighbor> best;
    for (const std::string& t : targets) {  // std::set: lexicographic order
        const std::vector<double>* tv = table.find(t);
        if (!tv) continue;
        double d = cosine_distance(*query, *tv);
        if (!best || d < best->distance) {
            best = Neighbor{t, d};  // ties keep the earlier (smaller) word
        }
    }
    return best;
}

}  // namespace dbac
