#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "dbac/embedding.hpp"
#include "dbac/error.hpp"
#include "dbac/rng.hpp"

using namespace dbac;
namespace fs = std::filesystem;

namespace {

std::string write_file(const std::string& name, const std::string& content) {
    fs::path dir = fs::temp_directory_path() / "dbac_test_embedding";
    fs::create_directories(dir);
    fs::path p = dir / name;
    std::ofstream out(p);
    out << content;
    return p.string();
}

// Independent oracle for cosine distance; no clamping or shortcuts.
double cosine_oracle(const std::vector<double>& u, const std::vector<double>& v) {
    double dot = 0, nu = 0, nv = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        dot += u[i] * v[i];
        nu += u[i] * u[i];
        nv += v[i] * v[i];
    }
    return 1.0 - dot / (std::sqrt(nu) * std::sqrt(nv));
}

}  // namespace

TEST_CASE("load_embeddings parses GloVe-style text") {
    std::string p = write_file("glove.txt",
                               "dog 1.0 0.0 0.5\n"
                               "cat 0.9 0.1 0.4\n"
                               "bird -0.2 0.8 0.0\n");
    EmbeddingTable t = load_embeddings(p);
    CHECK(t.size() == 3);
    CHECK(t.dim() == 3);
    REQUIRE(t.find("dog") != nullptr);
    CHECK((*t.find("dog"))[0] == doctest::Approx(1.0));
    CHECK((*t.find("dog"))[2] == doctest::Approx(0.5));
    CHECK(t.find("horse") == nullptr);
}

TEST_CASE("a fastText count/dim header line is skipped") {
    std::string p = write_file("fasttext.txt",
                               "2 3\n"
                               "dog 1 0 0\n"
                               "cat 0 1 0\n");
    EmbeddingTable t = load_embeddings(p);
    CHECK(t.size() == 2);
    CHECK(t.dim() == 3);
}

TEST_CASE("lookup is case-folded") {
    std::string p = write_file("case.txt", "Dog 1 0\n");
    EmbeddingTable t = load_embeddings(p);
    CHECK(t.contains("dog"));
    CHECK(t.contains("DOG"));
    CHECK(t.find("dOg") != nullptr);
}

TEST_CASE("duplicate words keep the first vector and are counted") {
    std::string p = write_file("dup.txt",
                               "dog 1 0\n"
                               "dog 0 1\n"
                               "cat 2 2\n");
    EmbeddingTable t = load_embeddings(p);
    CHECK(t.size() == 2);
    CHECK(t.duplicate_count() == 1);
    CHECK((*t.find("dog"))[0] == doctest::Approx(1.0));
    CHECK((*t.find("dog"))[1] == doctest::Approx(0.0));
}

TEST_CASE("parser errors cite the line number") {
    std::string bad_dim = write_file("baddim.txt",
                                     "dog 1 0 0\n"
                                     "cat 1 0\n");
    CHECK_THROWS_WITH_AS(load_embeddings(bad_dim), doctest::Contains(":2"), DataError);

    std::string bad_num = write_file("badnum.txt", "dog 1 zebra 0\n");
    CHECK_THROWS_WITH_AS(load_embeddings(bad_num), doctest::Contains(":1"), DataError);

    std::string empty = write_file("empty.txt", "");
    CHECK_THROWS_AS(load_embeddings(empty), DataError);

    CHECK_THROWS_AS(load_embeddings("/nonexistent/embeddings.txt"), DataError);
}

TEST_CASE("cosine distance hand values") {
    // Orthogonal unit vectors: distance 1.
    CHECK(cosine_distance({1, 0}, {0, 1}) == doctest::Approx(1.0));
    // Identical direction: 0.
    CHECK(cosine_distance({2, 0}, {5, 0}) == doctest::Approx(0.0));
    // Opposite: 2.
    CHECK(cosine_distance({1, 0}, {-3, 0}) == doctest::Approx(2.0));
    // 45 degrees: 1 - 1/sqrt(2) ~= 0.29289.
    CHECK(cosine_distance({1, 0}, {1, 1}) == doctest::Approx(1.0 - 1.0 / std::sqrt(2.0)));
}

TEST_CASE("cosine distance rejects degenerate input") {
    CHECK_THROWS_AS(cosine_distance({0, 0}, {1, 0}), NumericError);
    CHECK_THROWS_AS(cosine_distance({1, 0}, {0, 0}), NumericError);
    CHECK_THROWS_AS(cosine_distance({1, 0}, {1, 0, 0}), NumericError);
}

TEST_CASE("cosine distance agrees with the oracle on random vectors") {
    Rng rng(303);
    for (int trial = 0; trial < 300; ++trial) {
        std::size_t dim = 1 + rng.next_index(8);
        std::vector<double> u(dim), v(dim);
        bool uz = true, vz = true;
        for (std::size_t i = 0; i < dim; ++i) {
            u[i] = rng.next_double() * 4.0 - 2.0;
            v[i] = rng.next_double() * 4.0 - 2.0;
            uz = uz && u[i] == 0.0;
            vz = vz && v[i] == 0.0;
        }
        if (uz || vz) continue;
        CHECK(cosine_distance(u, v) == doctest::Approx(cosine_oracle(u, v)).epsilon(1e-12));
    }
}

TEST_CASE("nearest_in_vocab picks the closest target") {
    std::map<std::string, std::vector<double>> vecs = {
        {"query", {1.0, 0.0}},
        {"near", {0.9, 0.1}},
        {"far", {0.0, 1.0}},
        {"opposite", {-1.0, 0.0}},
    };
    EmbeddingTable t(2, vecs);
    auto n = nearest_in_vocab("query", {"near", "far", "opposite"}, t);
    REQUIRE(n.has_value());
    CHECK(n->word == "near");
    CHECK(n->distance == doctest::Approx(cosine_oracle({1, 0}, {0.9, 0.1})));
}

TEST_CASE("nearest_in_vocab skips words without vectors") {
    EmbeddingTable t(2, {{"query", {1.0, 0.0}}, {"known", {0.5, 0.5}}});
    auto n = nearest_in_vocab("query", {"unknown", "known"}, t);
    REQUIRE(n.has_value());
    CHECK(n->word == "known");
    CHECK_FALSE(nearest_in_vocab("query", {"unknown"}, t).has_value());
    CHECK_FALSE(nearest_in_vocab("absent", {"known"}, t).has_value());
}

TEST_CASE("nearest_in_vocab breaks exact ties lexicographically") {
    // "alpha" and "beta" sit at the same distance from the query.
    EmbeddingTable t(2, {
        {"query", {1.0, 0.0}},
        {"beta", {0.0, 1.0}},
        {"alpha", {0.0, 2.0}},  // same direction as beta -> same cosine distance
    });
    auto n = nearest_in_vocab("query", {"beta", "alpha"}, t);
    REQUIRE(n.has_value());
    CHECK(n->word == "alpha");
}

TEST_CASE("nearest_in_vocab agrees with an exhaustive scan") {
    Rng rng(77);
    for (int trial = 0; trial < 50; ++trial) {
        std::map<std::string, std::vector<double>> vecs;
        std::set<std::string> targets;
        std::size_t n_targets = 2 + rng.next_index(20);
        for (std::size_t i = 0; i < n_targets; ++i) {
            std::string w = "w" + std::to_string(i);
            std::vector<double> v(4);
            for (double& x : v) x = rng.next_double() * 2.0 - 1.0;
            vecs[w] = v;
            targets.insert(w);
        }
        std::vector<double> q(4);
        for (double& x : q) x = rng.next_double() * 2.0 - 1.0;
        vecs["query"] = q;
        EmbeddingTable t(4, vecs);

        auto got = nearest_in_vocab("query", targets, t);
        REQUIRE(got.has_value());
        // Oracle: independent linear scan with strict-less keeps-first rule.
        std::string best;
        double best_d = 1e300;
        for (const std::string& w : targets) {
            double d = cosine_oracle(q, vecs[w]);
            if (d < best_d) {
                best_d = d;
                best = w;
            }
        }
        CHECK(got->word == best);
        CHECK(got->distance == doctest::Approx(best_d).epsilon(1e-12));
    }
}
