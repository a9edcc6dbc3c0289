#include <doctest.h>

#include <random>

#include "theanine/embedding_index.hpp"

using namespace theanine;

namespace {

EmbeddingVector vec(std::initializer_list<double> vs) { return EmbeddingVector{vs}; }

// Brute-force oracle: cosine against every entry, sorted the same way the
// contract demands, computed without the index.
std::vector<SimilarityHit> scan_oracle(const std::map<MemoryId, EmbeddingVector>& entries,
                                       const EmbeddingVector& q, int limit) {
    std::vector<SimilarityHit> hits;
    for (const auto& [id, v] : entries) hits.push_back({id, cosine_similarity(q, v)});
    std::sort(hits.begin(), hits.end(), [](const SimilarityHit& a, const SimilarityHit& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.id < b.id;
    });
    if (hits.size() > static_cast<std::size_t>(limit)) hits.resize(limit);
    return hits;
}

}  // namespace

TEST_CASE("index_memory: size, dimension and duplicate guards") {
    EmbeddingIndex idx;
    idx.index_memory(1, vec({1, 0, 0}));
    CHECK(idx.size() == 1);
    CHECK(idx.dimension() == 3);

    CHECK_THROWS_AS(idx.index_memory(2, vec({1, 0})), Error);       // dim mismatch
    CHECK_THROWS_AS(idx.index_memory(1, vec({0, 1, 0})), Error);    // duplicate
    CHECK_THROWS_AS(idx.index_memory(3, EmbeddingVector{}), Error); // dim 0
    EmbeddingVector nan_vec{{0.0, std::nan(""), 0.0}};
    CHECK_THROWS_AS(idx.index_memory(4, nan_vec), Error);
}

TEST_CASE("100 random vectors are all retrievable by self-query") {
    std::mt19937_64 rng(99);
    std::map<MemoryId, EmbeddingVector> entries;
    EmbeddingIndex idx;
    for (MemoryId id = 1; id <= 100; ++id) {
        EmbeddingVector v;
        for (int d = 0; d < 8; ++d)
            v.values.push_back(static_cast<double>(rng() % 1000) / 500.0 - 1.0);
        entries[id] = v;
        idx.index_memory(id, v);
    }
    CHECK(idx.size() == 100);
    for (const auto& [id, v] : entries) {
        auto hits = idx.top_similar(v, 1);
        REQUIRE(hits.size() == 1);
        CHECK(hits[0].id == id);
        CHECK(hits[0].score == doctest::Approx(1.0));
    }
}

TEST_CASE("top_similar: self-similarity, orthogonality, exclusion") {
    EmbeddingIndex idx;
    idx.index_memory(1, vec({1, 0, 0}));
    idx.index_memory(2, vec({0, 1, 0}));

    SUBCASE("query equal to a stored vector ranks it first at 1.0") {
        auto hits = idx.top_similar(vec({1, 0, 0}), 2);
        REQUIRE(hits.size() == 2);
        CHECK(hits[0].id == 1);
        CHECK(hits[0].score == doctest::Approx(1.0));
    }
    SUBCASE("orthogonal query scores 0.0 everywhere, order falls back to id") {
        auto hits = idx.top_similar(vec({0, 0, 1}), 2);
        REQUIRE(hits.size() == 2);
        CHECK(hits[0].score == doctest::Approx(0.0));
        CHECK(hits[1].score == doctest::Approx(0.0));
        CHECK(hits[0].id == 1);
        CHECK(hits[1].id == 2);
    }
    SUBCASE("excluded ids never appear") {
        auto hits = idx.top_similar(vec({1, 0, 0}), 5, {1});
        REQUIRE(hits.size() == 1);
        CHECK(hits[0].id == 2);
    }
    SUBCASE("limit below 1 is a usage error; dim mismatch a data error") {
        CHECK_THROWS_AS(idx.top_similar(vec({1, 0, 0}), 0), Error);
        CHECK_THROWS_AS(idx.top_similar(vec({1, 0}), 1), Error);
    }
}

TEST_CASE("top_similar matches the brute-force scan oracle") {
    std::mt19937_64 rng(7);
    std::map<MemoryId, EmbeddingVector> entries;
    EmbeddingIndex idx;
    for (MemoryId id = 1; id <= 20; ++id) {
        EmbeddingVector v;
        for (int d = 0; d < 6; ++d)
            v.values.push_back(static_cast<double>(rng() % 2001) / 1000.0 - 1.0);
        entries[id] = v;
        idx.index_memory(id, v);
    }
    for (int trial = 0; trial < 10; ++trial) {
        EmbeddingVector q;
        for (int d = 0; d < 6; ++d)
            q.values.push_back(static_cast<double>(rng() % 2001) / 1000.0 - 1.0);
        auto got = idx.top_similar(q, 3);
        auto expected = scan_oracle(entries, q, 3);
        REQUIRE(got.size() == expected.size());
        for (std::size_t i = 0; i < got.size(); ++i) {
            CHECK(got[i].id == expected[i].id);
            CHECK(got[i].score == doctest::Approx(expected[i].score));
        }
    }

    SUBCASE("limit n over n items returns a permutation of all items") {
        EmbeddingVector q = entries.at(3);
        auto hits = idx.top_similar(q, 20);
        CHECK(hits.size() == 20);
        std::set<MemoryId> ids;
        for (const auto& h : hits) ids.insert(h.id);
        CHECK(ids.size() == 20);
    }
    SUBCASE("ranking is invariant under positive scaling of the query") {
        EmbeddingVector q = entries.at(5);
        EmbeddingVector scaled = q;
        for (double& v : scaled.values) v *= 37.5;
        auto a = idx.top_similar(q, 20);
        auto b = idx.top_similar(scaled, 20);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].id == b[i].id);
    }
}
