#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "theanine/error.hpp"
#include "theanine/memory_core.hpp"

namespace theanine {

struct EmbeddingVector {
    std::vector<double> values;

    std::size_t dimension() const { return values.size(); }

    bool finite() const {
        for (double v : values)
            if (!std::isfinite(v)) return false;
        return true;
    }
};

struct SimilarityHit {
    MemoryId id = 0;
    double score = 0.0;  // cosine, in [-1, 1]
};

inline double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b) {
    if (a.dimension() != b.dimension())
        throw Error(ErrorKind::Data, "cosine: dimension mismatch");
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        dot += a.values[i] * b.values[i];
        na += a.values[i] * a.values[i];
        nb += b.values[i] * b.values[i];
    }
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

// Exhaustive-scan similarity index over memory embeddings. Exact by design:
// at tens of memories a linear scan beats any approximate structure, and the
// interface leaves room to swap one in later.
class EmbeddingIndex {
public:
    void index_memory(MemoryId id, const EmbeddingVector& v) {
        if (v.dimension() == 0)
            throw Error(ErrorKind::Data, "embedding dimension must be positive");
        if (!v.finite())
            throw Error(ErrorKind::Data, "embedding has non-finite entries");
        if (!entries_.empty() && v.dimension() != dimension_)
            throw Error(ErrorKind::Data,
                        "embedding dimension mismatch: index has " + std::to_string(dimension_) +
                            ", got " + std::to_string(v.dimension()));
        if (entries_.count(id))
            throw Error(ErrorKind::Data, "memory " + std::to_string(id) + " already indexed");
        dimension_ = v.dimension();
        entries_.emplace(id, v);
    }

    bool contains(MemoryId id) const { return entries_.count(id) != 0; }
    std::size_t size() const { return entries_.size(); }
    std::size_t dimension() const { return dimension_; }

    // Hits sorted by descending cosine, ties by ascending id. Excluded ids
    // never appear; length is min(limit, eligible count).
    std::vector<SimilarityHit> top_similar(const EmbeddingVector& query, int limit,
                                           const std::set<MemoryId>& exclude = {}) const {
        if (limit < 1) throw Error(ErrorKind::Usage, "top_similar: limit must be >= 1");
        if (!entries_.empty() && query.dimension() != dimension_)
            throw Error(ErrorKind::Data, "query dimension mismatch");
        std::vector<SimilarityHit> hits;
        hits.reserve(entries_.size());
        for (const auto& [id, v] : entries_) {
            if (exclude.count(id)) continue;
            hits.push_back({id, cosine_similarity(query, v)});
        }
        std::sort(hits.begin(), hits.end(), [](const SimilarityHit& a, const SimilarityHit& b) {
            if (a.score != b.score) return a.score > b.score;
            return a.id < b.id;
        });
        if (hits.size() > static_cast<std::size_t>(limit)) hits.resize(limit);
        return hits;
    }

private:
    std::map<MemoryId, EmbeddingVector> entries_;
    std::size_t dimension_ = 0;
};

}  // namespace theanine
