#pragma once

// Shared fixtures and independent oracles for the test suites. Everything in
// here recomputes results from first principles (BFS, sorting, brute-force
// scans) so the implementations under test are never checked against
// themselves.

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "theanine/memory_core.hpp"

namespace test_support {

using theanine::Memory;
using theanine::MemoryGraph;
using theanine::MemoryId;
using theanine::Relation;
using theanine::RelationEdge;

inline Memory make_memory(MemoryId id, int session, int ordinal,
                          const std::string& event = "") {
    Memory m;
    m.id = id;
    m.event = event.empty() ? ("event " + std::to_string(id)) : event;
    m.time.session_index = session;
    m.time.ordinal = ordinal;
    m.time.label = "session " + std::to_string(session);
    m.source_session = "s" + std::to_string(session);
    m.speaker_scope = theanine::SpeakerScope::Both;
    return m;
}

// BFS over the undirected view, independent of the graph's union-find index.
inline std::set<MemoryId> bfs_component(const MemoryGraph& g, MemoryId start) {
    std::map<MemoryId, std::set<MemoryId>> undirected;
    for (const auto& [id, _] : g.vertices()) undirected[id];
    for (const RelationEdge& e : g.edges()) {
        undirected[e.from].insert(e.to);
        undirected[e.to].insert(e.from);
    }
    std::set<MemoryId> seen{start};
    std::vector<MemoryId> frontier{start};
    while (!frontier.empty()) {
        MemoryId v = frontier.back();
        frontier.pop_back();
        for (MemoryId w : undirected[v])
            if (seen.insert(w).second) frontier.push_back(w);
    }
    return seen;
}

inline std::size_t bfs_component_count(const MemoryGraph& g) {
    std::set<MemoryId> visited;
    std::size_t count = 0;
    for (const auto& [id, _] : g.vertices()) {
        if (visited.count(id)) continue;
        ++count;
        for (MemoryId v : bfs_component(g, id)) visited.insert(v);
    }
    return count;
}

// Sort oracle for the most-recent / oldest selectors.
inline MemoryId sort_most_recent(const MemoryGraph& g, std::vector<MemoryId> ids) {
    std::sort(ids.begin(), ids.end(), [&](MemoryId a, MemoryId b) {
        return theanine::formation_key(g.memory(a)) < theanine::formation_key(g.memory(b));
    });
    return ids.back();
}

inline MemoryId sort_oldest(const MemoryGraph& g, std::vector<MemoryId> ids) {
    std::sort(ids.begin(), ids.end(), [&](MemoryId a, MemoryId b) {
        return theanine::formation_key(g.memory(a)) < theanine::formation_key(g.memory(b));
    });
    return ids.front();
}

}  // namespace test_support
