#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include <nlohmann/json.hpp>

#include "theanine/error.hpp"
#include "theanine/util.hpp"

namespace theanine {

using MemoryId = std::uint64_t;

enum class SpeakerScope { SpeakerA, SpeakerB, Both };

inline std::string to_string(SpeakerScope s) {
    switch (s) {
        case SpeakerScope::SpeakerA: return "speaker_a";
        case SpeakerScope::SpeakerB: return "speaker_b";
        case SpeakerScope::Both: return "both";
    }
    return "both";
}

inline std::optional<SpeakerScope> speaker_scope_from_string(std::string_view s) {
    if (s == "speaker_a") return SpeakerScope::SpeakerA;
    if (s == "speaker_b") return SpeakerScope::SpeakerB;
    if (s == "both") return SpeakerScope::Both;
    return std::nullopt;
}

// Machine formation order (session_index, ordinal) plus the human-readable
// interval label the datasets carry ("a few hours later"). Algorithms sort by
// the machine part; prompts render the label.
struct FormationTime {
    int session_index = 1;  // >= 1
    int ordinal = 0;        // >= 0, emission position within the session
    std::string label;
};

struct Memory {
    MemoryId id = 0;
    std::string event;
    FormationTime time;
    std::string source_session;
    SpeakerScope speaker_scope = SpeakerScope::Both;
};

// (session_index, ordinal, id) is a strict total order over memories.
using FormationKey = std::tuple<int, int, MemoryId>;

inline FormationKey formation_key(const Memory& m) {
    return {m.time.session_index, m.time.ordinal, m.id};
}

enum class Relation { Changed, Cause, Reason, HinderedBy, React, Want, SameTopic };

inline constexpr Relation kAllRelations[] = {
    Relation::Changed, Relation::Cause,  Relation::Reason, Relation::HinderedBy,
    Relation::React,   Relation::Want,   Relation::SameTopic,
};

inline std::string to_string(Relation r) {
    switch (r) {
        case Relation::Changed: return "Changed";
        case Relation::Cause: return "Cause";
        case Relation::Reason: return "Reason";
        case Relation::HinderedBy: return "HinderedBy";
        case Relation::React: return "React";
        case Relation::Want: return "Want";
        case Relation::SameTopic: return "SameTopic";
    }
    return "SameTopic";
}

// Case-insensitive match after trimming. "None" and anything unrecognized
// both yield nullopt; the absence of a relation is never stored as an edge.
inline std::optional<Relation> relation_from_token(std::string_view token) {
    std::string t = to_lower(trim(token));
    for (Relation r : kAllRelations) {
        if (t == to_lower(to_string(r))) return r;
    }
    return std::nullopt;
}

struct RelationEdge {
    MemoryId from = 0;  // older memory
    MemoryId to = 0;    // newer memory
    Relation relation = Relation::SameTopic;
};

struct GraphViolation {
    std::string kind;
    std::string detail;
};

// Structural validation over raw records, independent of the incremental
// bookkeeping MemoryGraph performs. Cycle detection runs on its own rather
// than being implied by the temporal check.
inline std::vector<GraphViolation> validate_records(const std::vector<Memory>& memories,
                                                    const std::vector<RelationEdge>& edges) {
    std::vector<GraphViolation> out;
    std::map<MemoryId, const Memory*> by_id;
    for (const Memory& m : memories) {
        if (m.event.empty())
            out.push_back({"empty_event", "memory " + std::to_string(m.id)});
        if (m.time.session_index < 1)
            out.push_back({"bad_session_index", "memory " + std::to_string(m.id)});
        if (m.time.ordinal < 0)
            out.push_back({"bad_ordinal", "memory " + std::to_string(m.id)});
        if (!by_id.emplace(m.id, &m).second)
            out.push_back({"duplicate_memory", "memory " + std::to_string(m.id)});
    }
    std::set<std::pair<MemoryId, MemoryId>> seen_pairs;
    std::map<MemoryId, std::vector<MemoryId>> adj;
    std::map<MemoryId, int> in_deg;
    for (const RelationEdge& e : edges) {
        std::string tag = std::to_string(e.from) + "->" + std::to_string(e.to);
        if (e.from == e.to) out.push_back({"self_loop", tag});
        auto fi = by_id.find(e.from);
        auto ti = by_id.find(e.to);
        if (fi == by_id.end() || ti == by_id.end()) {
            out.push_back({"dangling_edge", tag});
            continue;
        }
        if (!seen_pairs.emplace(e.from, e.to).second)
            out.push_back({"duplicate_edge", tag});
        if (!(formation_key(*fi->second) < formation_key(*ti->second)))
            out.push_back({"temporal_violation", tag});
        adj[e.from].push_back(e.to);
        in_deg[e.to]++;
    }
    // Kahn's algorithm over edges with valid endpoints.
    std::vector<MemoryId> queue;
    for (const auto& [id, _] : by_id)
        if (in_deg.find(id) == in_deg.end()) queue.push_back(id);
    std::size_t visited = 0;
    while (!queue.empty()) {
        MemoryId v = queue.back();
        queue.pop_back();
        ++visited;
        auto it = adj.find(v);
        if (it == adj.end()) continue;
        for (MemoryId w : it->second)
            if (--in_deg[w] == 0) queue.push_back(w);
    }
    if (visited != by_id.size()) out.push_back({"cycle", "topological sort incomplete"});
    return out;
}

// The relation-aware memory graph. Vertices are session-summarized memories,
// edges always point from an older memory to a newer one, so the directed
// view is acyclic by construction. Connected components are tracked on the
// undirected view with a union-find index.
//
// Value semantics: the graph is copyable and a copy is an independent
// consistent snapshot. Mutations must be serialized by the caller; any number
// of readers may share one snapshot.
class MemoryGraph {
public:
    void add_memory(const Memory& m) {
        if (m.event.empty())
            throw Error(ErrorKind::Data, "memory event must be non-empty");
        if (m.time.session_index < 1 || m.time.ordinal < 0)
            throw Error(ErrorKind::Data, "memory formation time out of range");
        if (vertices_.count(m.id))
            throw Error(ErrorKind::Data, "duplicate memory id " + std::to_string(m.id) +
                                             " (existing event: " + vertices_.at(m.id).event + ")");
        vertices_.emplace(m.id, m);
        out_[m.id];
        in_[m.id];
        parent_[m.id] = m.id;
    }

    void add_edge(const RelationEdge& e) {
        if (!vertices_.count(e.from) || !vertices_.count(e.to))
            throw Error(ErrorKind::Data, "edge endpoint not in graph: " +
                                             std::to_string(e.from) + "->" + std::to_string(e.to));
        if (e.from == e.to)
            throw Error(ErrorKind::Data, "self-loop rejected on memory " + std::to_string(e.from));
        if (!(formation_key(vertices_.at(e.from)) < formation_key(vertices_.at(e.to))))
            throw Error(ErrorKind::Data, "temporal violation: edge must point old->new (" +
                                             std::to_string(e.from) + "->" + std::to_string(e.to) + ")");
        if (relation_by_pair_.count({e.from, e.to}))
            throw Error(ErrorKind::Data, "duplicate edge " + std::to_string(e.from) + "->" +
                                             std::to_string(e.to));
        edges_.push_back(e);
        relation_by_pair_[{e.from, e.to}] = e.relation;
        insert_sorted(out_[e.from], e.to);
        insert_sorted(in_[e.to], e.from);
        unite(e.from, e.to);
    }

    bool contains(MemoryId id) const { return vertices_.count(id) != 0; }

    const Memory& memory(MemoryId id) const {
        auto it = vertices_.find(id);
        if (it == vertices_.end())
            throw Error(ErrorKind::Data, "unknown memory id " + std::to_string(id));
        return it->second;
    }

    const std::map<MemoryId, Memory>& vertices() const { return vertices_; }
    const std::vector<RelationEdge>& edges() const { return edges_; }
    std::size_t vertex_count() const { return vertices_.size(); }
    std::size_t edge_count() const { return edges_.size(); }

    // Next free id under monotone assignment. Ids are never reused.
    MemoryId next_id() const {
        return vertices_.empty() ? 1 : vertices_.rbegin()->first + 1;
    }

    // Out-/in-neighbors sorted by id, which fixes traversal order everywhere.
    const std::vector<MemoryId>& out_neighbors(MemoryId id) const {
        require_known(id);
        return out_.at(id);
    }
    const std::vector<MemoryId>& in_neighbors(MemoryId id) const {
        require_known(id);
        return in_.at(id);
    }

    int out_degree(MemoryId id) const { return static_cast<int>(out_neighbors(id).size()); }
    int in_degree(MemoryId id) const { return static_cast<int>(in_neighbors(id).size()); }

    std::optional<Relation> relation_between(MemoryId from, MemoryId to) const {
        auto it = relation_by_pair_.find({from, to});
        if (it == relation_by_pair_.end()) return std::nullopt;
        return it->second;
    }

    // Maximal undirected-connected vertex set containing id, sorted by id.
    std::vector<MemoryId> connected_component(MemoryId id) const {
        require_known(id);
        MemoryId root = find(id);
        std::vector<MemoryId> members;
        for (const auto& [v, _] : vertices_)
            if (find(v) == root) members.push_back(v);
        return members;
    }

    bool same_component(MemoryId a, MemoryId b) const {
        require_known(a);
        require_known(b);
        return find(a) == find(b);
    }

    // Union-find representative; stable only within one graph value.
    MemoryId component_root(MemoryId id) const {
        require_known(id);
        return find(id);
    }

    std::size_t component_count() const {
        std::set<MemoryId> roots;
        for (const auto& [v, _] : vertices_) roots.insert(find(v));
        return roots.size();
    }

    std::vector<GraphViolation> validate() const {
        std::vector<Memory> ms;
        ms.reserve(vertices_.size());
        for (const auto& [_, m] : vertices_) ms.push_back(m);
        return validate_records(ms, edges_);
    }

    // Line-delimited snapshot, memories (id order) then edges (insertion
    // order), so the file replays cleanly through add_memory/add_edge.
    void save_snapshot(std::ostream& os) const {
        for (const auto& [_, m] : vertices_) {
            nlohmann::ordered_json j;
            j["kind"] = "memory";
            j["id"] = m.id;
            j["event"] = m.event;
            j["session_index"] = m.time.session_index;
            j["ordinal"] = m.time.ordinal;
            j["time_label"] = m.time.label;
            j["source_session"] = m.source_session;
            j["speaker_scope"] = to_string(m.speaker_scope);
            os << j.dump() << "\n";
        }
        for (const RelationEdge& e : edges_) {
            nlohmann::ordered_json j;
            j["kind"] = "edge";
            j["from"] = e.from;
            j["to"] = e.to;
            j["relation"] = to_string(e.relation);
            os << j.dump() << "\n";
        }
    }

    static MemoryGraph load_snapshot(std::istream& is) {
        MemoryGraph g;
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(is, line)) {
            ++lineno;
            if (trim(line).empty()) continue;
            nlohmann::json j;
            try {
                j = nlohmann::json::parse(line);
            } catch (const nlohmann::json::exception& e) {
                throw Error(ErrorKind::Data,
                            "snapshot line " + std::to_string(lineno) + ": " + e.what());
            }
            const std::string kind = j.value("kind", "");
            if (kind == "memory") {
                Memory m;
                m.id = j.at("id").get<MemoryId>();
                m.event = j.at("event").get<std::string>();
                m.time.session_index = j.at("session_index").get<int>();
                m.time.ordinal = j.at("ordinal").get<int>();
                m.time.label = j.at("time_label").get<std::string>();
                m.source_session = j.at("source_session").get<std::string>();
                auto scope = speaker_scope_from_string(j.at("speaker_scope").get<std::string>());
                if (!scope)
                    throw Error(ErrorKind::Data,
                                "snapshot line " + std::to_string(lineno) + ": bad speaker_scope");
                m.speaker_scope = *scope;
                g.add_memory(m);
            } else if (kind == "edge") {
                RelationEdge e;
                e.from = j.at("from").get<MemoryId>();
                e.to = j.at("to").get<MemoryId>();
                auto rel = relation_from_token(j.at("relation").get<std::string>());
                if (!rel)
                    throw Error(ErrorKind::Data,
                                "snapshot line " + std::to_string(lineno) + ": bad relation");
                e.relation = *rel;
                g.add_edge(e);
            } else {
                throw Error(ErrorKind::Data, "snapshot line " + std::to_string(lineno) +
                                                 ": unknown record kind '" + kind + "'");
            }
        }
        return g;
    }

    std::string to_dot() const {
        std::ostringstream os;
        os << "digraph memory_graph {\n";
        os << "  rankdir=LR;\n";
        for (const auto& [id, m] : vertices_) {
            os << "  m" << id << " [label=\"" << id << " (s" << m.time.session_index << "."
               << m.time.ordinal << "): " << dot_escape(m.event) << "\"];\n";
        }
        for (const RelationEdge& e : edges_) {
            os << "  m" << e.from << " -> m" << e.to << " [label=\"" << to_string(e.relation)
               << "\"];\n";
        }
        os << "}\n";
        return os.str();
    }

private:
    static void insert_sorted(std::vector<MemoryId>& v, MemoryId id) {
        v.insert(std::lower_bound(v.begin(), v.end(), id), id);
    }

    static std::string dot_escape(const std::string& s) {
        std::string out;
        for (char c : s) {
            if (c == '"' || c == '\\') out.push_back('\\');
            if (c == '\n') {
                out += "\\n";
                continue;
            }
            out.push_back(c);
        }
        return out;
    }

    void require_known(MemoryId id) const {
        if (!vertices_.count(id))
            throw Error(ErrorKind::Data, "unknown memory id " + std::to_string(id));
    }

    MemoryId find(MemoryId id) const {
        MemoryId root = id;
        while (parent_.at(root) != root) root = parent_.at(root);
        // path compression; logically const
        while (parent_.at(id) != root) {
            MemoryId next = parent_.at(id);
            parent_[id] = root;
            id = next;
        }
        return root;
    }

    void unite(MemoryId a, MemoryId b) {
        MemoryId ra = find(a), rb = find(b);
        if (ra == rb) return;
        // smaller root wins, keeping representatives deterministic
        if (rb < ra) std::swap(ra, rb);
        parent_[rb] = ra;
    }

    std::map<MemoryId, Memory> vertices_;
    std::vector<RelationEdge> edges_;
    std::map<std::pair<MemoryId, MemoryId>, Relation> relation_by_pair_;
    std::map<MemoryId, std::vector<MemoryId>> out_;
    std::map<MemoryId, std::vector<MemoryId>> in_;
    mutable std::map<MemoryId, MemoryId> parent_;
};

// The most recent memory in a vertex set under formation order (the graph's
// strict total order makes the maximum unique).
template <typename IdRange>
MemoryId most_recent_in(const MemoryGraph& g, const IdRange& ids) {
    std::optional<MemoryId> best;
    for (MemoryId id : ids) {
        const Memory& m = g.memory(id);
        if (!best || formation_key(g.memory(*best)) < formation_key(m)) best = id;
    }
    if (!best) throw Error(ErrorKind::Data, "most_recent_in: empty vertex set");
    return *best;
}

// The oldest memory in a vertex set under formation order.
template <typename IdRange>
MemoryId oldest_in(const MemoryGraph& g, const IdRange& ids) {
    std::optional<MemoryId> best;
    for (MemoryId id : ids) {
        const Memory& m = g.memory(id);
        if (!best || formation_key(m) < formation_key(g.memory(*best))) best = id;
    }
    if (!best) throw Error(ErrorKind::Data, "oldest_in: empty vertex set");
    return *best;
}

}  // namespace theanine
