#pragma once

// Deterministic rule backend for the scripted mock: a tiny "model" that
// derives every answer from the request bindings with fixed string rules.
// Identical request -> identical response, no state, no randomness, which is
// what makes full offline pipeline runs and the synthetic evaluation fixtures
// reproducible bit-for-bit.

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "theanine/prompts.hpp"
#include "theanine/util.hpp"

namespace theanine::mock {

// Words the scaffolding itself injects everywhere; never treated as topical.
inline const std::set<std::string>& scaffold_stopwords() {
    static const std::set<std::string> words = {
        "speaker",  "mentioned", "session",  "sessions", "earlier", "memory",
        "memories", "timeline",  "briefing", "remember", "because", "really",
        "always",   "talked",    "thinking", "conversation", "conversations",
    };
    return words;
}

// Topical tokens: length >= 6, not scaffolding. Shared topical tokens are how
// the rule model decides two texts talk about the same thing.
inline std::vector<std::string> topical_tokens(std::string_view text) {
    std::vector<std::string> out;
    for (std::string& tok : word_tokens(text)) {
        if (tok.size() < 6) continue;
        if (scaffold_stopwords().count(tok)) continue;
        out.push_back(std::move(tok));
    }
    return out;
}

inline bool share_topical_token(std::string_view a, std::string_view b) {
    auto ta = topical_tokens(a);
    std::set<std::string> sa(ta.begin(), ta.end());
    for (const std::string& tok : topical_tokens(b))
        if (sa.count(tok)) return true;
    return false;
}

inline std::string normalize_for_match(std::string_view text) {
    return join(word_tokens(text), " ");
}

namespace detail {

inline std::string get(const Bindings& b, const std::string& key) {
    auto it = b.find(key);
    return it == b.end() ? std::string() : it->second;
}

inline std::string rule_summarize(const Bindings& b) {
    std::string out;
    for (const std::string& line : split_lines(get(b, "session_text"))) {
        std::string t = trim(line);
        if (t.rfind("A: ", 0) == 0)
            out += "- Speaker A said: " + t.substr(3) + "\n";
        else if (t.rfind("B: ", 0) == 0)
            out += "- Speaker B said: " + t.substr(3) + "\n";
    }
    return out;
}

inline std::string rule_assign_relation(const Bindings& b) {
    if (share_topical_token(get(b, "candidate_event"), get(b, "new_event")))
        return "SameTopic";
    return "None";
}

inline std::string rule_refine(const Bindings& b) {
    return "Timeline briefing: " + get(b, "timeline");
}

// Extractive responder: echo the background lines that share a topical token
// with the latest utterance. Whether a planted fact survives into the answer
// therefore depends only on whether retrieval put it into the background.
inline std::string rule_respond(const Bindings& b) {
    std::string dialogue = get(b, "dialogue");
    auto lines = split_lines(dialogue);
    std::string last = lines.empty() ? "" : lines.back();

    std::vector<std::string> matched;
    for (const std::string& line : split_lines(get(b, "context_block"))) {
        if (trim(line).empty()) continue;
        if (share_topical_token(line, last)) matched.push_back(trim(line));
    }

    if (get(b, "task").rfind("Before replying", 0) == 0) {
        // rationale stage
        if (matched.empty())
            return "The background holds nothing about this topic, so I should ask for details.";
        return "Relevant background: " + join(matched, " | ");
    }
    if (matched.empty())
        return "I don't recall anything about that. Tell me more.";
    return "Let me check what I remember. " + join(matched, " ") +
           " So I would put it that way rather than how you framed it.";
}

inline std::string rule_memory_update(const Bindings& b) {
    struct Entry {
        std::string id;
        std::string text;
    };
    auto parse = [](const std::string& block) {
        std::vector<Entry> entries;
        for (const std::string& line : split_lines(block)) {
            auto bar = line.find(" | ");
            if (bar == std::string::npos) continue;
            entries.push_back({trim(line.substr(0, bar)), line.substr(bar + 3)});
        }
        return entries;
    };
    auto olds = parse(detail::get(b, "old_memories"));
    auto news = parse(detail::get(b, "new_memories"));
    std::string out;
    for (const Entry& o : olds) {
        for (const Entry& n : news) {
            if (share_topical_token(o.text, n.text)) {
                out += "replace " + o.id + " " + n.id + "\n";
                break;
            }
        }
    }
    return out;
}

inline std::string rule_qa_gen(const Bindings& b) {
    auto lines = split_lines(get(b, "summaries"));
    auto first_about = [&](const std::string& speaker) -> std::string {
        for (const std::string& line : lines)
            if (line.find(speaker) != std::string::npos) return trim(line);
        return lines.empty() ? "nothing was discussed" : trim(lines.front());
    };
    std::string fact_a = first_about("Speaker B");
    std::string fact_b = first_about("Speaker A");
    return "QUESTION_A: I recall the opposite of this being true: " + fact_a +
           " - am I right?\n"
           "FACT_A: " + fact_a + "\n"
           "QUESTION_B: I recall the opposite of this being true: " + fact_b +
           " - am I right?\n"
           "FACT_B: " + fact_b + "\n";
}

inline std::string rule_session_gen(const Bindings& b) {
    std::string asker = get(b, "asker");
    std::string other = (asker == "A") ? "B" : "A";
    int exchanges = 2;
    try {
        exchanges = std::max(2, std::stoi(get(b, "min_exchanges")));
    } catch (...) {
    }
    std::string out;
    for (int i = 0; i < exchanges; ++i) {
        out += asker + ": It has been a while since we caught up, hasn't it?\n";
        out += other + ": It really has. A lot happened since our last sessions.\n";
    }
    out += asker + ": " + get(b, "question") + "\n";
    return out;
}

inline std::string rule_grade(const Bindings& b) {
    std::string fact = normalize_for_match(get(b, "fact"));
    std::string answer = normalize_for_match(get(b, "answer"));
    if (!fact.empty() && answer.find(fact) != std::string::npos) return "correct";
    return "incorrect";
}

}  // namespace detail

// Rule response for a request, or nullopt when no rule covers the template.
inline std::optional<std::string> rule_response(TemplateName name, const Bindings& bindings) {
    switch (name) {
        case TemplateName::SummarizeSession: return detail::rule_summarize(bindings);
        case TemplateName::AssignRelation: return detail::rule_assign_relation(bindings);
        case TemplateName::RefineTimeline: return detail::rule_refine(bindings);
        case TemplateName::CotResponse: return detail::rule_respond(bindings);
        case TemplateName::MemoryUpdate: return detail::rule_memory_update(bindings);
        case TemplateName::TeafarmQaGen: return detail::rule_qa_gen(bindings);
        case TemplateName::TeafarmSessionGen: return detail::rule_session_gen(bindings);
        case TemplateName::TeafarmGrade: return detail::rule_grade(bindings);
    }
    return std::nullopt;
}

}  // namespace theanine::mock
