#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "theanine/error.hpp"
#include "theanine/util.hpp"

namespace theanine {

enum class TemplateName {
    SummarizeSession,
    AssignRelation,
    RefineTimeline,
    CotResponse,
    MemoryUpdate,
    TeafarmQaGen,
    TeafarmSessionGen,
    TeafarmGrade,
};

inline constexpr std::array<TemplateName, 8> kAllTemplates = {
    TemplateName::SummarizeSession, TemplateName::AssignRelation,
    TemplateName::RefineTimeline,   TemplateName::CotResponse,
    TemplateName::MemoryUpdate,     TemplateName::TeafarmQaGen,
    TemplateName::TeafarmSessionGen, TemplateName::TeafarmGrade,
};

inline std::string to_string(TemplateName n) {
    switch (n) {
        case TemplateName::SummarizeSession: return "summarize_session";
        case TemplateName::AssignRelation: return "assign_relation";
        case TemplateName::RefineTimeline: return "refine_timeline";
        case TemplateName::CotResponse: return "cot_response";
        case TemplateName::MemoryUpdate: return "memory_update";
        case TemplateName::TeafarmQaGen: return "teafarm_qa_gen";
        case TemplateName::TeafarmSessionGen: return "teafarm_session_gen";
        case TemplateName::TeafarmGrade: return "teafarm_grade";
    }
    return "unknown";
}

inline std::optional<TemplateName> template_from_string(std::string_view s) {
    for (TemplateName n : kAllTemplates)
        if (s == to_string(n)) return n;
    return std::nullopt;
}

using Bindings = std::map<std::string, std::string>;

// A named prompt body with {placeholder} slots. The placeholder schema is
// derived from the body at registration time; rendering demands exactly that
// binding set, so an incomplete binding can never reach a backend.
struct PromptTemplate {
    TemplateName name = TemplateName::SummarizeSession;
    std::string body;
    std::set<std::string> placeholders;

    static PromptTemplate make(TemplateName name, std::string body) {
        PromptTemplate t;
        t.name = name;
        t.placeholders = scan_placeholders(body, name);
        t.body = std::move(body);
        return t;
    }

    std::string render(const Bindings& bindings) const {
        for (const auto& ph : placeholders) {
            if (!bindings.count(ph))
                throw Error(ErrorKind::Usage, "template " + to_string(name) +
                                                  ": missing binding '" + ph + "'");
        }
        for (const auto& [key, _] : bindings) {
            if (!placeholders.count(key))
                throw Error(ErrorKind::Usage, "template " + to_string(name) +
                                                  ": unknown binding '" + key + "'");
        }
        std::string out;
        out.reserve(body.size());
        for (std::size_t i = 0; i < body.size(); ++i) {
            if (body[i] != '{') {
                out.push_back(body[i]);
                continue;
            }
            std::size_t close = body.find('}', i);
            std::string ph = body.substr(i + 1, close - i - 1);
            out += bindings.at(ph);
            i = close;
        }
        return out;
    }

private:
    static std::set<std::string> scan_placeholders(const std::string& body, TemplateName name) {
        std::set<std::string> found;
        for (std::size_t i = 0; i < body.size(); ++i) {
            if (body[i] == '}')
                throw Error(ErrorKind::Data,
                            "template " + to_string(name) + ": stray '}' in body");
            if (body[i] != '{') continue;
            std::size_t close = body.find('}', i);
            if (close == std::string::npos)
                throw Error(ErrorKind::Data,
                            "template " + to_string(name) + ": unterminated '{' in body");
            std::string ph = body.substr(i + 1, close - i - 1);
            if (ph.empty() || ph.find('{') != std::string::npos)
                throw Error(ErrorKind::Data,
                            "template " + to_string(name) + ": malformed placeholder");
            found.insert(ph);
            i = close;
        }
        return found;
    }
};

namespace prompt_bodies {

inline constexpr const char* kSummarizeSession =
    "You maintain long-term memory for a conversation between Speaker A and\n"
    "Speaker B. Summarize the finished dialogue session below into standalone\n"
    "memory entries. Write one entry per line, each starting with \"- \", in\n"
    "chronological order. Every entry must name Speaker A or Speaker B\n"
    "explicitly and record one event, fact, or persona detail worth keeping.\n"
    "\n"
    "Session time: {time_label}\n"
    "Dialogue:\n"
    "{session_text}\n"
    "\n"
    "Memory entries:\n";

inline constexpr const char* kAssignRelation =
    "Decide how an earlier memory relates to a newly formed memory.\n"
    "Answer with exactly one word from this list:\n"
    "Changed - events in the earlier memory changed to events in the new one.\n"
    "Cause - events in the earlier memory caused events in the new one.\n"
    "Reason - events in the earlier memory are due to events in the new one.\n"
    "HinderedBy - events in one memory can be hindered by events in the other.\n"
    "React - as a result of the earlier events, the subject feels what the new memory describes.\n"
    "Want - as a result of the earlier events, the subject wants the new events to happen.\n"
    "SameTopic - the specific topic of the earlier memory is discussed again in the new one.\n"
    "None - the memories merely overlap in wording, with no relation above.\n"
    "\n"
    "Earlier memory (formed {candidate_time}): {candidate_event}\n"
    "New memory (formed {new_time}): {new_event}\n"
    "Conversation the new memory came from:\n"
    "{origin_context}\n"
    "\n"
    "Answer:\n";

inline constexpr const char* kRefineTimeline =
    "Below is an ongoing conversation and one timeline of related past\n"
    "memories, oldest first. Rewrite the timeline as a short briefing\n"
    "tailored to this conversation: keep what could matter for the next\n"
    "reply, drop what cannot, and keep the order and causality of events\n"
    "explicit.\n"
    "\n"
    "Ongoing conversation:\n"
    "{dialogue}\n"
    "\n"
    "Memory timeline:\n"
    "{timeline}\n"
    "\n"
    "Tailored briefing:\n";

inline constexpr const char* kCotResponse =
    "You are Speaker {self_speaker} in an ongoing conversation between\n"
    "Speaker A and Speaker B.\n"
    "\n"
    "Background information:\n"
    "{context_block}\n"
    "\n"
    "Ongoing conversation:\n"
    "{dialogue}\n"
    "\n"
    "{task}\n";

inline constexpr const char* kMemoryUpdate =
    "You maintain a flat memory pool for a long-term conversation, and a\n"
    "session just finished. Review the existing memories against the new\n"
    "ones and output one directive per line, using only these forms:\n"
    "keep <old_id>             - the old memory is still valid\n"
    "replace <old_id> <new_id> - the new memory supersedes the old one\n"
    "delete <old_id>           - the old memory is obsolete\n"
    "append <new_id>           - store the new memory as-is\n"
    "New memories not named in any directive are appended by default.\n"
    "\n"
    "Existing memories:\n"
    "{old_memories}\n"
    "\n"
    "New memories from the finished session:\n"
    "{new_memories}\n"
    "\n"
    "Directives:\n";

inline constexpr const char* kTeafarmQaGen =
    "Below are chronological session summaries of a long conversation\n"
    "between Speaker A and Speaker B. Craft two counterfactual probes. Each\n"
    "probe is a question one speaker could naturally ask that presupposes\n"
    "something false about the other speaker's past, plus the true fact that\n"
    "contradicts the presupposition. Make one probe from each speaker's\n"
    "perspective. Output exactly four lines:\n"
    "QUESTION_A: <question Speaker A asks, presupposing a false premise>\n"
    "FACT_A: <the true fact the answer must reflect>\n"
    "QUESTION_B: <question Speaker B asks, presupposing a false premise>\n"
    "FACT_B: <the true fact the answer must reflect>\n"
    "\n"
    "Session summaries:\n"
    "{summaries}\n";

inline constexpr const char* kTeafarmSessionGen =
    "Below are chronological session summaries of a long conversation\n"
    "between Speaker A and Speaker B, plus one probing question Speaker\n"
    "{asker} wants to ask. Write the opening of a brand-new session: at\n"
    "least {min_exchanges} natural warm-up exchanges on the same topics,\n"
    "then Speaker {asker} asks the probing question verbatim as the final\n"
    "utterance. Format every utterance as \"A: ...\" or \"B: ...\" on its own\n"
    "line.\n"
    "\n"
    "Session summaries:\n"
    "{summaries}\n"
    "\n"
    "Probing question: {question}\n"
    "\n"
    "New session:\n";

inline constexpr const char* kTeafarmGrade =
    "A dialogue system was asked a trick question that presupposes something\n"
    "false. Judge whether the system's answer stays true to the recorded\n"
    "fact instead of accepting the false premise. Answer with exactly one\n"
    "word: correct or incorrect.\n"
    "\n"
    "Trick question: {question}\n"
    "Recorded fact: {fact}\n"
    "System answer: {answer}\n"
    "\n"
    "Verdict:\n";

}  // namespace prompt_bodies

// Registry of the eight named prompts. Bodies are compiled-in defaults;
// per-template overrides can be loaded from a directory of <name>.txt files.
class PromptLibrary {
public:
    static PromptLibrary builtin() {
        PromptLibrary lib;
        lib.put(TemplateName::SummarizeSession, prompt_bodies::kSummarizeSession);
        lib.put(TemplateName::AssignRelation, prompt_bodies::kAssignRelation);
        lib.put(TemplateName::RefineTimeline, prompt_bodies::kRefineTimeline);
        lib.put(TemplateName::CotResponse, prompt_bodies::kCotResponse);
        lib.put(TemplateName::MemoryUpdate, prompt_bodies::kMemoryUpdate);
        lib.put(TemplateName::TeafarmQaGen, prompt_bodies::kTeafarmQaGen);
        lib.put(TemplateName::TeafarmSessionGen, prompt_bodies::kTeafarmSessionGen);
        lib.put(TemplateName::TeafarmGrade, prompt_bodies::kTeafarmGrade);
        return lib;
    }

    const PromptTemplate& get(TemplateName name) const { return templates_.at(name); }

    // Override bodies from <templates_dir>/<name>.txt. An override must use
    // the same placeholder set as the default it replaces.
    void load_overrides(const std::filesystem::path& dir) {
        for (TemplateName n : kAllTemplates) {
            auto path = dir / (to_string(n) + ".txt");
            if (!std::filesystem::exists(path)) continue;
            PromptTemplate replacement = PromptTemplate::make(n, read_text_file(path));
            if (replacement.placeholders != templates_.at(n).placeholders)
                throw Error(ErrorKind::Data, "prompt override " + path.string() +
                                                 " changes the placeholder schema");
            templates_.insert_or_assign(n, std::move(replacement));
        }
    }

private:
    void put(TemplateName n, std::string body) {
        templates_.emplace(n, PromptTemplate::make(n, std::move(body)));
    }

    std::map<TemplateName, PromptTemplate> templates_;
};

}  // namespace theanine
