#pragma once
// Stage 1: turn one generation response into a validated set of nine
// competency statements — exactly three each of Knowledge, Skill and Ability,
// slotted 1..3. The parser accepts the requested JSON object shape
// {knowledge:[3], skills:[3], abilities:[3]} and, as a fallback, a labeled
// plain-text list. Statements are preserved verbatim apart from trimming and
// a 600-character cap (truncation is reported as a warning, not an error, so
// one chatty response cannot sink a batch run).

#include "ksarag/embedding.hpp"
#include "ksarag/errors.hpp"
#include "ksarag/genclient.hpp"
#include "ksarag/prompts.hpp"
#include "ksarag/retrieval.hpp"
#include "ksarag/text.hpp"
#include "ksarag/vector_index.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace ksarag::extractor {

constexpr std::size_t kMaxStatementChars = 600;

enum class KsaCategory { Knowledge, Skill, Ability };

constexpr std::array<KsaCategory, 3> kAllCategories = {
    KsaCategory::Knowledge, KsaCategory::Skill, KsaCategory::Ability};

inline const char* category_name(KsaCategory c) {
    switch (c) {
        case KsaCategory::Knowledge: return "Knowledge";
        case KsaCategory::Skill: return "Skill";
        case KsaCategory::Ability: return "Ability";
    }
    throw ParameterError("unknown KSA category");
}

// Key of the category's list in the extraction JSON response.
inline const char* category_list_key(KsaCategory c) {
    switch (c) {
        case KsaCategory::Knowledge: return "knowledge";
        case KsaCategory::Skill: return "skills";
        case KsaCategory::Ability: return "abilities";
    }
    throw ParameterError("unknown KSA category");
}

// Letter used in per-KSA score keys: k1..k3, s1..s3, a1..a3.
inline char category_letter(KsaCategory c) {
    switch (c) {
        case KsaCategory::Knowledge: return 'k';
        case KsaCategory::Skill: return 's';
        case KsaCategory::Ability: return 'a';
    }
    throw ParameterError("unknown KSA category");
}

struct KsaItem {
    KsaCategory category = KsaCategory::Knowledge;
    int slot = 1;  // 1..3 within the category
    std::string statement;
};

struct KsaSet {
    std::string series_code;   // 4-digit code, e.g. "0110"
    std::string series_title;
    std::vector<KsaItem> items;  // ordered k1..k3, s1..s3, a1..a3

    const KsaItem& item(KsaCategory category, int slot) const {
        for (const KsaItem& it : items) {
            if (it.category == category && it.slot == slot) return it;
        }
        throw ParameterError(std::string("no item ") + category_letter(category) +
                             std::to_string(slot) + " in series " + series_code);
    }

    void validate() const {
        if (items.size() != 9) {
            throw CardinalityError("KsaSet: expected 9 items, got " +
                                   std::to_string(items.size()));
        }
        for (KsaCategory c : kAllCategories) {
            for (int slot = 1; slot <= 3; ++slot) {
                int hits = 0;
                for (const KsaItem& it : items) {
                    if (it.category == c && it.slot == slot) ++hits;
                }
                if (hits != 1) {
                    throw CardinalityError(std::string(category_name(c)) + " slot " +
                                           std::to_string(slot) + ": expected 1 item, got " +
                                           std::to_string(hits));
                }
            }
        }
        for (const KsaItem& it : items) {
            if (text::trim(it.statement).empty()) {
                throw ContentError(std::string(category_name(it.category)) + " " +
                                   std::to_string(it.slot) + ": empty statement");
            }
        }
    }
};

namespace detail {

inline std::string excerpt(std::string_view s, std::size_t limit = 160) {
    std::string out(s.substr(0, limit));
    if (s.size() > limit) out += "...";
    return out;
}

inline std::string clean_statement(std::string_view raw, KsaCategory cat, int slot,
                                   std::vector<std::string>* warnings) {
    std::string s = text::trim(raw);
    if (s.size() > kMaxStatementChars) {
        s.resize(kMaxStatementChars);
        s = text::trim(s);
        if (warnings != nullptr) {
            warnings->push_back(std::string(category_name(cat)) + " " + std::to_string(slot) +
                                ": statement truncated to " +
                                std::to_string(kMaxStatementChars) + " chars");
        }
    }
    return s;
}

// Pulls the three category lists out of the JSON object response.
inline std::vector<KsaItem> items_from_json(const nlohmann::json& obj,
                                            std::vector<std::string>* warnings) {
    std::vector<KsaItem> items;
    for (KsaCategory cat : kAllCategories) {
        const char* key = category_list_key(cat);
        if (!obj.contains(key)) {
            throw CardinalityError(std::string(category_name(cat)) + ": expected 3, got 0");
        }
        const nlohmann::json& arr = obj.at(key);
        if (!arr.is_array()) {
            throw ParseError(std::string("extraction key '") + key + "' is not a list");
        }
        if (arr.size() != 3) {
            throw CardinalityError(std::string(category_name(cat)) + ": expected 3, got " +
                                   std::to_string(arr.size()));
        }
        int slot = 1;
        for (const auto& entry : arr) {
            if (!entry.is_string()) {
                throw ParseError(std::string("extraction list '") + key +
                                 "' holds a non-string entry");
            }
            KsaItem item;
            item.category = cat;
            item.slot = slot++;
            item.statement = clean_statement(entry.get<std::string>(), cat, item.slot, warnings);
            if (item.statement.empty()) {
                throw ContentError(std::string(category_name(cat)) + " " +
                                   std::to_string(item.slot) + ": empty statement");
            }
            items.push_back(std::move(item));
        }
    }
    return items;
}

// Fallback text format: "Knowledge:" / "Skills:" / "Abilities:" section
// headers, each followed by "-", "*" or "1." style list items. Wrapped lines
// continue the previous item.
inline bool section_header(std::string_view line, KsaCategory& cat) {
    std::string t = text::to_lower(text::trim(line));
    while (!t.empty() && (t.back() == ':' || t.back() == ' ')) t.pop_back();
    if (t == "knowledge") { cat = KsaCategory::Knowledge; return true; }
    if (t == "skills" || t == "skill") { cat = KsaCategory::Skill; return true; }
    if (t == "abilities" || t == "ability") { cat = KsaCategory::Ability; return true; }
    return false;
}

inline bool list_item(std::string_view line, std::string& body) {
    std::string t = text::trim(line);
    if (t.empty()) return false;
    if (t[0] == '-' || t[0] == '*') {
        body = text::trim(t.substr(1));
        return true;
    }
    std::size_t d = 0;
    while (d < t.size() && t[d] >= '0' && t[d] <= '9') ++d;
    if (d > 0 && d < t.size() && (t[d] == '.' || t[d] == ')')) {
        body = text::trim(t.substr(d + 1));
        return true;
    }
    return false;
}

inline std::vector<KsaItem> items_from_text(const std::string& stripped,
                                            std::vector<std::string>* warnings) {
    std::array<std::vector<std::string>, 3> lists;
    int current = -1;
    std::size_t pos = 0;
    bool any_header = false;
    while (pos <= stripped.size()) {
        std::size_t eol = stripped.find('\n', pos);
        std::string_view line(stripped.data() + pos,
                              (eol == std::string::npos ? stripped.size() : eol) - pos);
        KsaCategory cat;
        std::string body;
        if (section_header(line, cat)) {
            current = static_cast<int>(cat);
            any_header = true;
        } else if (current >= 0 && list_item(line, body)) {
            lists[static_cast<std::size_t>(current)].push_back(body);
        } else if (current >= 0 && !text::trim(line).empty() &&
                   !lists[static_cast<std::size_t>(current)].empty()) {
            auto& last = lists[static_cast<std::size_t>(current)].back();
            last += ' ';
            last += text::trim(line);
        }
        if (eol == std::string::npos) break;
        pos = eol + 1;
    }
    if (!any_header) {
        throw ParseError("extraction response is neither JSON nor a labeled list: " +
                         excerpt(stripped));
    }
    std::vector<KsaItem> items;
    for (KsaCategory cat : kAllCategories) {
        const auto& list = lists[static_cast<std::size_t>(cat)];
        if (list.size() != 3) {
            throw CardinalityError(std::string(category_name(cat)) + ": expected 3, got " +
                                   std::to_string(list.size()));
        }
        for (int slot = 1; slot <= 3; ++slot) {
            KsaItem item;
            item.category = cat;
            item.slot = slot;
            item.statement =
                clean_statement(list[static_cast<std::size_t>(slot - 1)], cat, slot, warnings);
            if (item.statement.empty()) {
                throw ContentError(std::string(category_name(cat)) + " " +
                                   std::to_string(slot) + ": empty statement");
            }
            items.push_back(std::move(item));
        }
    }
    return items;
}

}  // namespace detail

// Parses one extraction response into a KsaSet. Re-parsing the same raw text
// always yields an equal set.
inline KsaSet parse_ksa_response(const std::string& raw, const std::string& series_code,
                                 std::vector<std::string>* warnings = nullptr) {
    if (raw.empty()) throw ParameterError("extraction response is empty");
    std::string stripped = text::strip_code_fences(raw);
    if (stripped.empty()) throw ParseError("extraction response is blank after fences");

    KsaSet set;
    set.series_code = series_code;
    nlohmann::json parsed = nlohmann::json::parse(stripped, nullptr, false);
    if (parsed.is_object()) {
        set.items = detail::items_from_json(parsed, warnings);
    } else if (parsed.is_discarded()) {
        set.items = detail::items_from_text(stripped, warnings);
    } else {
        throw ParseError("extraction response is JSON but not an object: " +
                         detail::excerpt(stripped));
    }
    set.validate();
    return set;
}

inline nlohmann::json ksa_to_json(const KsaSet& set) {
    nlohmann::json j;
    j["series_code"] = set.series_code;
    j["series_title"] = set.series_title;
    for (KsaCategory cat : kAllCategories) {
        nlohmann::json arr = nlohmann::json::array();
        for (int slot = 1; slot <= 3; ++slot) arr.push_back(set.item(cat, slot).statement);
        j[category_list_key(cat)] = std::move(arr);
    }
    return j;
}

inline KsaSet ksa_from_json(const nlohmann::json& j) {
    KsaSet set;
    set.series_code = j.at("series_code").get<std::string>();
    set.series_title = j.at("series_title").get<std::string>();
    for (KsaCategory cat : kAllCategories) {
        const nlohmann::json& arr = j.at(category_list_key(cat));
        if (!arr.is_array() || arr.size() != 3) {
            throw CardinalityError(std::string(category_name(cat)) + ": expected 3, got " +
                                   std::to_string(arr.is_array() ? arr.size() : 0));
        }
        for (int slot = 1; slot <= 3; ++slot) {
            set.items.push_back(KsaItem{cat, slot,
                                        arr[static_cast<std::size_t>(slot - 1)].get<std::string>()});
        }
    }
    set.validate();
    return set;
}

// Formats the nine statements as the {ksas} payload for the impact prompts,
// one per line, labeled with the same k1..a3 keys the score schema uses.
inline std::string ksa_payload(const KsaSet& set) {
    set.validate();
    std::string out;
    for (KsaCategory cat : kAllCategories) {
        for (int slot = 1; slot <= 3; ++slot) {
            out += category_letter(cat);
            out += std::to_string(slot);
            out += " (";
            out += category_name(cat);
            out += "): ";
            out += set.item(cat, slot).statement;
            out += '\n';
        }
    }
    return out;
}

struct SeriesInput {
    std::string series_code;
    std::string series_title;
    std::string description_text;
};

// Everything run_extraction needs, wired by the orchestrator (or a test).
struct StageDeps {
    const vectorstore::VectorIndex* index = nullptr;      // stage KB index
    const retrieval::ChunkStore* chunks = nullptr;        // matching chunk store
    embeddings::EmbeddingProvider* embedder = nullptr;
    const prompts::PromptSet* prompt_set = nullptr;
    genclient::Backend* backend = nullptr;
    std::size_t context_budget = 3500;
    double temperature = 1.0;
    std::size_t max_context_tokens = 131072;
    std::string model_name = "gpt-4o";
    // Called with every raw response before any parsing happens.
    std::function<void(const genclient::GenerationRequest&,
                       const genclient::GenerationResponse&)> audit;

    void require() const {
        if (index == nullptr || chunks == nullptr || embedder == nullptr ||
            prompt_set == nullptr || backend == nullptr) {
            throw ParameterError("stage dependencies incomplete");
        }
    }
};

struct ExtractionResult {
    KsaSet set;
    retrieval::ContextBlock context;
    genclient::GenerationResponse response;
    std::vector<std::string> warnings;
};

// The retrieval query for stage 1: series title plus the head of the
// description (capped so enormous descriptions do not dominate embedding
// cost; 2000 tokens comfortably covers every handbook entry we ship).
inline std::string extraction_query_text(const SeriesInput& series) {
    std::vector<std::string> tokens = text::tokenize(series.description_text);
    std::size_t take = std::min<std::size_t>(tokens.size(), 2000);
    std::string head = text::join_tokens(tokens, 0, take);
    if (series.series_title.empty()) return head;
    if (head.empty()) return series.series_title;
    return series.series_title + " " + head;
}

inline ExtractionResult run_extraction(const SeriesInput& series, const StageDeps& deps) {
    deps.require();
    if (text::trim(series.description_text).empty()) {
        throw ParameterError("series " + series.series_code + ": empty description");
    }

    ExtractionResult result;
    std::string query = extraction_query_text(series);
    embeddings::EmbeddingVector qvec = deps.embedder->embed_batch({query}).at(0);
    result.context = retrieval::plan_context(*deps.index, *deps.chunks,
                                             retrieval::Stage::KsaExtraction, qvec,
                                             deps.context_budget);
    for (const auto& w : result.context.warnings) result.warnings.push_back(w);

    prompts::RenderedPrompt prompt =
        deps.prompt_set->render_extraction(result.context, series.description_text);

    genclient::GenerationRequest req;
    req.request_id = genclient::make_request_id(series.series_code,
                                                prompts::TemplateId::KsaExtract);
    req.prompt_text = prompt.text;
    req.model_name = deps.model_name;
    req.temperature = deps.temperature;
    req.max_context_tokens = deps.max_context_tokens;

    result.response = genclient::generate(*deps.backend, req);
    if (deps.audit) deps.audit(req, result.response);

    result.set = parse_ksa_response(result.response.raw_text, series.series_code,
                                    &result.warnings);
    result.set.series_title = series.series_title;
    return result;
}

}  // namespace ksarag::extractor
