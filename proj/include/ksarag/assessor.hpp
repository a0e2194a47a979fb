#pragma once
// Stage 2: for one series, issue one generation call per impact dimension
// (complementarity, augmentation, substitutivity — never combined, to keep
// the judgments independent), parse the nine scores plus justifications from
// each, and assemble the 27-rating assessment with its category and
// dimension averages. Averages are stored at full double precision; rounding
// happens only when reports are printed.

#include "ksarag/errors.hpp"
#include "ksarag/extractor.hpp"
#include "ksarag/genclient.hpp"
#include "ksarag/prompts.hpp"
#include "ksarag/retrieval.hpp"
#include "ksarag/text.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ksarag::assessor {

enum class Dimension { Complementarity, Augmentation, Substitutivity };

constexpr std::array<Dimension, 3> kAllDimensions = {
    Dimension::Complementarity, Dimension::Augmentation, Dimension::Substitutivity};

inline const char* dimension_key(Dimension d) {
    switch (d) {
        case Dimension::Complementarity: return "complementarity";
        case Dimension::Augmentation: return "augmentation";
        case Dimension::Substitutivity: return "substitutivity";
    }
    throw ParameterError("unknown dimension");
}

inline const char* dimension_name(Dimension d) {
    switch (d) {
        case Dimension::Complementarity: return "Complementarity";
        case Dimension::Augmentation: return "Augmentation";
        case Dimension::Substitutivity: return "Substitutivity";
    }
    throw ParameterError("unknown dimension");
}

inline prompts::TemplateId dimension_template(Dimension d) {
    switch (d) {
        case Dimension::Complementarity: return prompts::TemplateId::Complementarity;
        case Dimension::Augmentation: return prompts::TemplateId::Augmentation;
        case Dimension::Substitutivity: return prompts::TemplateId::Substitutivity;
    }
    throw ParameterError("unknown dimension");
}

// Likert anchor for a score on a dimension's 1..5 scale.
inline std::string scale_label(Dimension d, int score) {
    if (score < 1 || score > 5) {
        throw RangeError("score " + std::to_string(score) + " outside 1..5");
    }
    static const std::array<std::array<const char*, 5>, 3> kLabels = {{
        {"No Complementarity", "Low Complementarity", "Moderate Complementarity",
         "High Complementarity", "Very High Complementarity"},
        {"No Augmentation", "Low Augmentation", "Moderate Augmentation",
         "Substantial Augmentation", "High Augmentation"},
        {"No Substitution", "Low Substitution", "Partial Substitution",
         "High Substitution", "Full Substitution"},
    }};
    return kLabels[static_cast<std::size_t>(d)][static_cast<std::size_t>(score - 1)];
}

struct ImpactRating {
    extractor::KsaCategory category = extractor::KsaCategory::Knowledge;
    int slot = 1;
    Dimension dimension = Dimension::Complementarity;
    int score = 1;  // integer Likert value, 1..5
    std::string justification;

    // "k1", "s3", ... — the key stem used in the response schema.
    std::string ksa_key() const {
        return std::string(1, extractor::category_letter(category)) + std::to_string(slot);
    }
};

struct Averages {
    // Indexed [dimension][category]; overall dimension mean in dim[].
    std::array<std::array<double, 3>, 3> category_dim{};
    std::array<double, 3> dim{};

    double category_dim_avg(extractor::KsaCategory cat, Dimension d) const {
        return category_dim[static_cast<std::size_t>(d)][static_cast<std::size_t>(cat)];
    }
    double dim_avg(Dimension d) const { return dim[static_cast<std::size_t>(d)]; }
};

struct SeriesAssessment {
    std::string series_code;
    std::string series_title;
    extractor::KsaSet ksa_set;
    std::vector<ImpactRating> ratings;  // 27, dimension-major, k1..a3 within
    Averages averages;
    // Raw-response audit references (request key -> file path), filled by the
    // run engine before the assessment is persisted.
    std::vector<std::pair<std::string, std::string>> audit_refs;

    double dim_avg(Dimension d) const { return averages.dim_avg(d); }
    double category_dim_avg(extractor::KsaCategory cat, Dimension d) const {
        return averages.category_dim_avg(cat, d);
    }
};

// A dimension call failed mid-assessment; carries everything that did finish
// so the run engine can still audit the completed dimensions.
class PartialAssessmentError : public Error {
public:
    PartialAssessmentError(const std::string& what, std::vector<Dimension> completed,
                           std::vector<ImpactRating> ratings, Dimension failed)
        : Error(what), completed_(std::move(completed)), ratings_(std::move(ratings)),
          failed_(failed) {}

    const std::vector<Dimension>& completed_dimensions() const { return completed_; }
    const std::vector<ImpactRating>& completed_ratings() const { return ratings_; }
    Dimension failed_dimension() const { return failed_; }

private:
    std::vector<Dimension> completed_;
    std::vector<ImpactRating> ratings_;
    Dimension failed_;
};

namespace detail {

inline std::string excerpt(std::string_view s, std::size_t limit = 160) {
    std::string out(s.substr(0, limit));
    if (s.size() > limit) out += "...";
    return out;
}

// Scores arrive as JSON integers or as numeric strings (the documented
// schema quotes them). Anything non-integer is rejected: the scale is a
// discrete Likert item.
inline int parse_score(const nlohmann::json& value, const std::string& key) {
    if (value.is_number_integer()) {
        long long v = value.get<long long>();
        if (v < 1 || v > 5) {
            throw RangeError(key + " " + std::to_string(v) + " outside 1..5");
        }
        return static_cast<int>(v);
    }
    if (value.is_number_float()) {
        throw RangeError(key + " " + value.dump() + " is not an integer");
    }
    if (value.is_string()) {
        std::string s = text::trim(value.get<std::string>());
        if (s.empty() || s.size() > 4 ||
            s.find_first_not_of("0123456789") != std::string::npos) {
            throw RangeError(key + " '" + value.get<std::string>() + "' is not an integer");
        }
        int v = std::stoi(s);
        if (v < 1 || v > 5) {
            throw RangeError(key + " " + std::to_string(v) + " outside 1..5");
        }
        return v;
    }
    throw RangeError(key + " has non-numeric type " + std::string(value.type_name()));
}

}  // namespace detail

// Parses one dimension response into its nine ratings, ordered k1..k3,
// s1..s3, a1..a3. Score keys follow "<ksa>_<dimension>_score"; each must be
// paired with a non-empty "<ksa>_assessment" justification.
inline std::vector<ImpactRating> parse_impact_response(const std::string& raw, Dimension d) {
    if (raw.empty()) throw ParameterError("impact response is empty");
    std::string stripped = text::strip_code_fences(raw);
    nlohmann::json parsed = nlohmann::json::parse(stripped, nullptr, false);
    if (parsed.is_discarded() || !parsed.is_object()) {
        throw ParseError(std::string("impact response is not a JSON object: ") +
                         detail::excerpt(stripped));
    }

    std::vector<ImpactRating> ratings;
    ratings.reserve(9);
    for (extractor::KsaCategory cat : extractor::kAllCategories) {
        for (int slot = 1; slot <= 3; ++slot) {
            std::string stem = std::string(1, extractor::category_letter(cat)) +
                               std::to_string(slot);
            std::string score_key = stem + "_" + dimension_key(d) + "_score";
            std::string just_key = stem + "_assessment";
            if (!parsed.contains(score_key)) {
                throw SchemaError("missing key '" + score_key + "'");
            }
            if (!parsed.contains(just_key)) {
                throw SchemaError("missing key '" + just_key + "'");
            }
            ImpactRating r;
            r.category = cat;
            r.slot = slot;
            r.dimension = d;
            r.score = detail::parse_score(parsed.at(score_key), score_key);
            if (!parsed.at(just_key).is_string()) {
                throw ContentError("'" + just_key + "' is not a string");
            }
            r.justification = text::trim(parsed.at(just_key).get<std::string>());
            if (r.justification.empty()) {
                throw ContentError("'" + just_key + "' is empty");
            }
            ratings.push_back(std::move(r));
        }
    }
    return ratings;
}

// Means over the full 27-rating grid. Requires exactly one rating per
// (category, slot, dimension) cell.
inline Averages compute_averages(const std::vector<ImpactRating>& ratings) {
    if (ratings.size() != 27) {
        throw CardinalityError("expected 27 ratings, got " + std::to_string(ratings.size()));
    }
    std::array<std::array<std::array<int, 3>, 3>, 3> grid{};  // [dim][cat][slot]
    for (const ImpactRating& r : ratings) {
        if (r.slot < 1 || r.slot > 3) {
            throw RangeError("rating slot " + std::to_string(r.slot) + " outside 1..3");
        }
        if (r.score < 1 || r.score > 5) {
            throw RangeError("rating score " + std::to_string(r.score) + " outside 1..5");
        }
        auto& cell = grid[static_cast<std::size_t>(r.dimension)]
                         [static_cast<std::size_t>(r.category)]
                         [static_cast<std::size_t>(r.slot - 1)];
        if (cell != 0) {
            throw CardinalityError("duplicate rating for " +
                                   std::string(extractor::category_name(r.category)) + " " +
                                   std::to_string(r.slot) + " / " + dimension_key(r.dimension));
        }
        cell = r.score;
    }

    Averages avg;
    for (std::size_t d = 0; d < 3; ++d) {
        double dim_sum = 0.0;
        for (std::size_t c = 0; c < 3; ++c) {
            double cat_sum = 0.0;
            for (std::size_t s = 0; s < 3; ++s) {
                if (grid[d][c][s] == 0) {
                    throw CardinalityError("missing rating for cell dim=" + std::to_string(d) +
                                           " cat=" + std::to_string(c) +
                                           " slot=" + std::to_string(s + 1));
                }
                cat_sum += grid[d][c][s];
            }
            avg.category_dim[d][c] = cat_sum / 3.0;
            dim_sum += cat_sum;
        }
        avg.dim[d] = dim_sum / 9.0;
    }
    return avg;
}

// Retrieval query for a dimension call: a short neutral descriptor of the
// dimension plus the KSA payload, so stage-2 context skews toward capability
// evidence relevant to the dimension under evaluation.
inline std::string impact_query_text(Dimension d, const std::string& ksa_payload) {
    std::string hint;
    switch (d) {
        case Dimension::Complementarity:
            hint = "generative AI complementing human capabilities working alongside workers";
            break;
        case Dimension::Augmentation:
            hint = "generative AI augmenting transforming human knowledge skills abilities";
            break;
        case Dimension::Substitutivity:
            hint = "generative AI substituting automating replacing human functions";
            break;
    }
    return hint + "\n" + ksa_payload;
}

// Runs the three dimension calls for one series (fixed order: C, A, S) and
// assembles the assessment. On a malformed-JSON response the call is retried
// exactly once with an explicit JSON reminder appended; any failure after
// that aborts the series with a PartialAssessmentError retaining whatever
// dimensions completed.
inline SeriesAssessment assess_series(const extractor::KsaSet& ksa_set,
                                      const extractor::StageDeps& deps) {
    deps.require();
    ksa_set.validate();

    SeriesAssessment out;
    out.series_code = ksa_set.series_code;
    out.series_title = ksa_set.series_title;
    out.ksa_set = ksa_set;

    std::string payload = extractor::ksa_payload(ksa_set);
    std::vector<Dimension> completed;

    for (Dimension d : kAllDimensions) {
        try {
            std::string query = impact_query_text(d, payload);
            embeddings::EmbeddingVector qvec = deps.embedder->embed_batch({query}).at(0);
            retrieval::ContextBlock context = retrieval::plan_context(
                *deps.index, *deps.chunks, retrieval::Stage::ImpactEvaluation, qvec,
                deps.context_budget);

            prompts::RenderedPrompt prompt =
                deps.prompt_set->render_impact(dimension_template(d), context, payload);

            genclient::GenerationRequest req;
            req.request_id =
                genclient::make_request_id(ksa_set.series_code, dimension_template(d));
            req.prompt_text = prompt.text;
            req.model_name = deps.model_name;
            req.temperature = deps.temperature;
            req.max_context_tokens = deps.max_context_tokens;

            genclient::GenerationResponse resp = genclient::generate(*deps.backend, req);
            if (deps.audit) deps.audit(req, resp);

            std::vector<ImpactRating> ratings;
            try {
                ratings = parse_impact_response(resp.raw_text, d);
            } catch (const ParseError&) {
                genclient::GenerationRequest retry = req;
                retry.prompt_text += "\nRespond with valid JSON only.";
                genclient::GenerationResponse retry_resp =
                    genclient::generate(*deps.backend, retry);
                if (deps.audit) deps.audit(retry, retry_resp);
                ratings = parse_impact_response(retry_resp.raw_text, d);
            }
            out.ratings.insert(out.ratings.end(), ratings.begin(), ratings.end());
            completed.push_back(d);
        } catch (const Error& e) {
            throw PartialAssessmentError(
                "series " + ksa_set.series_code + " " + dimension_key(d) +
                    " assessment failed: " + e.what(),
                completed, out.ratings, d);
        }
    }

    out.averages = compute_averages(out.ratings);
    return out;
}

inline nlohmann::json assessment_to_json(const SeriesAssessment& a) {
    nlohmann::json j;
    j["series_code"] = a.series_code;
    j["series_title"] = a.series_title;
    j["ksa"] = extractor::ksa_to_json(a.ksa_set);
    nlohmann::json ratings = nlohmann::json::array();
    for (const ImpactRating& r : a.ratings) {
        ratings.push_back(nlohmann::json{{"ksa", r.ksa_key()},
                                         {"category", extractor::category_name(r.category)},
                                         {"slot", r.slot},
                                         {"dimension", dimension_key(r.dimension)},
                                         {"score", r.score},
                                         {"scale_label", scale_label(r.dimension, r.score)},
                                         {"justification", r.justification}});
    }
    j["ratings"] = std::move(ratings);
    nlohmann::json averages;
    for (Dimension d : kAllDimensions) {
        nlohmann::json entry;
        entry["knowledge"] = a.category_dim_avg(extractor::KsaCategory::Knowledge, d);
        entry["skills"] = a.category_dim_avg(extractor::KsaCategory::Skill, d);
        entry["abilities"] = a.category_dim_avg(extractor::KsaCategory::Ability, d);
        entry["overall"] = a.dim_avg(d);
        averages[dimension_key(d)] = std::move(entry);
    }
    j["averages"] = std::move(averages);
    nlohmann::json audit;
    for (const auto& [key, path] : a.audit_refs) audit[key] = path;
    j["audit"] = std::move(audit);
    return j;
}

inline SeriesAssessment assessment_from_json(const nlohmann::json& j) {
    SeriesAssessment a;
    a.series_code = j.at("series_code").get<std::string>();
    a.series_title = j.at("series_title").get<std::string>();
    a.ksa_set = extractor::ksa_from_json(j.at("ksa"));
    for (const auto& rj : j.at("ratings")) {
        ImpactRating r;
        std::string key = rj.at("ksa").get<std::string>();
        if (key.size() != 2) throw ParseError("bad rating key '" + key + "'");
        switch (key[0]) {
            case 'k': r.category = extractor::KsaCategory::Knowledge; break;
            case 's': r.category = extractor::KsaCategory::Skill; break;
            case 'a': r.category = extractor::KsaCategory::Ability; break;
            default: throw ParseError("bad rating key '" + key + "'");
        }
        r.slot = key[1] - '0';
        std::string dim = rj.at("dimension").get<std::string>();
        bool found = false;
        for (Dimension d : kAllDimensions) {
            if (dim == dimension_key(d)) {
                r.dimension = d;
                found = true;
                break;
            }
        }
        if (!found) throw ParseError("bad dimension '" + dim + "'");
        r.score = rj.at("score").get<int>();
        r.justification = rj.at("justification").get<std::string>();
        a.ratings.push_back(std::move(r));
    }
    a.averages = compute_averages(a.ratings);
    if (j.contains("audit")) {
        for (const auto& [key, value] : j.at("audit").items()) {
            a.audit_refs.emplace_back(key, value.get<std::string>());
        }
    }
    return a;
}

}  // namespace ksarag::assessor
