#pragma once
// Prompt template loading and rendering. Templates are plain-text files with
// {name} placeholders; literal braces are written as {{ and }}. Each pipeline
// stage owns one template, addressed by a stable string key that also names
// the template file on disk. Templates are validated at load time: balanced
// braces, exactly the placeholders the stage supplies, and no phrasing that
// begs a particular verdict out of the model.

#include "ksarag/errors.hpp"
#include "ksarag/retrieval.hpp"
#include "ksarag/text.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace ksarag::prompts {

enum class TemplateId {
    KsaExtract,
    Complementarity,
    Augmentation,
    Substitutivity,
};

constexpr std::array<TemplateId, 4> kAllTemplates = {
    TemplateId::KsaExtract,
    TemplateId::Complementarity,
    TemplateId::Augmentation,
    TemplateId::Substitutivity,
};

// The three impact dimensions share a render signature; extraction differs.
constexpr std::array<TemplateId, 3> kImpactTemplates = {
    TemplateId::Complementarity,
    TemplateId::Augmentation,
    TemplateId::Substitutivity,
};

inline std::string template_key(TemplateId id) {
    switch (id) {
        case TemplateId::KsaExtract: return "ksa_extract";
        case TemplateId::Complementarity: return "complementarity";
        case TemplateId::Augmentation: return "augmentation";
        case TemplateId::Substitutivity: return "substitutivity";
    }
    throw ParameterError("unknown template id");
}

inline TemplateId template_id_from_key(std::string_view key) {
    for (TemplateId id : kAllTemplates) {
        if (template_key(id) == key) return id;
    }
    throw ParameterError("unknown template key '" + std::string(key) + "'");
}

inline std::string template_file_name(TemplateId id) {
    return template_key(id) + ".txt";
}

struct PromptTemplate {
    TemplateId id = TemplateId::KsaExtract;
    std::string body;

    // Placeholder names that must be supplied when rendering this template.
    std::vector<std::string> required_placeholders() const {
        if (id == TemplateId::KsaExtract) return {"context", "job_description"};
        return {"context", "ksas"};
    }
};

struct RenderedPrompt {
    TemplateId id = TemplateId::KsaExtract;
    std::string text;
    std::size_t token_count = 0;
};

// Expands {name} placeholders from `values`, honouring {{ / }} escapes.
// Throws RenderError for stray braces, malformed or unknown placeholder
// names, and placeholders with no supplied value.
inline std::string render_body(std::string_view body,
                               const std::map<std::string, std::string>& values) {
    std::string out;
    out.reserve(body.size());
    std::size_t i = 0;
    while (i < body.size()) {
        char c = body[i];
        if (c == '{') {
            if (i + 1 < body.size() && body[i + 1] == '{') {
                out.push_back('{');
                i += 2;
                continue;
            }
            std::size_t close = body.find('}', i + 1);
            if (close == std::string_view::npos) {
                throw RenderError("unterminated placeholder at offset " + std::to_string(i));
            }
            std::string name(body.substr(i + 1, close - i - 1));
            if (name.empty() ||
                !std::all_of(name.begin(), name.end(), [](unsigned char ch) {
                    return std::islower(ch) != 0 || ch == '_';
                })) {
                throw RenderError("malformed placeholder '{" + name + "}'");
            }
            auto it = values.find(name);
            if (it == values.end()) {
                throw RenderError("no value supplied for placeholder '{" + name + "}'");
            }
            out += it->second;
            i = close + 1;
            continue;
        }
        if (c == '}') {
            if (i + 1 < body.size() && body[i + 1] == '}') {
                out.push_back('}');
                i += 2;
                continue;
            }
            throw RenderError("stray '}' at offset " + std::to_string(i));
        }
        out.push_back(c);
        i += 1;
    }
    return out;
}

// Lists distinct placeholder names appearing in a template body.
inline std::vector<std::string> placeholder_names(std::string_view body) {
    std::vector<std::string> names;
    std::size_t i = 0;
    while (i < body.size()) {
        if (body[i] == '{') {
            if (i + 1 < body.size() && body[i + 1] == '{') {
                i += 2;
                continue;
            }
            std::size_t close = body.find('}', i + 1);
            if (close == std::string_view::npos) break;
            std::string name(body.substr(i + 1, close - i - 1));
            if (std::find(names.begin(), names.end(), name) == names.end()) {
                names.push_back(name);
            }
            i = close + 1;
            continue;
        }
        if (body[i] == '}' && i + 1 < body.size() && body[i + 1] == '}') {
            i += 2;
            continue;
        }
        i += 1;
    }
    return names;
}

// Phrases that would push the model toward a predetermined verdict. Template
// bodies are checked against this list at load time.
inline const std::vector<std::string>& default_banned_phrases() {
    static const std::vector<std::string> phrases = {
        "explain why ai will replace",
        "explain why ai will eliminate",
        "justify replacing the worker",
        "assume ai outperforms humans",
    };
    return phrases;
}

// Returns every banned phrase found in `body` (case-insensitive substring).
inline std::vector<std::string> lint_leading_phrases(
    std::string_view body, const std::vector<std::string>& banned) {
    std::string lowered = text::to_lower(body);
    std::vector<std::string> found;
    for (const auto& phrase : banned) {
        if (lowered.find(text::to_lower(phrase)) != std::string::npos) {
            found.push_back(phrase);
        }
    }
    return found;
}

class PromptSet {
public:
    static PromptSet load_dir(const std::filesystem::path& dir) {
        if (!std::filesystem::is_directory(dir)) {
            throw ConfigError("prompt directory not found: " + dir.string());
        }
        PromptSet set;
        for (TemplateId id : kAllTemplates) {
            std::filesystem::path file = dir / template_file_name(id);
            std::ifstream in(file, std::ios::binary);
            if (!in) {
                throw ConfigError("missing prompt template: " + file.string());
            }
            std::ostringstream buf;
            buf << in.rdbuf();
            PromptTemplate tmpl{id, buf.str()};
            validate(tmpl);
            set.templates_[static_cast<std::size_t>(id)] = std::move(tmpl);
        }
        return set;
    }

    const PromptTemplate& get(TemplateId id) const {
        return templates_[static_cast<std::size_t>(id)];
    }

    // Renders the extraction template: retrieved context plus the raw series
    // description.
    RenderedPrompt render_extraction(const retrieval::ContextBlock& context,
                                     const std::string& job_description) const {
        if (text::trim(job_description).empty()) {
            throw ParameterError("job description must not be empty");
        }
        return render(TemplateId::KsaExtract,
                      {{"context", context.rendered_text},
                       {"job_description", job_description}});
    }

    // Renders one impact-dimension template over a formatted KSA payload.
    RenderedPrompt render_impact(TemplateId id,
                                 const retrieval::ContextBlock& context,
                                 const std::string& ksa_payload) const {
        if (id == TemplateId::KsaExtract) {
            throw ParameterError("render_impact requires an impact template");
        }
        if (text::trim(ksa_payload).empty()) {
            throw ParameterError("ksa payload must not be empty");
        }
        return render(id, {{"context", context.rendered_text}, {"ksas", ksa_payload}});
    }

    RenderedPrompt render(TemplateId id,
                          const std::map<std::string, std::string>& values) const {
        const PromptTemplate& tmpl = get(id);
        RenderedPrompt out;
        out.id = id;
        out.text = render_body(tmpl.body, values);
        out.token_count = text::token_count(out.text);
        return out;
    }

private:
    static void validate(const PromptTemplate& tmpl) {
        // Render with dummy values so structural problems surface at load time.
        std::map<std::string, std::string> dummy;
        for (const auto& name : placeholder_names(tmpl.body)) dummy[name] = "x";
        (void)render_body(tmpl.body, dummy);

        auto required = tmpl.required_placeholders();
        auto present = placeholder_names(tmpl.body);
        for (const auto& name : required) {
            if (std::find(present.begin(), present.end(), name) == present.end()) {
                throw ConfigError("template '" + template_key(tmpl.id) +
                                  "' is missing required placeholder '{" + name + "}'");
            }
        }
        for (const auto& name : present) {
            if (std::find(required.begin(), required.end(), name) == required.end()) {
                throw ConfigError("template '" + template_key(tmpl.id) +
                                  "' uses unsupported placeholder '{" + name + "}'");
            }
        }
        auto hits = lint_leading_phrases(tmpl.body, default_banned_phrases());
        if (!hits.empty()) {
            throw ConfigError("template '" + template_key(tmpl.id) +
                              "' contains a leading phrase: \"" + hits.front() + "\"");
        }
    }

    std::array<PromptTemplate, 4> templates_{};
};

}  // namespace ksarag::prompts
