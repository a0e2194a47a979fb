#pragma once
// Run engine behind the CLI: configuration loading with flag overrides,
// knowledge-base build (load -> chunk -> embed -> index), batch assessment
// over a series roster with a bounded worker pool, raw-response audit
// logging, resumable re-runs, and report emission. Every persisted JSON file
// uses sorted keys, two-space indentation and LF newlines so repeated runs
// over identical inputs produce byte-identical data files; wall-clock
// timestamps live only in the run manifest.
//
// Output layout under output_dir:
//   kb/<kb>.manifest.jsonl   chunk manifests        kb/<kb>.index  indexes
//   ksa/<series>.json        stage-1 extractions
//   assess/<series>.json     stage-2 assessments
//   audit/<series>_<key>.txt raw model responses (byte-exact)
//   report/*.csv, report/summary.json
//   run_manifest.json        statuses, timing, file hashes

#include "ksarag/analytics.hpp"
#include "ksarag/assessor.hpp"
#include "ksarag/concurrency.hpp"
#include "ksarag/corpus.hpp"
#include "ksarag/embedding.hpp"
#include "ksarag/errors.hpp"
#include "ksarag/extractor.hpp"
#include "ksarag/genclient.hpp"
#include "ksarag/hash.hpp"
#include "ksarag/prompts.hpp"
#include "ksarag/retrieval.hpp"
#include "ksarag/text.hpp"
#include "ksarag/vector_index.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace ksarag::orchestrator {

namespace fs = std::filesystem;

enum class BackendKind { Live, Scripted };
enum class IndexMode { Exact, Ann };
enum class SeriesStatus { Ok, ExtractFailed, AssessPartial, Skipped };

inline const char* status_name(SeriesStatus s) {
    switch (s) {
        case SeriesStatus::Ok: return "ok";
        case SeriesStatus::ExtractFailed: return "extract_failed";
        case SeriesStatus::AssessPartial: return "assess_partial";
        case SeriesStatus::Skipped: return "skipped";
    }
    throw ParameterError("unknown series status");
}

struct EmbeddingConfig {
    std::string provider = "hashed";  // "hashed" | "http"
    std::size_t dim = 256;
    std::uint64_t seed = 0x5eed;
    // http provider only:
    std::string base_url;
    std::string model;
    std::string path = "/v1/embeddings";
    std::size_t batch_size = 64;
};

struct RunConfig {
    fs::path kb_occupational_dir = "kb_occupational";
    fs::path kb_ai_capability_dir = "kb_ai_capability";
    fs::path series_roster = "roster.csv";
    fs::path family_map = "families.csv";
    fs::path prompt_dir = "prompts";
    fs::path fixture_dir;  // required for the scripted backend
    fs::path output_dir = "out";
    BackendKind backend = BackendKind::Scripted;
    IndexMode index_mode = IndexMode::Exact;
    vectorstore::VectorIndex::AnnParams ann;
    EmbeddingConfig embedding;
    std::size_t chunk_size = 500;
    std::size_t chunk_overlap = 100;
    std::size_t context_budget = 3500;
    double temperature = 1.0;
    std::size_t max_context_tokens = 131072;
    int concurrency = 4;
    std::string model_name = "gpt-4o";
    std::string api_base;  // live mode; also via KSARAG_API_BASE
    std::string api_key;   // live mode; also via KSARAG_API_KEY

    void validate() const {
        if (chunk_size == 0) throw ConfigError("chunk_size must be positive");
        if (chunk_overlap >= chunk_size) {
            throw ConfigError("chunk_overlap must be smaller than chunk_size");
        }
        if (temperature < 0.0 || temperature > 2.0) {
            throw ConfigError("temperature must be in [0, 2]");
        }
        if (concurrency < 1) throw ConfigError("concurrency must be >= 1");
        if (backend == BackendKind::Scripted && fixture_dir.empty()) {
            throw ConfigError("scripted backend requires fixture_dir");
        }
        if (embedding.provider != "hashed" && embedding.provider != "http") {
            throw ConfigError("embedding.provider must be 'hashed' or 'http'");
        }
        if (embedding.dim < 8) throw ConfigError("embedding.dim must be >= 8");
    }

    nlohmann::json snapshot() const {
        nlohmann::json j;
        j["kb_occupational_dir"] = kb_occupational_dir.generic_string();
        j["kb_ai_capability_dir"] = kb_ai_capability_dir.generic_string();
        j["series_roster"] = series_roster.generic_string();
        j["family_map"] = family_map.generic_string();
        j["prompt_dir"] = prompt_dir.generic_string();
        j["fixture_dir"] = fixture_dir.generic_string();
        j["output_dir"] = output_dir.generic_string();
        j["backend"] = backend == BackendKind::Live ? "live" : "scripted";
        j["index_mode"] = index_mode == IndexMode::Exact ? "exact" : "ann";
        j["ann"] = {{"m", ann.m},
                    {"ef_construction", ann.ef_construction},
                    {"ef_search", ann.ef_search}};
        j["embedding"] = {{"provider", embedding.provider},
                          {"dim", embedding.dim},
                          {"seed", embedding.seed},
                          {"base_url", embedding.base_url},
                          {"model", embedding.model},
                          {"path", embedding.path},
                          {"batch_size", embedding.batch_size}};
        j["chunk_size"] = chunk_size;
        j["chunk_overlap"] = chunk_overlap;
        j["context_budget"] = context_budget;
        j["temperature"] = temperature;
        j["max_context_tokens"] = max_context_tokens;
        j["concurrency"] = concurrency;
        j["model_name"] = model_name;
        return j;  // api_key deliberately never serialized
    }
};

namespace detail {

inline std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw ConfigError("cannot open file: " + p.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline void write_text_file(const fs::path& p, const std::string& content) {
    fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw ParameterError("cannot write file: " + p.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw ParameterError("write failed: " + p.string());
}

inline void write_json_file(const fs::path& p, const nlohmann::json& j) {
    write_text_file(p, j.dump(2) + "\n");
}

inline std::string iso_utc_now() {
    std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// Minimal RFC-4180 field splitter (quotes, doubled quotes, no multiline).
inline std::vector<std::string> parse_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

inline fs::path resolve_relative(const fs::path& base_dir, const fs::path& p) {
    if (p.empty() || p.is_absolute()) return p;
    return base_dir / p;
}

}  // namespace detail

// Loads a JSON config file. Relative paths are resolved against the config
// file's own directory; unknown keys are rejected so typos surface loudly.
inline RunConfig load_config(const fs::path& config_path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(detail::read_file(config_path));
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config " + config_path.string() + " is not valid JSON: " + e.what());
    }
    if (!j.is_object()) throw ConfigError("config must be a JSON object");

    static const std::vector<std::string> known = {
        "kb_occupational_dir", "kb_ai_capability_dir", "series_roster", "family_map",
        "prompt_dir", "fixture_dir", "output_dir", "backend", "index_mode", "ann",
        "embedding", "chunk_size", "chunk_overlap", "context_budget", "temperature",
        "max_context_tokens", "concurrency", "model_name", "api_base"};
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw ConfigError("config key '" + key + "' is not recognized");
        }
    }

    RunConfig cfg;
    fs::path base = config_path.parent_path();
    auto path_of = [&](const char* key, const fs::path& fallback) {
        if (!j.contains(key)) return fallback.empty() ? fallback
                                                      : detail::resolve_relative(base, fallback);
        return detail::resolve_relative(base, fs::path(j.at(key).get<std::string>()));
    };
    cfg.kb_occupational_dir = path_of("kb_occupational_dir", cfg.kb_occupational_dir);
    cfg.kb_ai_capability_dir = path_of("kb_ai_capability_dir", cfg.kb_ai_capability_dir);
    cfg.series_roster = path_of("series_roster", cfg.series_roster);
    cfg.family_map = path_of("family_map", cfg.family_map);
    cfg.prompt_dir = path_of("prompt_dir", cfg.prompt_dir);
    cfg.fixture_dir = path_of("fixture_dir", cfg.fixture_dir);
    cfg.output_dir = path_of("output_dir", cfg.output_dir);

    if (j.contains("backend")) {
        std::string b = j.at("backend").get<std::string>();
        if (b == "live") cfg.backend = BackendKind::Live;
        else if (b == "scripted") cfg.backend = BackendKind::Scripted;
        else throw ConfigError("backend must be 'live' or 'scripted', got '" + b + "'");
    }
    if (j.contains("index_mode")) {
        std::string m = j.at("index_mode").get<std::string>();
        if (m == "exact") cfg.index_mode = IndexMode::Exact;
        else if (m == "ann") cfg.index_mode = IndexMode::Ann;
        else throw ConfigError("index_mode must be 'exact' or 'ann', got '" + m + "'");
    }
    if (j.contains("ann")) {
        const auto& a = j.at("ann");
        if (a.contains("m")) cfg.ann.m = a.at("m").get<std::uint32_t>();
        if (a.contains("ef_construction")) {
            cfg.ann.ef_construction = a.at("ef_construction").get<std::uint32_t>();
        }
        if (a.contains("ef_search")) cfg.ann.ef_search = a.at("ef_search").get<std::uint32_t>();
    }
    if (j.contains("embedding")) {
        const auto& e = j.at("embedding");
        if (e.contains("provider")) cfg.embedding.provider = e.at("provider").get<std::string>();
        if (e.contains("dim")) cfg.embedding.dim = e.at("dim").get<std::size_t>();
        if (e.contains("seed")) cfg.embedding.seed = e.at("seed").get<std::uint64_t>();
        if (e.contains("base_url")) cfg.embedding.base_url = e.at("base_url").get<std::string>();
        if (e.contains("model")) cfg.embedding.model = e.at("model").get<std::string>();
        if (e.contains("path")) cfg.embedding.path = e.at("path").get<std::string>();
        if (e.contains("batch_size")) {
            cfg.embedding.batch_size = e.at("batch_size").get<std::size_t>();
        }
    }
    if (j.contains("chunk_size")) cfg.chunk_size = j.at("chunk_size").get<std::size_t>();
    if (j.contains("chunk_overlap")) cfg.chunk_overlap = j.at("chunk_overlap").get<std::size_t>();
    if (j.contains("context_budget")) {
        cfg.context_budget = j.at("context_budget").get<std::size_t>();
    }
    if (j.contains("temperature")) cfg.temperature = j.at("temperature").get<double>();
    if (j.contains("max_context_tokens")) {
        cfg.max_context_tokens = j.at("max_context_tokens").get<std::size_t>();
    }
    if (j.contains("concurrency")) cfg.concurrency = j.at("concurrency").get<int>();
    if (j.contains("model_name")) cfg.model_name = j.at("model_name").get<std::string>();
    if (j.contains("api_base")) cfg.api_base = j.at("api_base").get<std::string>();

    if (const char* env = std::getenv("KSARAG_API_BASE"); env != nullptr && *env != '\0') {
        cfg.api_base = env;
    }
    if (const char* env = std::getenv("KSARAG_API_KEY"); env != nullptr && *env != '\0') {
        cfg.api_key = env;
    }
    cfg.validate();
    return cfg;
}

// CLI flag overrides; flags win over the config file.
struct Overrides {
    std::optional<BackendKind> backend;
    std::optional<fs::path> fixture_dir;
    std::optional<fs::path> output_dir;
    std::optional<std::string> series;  // single-series filter
    bool force = false;
};

inline void apply_overrides(RunConfig& cfg, const Overrides& o) {
    if (o.backend.has_value()) cfg.backend = *o.backend;
    if (o.fixture_dir.has_value()) cfg.fixture_dir = *o.fixture_dir;
    if (o.output_dir.has_value()) cfg.output_dir = *o.output_dir;
    cfg.validate();
}

struct RosterEntry {
    std::string series_code;
    std::string series_title;
    fs::path description_path;
};

// Roster CSV: series_code,series_title,description_path. Description paths
// are resolved against the roster file's directory.
inline std::vector<RosterEntry> load_roster(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read roster: " + path.string());
    std::vector<RosterEntry> roster;
    std::map<std::string, bool> seen;
    std::string line;
    std::size_t line_no = 0;
    fs::path base = path.parent_path();
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (text::trim(line).empty()) continue;
        if (line_no == 1 && line.rfind("series_code", 0) == 0) continue;
        std::vector<std::string> fields = detail::parse_csv_line(line);
        if (fields.size() != 3) {
            throw ConfigError("roster " + path.string() + " line " + std::to_string(line_no) +
                              ": expected 3 fields, got " + std::to_string(fields.size()));
        }
        RosterEntry entry;
        entry.series_code = text::trim(fields[0]);
        entry.series_title = text::trim(fields[1]);
        entry.description_path = detail::resolve_relative(base, fs::path(text::trim(fields[2])));
        if (entry.series_code.size() != 4 ||
            entry.series_code.find_first_not_of("0123456789") != std::string::npos) {
            throw ConfigError("roster line " + std::to_string(line_no) + ": series_code '" +
                              entry.series_code + "' is not a 4-digit code");
        }
        if (seen[entry.series_code]) {
            throw ConfigError("roster: duplicate series_code " + entry.series_code);
        }
        seen[entry.series_code] = true;
        roster.push_back(std::move(entry));
    }
    if (roster.empty()) throw ConfigError("roster " + path.string() + " lists no series");
    return roster;
}

struct SeriesOutcome {
    std::string series_code;
    SeriesStatus status = SeriesStatus::Ok;
    std::string error;
    long duration_ms = 0;
};

struct AssessResult {
    std::vector<SeriesOutcome> outcomes;

    int exit_code() const {
        for (const auto& o : outcomes) {
            if (o.status == SeriesStatus::ExtractFailed ||
                o.status == SeriesStatus::AssessPartial) {
                return 1;
            }
        }
        return 0;
    }
};

class Runner {
public:
    explicit Runner(RunConfig cfg) : cfg_(std::move(cfg)) { cfg_.validate(); }

    const RunConfig& config() const { return cfg_; }

    // Load -> chunk -> embed -> index, for both knowledge bases.
    void build_kb() {
        std::unique_ptr<embeddings::EmbeddingProvider> embedder = make_embedder();
        build_one_kb(cfg_.kb_occupational_dir, corpus::KbTag::Occupational, *embedder);
        build_one_kb(cfg_.kb_ai_capability_dir, corpus::KbTag::AiCapability, *embedder);
    }

    // Batch stage 1 + stage 2 over the roster. `backend_override` lets tests
    // inject a counting backend; ownership stays with the caller.
    AssessResult assess(bool force = false,
                        const std::optional<std::string>& only_series = std::nullopt,
                        genclient::Backend* backend_override = nullptr) {
        std::vector<RosterEntry> roster = load_roster(cfg_.series_roster);
        if (only_series.has_value()) {
            auto it = std::find_if(roster.begin(), roster.end(), [&](const RosterEntry& r) {
                return r.series_code == *only_series;
            });
            if (it == roster.end()) {
                throw ConfigError("series " + *only_series + " is not in the roster");
            }
            roster = {*it};
        }

        prompts::PromptSet prompt_set = prompts::PromptSet::load_dir(cfg_.prompt_dir);
        std::unique_ptr<embeddings::EmbeddingProvider> embedder = make_embedder();
        std::unique_ptr<genclient::Backend> owned_backend;
        genclient::Backend* backend = backend_override;
        if (backend == nullptr) {
            owned_backend = make_backend();
            backend = owned_backend.get();
        }

        vectorstore::VectorIndex kb1 = load_index(corpus::KbTag::Occupational);
        vectorstore::VectorIndex kb2 = load_index(corpus::KbTag::AiCapability);
        retrieval::ChunkStore chunks1 = load_chunks(corpus::KbTag::Occupational);
        retrieval::ChunkStore chunks2 = load_chunks(corpus::KbTag::AiCapability);

        std::vector<SeriesOutcome> outcomes(roster.size());
        std::vector<std::function<void()>> tasks;
        tasks.reserve(roster.size());
        for (std::size_t i = 0; i < roster.size(); ++i) {
            tasks.push_back([&, i] {
                outcomes[i] = run_series(roster[i], prompt_set, *embedder, kb1, kb2, chunks1,
                                         chunks2, *backend, force);
            });
        }
        concurrency::run_parallel(cfg_.concurrency, tasks);

        AssessResult result;
        result.outcomes = std::move(outcomes);
        write_manifest(result);
        return result;
    }

    // Aggregates every persisted assessment into the report artifacts.
    void report() {
        std::vector<assessor::SeriesAssessment> assessments = load_assessments();
        if (assessments.empty()) {
            throw ConfigError("no assessments under " +
                              (cfg_.output_dir / "assess").string() + "; run assess first");
        }
        analytics::FamilyMap families = analytics::FamilyMap::load_csv(cfg_.family_map);
        std::vector<std::string> warnings;

        fs::path report_dir = cfg_.output_dir / "report";
        fs::create_directories(report_dir);

        std::vector<analytics::OverallStatsRow> overall = analytics::overall_stats(assessments);
        analytics::write_stats_overall_csv(report_dir / "stats_overall.csv", overall);
        record_file(report_dir / "stats_overall.csv");

        std::vector<analytics::FamilyStatsRow> family =
            analytics::family_stats(assessments, families, &warnings);
        analytics::write_stats_family_csv(report_dir / "stats_family.csv", family);
        record_file(report_dir / "stats_family.csv");

        for (assessor::Dimension d : assessor::kAllDimensions) {
            std::vector<analytics::RankingRow> rows = analytics::rank(assessments, d);
            fs::path p = report_dir / ("rankings_" + std::string(assessor::dimension_key(d)) +
                                       ".csv");
            analytics::write_rankings_csv(p, rows);
            record_file(p);
        }

        nlohmann::json summary;
        summary["n_series"] = assessments.size();
        nlohmann::json means;
        for (assessor::Dimension d : assessor::kAllDimensions) {
            std::vector<double> values;
            values.reserve(assessments.size());
            for (const auto& a : assessments) values.push_back(a.dim_avg(d));
            means[assessor::dimension_key(d)] = analytics::describe(values).mean;
        }
        summary["dimension_means"] = std::move(means);
        nlohmann::json family_counts;
        std::map<analytics::Family, std::size_t> counts;
        for (const auto& a : assessments) ++counts[families.lookup(a.series_code)];
        for (const auto& [fam, count] : counts) {
            family_counts[analytics::family_key(fam)] = count;
        }
        summary["family_counts"] = std::move(family_counts);
        summary["warnings"] = warnings;
        detail::write_json_file(report_dir / "summary.json", summary);
        record_file(report_dir / "summary.json");
    }

    // build-kb + assess + report in one pass.
    AssessResult run_all(bool force = false,
                         const std::optional<std::string>& only_series = std::nullopt,
                         genclient::Backend* backend_override = nullptr) {
        build_kb();
        AssessResult result = assess(force, only_series, backend_override);
        report();
        return result;
    }

private:
    std::unique_ptr<embeddings::EmbeddingProvider> make_embedder() const {
        if (cfg_.embedding.provider == "hashed") {
            return std::make_unique<embeddings::HashedNgramProvider>(cfg_.embedding.dim,
                                                                     cfg_.embedding.seed);
        }
        embeddings::HttpEmbeddingConfig http;
        http.base_url = cfg_.embedding.base_url.empty() ? cfg_.api_base
                                                        : cfg_.embedding.base_url;
        http.path = cfg_.embedding.path;
        http.model = cfg_.embedding.model;
        http.api_key = cfg_.api_key;
        http.dim = cfg_.embedding.dim;
        http.batch_size = cfg_.embedding.batch_size;
        if (http.base_url.empty()) {
            throw ConfigError("http embedding provider needs embedding.base_url or api_base");
        }
        return std::make_unique<embeddings::HttpEmbeddingProvider>(http);
    }

    std::unique_ptr<genclient::Backend> make_backend() const {
        if (cfg_.backend == BackendKind::Scripted) {
            return std::make_unique<genclient::ScriptedBackend>(cfg_.fixture_dir);
        }
        genclient::HttpGenConfig http;
        http.base_url = cfg_.api_base;
        http.api_key = cfg_.api_key;
        http.max_inflight = cfg_.concurrency;
        if (http.base_url.empty()) {
            throw ConfigError("live backend needs api_base (or KSARAG_API_BASE)");
        }
        return std::make_unique<genclient::HttpBackend>(http);
    }

    fs::path kb_manifest_path(corpus::KbTag kb) const {
        return cfg_.output_dir / "kb" / (std::string(corpus::kb_name(kb)) + ".manifest.jsonl");
    }
    fs::path kb_index_path(corpus::KbTag kb) const {
        return cfg_.output_dir / "kb" / (std::string(corpus::kb_name(kb)) + ".index");
    }

    void build_one_kb(const fs::path& dir, corpus::KbTag kb,
                      embeddings::EmbeddingProvider& embedder) {
        corpus::LoadReport report = corpus::load_documents(dir, kb);
        for (const auto& w : report.warnings) {
            std::cerr << "[" << corpus::kb_name(kb) << "] " << w << "\n";
        }
        std::vector<corpus::Chunk> all_chunks;
        for (const corpus::Document& doc : report.documents) {
            std::vector<corpus::Chunk> chunks =
                corpus::chunk(doc, cfg_.chunk_size, cfg_.chunk_overlap);
            all_chunks.insert(all_chunks.end(), chunks.begin(), chunks.end());
        }
        if (all_chunks.empty()) {
            throw CorpusEmptyError(std::string("knowledge base '") + corpus::kb_name(kb) +
                                   "' produced no chunks");
        }

        std::vector<std::string> texts;
        texts.reserve(all_chunks.size());
        for (const auto& c : all_chunks) texts.push_back(c.text);
        std::vector<embeddings::EmbeddingVector> vectors = embeddings::embed(embedder, texts);

        std::vector<vectorstore::IndexEntry> entries;
        entries.reserve(all_chunks.size());
        for (std::size_t i = 0; i < all_chunks.size(); ++i) {
            entries.push_back(vectorstore::IndexEntry{
                vectorstore::ChunkRef{all_chunks[i].doc_id,
                                      static_cast<std::uint32_t>(all_chunks[i].ordinal)},
                std::move(vectors[i])});
        }
        vectorstore::VectorIndex index = vectorstore::VectorIndex::build(
            std::move(entries),
            cfg_.index_mode == IndexMode::Exact ? vectorstore::VectorIndex::Mode::Exact
                                                : vectorstore::VectorIndex::Mode::Ann,
            cfg_.ann);

        fs::create_directories(cfg_.output_dir / "kb");
        corpus::write_manifest(kb_manifest_path(kb), all_chunks);
        record_file(kb_manifest_path(kb));
        index.save(kb_index_path(kb));
        record_file(kb_index_path(kb));
    }

    vectorstore::VectorIndex load_index(corpus::KbTag kb) const {
        fs::path p = kb_index_path(kb);
        if (!fs::exists(p)) {
            throw ConfigError("index " + p.string() + " not found; run build-kb first");
        }
        return vectorstore::VectorIndex::load(p);
    }

    retrieval::ChunkStore load_chunks(corpus::KbTag kb) const {
        fs::path p = kb_manifest_path(kb);
        if (!fs::exists(p)) {
            throw ConfigError("manifest " + p.string() + " not found; run build-kb first");
        }
        return retrieval::ChunkStore::from_manifest(p);
    }

    SeriesOutcome run_series(const RosterEntry& entry, const prompts::PromptSet& prompt_set,
                             embeddings::EmbeddingProvider& embedder,
                             const vectorstore::VectorIndex& kb1,
                             const vectorstore::VectorIndex& kb2,
                             const retrieval::ChunkStore& chunks1,
                             const retrieval::ChunkStore& chunks2,
                             genclient::Backend& backend, bool force) {
        SeriesOutcome outcome;
        outcome.series_code = entry.series_code;
        auto started = std::chrono::steady_clock::now();
        auto finish = [&](SeriesStatus status, const std::string& error) {
            outcome.status = status;
            outcome.error = error;
            outcome.duration_ms = static_cast<long>(
                std::chrono::duration_cast<std::chrono::milliseconds>(
                    std::chrono::steady_clock::now() - started)
                    .count());
            return outcome;
        };

        fs::path assess_path = cfg_.output_dir / "assess" / (entry.series_code + ".json");
        if (!force && fs::exists(assess_path)) {
            return finish(SeriesStatus::Skipped, "");
        }

        // Raw responses are written before any parsing; a repeated request id
        // (the malformed-JSON retry) gets a _retry suffix.
        std::vector<std::pair<std::string, std::string>> audit_refs;
        std::map<std::string, int> audit_counts;
        auto audit = [&](const genclient::GenerationRequest& req,
                         const genclient::GenerationResponse& resp) {
            auto [series, key] = genclient::split_request_id(req.request_id);
            int count = audit_counts[req.request_id]++;
            std::string name = series + "_" + key + (count > 0 ? "_retry" : "") + ".txt";
            fs::path p = cfg_.output_dir / "audit" / name;
            detail::write_text_file(p, resp.raw_text);
            record_file(p);
            audit_refs.emplace_back(key + (count > 0 ? "_retry" : ""),
                                    "audit/" + name);
        };

        extractor::StageDeps stage1;
        stage1.index = &kb1;
        stage1.chunks = &chunks1;
        stage1.embedder = &embedder;
        stage1.prompt_set = &prompt_set;
        stage1.backend = &backend;
        stage1.context_budget = cfg_.context_budget;
        stage1.temperature = cfg_.temperature;
        stage1.max_context_tokens = cfg_.max_context_tokens;
        stage1.model_name = cfg_.model_name;
        stage1.audit = audit;

        extractor::SeriesInput input;
        input.series_code = entry.series_code;
        input.series_title = entry.series_title;
        try {
            input.description_text = detail::read_file(entry.description_path);
        } catch (const Error& e) {
            return finish(SeriesStatus::ExtractFailed,
                          "description unreadable: " + std::string(e.what()));
        }

        extractor::ExtractionResult extraction;
        try {
            extraction = extractor::run_extraction(input, stage1);
        } catch (const Error& e) {
            return finish(SeriesStatus::ExtractFailed, e.what());
        }
        fs::path ksa_path = cfg_.output_dir / "ksa" / (entry.series_code + ".json");
        detail::write_json_file(ksa_path, extractor::ksa_to_json(extraction.set));
        record_file(ksa_path);

        extractor::StageDeps stage2 = stage1;
        stage2.index = &kb2;
        stage2.chunks = &chunks2;

        assessor::SeriesAssessment assessment;
        try {
            assessment = assessor::assess_series(extraction.set, stage2);
        } catch (const assessor::PartialAssessmentError& e) {
            return finish(SeriesStatus::AssessPartial, e.what());
        } catch (const Error& e) {
            return finish(SeriesStatus::AssessPartial, e.what());
        }
        assessment.audit_refs = std::move(audit_refs);
        detail::write_json_file(assess_path, assessor::assessment_to_json(assessment));
        record_file(assess_path);
        return finish(SeriesStatus::Ok, "");
    }

    std::vector<assessor::SeriesAssessment> load_assessments() const {
        fs::path dir = cfg_.output_dir / "assess";
        std::vector<assessor::SeriesAssessment> assessments;
        if (!fs::is_directory(dir)) return assessments;
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(dir)) {
            if (entry.is_regular_file() && entry.path().extension() == ".json") {
                files.push_back(entry.path());
            }
        }
        std::sort(files.begin(), files.end());
        for (const auto& p : files) {
            try {
                assessments.push_back(assessor::assessment_from_json(
                    nlohmann::json::parse(detail::read_file(p))));
            } catch (const nlohmann::json::exception& e) {
                throw ParseError("assessment " + p.string() + " is not valid JSON: " +
                                 e.what());
            }
        }
        return assessments;
    }

    // All writes to the shared file inventory funnel through this mutex.
    void record_file(const fs::path& p) {
        std::string bytes = detail::read_file(p);
        std::string rel = fs::relative(p, cfg_.output_dir).generic_string();
        std::lock_guard lock(inventory_mu_);
        inventory_[rel] = hex64(fnv1a64(bytes));
    }

    void write_manifest(const AssessResult& result) {
        nlohmann::json j;
        j["config"] = cfg_.snapshot();
        j["finished_at"] = detail::iso_utc_now();
        nlohmann::json series;
        for (const auto& o : result.outcomes) {
            nlohmann::json entry;
            entry["status"] = status_name(o.status);
            entry["duration_ms"] = o.duration_ms;
            if (!o.error.empty()) entry["error"] = o.error;
            series[o.series_code] = std::move(entry);
        }
        j["series"] = std::move(series);
        {
            std::lock_guard lock(inventory_mu_);
            nlohmann::json files;
            for (const auto& [rel, hash] : inventory_) files[rel] = hash;
            j["files"] = std::move(files);
        }
        detail::write_json_file(cfg_.output_dir / "run_manifest.json", j);
    }

    RunConfig cfg_;
    std::mutex inventory_mu_;
    std::map<std::string, std::string> inventory_;
};

}  // namespace ksarag::orchestrator
