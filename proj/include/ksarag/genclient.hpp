#pragma once
// Generation backends: execute one rendered prompt and return the model's
// raw bytes. Two implementations share the Backend interface — a live HTTP
// chat-completion client and a scripted backend that replays recorded
// responses from a fixture directory, which is what every offline run and
// test uses. All instructions travel in a single user message; there is no
// system message and no conversation state.
//
// Requests carry an opaque request_id of the form "<series>:<template_key>";
// the scripted backend resolves it to the fixture file
// "<series>_<template_key>.json" (or .txt) and returns the bytes unchanged.

#include "ksarag/concurrency.hpp"
#include "ksarag/errors.hpp"
#include "ksarag/prompts.hpp"
#include "ksarag/text.hpp"

#include <httplib.h>
#include <nlohmann/json.hpp>

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace ksarag::genclient {

// Output head-room reserved inside the context window; a request whose
// estimated prompt plus this reserve exceeds the window is rejected unsent.
constexpr std::size_t kReservedOutputTokens = 4096;

struct GenerationRequest {
    std::string request_id;  // "<series>:<template_key>"
    std::string prompt_text;
    std::string model_name;
    double temperature = 1.0;
    std::size_t max_context_tokens = 131072;
};

struct GenerationResponse {
    std::string request_id;
    std::string raw_text;  // byte-exact model output, persisted before parsing
    long latency_ms = 0;
    int attempt = 1;
};

// Local token count with a 1.3x safety multiplier standing in for the remote
// model's tokenizer, which is not available offline.
inline std::size_t estimate_prompt_tokens(std::string_view prompt) {
    return static_cast<std::size_t>(
        std::ceil(1.3 * static_cast<double>(text::token_count(prompt))));
}

inline std::string make_request_id(const std::string& series_code,
                                   prompts::TemplateId id) {
    return series_code + ":" + prompts::template_key(id);
}

// Splits "<series>:<template_key>" at the first colon.
inline std::pair<std::string, std::string> split_request_id(const std::string& request_id) {
    std::size_t colon = request_id.find(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == request_id.size()) {
        throw ParameterError("request_id must look like '<series>:<template_key>', got '" +
                             request_id + "'");
    }
    return {request_id.substr(0, colon), request_id.substr(colon + 1)};
}

class Backend {
public:
    virtual ~Backend() = default;
    virtual std::string name() const = 0;
    virtual GenerationResponse complete(const GenerationRequest& req) = 0;
};

// Validates the request, dispatches to the backend, and stamps the response
// with the request id and observed latency. Exactly one response per call;
// any retries live inside the backend and surface only through `attempt`.
inline GenerationResponse generate(Backend& backend, const GenerationRequest& req) {
    if (text::trim(req.prompt_text).empty()) {
        throw ParameterError("generate: empty prompt");
    }
    if (req.request_id.empty()) throw ParameterError("generate: empty request_id");
    if (req.temperature < 0.0 || req.temperature > 2.0) {
        throw ParameterError("generate: temperature " + std::to_string(req.temperature) +
                             " outside [0, 2]");
    }
    std::size_t estimate = estimate_prompt_tokens(req.prompt_text);
    if (estimate + kReservedOutputTokens > req.max_context_tokens) {
        throw BudgetError("generate: prompt estimate " + std::to_string(estimate) +
                          " + reserved output " + std::to_string(kReservedOutputTokens) +
                          " exceeds context window " + std::to_string(req.max_context_tokens) +
                          " for request " + req.request_id);
    }

    auto start = std::chrono::steady_clock::now();
    GenerationResponse resp = backend.complete(req);
    auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - start);
    resp.request_id = req.request_id;
    resp.latency_ms = static_cast<long>(elapsed.count());
    if (resp.attempt < 1) resp.attempt = 1;
    return resp;
}

// Replays recorded responses byte-exactly. Pure and unbounded: safe for any
// number of concurrent callers. Counts invocations so tests can assert the
// one-call-per-question discipline.
class ScriptedBackend : public Backend {
public:
    explicit ScriptedBackend(std::filesystem::path fixture_dir)
        : dir_(std::move(fixture_dir)) {
        if (!std::filesystem::is_directory(dir_)) {
            throw ConfigError("fixture directory not found: " + dir_.string());
        }
    }

    std::string name() const override { return "scripted:" + dir_.string(); }

    GenerationResponse complete(const GenerationRequest& req) override {
        auto [series, key] = split_request_id(req.request_id);
        calls_.fetch_add(1, std::memory_order_relaxed);

        const std::string stem = series + "_" + key;
        for (const char* ext : {".json", ".txt"}) {
            std::filesystem::path file = dir_ / (stem + ext);
            std::ifstream in(file, std::ios::binary);
            if (!in) continue;
            std::ostringstream buf;
            buf << in.rdbuf();
            GenerationResponse resp;
            resp.raw_text = buf.str();
            resp.attempt = 1;
            return resp;
        }
        throw FixtureMissError("no fixture " + stem + ".json (or .txt) in " + dir_.string() +
                               " for request " + req.request_id);
    }

    std::uint64_t calls() const { return calls_.load(std::memory_order_relaxed); }

private:
    std::filesystem::path dir_;
    std::atomic<std::uint64_t> calls_{0};
};

struct HttpGenConfig {
    std::string base_url;                      // e.g. "http://127.0.0.1:8089"
    std::string path = "/v1/chat/completions";
    std::string api_key;                       // sent as a bearer token when set
    int max_attempts = 5;
    int backoff_base_ms = 1000;
    double backoff_factor = 2.0;
    int max_inflight = 4;
};

// Live chat-completion client. Sends {model, messages:[{role:"user",
// content}], temperature} and reads choices[0].message.content. Retries
// transient failures (connect errors, 408/429/5xx) with exponential backoff;
// anything else fails fast. Concurrent calls are capped by max_inflight.
class HttpBackend : public Backend {
public:
    explicit HttpBackend(HttpGenConfig cfg)
        : cfg_(std::move(cfg)), inflight_(cfg_.max_inflight) {
        if (cfg_.base_url.empty()) throw ConfigError("http backend needs a base url");
        if (cfg_.max_attempts < 1) throw ParameterError("max_attempts must be >= 1");
    }

    std::string name() const override { return "http:" + cfg_.base_url; }

    GenerationResponse complete(const GenerationRequest& req) override {
        nlohmann::json body{
            {"model", req.model_name},
            {"messages", nlohmann::json::array({nlohmann::json{
                             {"role", "user"}, {"content", req.prompt_text}}})},
            {"temperature", req.temperature},
        };
        std::string payload = body.dump();

        int status = 0;
        std::string response_body;
        bool ok = false;
        int attempt = 0;
        while (attempt < cfg_.max_attempts) {
            ++attempt;
            httplib::Result res = post(payload);
            status = res ? res->status : 0;
            if (res && res->status == 200) {
                response_body = res->body;
                ok = true;
                break;
            }
            if (!retryable(status)) break;
            if (attempt < cfg_.max_attempts) {
                auto delay = std::chrono::milliseconds(static_cast<long>(
                    cfg_.backoff_base_ms * std::pow(cfg_.backoff_factor, attempt - 1)));
                std::this_thread::sleep_for(delay);
            }
        }
        if (!ok) {
            throw TransportError("generation endpoint failed after " + std::to_string(attempt) +
                                     " attempt(s), last status " + std::to_string(status) +
                                     " for request " + req.request_id,
                                 attempt, status);
        }

        GenerationResponse resp;
        resp.raw_text = extract_content(response_body);
        resp.attempt = attempt;
        return resp;
    }

private:
    static bool retryable(int status) {
        return status == 0 || status == 408 || status == 429 || status >= 500;
    }

    httplib::Result post(const std::string& payload) {
        concurrency::InflightGate::Ticket ticket(inflight_);
        httplib::Client client(cfg_.base_url);
        client.set_connection_timeout(10);
        client.set_read_timeout(300);
        httplib::Headers headers;
        if (!cfg_.api_key.empty()) {
            headers.emplace("Authorization", "Bearer " + cfg_.api_key);
        }
        return client.Post(cfg_.path, headers, payload, "application/json");
    }

    static std::string extract_content(const std::string& body) {
        nlohmann::json parsed;
        try {
            parsed = nlohmann::json::parse(body);
        } catch (const nlohmann::json::exception& e) {
            throw ProtocolError(std::string("generation response is not JSON: ") + e.what());
        }
        if (!parsed.contains("choices") || !parsed["choices"].is_array() ||
            parsed["choices"].empty()) {
            throw ProtocolError("generation response has no choices");
        }
        const nlohmann::json& first = parsed["choices"][0];
        if (!first.contains("message") || !first["message"].contains("content") ||
            !first["message"]["content"].is_string()) {
            throw ProtocolError("generation response choice has no message content");
        }
        return first["message"]["content"].get<std::string>();
    }

    HttpGenConfig cfg_;
    concurrency::InflightGate inflight_;
};

}  // namespace ksarag::genclient
