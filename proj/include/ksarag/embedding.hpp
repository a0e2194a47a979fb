#pragma once
// Embedding providers. The pipeline only assumes "text in, fixed-dim vector
// out"; the production path speaks an HTTP JSON embedding endpoint while the
// hashed n-gram provider gives fully reproducible vectors for offline runs
// and tests. Providers must be safe to share across concurrent batch calls.

#include "ksarag/concurrency.hpp"
#include "ksarag/errors.hpp"
#include "ksarag/hash.hpp"
#include "ksarag/text.hpp"

#include <httplib.h>
#include <nlohmann/json.hpp>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <memory>
#include <string>
#include <thread>
#include <vector>

namespace ksarag::embeddings {

struct EmbeddingVector {
    std::vector<double> values;

    std::size_t dim() const { return values.size(); }
};

inline double dot(const EmbeddingVector& a, const EmbeddingVector& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) s += a.values[i] * b.values[i];
    return s;
}

inline double l2_norm(const EmbeddingVector& v) {
    return std::sqrt(dot(v, v));
}

class EmbeddingProvider {
public:
    virtual ~EmbeddingProvider() = default;
    virtual std::string name() const = 0;
    virtual std::size_t dim() const = 0;
    virtual std::vector<EmbeddingVector> embed_batch(const std::vector<std::string>& texts) = 0;
};

// Validates the batch contract around any provider: non-empty input, no empty
// texts, order-preserving output, every vector finite and of provider.dim.
inline std::vector<EmbeddingVector> embed(EmbeddingProvider& provider,
                                          const std::vector<std::string>& texts) {
    if (texts.empty()) throw ParameterError("embed: texts must be non-empty");
    for (const std::string& t : texts) {
        if (text::trim(t).empty()) throw ParameterError("embed: empty text in batch");
    }
    std::vector<EmbeddingVector> out = provider.embed_batch(texts);
    if (out.size() != texts.size()) {
        throw ProtocolError("embed: provider returned " + std::to_string(out.size()) +
                            " vectors for " + std::to_string(texts.size()) + " texts");
    }
    for (const EmbeddingVector& v : out) {
        if (v.dim() != provider.dim()) {
            throw ProtocolError("embed: vector dim " + std::to_string(v.dim()) +
                                " != provider dim " + std::to_string(provider.dim()));
        }
        for (double x : v.values) {
            if (!std::isfinite(x)) throw ProtocolError("embed: non-finite component");
        }
    }
    return out;
}

// Hashes token unigrams and bigrams into a signed dim-bucket feature vector,
// then L2-normalizes. Pure function of (dim, seed, text), identical across
// processes and platforms.
class HashedNgramProvider : public EmbeddingProvider {
public:
    HashedNgramProvider(std::size_t dim, std::uint64_t seed)
        : dim_(dim), seed_(seed) {
        if (dim < 8) throw ParameterError("test provider dim must be >= 8");
    }

    std::string name() const override { return "hashed-ngram"; }
    std::size_t dim() const override { return dim_; }

    EmbeddingVector embed_one(const std::string& text) const {
        std::vector<std::string> tokens = text::tokenize(text);
        if (tokens.empty()) throw ParameterError("embed: text has no tokens");
        EmbeddingVector v;
        v.values.assign(dim_, 0.0);
        auto add = [&](std::string_view key) {
            std::uint64_t h = fnv1a64_seeded(key, seed_);
            std::size_t bucket = static_cast<std::size_t>(h % dim_);
            v.values[bucket] += (h >> 63) ? -1.0 : 1.0;
        };
        for (std::size_t i = 0; i < tokens.size(); ++i) {
            add(tokens[i]);
            if (i + 1 < tokens.size()) add(tokens[i] + '\x1f' + tokens[i + 1]);
        }
        double norm = l2_norm(v);
        if (norm == 0.0) {
            // All buckets cancelled; fall back to a deterministic unit vector.
            v.values[fnv1a64_seeded(text, seed_) % dim_] = 1.0;
            norm = 1.0;
        }
        for (double& x : v.values) x /= norm;
        return v;
    }

    std::vector<EmbeddingVector> embed_batch(const std::vector<std::string>& texts) override {
        std::vector<EmbeddingVector> out;
        out.reserve(texts.size());
        for (const std::string& t : texts) out.push_back(embed_one(t));
        return out;
    }

private:
    std::size_t dim_;
    std::uint64_t seed_;
};

inline std::unique_ptr<EmbeddingProvider> test_provider(std::size_t dim, std::uint64_t seed) {
    return std::make_unique<HashedNgramProvider>(dim, seed);
}

struct HttpEmbeddingConfig {
    std::string base_url;                 // e.g. http://localhost:8080
    std::string path = "/v1/embeddings";
    std::string model;
    std::string api_key;
    std::size_t dim = 0;
    std::size_t batch_size = 64;
    int max_attempts = 5;
    int backoff_base_ms = 1000;
    double backoff_factor = 2.0;
    int max_inflight = 4;
};

// Speaks {model, input:[...]} -> {data:[{index, embedding:[...]}]}. Batches of
// batch_size are sent sequentially per call; distinct calls may overlap up to
// max_inflight.
class HttpEmbeddingProvider : public EmbeddingProvider {
public:
    explicit HttpEmbeddingProvider(HttpEmbeddingConfig cfg)
        : cfg_(std::move(cfg)), inflight_(cfg_.max_inflight) {
        if (cfg_.dim == 0) throw ParameterError("http embedding provider needs a dim");
        if (cfg_.base_url.empty()) throw ParameterError("http embedding provider needs a base url");
    }

    std::string name() const override { return "http:" + cfg_.model; }
    std::size_t dim() const override { return cfg_.dim; }

    std::vector<EmbeddingVector> embed_batch(const std::vector<std::string>& texts) override {
        std::vector<EmbeddingVector> out;
        out.reserve(texts.size());
        for (std::size_t off = 0; off < texts.size(); off += cfg_.batch_size) {
            std::size_t end = std::min(off + cfg_.batch_size, texts.size());
            std::vector<std::string> slice(texts.begin() + static_cast<std::ptrdiff_t>(off),
                                           texts.begin() + static_cast<std::ptrdiff_t>(end));
            append_remote_batch(slice, out);
        }
        return out;
    }

private:
    void append_remote_batch(const std::vector<std::string>& texts,
                             std::vector<EmbeddingVector>& out) {
        nlohmann::json body{{"model", cfg_.model}, {"input", texts}};
        std::string payload = body.dump();

        int status = 0;
        std::string response_body;
        int attempt = 0;
        for (attempt = 1; attempt <= cfg_.max_attempts; ++attempt) {
            httplib::Result res = [&] {
                concurrency::InflightGate::Ticket ticket(inflight_);
                httplib::Client client(cfg_.base_url);
                client.set_connection_timeout(10);
                client.set_read_timeout(120);
                httplib::Headers headers;
                if (!cfg_.api_key.empty()) {
                    headers.emplace("Authorization", "Bearer " + cfg_.api_key);
                }
                return client.Post(cfg_.path, headers, payload, "application/json");
            }();
            if (res && res->status == 200) {
                status = res->status;
                response_body = res->body;
                break;
            }
            status = res ? res->status : 0;
            if (attempt < cfg_.max_attempts) {
                auto delay = std::chrono::milliseconds(static_cast<long>(
                    cfg_.backoff_base_ms * std::pow(cfg_.backoff_factor, attempt - 1)));
                std::this_thread::sleep_for(delay);
            }
        }
        if (status != 200) {
            throw TransportError("embedding endpoint failed after " +
                                     std::to_string(cfg_.max_attempts) + " attempts",
                                 cfg_.max_attempts, status);
        }

        nlohmann::json parsed;
        try {
            parsed = nlohmann::json::parse(response_body);
        } catch (const nlohmann::json::exception& e) {
            throw ProtocolError(std::string("embedding response is not JSON: ") + e.what());
        }
        if (!parsed.contains("data") || !parsed["data"].is_array() ||
            parsed["data"].size() != texts.size()) {
            throw ProtocolError("embedding response data has wrong length");
        }
        std::vector<EmbeddingVector> batch(texts.size());
        std::vector<bool> seen(texts.size(), false);
        for (const auto& item : parsed["data"]) {
            std::size_t idx = item.at("index").get<std::size_t>();
            if (idx >= texts.size() || seen[idx]) throw ProtocolError("bad embedding index");
            seen[idx] = true;
            EmbeddingVector v;
            v.values = item.at("embedding").get<std::vector<double>>();
            if (v.dim() != cfg_.dim) {
                throw ProtocolError("embedding dim " + std::to_string(v.dim()) +
                                    " != configured dim " + std::to_string(cfg_.dim));
            }
            batch[idx] = std::move(v);
        }
        for (auto& v : batch) out.push_back(std::move(v));
    }

    HttpEmbeddingConfig cfg_;
    concurrency::InflightGate inflight_;
};

} // namespace ksarag::embeddings
