#pragma once
// Context planning: turn a query vector plus a KB index into the block of
// retrieved chunks that fits the token budget. Selection is a strict prefix
// of the similarity ranking; each chunk is rendered under a one-line
// source-attribution header so every grounded answer is auditable.

#include "ksarag/corpus.hpp"
#include "ksarag/errors.hpp"
#include "ksarag/text.hpp"
#include "ksarag/vector_index.hpp"

#include <map>
#include <string>
#include <vector>

namespace ksarag::retrieval {

enum class Stage { KsaExtraction, ImpactEvaluation };

struct ContextBlock {
    Stage stage = Stage::KsaExtraction;
    std::vector<vectorstore::SearchHit> hits;
    std::string rendered_text;
    std::size_t token_count = 0;       // tokens of rendered_text, headers included
    std::size_t chunk_token_count = 0; // tokens of chunk text alone (budget basis)
    std::vector<std::string> warnings;
};

// Immutable (doc_id, ordinal) -> corpus::Chunk lookup backed by one or more corpus
// manifests.
class ChunkStore {
public:
    ChunkStore() = default;

    void add(std::vector<corpus::Chunk> chunks) {
        for (corpus::Chunk& c : chunks) {
            vectorstore::ChunkRef ref{c.doc_id, static_cast<std::uint32_t>(c.ordinal)};
            chunks_.emplace(std::move(ref), std::move(c));
        }
    }

    static ChunkStore from_manifest(const std::filesystem::path& path) {
        ChunkStore store;
        store.add(corpus::read_manifest(path));
        return store;
    }

    const corpus::Chunk* find(const vectorstore::ChunkRef& ref) const {
        auto it = chunks_.find(ref);
        return it == chunks_.end() ? nullptr : &it->second;
    }

    std::size_t size() const { return chunks_.size(); }

private:
    std::map<vectorstore::ChunkRef, corpus::Chunk> chunks_;
};

namespace detail {

inline std::string attribution_header(const vectorstore::ChunkRef& ref) {
    std::string id = ref.doc_id;
    std::string header = "[source: " + id + "#" + std::to_string(ref.ordinal) + "]";
    // Headers are capped at 20 tokens; pathological ids get shortened.
    while (text::token_count(header) > 20 && id.size() > 4) {
        id = id.substr(0, id.size() / 2);
        header = "[source: " + id + "..#" + std::to_string(ref.ordinal) + "]";
    }
    return header;
}

} // namespace detail

inline ContextBlock plan_context(const vectorstore::VectorIndex& index, const ChunkStore& chunks,
                                 Stage stage, const embeddings::EmbeddingVector& query_vec,
                                 std::size_t budget_tokens) {
    if (budget_tokens < 500) throw ParameterError("context budget must be >= 500 tokens");

    ContextBlock block;
    block.stage = stage;
    if (index.empty()) {
        block.warnings.push_back("context: index is empty, generation proceeds context-free");
        return block;
    }

    // Chunks hold at least ~25 tokens in practice, so this k always covers
    // the budget; the greedy cut below stops at the first overflow anyway.
    std::size_t k = std::max<std::size_t>(64, budget_tokens / 25);
    std::vector<vectorstore::SearchHit> ranked = index.search(query_vec, k);

    std::string rendered;
    std::size_t used = 0;
    for (const vectorstore::SearchHit& hit : ranked) {
        const corpus::Chunk* c = chunks.find(hit.ref);
        if (c == nullptr) {
            block.warnings.push_back("context: chunk missing from store: " + hit.ref.doc_id +
                                     "#" + std::to_string(hit.ref.ordinal));
            continue;
        }
        if (used + c->token_len > budget_tokens) break;
        used += c->token_len;
        rendered += detail::attribution_header(hit.ref);
        rendered += '\n';
        rendered += c->text;
        rendered += "\n\n";
        block.hits.push_back(hit);
    }

    block.rendered_text = std::move(rendered);
    block.chunk_token_count = used;
    block.token_count = text::token_count(block.rendered_text);
    return block;
}

} // namespace ksarag::retrieval
