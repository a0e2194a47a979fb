#include "ksarag/retrieval.hpp"

#include "test_support.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <string>
#include <vector>

using namespace ksarag;
using retrieval::ChunkStore;
using retrieval::ContextBlock;
using retrieval::Stage;
using vectorstore::ChunkRef;
using vectorstore::IndexEntry;
using vectorstore::VectorIndex;

namespace {

// A unit vector in the e0/e1 plane at the given angle; similarity to e0 is
// cos(angle), so ranking against an e0 query is fully controlled.
embeddings::EmbeddingVector at_angle(double radians) {
    embeddings::EmbeddingVector v;
    v.values.assign(8, 0.0);
    v.values[0] = std::cos(radians);
    v.values[1] = std::sin(radians);
    return v;
}

embeddings::EmbeddingVector e0_query() { return at_angle(0.0); }

// Chunk whose text is exactly n_tokens tokens.
corpus::Chunk chunk_of(const std::string& doc_id, std::size_t ordinal, std::size_t n_tokens) {
    corpus::Chunk c;
    c.doc_id = doc_id;
    c.ordinal = ordinal;
    c.token_start = 0;
    c.token_len = n_tokens;
    std::string text;
    for (std::size_t i = 0; i < n_tokens; ++i) {
        if (i) text += ' ';
        text += "tok" + std::to_string(i);
    }
    c.text = text;
    return c;
}

struct Fixture {
    std::vector<IndexEntry> entries;
    std::vector<corpus::Chunk> chunks;

    void add(const std::string& doc_id, std::size_t ordinal, double angle,
             std::size_t n_tokens, bool in_store = true) {
        ChunkRef ref{doc_id, static_cast<std::uint32_t>(ordinal)};
        entries.push_back(IndexEntry{ref, at_angle(angle)});
        if (in_store) chunks.push_back(chunk_of(doc_id, ordinal, n_tokens));
    }

    VectorIndex index() const { return VectorIndex::build(entries, VectorIndex::Mode::Exact); }
    ChunkStore store() const {
        ChunkStore s;
        s.add(chunks);
        return s;
    }
};

}  // namespace

TEST_CASE("context selection is a budgeted prefix of the ranking") {
    Fixture f;
    f.add("docA", 0, 0.1, 200);  // rank 1
    f.add("docA", 1, 0.2, 200);  // rank 2
    f.add("docB", 0, 0.3, 200);  // rank 3: 600 > 500, stops here
    f.add("docB", 1, 0.4, 200);

    ContextBlock block =
        retrieval::plan_context(f.index(), f.store(), Stage::KsaExtraction, e0_query(), 500);

    REQUIRE(block.hits.size() == 2);
    CHECK(block.hits[0].ref == (ChunkRef{"docA", 0}));
    CHECK(block.hits[1].ref == (ChunkRef{"docA", 1}));
    CHECK(block.chunk_token_count == 400);
    CHECK(block.token_count > block.chunk_token_count);  // headers add tokens
    CHECK(block.rendered_text.find("[source: docA#0]") != std::string::npos);
    CHECK(block.rendered_text.find("[source: docA#1]") != std::string::npos);
    CHECK(block.rendered_text.find("docB") == std::string::npos);
    CHECK(block.rendered_text.find("tok0 tok1") != std::string::npos);
    CHECK(block.warnings.empty());
    CHECK(block.stage == Stage::KsaExtraction);

    // The budget counts chunk tokens only, so exactly-at-budget still fits.
    ContextBlock three =
        retrieval::plan_context(f.index(), f.store(), Stage::ImpactEvaluation, e0_query(), 600);
    CHECK(three.hits.size() == 3);
    CHECK(three.chunk_token_count == 600);
    CHECK(three.stage == Stage::ImpactEvaluation);
}

TEST_CASE("context budget below the floor is rejected") {
    Fixture f;
    f.add("d", 0, 0.1, 10);
    CHECK_THROWS_AS(
        retrieval::plan_context(f.index(), f.store(), Stage::KsaExtraction, e0_query(), 499),
        ParameterError);
}

TEST_CASE("empty index degrades to a context-free block with a warning") {
    VectorIndex empty;
    ChunkStore store;
    ContextBlock block =
        retrieval::plan_context(empty, store, Stage::KsaExtraction, e0_query(), 3500);
    CHECK(block.hits.empty());
    CHECK(block.rendered_text.empty());
    CHECK(block.chunk_token_count == 0);
    REQUIRE(block.warnings.size() == 1);
    CHECK(block.warnings[0].find("context-free") != std::string::npos);
}

TEST_CASE("a hit missing from the chunk store is skipped with a warning") {
    Fixture f;
    f.add("ghost", 0, 0.05, 100, /*in_store=*/false);  // rank 1, not in store
    f.add("real", 0, 0.2, 100);

    ContextBlock block =
        retrieval::plan_context(f.index(), f.store(), Stage::KsaExtraction, e0_query(), 500);
    REQUIRE(block.hits.size() == 1);
    CHECK(block.hits[0].ref == (ChunkRef{"real", 0}));
    REQUIRE(block.warnings.size() == 1);
    CHECK(block.warnings[0].find("ghost#0") != std::string::npos);
}

TEST_CASE("an oversize top hit ends selection rather than skipping ahead") {
    Fixture f;
    f.add("big", 0, 0.05, 600);   // rank 1, exceeds any 500 budget
    f.add("small", 0, 0.2, 100);  // would fit, but selection is a strict prefix

    ContextBlock block =
        retrieval::plan_context(f.index(), f.store(), Stage::KsaExtraction, e0_query(), 500);
    CHECK(block.hits.empty());
    CHECK(block.rendered_text.empty());
    CHECK(block.chunk_token_count == 0);
    CHECK(block.warnings.empty());
}

TEST_CASE("chunk store round-trips through a manifest") {
    testsupport::TempDir tmp;
    std::vector<corpus::Chunk> chunks{chunk_of("alpha", 0, 5), chunk_of("alpha", 1, 7),
                                      chunk_of("beta", 0, 3)};
    auto manifest = tmp / "chunks.jsonl";
    corpus::write_manifest(manifest, chunks);

    ChunkStore store = ChunkStore::from_manifest(manifest);
    CHECK(store.size() == 3);
    const corpus::Chunk* found = store.find(ChunkRef{"alpha", 1});
    REQUIRE(found != nullptr);
    CHECK(found->text == chunks[1].text);
    CHECK(found->token_len == 7);
    CHECK(store.find(ChunkRef{"alpha", 2}) == nullptr);
    CHECK(store.find(ChunkRef{"gamma", 0}) == nullptr);
}

TEST_CASE("attribution headers stay within their token cap") {
    ChunkRef plain{"occupational-series", 4};
    std::string header = retrieval::detail::attribution_header(plain);
    CHECK(header == "[source: occupational-series#4]");

    std::string wordy_id;
    for (int i = 0; i < 40; ++i) wordy_id += "part" + std::to_string(i) + " ";
    ChunkRef pathological{wordy_id, 3};
    std::string capped = retrieval::detail::attribution_header(pathological);
    CHECK(text::token_count(capped) <= 20);
    CHECK(capped.find("..#3]") != std::string::npos);
}
