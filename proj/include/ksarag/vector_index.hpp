#pragma once
// Per-KB vector index over chunk embeddings. Two modes behind one interface:
// Exact (exhaustive cosine scan, the correctness oracle) and Ann (greedy
// search over a layered navigable small-world graph). Scores are cosine
// similarity; ties always break by (doc_id, ordinal) ascending so results are
// reproducible. Built indexes are immutable and safe for concurrent readers.
//
// Persistence is a single binary file with an FNV-1a trailer; load() verifies
// the checksum and answers queries identically to the index that was saved.

#include "ksarag/embedding.hpp"
#include "ksarag/errors.hpp"
#include "ksarag/hash.hpp"

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <queue>
#include <string>
#include <vector>

namespace ksarag::vectorstore {

struct ChunkRef {
    std::string doc_id;
    std::uint32_t ordinal = 0;

    auto operator<=>(const ChunkRef&) const = default;
};

struct IndexEntry {
    ChunkRef ref;
    embeddings::EmbeddingVector vector;
};

struct SearchHit {
    ChunkRef ref;
    double score = 0.0;
};

inline double cosine(const embeddings::EmbeddingVector& a, const embeddings::EmbeddingVector& b) {
    if (a.dim() != b.dim()) {
        throw ParameterError("cosine: dim mismatch " + std::to_string(a.dim()) + " vs " +
                             std::to_string(b.dim()));
    }
    double na = embeddings::l2_norm(a);
    double nb = embeddings::l2_norm(b);
    if (na == 0.0 || nb == 0.0) throw ParameterError("cosine: zero vector");
    return embeddings::dot(a, b) / (na * nb);
}

class VectorIndex {
public:
    enum class Mode : std::uint8_t { Exact = 0, Ann = 1 };

    struct AnnParams {
        std::uint32_t m = 16;
        std::uint32_t ef_construction = 200;
        std::uint32_t ef_search = 64;
    };

    VectorIndex() = default; // empty index: every search answers no hits

    static VectorIndex build(std::vector<IndexEntry> entries, Mode mode) {
        return build(std::move(entries), mode, AnnParams{});
    }

    static VectorIndex build(std::vector<IndexEntry> entries, Mode mode,
                             AnnParams params) {
        if (entries.empty()) throw ParameterError("index build: no entries");
        const std::size_t dim = entries.front().vector.dim();
        for (const IndexEntry& e : entries) {
            if (e.vector.dim() != dim) {
                throw ParameterError("index build: mixed dims " + std::to_string(dim) +
                                     " vs " + std::to_string(e.vector.dim()));
            }
        }
        std::sort(entries.begin(), entries.end(),
                  [](const IndexEntry& a, const IndexEntry& b) { return a.ref < b.ref; });
        for (std::size_t i = 1; i < entries.size(); ++i) {
            if (entries[i].ref == entries[i - 1].ref) {
                throw ParameterError("index build: duplicate chunk_ref " +
                                     entries[i].ref.doc_id + "#" +
                                     std::to_string(entries[i].ref.ordinal));
            }
        }

        VectorIndex idx;
        idx.mode_ = mode;
        idx.dim_ = dim;
        idx.params_ = params;
        idx.refs_.reserve(entries.size());
        idx.data_.reserve(entries.size() * dim);
        for (IndexEntry& e : entries) {
            idx.refs_.push_back(std::move(e.ref));
            idx.data_.insert(idx.data_.end(), e.vector.values.begin(), e.vector.values.end());
        }
        idx.norms_.resize(idx.refs_.size());
        for (std::size_t i = 0; i < idx.refs_.size(); ++i) {
            double n = 0.0;
            const double* row = idx.row(i);
            for (std::size_t d = 0; d < dim; ++d) n += row[d] * row[d];
            idx.norms_[i] = std::sqrt(n);
            if (idx.norms_[i] == 0.0) {
                throw ParameterError("index build: zero vector at " + idx.refs_[i].doc_id);
            }
        }
        if (mode == Mode::Ann) idx.build_graph();
        return idx;
    }

    bool empty() const { return refs_.empty(); }
    std::size_t size() const { return refs_.size(); }
    std::size_t dim() const { return dim_; }
    Mode mode() const { return mode_; }
    const AnnParams& ann_params() const { return params_; }
    const std::vector<ChunkRef>& refs() const { return refs_; }

    std::vector<SearchHit> search(const embeddings::EmbeddingVector& query, std::size_t k) const {
        if (k < 1) throw ParameterError("search: k must be >= 1");
        if (empty()) return {};
        if (query.dim() != dim_) {
            throw ParameterError("search: query dim " + std::to_string(query.dim()) +
                                 " != index dim " + std::to_string(dim_));
        }
        double qnorm = embeddings::l2_norm(query);
        if (qnorm == 0.0) throw ParameterError("search: zero query vector");
        const double* q = query.values.data();

        std::vector<Cand> ranked;
        if (mode_ == Mode::Exact) {
            ranked.resize(size());
            for (std::uint32_t i = 0; i < size(); ++i) {
                ranked[i] = Cand{similarity(i, q, qnorm), i};
            }
            std::size_t take = std::min(k, ranked.size());
            std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(take),
                              ranked.end(), cand_better);
            ranked.resize(take);
        } else {
            ranked = ann_search(q, qnorm, k);
        }

        std::vector<SearchHit> hits;
        hits.reserve(ranked.size());
        for (const Cand& c : ranked) hits.push_back(SearchHit{refs_[c.id], c.sim});
        return hits;
    }

    void save(const std::filesystem::path& path) const {
        std::string buf;
        buf.append(kMagic, 8);
        put_u32(buf, kVersion);
        buf.push_back(static_cast<char>(mode_));
        put_u32(buf, static_cast<std::uint32_t>(dim_));
        put_u64(buf, refs_.size());
        put_u32(buf, params_.m);
        put_u32(buf, params_.ef_construction);
        put_u32(buf, params_.ef_search);
        for (const ChunkRef& r : refs_) {
            put_u32(buf, static_cast<std::uint32_t>(r.doc_id.size()));
            buf.append(r.doc_id);
            put_u32(buf, r.ordinal);
        }
        buf.append(reinterpret_cast<const char*>(data_.data()), data_.size() * sizeof(double));
        if (mode_ == Mode::Ann) {
            put_u32(buf, entry_point_);
            put_u32(buf, static_cast<std::uint32_t>(max_level_));
            for (const Node& node : nodes_) {
                put_u32(buf, static_cast<std::uint32_t>(node.layers.size()));
                for (const auto& layer : node.layers) {
                    put_u32(buf, static_cast<std::uint32_t>(layer.size()));
                    for (std::uint32_t nb : layer) put_u32(buf, nb);
                }
            }
        }
        put_u64(buf, fnv1a64(buf));

        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw ParameterError("cannot write index: " + path.string());
        out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
        if (!out) throw ParameterError("index write failed: " + path.string());
    }

    static VectorIndex load(const std::filesystem::path& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw ParameterError("cannot read index: " + path.string());
        std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        if (buf.size() < 8 + sizeof(std::uint64_t) || buf.compare(0, 8, kMagic, 8) != 0) {
            throw ChecksumError("index file corrupt (bad header): " + path.string());
        }
        std::string_view payload(buf.data(), buf.size() - sizeof(std::uint64_t));
        std::uint64_t stored = 0;
        std::memcpy(&stored, buf.data() + payload.size(), sizeof(stored));
        if (fnv1a64(payload) != stored) {
            throw ChecksumError("index file corrupt (checksum mismatch), rebuild with build-kb: " +
                                path.string());
        }

        Cursor cur{payload, 8};
        VectorIndex idx;
        std::uint32_t version = cur.u32();
        if (version != kVersion) {
            throw ChecksumError("index file version " + std::to_string(version) + " unsupported");
        }
        idx.mode_ = static_cast<Mode>(cur.u8());
        idx.dim_ = cur.u32();
        std::uint64_t count = cur.u64();
        idx.params_.m = cur.u32();
        idx.params_.ef_construction = cur.u32();
        idx.params_.ef_search = cur.u32();
        idx.refs_.resize(count);
        for (std::uint64_t i = 0; i < count; ++i) {
            std::uint32_t len = cur.u32();
            idx.refs_[i].doc_id = std::string(cur.bytes(len));
            idx.refs_[i].ordinal = cur.u32();
        }
        idx.data_.resize(count * idx.dim_);
        std::string_view raw = cur.bytes(idx.data_.size() * sizeof(double));
        std::memcpy(idx.data_.data(), raw.data(), raw.size());
        idx.norms_.resize(count);
        for (std::size_t i = 0; i < count; ++i) {
            double n = 0.0;
            const double* row = idx.row(i);
            for (std::size_t d = 0; d < idx.dim_; ++d) n += row[d] * row[d];
            idx.norms_[i] = std::sqrt(n);
        }
        if (idx.mode_ == Mode::Ann) {
            idx.entry_point_ = cur.u32();
            idx.max_level_ = static_cast<int>(cur.u32());
            idx.nodes_.resize(count);
            for (std::uint64_t i = 0; i < count; ++i) {
                std::uint32_t levels = cur.u32();
                idx.nodes_[i].layers.resize(levels);
                for (auto& layer : idx.nodes_[i].layers) {
                    layer.resize(cur.u32());
                    for (std::uint32_t& nb : layer) nb = cur.u32();
                }
            }
        }
        return idx;
    }

private:
    static constexpr const char* kMagic = "KSARAGIX";
    static constexpr std::uint32_t kVersion = 1;

    struct Node {
        // layers[l] = neighbor ids at level l; node participates in levels
        // 0..layers.size()-1.
        std::vector<std::vector<std::uint32_t>> layers;
    };

    struct Cand {
        double sim;
        std::uint32_t id;
    };

    static bool cand_better(const Cand& a, const Cand& b) {
        if (a.sim != b.sim) return a.sim > b.sim;
        return a.id < b.id;
    }

    const double* row(std::size_t i) const { return data_.data() + i * dim_; }

    double similarity(std::uint32_t i, const double* q, double qnorm) const {
        const double* r = row(i);
        double s = 0.0;
        for (std::size_t d = 0; d < dim_; ++d) s += r[d] * q[d];
        return s / (norms_[i] * qnorm);
    }

    double node_similarity(std::uint32_t a, std::uint32_t b) const {
        const double* ra = row(a);
        const double* rb = row(b);
        double s = 0.0;
        for (std::size_t d = 0; d < dim_; ++d) s += ra[d] * rb[d];
        return s / (norms_[a] * norms_[b]);
    }

    // --- HNSW construction -------------------------------------------------

    void build_graph() {
        const std::size_t n = size();
        nodes_.assign(n, Node{});
        const double level_mult = 1.0 / std::log(static_cast<double>(params_.m));

        // Portable deterministic level draws; fixed seed keeps rebuilds and
        // their on-disk files identical for identical input.
        std::uint64_t rng_state = 0x9E3779B97F4A7C15ull;
        auto next_u01 = [&rng_state]() {
            rng_state ^= rng_state << 13;
            rng_state ^= rng_state >> 7;
            rng_state ^= rng_state << 17;
            return static_cast<double>(rng_state >> 11) * 0x1.0p-53;
        };

        entry_point_ = 0;
        max_level_ = -1;
        for (std::uint32_t i = 0; i < n; ++i) {
            double u = next_u01();
            if (u <= 0.0) u = 0x1.0p-53;
            int level = static_cast<int>(std::floor(-std::log(u) * level_mult));
            insert_node(i, level);
        }
    }

    void insert_node(std::uint32_t id, int level) {
        nodes_[id].layers.assign(static_cast<std::size_t>(level) + 1, {});
        if (max_level_ < 0) {
            entry_point_ = id;
            max_level_ = level;
            return;
        }

        const double* q = row(id);
        double qnorm = norms_[id];
        std::uint32_t cur = entry_point_;
        for (int lc = max_level_; lc > level; --lc) {
            cur = greedy_step(q, qnorm, cur, lc);
        }

        std::vector<char> visited(size(), 0);
        for (int lc = std::min(level, max_level_); lc >= 0; --lc) {
            std::vector<Cand> found =
                search_layer(q, qnorm, cur, params_.ef_construction, lc, visited, id);
            std::fill(visited.begin(), visited.end(), 0);
            // Base layer carries double the connectivity; that applies to the
            // inserted node's own links too, which measurably lifts recall at
            // small ef_search on weakly clustered data.
            std::uint32_t m_max = lc == 0 ? params_.m * 2 : params_.m;
            std::vector<std::uint32_t> selected = select_neighbors(id, found, m_max);
            nodes_[id].layers[static_cast<std::size_t>(lc)] = selected;
            for (std::uint32_t nb : selected) {
                auto& back = nodes_[nb].layers[static_cast<std::size_t>(lc)];
                back.push_back(id);
                if (back.size() > m_max) {
                    std::vector<Cand> cands;
                    cands.reserve(back.size());
                    for (std::uint32_t x : back) cands.push_back(Cand{node_similarity(nb, x), x});
                    back = select_neighbors(nb, cands, m_max);
                }
            }
            if (!found.empty()) cur = found.front().id;
        }

        if (level > max_level_) {
            max_level_ = level;
            entry_point_ = id;
        }
    }

    std::uint32_t greedy_step(const double* q, double qnorm, std::uint32_t start, int layer) const {
        std::uint32_t cur = start;
        double best = similarity(cur, q, qnorm);
        bool improved = true;
        while (improved) {
            improved = false;
            for (std::uint32_t nb : layer_of(cur, layer)) {
                double s = similarity(nb, q, qnorm);
                if (s > best || (s == best && nb < cur)) {
                    best = s;
                    cur = nb;
                    improved = true;
                }
            }
        }
        return cur;
    }

    const std::vector<std::uint32_t>& layer_of(std::uint32_t id, int layer) const {
        static const std::vector<std::uint32_t> kEmpty;
        const auto& layers = nodes_[id].layers;
        if (static_cast<std::size_t>(layer) >= layers.size()) return kEmpty;
        return layers[static_cast<std::size_t>(layer)];
    }

    // Beam search over one layer; returns up to ef candidates sorted
    // best-first. `skip` excludes the node being inserted.
    std::vector<Cand> search_layer(const double* q, double qnorm, std::uint32_t enter,
                                   std::size_t ef, int layer, std::vector<char>& visited,
                                   std::uint32_t skip = UINT32_MAX) const {
        auto cand_less = [](const Cand& a, const Cand& b) { return cand_better(b, a); };
        auto worst_less = [](const Cand& a, const Cand& b) { return cand_better(a, b); };
        std::priority_queue<Cand, std::vector<Cand>, decltype(cand_less)> frontier(cand_less);
        std::priority_queue<Cand, std::vector<Cand>, decltype(worst_less)> best(worst_less);

        Cand first{similarity(enter, q, qnorm), enter};
        visited[enter] = 1;
        frontier.push(first);
        if (enter != skip) best.push(first);

        while (!frontier.empty()) {
            Cand c = frontier.top();
            frontier.pop();
            if (best.size() >= ef && cand_better(best.top(), c)) break;
            for (std::uint32_t nb : layer_of(c.id, layer)) {
                if (visited[nb]) continue;
                visited[nb] = 1;
                Cand n{similarity(nb, q, qnorm), nb};
                if (best.size() < ef || cand_better(n, best.top())) {
                    frontier.push(n);
                    if (nb != skip) {
                        best.push(n);
                        if (best.size() > ef) best.pop();
                    }
                }
            }
        }

        std::vector<Cand> out;
        out.reserve(best.size());
        while (!best.empty()) {
            out.push_back(best.top());
            best.pop();
        }
        std::reverse(out.begin(), out.end());
        return out;
    }

    // Diversity-preserving neighbor selection: a candidate is kept only if it
    // is closer to the base node than to every neighbor already kept; pruned
    // candidates backfill remaining slots best-first.
    std::vector<std::uint32_t> select_neighbors(std::uint32_t base, std::vector<Cand> cands,
                                                std::uint32_t m) const {
        std::sort(cands.begin(), cands.end(), cand_better);
        std::vector<std::uint32_t> selected;
        std::vector<std::uint32_t> pruned;
        for (const Cand& c : cands) {
            if (c.id == base) continue;
            if (selected.size() >= m) break;
            bool dominated = false;
            for (std::uint32_t r : selected) {
                if (node_similarity(c.id, r) > c.sim) {
                    dominated = true;
                    break;
                }
            }
            if (dominated) {
                pruned.push_back(c.id);
            } else {
                selected.push_back(c.id);
            }
        }
        for (std::uint32_t p : pruned) {
            if (selected.size() >= m) break;
            selected.push_back(p);
        }
        return selected;
    }

    std::vector<Cand> ann_search(const double* q, double qnorm, std::size_t k) const {
        std::uint32_t cur = entry_point_;
        for (int lc = max_level_; lc > 0; --lc) {
            cur = greedy_step(q, qnorm, cur, lc);
        }
        std::vector<char> visited(size(), 0);
        std::size_t ef = std::max<std::size_t>(params_.ef_search, k);
        std::vector<Cand> found = search_layer(q, qnorm, cur, ef, 0, visited);
        if (found.size() > k) found.resize(k);
        return found;
    }

    // --- binary encoding helpers -------------------------------------------

    static void put_u32(std::string& buf, std::uint32_t v) {
        for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((v >> (i * 8)) & 0xFF));
    }
    static void put_u64(std::string& buf, std::uint64_t v) {
        for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>((v >> (i * 8)) & 0xFF));
    }

    struct Cursor {
        std::string_view buf;
        std::size_t pos = 0;

        std::uint8_t u8() { return static_cast<std::uint8_t>(bytes(1)[0]); }
        std::uint32_t u32() {
            std::string_view b = bytes(4);
            std::uint32_t v = 0;
            for (int i = 3; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(b[static_cast<std::size_t>(i)]);
            return v;
        }
        std::uint64_t u64() {
            std::string_view b = bytes(8);
            std::uint64_t v = 0;
            for (int i = 7; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(b[static_cast<std::size_t>(i)]);
            return v;
        }
        std::string_view bytes(std::size_t n) {
            if (pos + n > buf.size()) throw ChecksumError("index file truncated");
            std::string_view out = buf.substr(pos, n);
            pos += n;
            return out;
        }
    };

    std::vector<ChunkRef> refs_;   // ascending (doc_id, ordinal); ids are positions
    std::vector<double> data_;     // row-major size*dim
    std::vector<double> norms_;
    Mode mode_ = Mode::Exact;
    std::size_t dim_ = 0;
    AnnParams params_;

    std::vector<Node> nodes_;
    std::uint32_t entry_point_ = 0;
    int max_level_ = -1;
};

} // namespace ksarag::vectorstore
