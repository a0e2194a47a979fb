#pragma once
// Knowledge-base ingestion: loads UTF-8 text documents from a directory tree,
// parses optional front-matter metadata, and slices each document into
// overlapping token windows (default 500 tokens, overlap 100). The chunk list
// is persisted as a JSON-lines manifest with one chunk record per line;
// identical directory contents produce byte-identical manifests.

#include "ksarag/errors.hpp"
#include "ksarag/text.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace ksarag::corpus {

enum class KbTag { Occupational, AiCapability };

inline const char* kb_name(KbTag kb) {
    return kb == KbTag::Occupational ? "occupational" : "ai_capability";
}

struct Document {
    std::string doc_id;
    KbTag kb = KbTag::Occupational;
    std::string title;
    std::string text;
    std::string source_path;
    std::map<std::string, std::string> metadata;
};

struct Chunk {
    std::string doc_id;
    std::size_t ordinal = 0;
    std::size_t token_start = 0;
    std::size_t token_len = 0;
    std::string text;
};

struct LoadReport {
    std::vector<Document> documents;
    std::vector<std::string> warnings; // skipped or unreadable files
};

namespace detail {

// Front matter is a "---" fenced block of "key: value" lines at the top of
// the file. Returns the body; fills meta. Files without a fence pass through.
inline std::string split_front_matter(const std::string& raw,
                                      std::map<std::string, std::string>& meta) {
    std::string_view s = raw;
    if (s.size() >= 3 && s.substr(0, 3) == "\xEF\xBB\xBF") s.remove_prefix(3);
    if (!(s.substr(0, 3) == "---" &&
          (s.size() == 3 || s[3] == '\n' || s.substr(3, 2) == "\r\n"))) {
        return std::string(s);
    }
    std::size_t pos = s.find('\n');
    if (pos == std::string_view::npos) return std::string(s);
    ++pos;
    while (pos < s.size()) {
        std::size_t eol = s.find('\n', pos);
        std::string_view line = s.substr(pos, eol == std::string_view::npos ? s.size() - pos
                                                                            : eol - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        std::size_t next = eol == std::string_view::npos ? s.size() : eol + 1;
        if (line == "---") return std::string(s.substr(next));
        std::size_t colon = line.find(':');
        if (colon != std::string_view::npos) {
            std::string key = text::trim(line.substr(0, colon));
            std::string value = text::trim(line.substr(colon + 1));
            if (!key.empty()) meta[key] = value;
        }
        pos = next;
    }
    // No closing fence: treat the whole file as body.
    meta.clear();
    return std::string(s);
}

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw ParameterError("cannot open file: " + p.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw ParameterError("read failed: " + p.string());
    return buf.str();
}

} // namespace detail

// Serializes a document back to the on-disk format (front-matter + body).
// Round-trips through load_documents.
inline std::string document_to_text(const Document& doc) {
    std::string out;
    if (!doc.metadata.empty() || !doc.title.empty()) {
        out += "---\n";
        if (!doc.title.empty()) out += "title: " + doc.title + "\n";
        for (const auto& [k, v] : doc.metadata) {
            if (k == "title") continue;
            out += k + ": " + v + "\n";
        }
        out += "---\n";
    }
    out += doc.text;
    return out;
}

inline LoadReport load_documents(const std::filesystem::path& dir, KbTag kb) {
    namespace fs = std::filesystem;
    if (!fs::exists(dir) || !fs::is_directory(dir)) {
        throw ParameterError("knowledge base directory does not exist: " + dir.string());
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::recursive_directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".txt") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end(),
              [&](const fs::path& a, const fs::path& b) {
                  return a.lexically_relative(dir).generic_string() <
                         b.lexically_relative(dir).generic_string();
              });

    LoadReport report;
    for (const auto& path : files) {
        std::string rel = path.lexically_relative(dir).generic_string();
        std::string raw;
        try {
            raw = detail::read_file(path);
        } catch (const Error& e) {
            report.warnings.push_back("unreadable: " + rel + " (" + e.what() + ")");
            continue;
        }
        Document doc;
        doc.kb = kb;
        doc.doc_id = rel;
        doc.source_path = path.generic_string();
        doc.text = detail::split_front_matter(raw, doc.metadata);
        if (auto it = doc.metadata.find("title"); it != doc.metadata.end()) {
            doc.title = it->second;
            doc.metadata.erase(it);
        } else {
            doc.title = path.stem().string();
        }
        if (text::trim(doc.text).empty()) {
            report.warnings.push_back("skipped empty document: " + rel);
            continue;
        }
        report.documents.push_back(std::move(doc));
    }
    if (report.documents.empty()) {
        throw CorpusEmptyError("no admissible documents in " + dir.string());
    }
    return report;
}

// Token windows of `size` advancing by `size - overlap`; the final window may
// be shorter but windows never start past the end, so a 900-token document
// with the 500/100 defaults yields [0,500) and [400,900).
inline std::vector<Chunk> chunk(const Document& doc, std::size_t size = 500,
                                std::size_t overlap = 100) {
    if (size == 0) throw ParameterError("chunk size must be positive");
    if (overlap >= size) throw ParameterError("chunk overlap must be smaller than size");
    std::vector<std::string> tokens = text::tokenize(doc.text);
    std::vector<Chunk> chunks;
    if (tokens.empty()) return chunks;
    const std::size_t stride = size - overlap;
    std::size_t start = 0;
    std::size_t ordinal = 0;
    for (;;) {
        std::size_t end = std::min(start + size, tokens.size());
        Chunk c;
        c.doc_id = doc.doc_id;
        c.ordinal = ordinal++;
        c.token_start = start;
        c.token_len = end - start;
        c.text = text::join_tokens(tokens, start, end);
        chunks.push_back(std::move(c));
        if (end == tokens.size()) break;
        start += stride;
    }
    return chunks;
}

inline nlohmann::json chunk_to_json(const Chunk& c) {
    return nlohmann::json{{"doc_id", c.doc_id},
                          {"ordinal", c.ordinal},
                          {"token_start", c.token_start},
                          {"token_len", c.token_len},
                          {"text", c.text}};
}

inline Chunk chunk_from_json(const nlohmann::json& j) {
    Chunk c;
    c.doc_id = j.at("doc_id").get<std::string>();
    c.ordinal = j.at("ordinal").get<std::size_t>();
    c.token_start = j.at("token_start").get<std::size_t>();
    c.token_len = j.at("token_len").get<std::size_t>();
    c.text = j.at("text").get<std::string>();
    return c;
}

inline void write_manifest(const std::filesystem::path& path,
                           const std::vector<Chunk>& chunks) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParameterError("cannot write manifest: " + path.string());
    for (const Chunk& c : chunks) {
        out << chunk_to_json(c).dump() << '\n';
    }
}

inline std::vector<Chunk> read_manifest(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParameterError("cannot read manifest: " + path.string());
    std::vector<Chunk> chunks;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (text::trim(line).empty()) continue;
        try {
            chunks.push_back(chunk_from_json(nlohmann::json::parse(line)));
        } catch (const nlohmann::json::exception& e) {
            throw ParseError("manifest " + path.string() + " line " +
                             std::to_string(line_no) + ": " + e.what());
        }
    }
    return chunks;
}

} // namespace ksarag::corpus
