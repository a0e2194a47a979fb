// Integration acceptance suite. Each criterion exercises the pipeline
// end-to-end (or against an independent oracle) and prints exactly one
// [PASS]/[FAIL] line; the process exits non-zero if any criterion fails.
//
// Run directly or via ctest; no test framework is used so the output stays
// a stable, grep-friendly checklist.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ksarag/orchestrator.hpp"
#include "test_support.hpp"

namespace fs = std::filesystem;
using namespace ksarag;
using testsupport::TempDir;
using testsupport::fixtures_dir;
using testsupport::read_file;
using testsupport::write_file;

namespace {

int g_failures = 0;

struct CheckFail : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void expect(bool cond, const std::string& msg) {
    if (!cond) throw CheckFail(msg);
}

void expect_near(double got, double want, double tol, const std::string& what) {
    if (!(std::fabs(got - want) <= tol)) {
        std::ostringstream os;
        os << what << ": got " << got << ", want " << want << " (tol " << tol << ")";
        throw CheckFail(os.str());
    }
}

template <typename E>
void expect_throws(const std::function<void()>& fn, const std::string& what) {
    try {
        fn();
    } catch (const E&) {
        return;
    } catch (const std::exception& e) {
        throw CheckFail(what + ": threw the wrong exception type: " + e.what());
    }
    throw CheckFail(what + ": did not throw");
}

void criterion(int n, const char* name, const std::function<void()>& body) {
    try {
        body();
        std::printf("[PASS] criterion %d: %s\n", n, name);
    } catch (const std::exception& e) {
        ++g_failures;
        std::printf("[FAIL] criterion %d: %s: %s\n", n, name, e.what());
    }
    std::fflush(stdout);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

// ---- shared pipeline runs -------------------------------------------------

std::optional<TempDir> g_run_a;
std::optional<TempDir> g_run_b;
bool g_run_a_ok = false;

orchestrator::RunConfig fixture_config(const fs::path& out_dir) {
    orchestrator::RunConfig cfg = orchestrator::load_config(fixtures_dir() / "config.json");
    cfg.output_dir = out_dir;
    return cfg;
}

void execute_full_run(const fs::path& out_dir) {
    orchestrator::Runner runner(fixture_config(out_dir));
    orchestrator::AssessResult res = runner.run_all();
    expect(res.exit_code() == 0, "pipeline run reported failures");
    expect(res.outcomes.size() == 24, "expected 24 series outcomes");
}

std::map<std::string, std::string> snapshot_tree(const fs::path& dir) {
    std::map<std::string, std::string> out;
    if (!fs::exists(dir)) return out;
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
        if (!e.is_regular_file()) continue;
        out[fs::relative(e.path(), dir).generic_string()] = read_file(e.path());
    }
    return out;
}

// ---- criterion bodies -----------------------------------------------------

void check_chunker() {
    std::mt19937 rng(424242);
    std::uniform_int_distribution<int> size_dist(0, 5000);

    std::vector<corpus::Document> docs(500);
    for (std::size_t i = 0; i < docs.size(); ++i) {
        docs[i].doc_id = "doc-" + std::to_string(i);
        int n = size_dist(rng);
        std::string body;
        for (int t = 0; t < n; ++t) {
            body += "w" + std::to_string(t);
            body += (t % 17 == 16) ? '\n' : ' ';
        }
        docs[i].text = body;
    }

    auto started = std::chrono::steady_clock::now();
    std::vector<std::vector<corpus::Chunk>> all;
    all.reserve(docs.size());
    for (const auto& d : docs) all.push_back(corpus::chunk(d, 500, 100));
    auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - started)
                       .count();
    expect(elapsed < 5000, "chunking 500 documents took " + std::to_string(elapsed) + "ms");

    for (std::size_t i = 0; i < docs.size(); ++i) {
        const auto& chunks = all[i];
        std::size_t total = text::tokenize(docs[i].text).size();
        if (total == 0) {
            expect(chunks.empty(), docs[i].doc_id + ": empty doc must yield no chunks");
            continue;
        }
        expect(!chunks.empty(), docs[i].doc_id + ": non-empty doc yielded no chunks");
        expect(chunks.front().token_start == 0, docs[i].doc_id + ": first window not at 0");
        for (std::size_t c = 0; c < chunks.size(); ++c) {
            expect(chunks[c].token_len <= 500, docs[i].doc_id + ": window longer than 500");
            expect(chunks[c].ordinal == c, docs[i].doc_id + ": ordinal mismatch");
            if (c > 0) {
                expect(chunks[c].token_start == chunks[c - 1].token_start + 400,
                       docs[i].doc_id + ": stride is not 400");
                expect(chunks[c - 1].token_start + chunks[c - 1].token_len >=
                           chunks[c].token_start,
                       docs[i].doc_id + ": coverage gap between windows");
            }
        }
        expect(chunks.back().token_start + chunks.back().token_len == total,
               docs[i].doc_id + ": last window does not reach the final token");
    }

    // Re-chunking the same inputs must reproduce every field.
    for (std::size_t i = 0; i < docs.size(); ++i) {
        std::vector<corpus::Chunk> again = corpus::chunk(docs[i], 500, 100);
        expect(again.size() == all[i].size(), "re-chunk produced a different count");
        for (std::size_t c = 0; c < again.size(); ++c) {
            expect(again[c].token_start == all[i][c].token_start &&
                       again[c].token_len == all[i][c].token_len &&
                       again[c].text == all[i][c].text,
                   "re-chunk produced different windows");
        }
    }
}

void check_vector_search() {
    auto started = std::chrono::steady_clock::now();

    // Exact mode against a brute-force oracle, with deliberate duplicates so
    // tie ordering is observable.
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    auto random_vec = [&](std::size_t dim) {
        embeddings::EmbeddingVector v;
        v.values.resize(dim);
        for (auto& x : v.values) x = dist(rng);
        return v;
    };

    std::vector<vectorstore::IndexEntry> entries;
    for (int i = 0; i < 197; ++i) {
        entries.push_back({vectorstore::ChunkRef{"doc-" + std::to_string(i), 0},
                           random_vec(256)});
    }
    for (int i = 0; i < 3; ++i) {
        entries.push_back({vectorstore::ChunkRef{"dup-" + std::to_string(i), 0},
                           entries[0].vector});
    }
    vectorstore::VectorIndex exact =
        vectorstore::VectorIndex::build(entries, vectorstore::VectorIndex::Mode::Exact);

    for (int q = 0; q < 50; ++q) {
        embeddings::EmbeddingVector query = (q == 0) ? entries[0].vector : random_vec(256);
        std::vector<vectorstore::SearchHit> got = exact.search(query, 10);

        std::vector<vectorstore::SearchHit> want;
        for (const auto& e : entries) {
            want.push_back({e.ref, vectorstore::cosine(query, e.vector)});
        }
        std::sort(want.begin(), want.end(), [](const auto& a, const auto& b) {
            if (a.score != b.score) return a.score > b.score;
            return a.ref < b.ref;
        });
        want.resize(10);

        expect(got.size() == want.size(), "exact search returned wrong k");
        for (std::size_t i = 0; i < want.size(); ++i) {
            expect(got[i].ref == want[i].ref,
                   "exact search disagrees with brute force at query " + std::to_string(q) +
                       " position " + std::to_string(i));
            expect(std::fabs(got[i].score - want[i].score) <= 1e-12,
                   "exact search score drifted from brute force");
        }
    }

    // Approximate mode recall against exact ground truth, on the vector
    // distribution the index actually serves: hashed n-gram embeddings of
    // topically clustered text (20 topic vocabularies plus a shared pool).
    std::mt19937 text_rng(20260825);
    std::uniform_int_distribution<int> topic_dist(0, 19);
    std::uniform_int_distribution<int> topic_word(0, 149);
    std::uniform_int_distribution<int> shared_word(0, 599);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    auto make_doc = [&]() {
        int topic = topic_dist(text_rng);
        std::string text;
        for (int t = 0; t < 200; ++t) {
            if (coin(text_rng) < 0.8) {
                text += "t" + std::to_string(topic) + "w" + std::to_string(topic_word(text_rng));
            } else {
                text += "shared" + std::to_string(shared_word(text_rng));
            }
            text += ' ';
        }
        return text;
    };

    embeddings::HashedNgramProvider provider(256, 0x5eed);
    std::vector<std::string> doc_texts;
    doc_texts.reserve(10000);
    for (int i = 0; i < 10000; ++i) doc_texts.push_back(make_doc());
    std::vector<std::string> query_texts;
    for (int q = 0; q < 100; ++q) query_texts.push_back(make_doc());
    std::vector<embeddings::EmbeddingVector> doc_vecs = provider.embed_batch(doc_texts);
    std::vector<embeddings::EmbeddingVector> query_vecs = provider.embed_batch(query_texts);

    std::vector<vectorstore::IndexEntry> big;
    big.reserve(doc_vecs.size());
    for (std::size_t i = 0; i < doc_vecs.size(); ++i) {
        big.push_back({vectorstore::ChunkRef{"v-" + std::to_string(i), 0}, doc_vecs[i]});
    }
    vectorstore::VectorIndex truth =
        vectorstore::VectorIndex::build(big, vectorstore::VectorIndex::Mode::Exact);
    vectorstore::VectorIndex ann =
        vectorstore::VectorIndex::build(big, vectorstore::VectorIndex::Mode::Ann);

    double recall_sum = 0.0;
    for (const embeddings::EmbeddingVector& query : query_vecs) {
        std::vector<vectorstore::SearchHit> base = truth.search(query, 10);
        std::vector<vectorstore::SearchHit> approx = ann.search(query, 10);
        std::set<vectorstore::ChunkRef> base_refs;
        for (const auto& h : base) base_refs.insert(h.ref);
        int overlap = 0;
        for (const auto& h : approx) overlap += base_refs.count(h.ref) ? 1 : 0;
        recall_sum += overlap / 10.0;
    }
    double recall = recall_sum / 100.0;
    expect(recall >= 0.95, "ANN mean recall@10 = " + std::to_string(recall) + " < 0.95");

    auto elapsed = std::chrono::duration_cast<std::chrono::seconds>(
                       std::chrono::steady_clock::now() - started)
                       .count();
    expect(elapsed < 60, "vector search criterion took " + std::to_string(elapsed) + "s");
}

void check_prompt_anchors() {
    prompts::PromptSet set = prompts::PromptSet::load_dir(fixtures_dir() / "prompts");

    retrieval::ContextBlock ctx;
    ctx.rendered_text = "ctx goes here";

    prompts::RenderedPrompt extraction =
        set.render_extraction(ctx, "A short job description.");
    expect(extraction.text.find("You are a sophisticated analyst") != std::string::npos,
           "extraction prompt is missing its role anchor");

    prompts::RenderedPrompt comp = set.render_impact(prompts::TemplateId::Complementarity,
                                                     ctx, "k1 (Knowledge): sample\n");
    expect(comp.text.find("1 (No Complementarity)") != std::string::npos,
           "complementarity prompt is missing its scale anchor");

    prompts::RenderedPrompt subst = set.render_impact(prompts::TemplateId::Substitutivity,
                                                      ctx, "k1 (Knowledge): sample\n");
    expect(subst.text.find("1 (No Substitution) to 5 (Full Substitution)") !=
               std::string::npos,
           "substitutivity prompt is missing its scale range anchor");
}

void check_generation_call_count() {
    TempDir out("accept-three");
    TempDir aux("accept-three-aux");

    fs::path roster = aux.path() / "roster.csv";
    std::string body = "series_code,series_title,description_path\n";
    for (const char* code : {"0110", "0084", "7420"}) {
        body += std::string(code) + ",Series " + code + "," +
                (fixtures_dir() / "descriptions" / (std::string(code) + ".txt")).string() +
                "\n";
    }
    write_file(roster, body);

    orchestrator::RunConfig cfg = fixture_config(out.path());
    cfg.series_roster = roster;
    orchestrator::Runner runner(cfg);
    runner.build_kb();

    genclient::ScriptedBackend backend(cfg.fixture_dir);
    orchestrator::AssessResult res = runner.assess(false, std::nullopt, &backend);
    expect(res.outcomes.size() == 3, "expected three outcomes");
    for (const auto& o : res.outcomes) {
        expect(o.status == orchestrator::SeriesStatus::Ok,
               o.series_code + " did not complete: " + o.error);
    }
    expect(backend.calls() == 12,
           "expected exactly 12 generation calls, saw " + std::to_string(backend.calls()));
}

void check_impact_parser() {
    const char* stems[] = {"k1", "k2", "k3", "s1", "s2", "s3", "a1", "a2", "a3"};
    const int scores[] = {4, 3, 5, 5, 4, 4, 4, 3, 3};

    nlohmann::json golden;
    for (int i = 0; i < 9; ++i) {
        golden[std::string(stems[i]) + "_complementarity_score"] =
            std::to_string(scores[i]);  // quoted numerals must be accepted
        golden[std::string(stems[i]) + "_assessment"] =
            std::string("Grounded justification for ") + stems[i] + ".";
    }

    std::vector<assessor::ImpactRating> ratings = assessor::parse_impact_response(
        golden.dump(), assessor::Dimension::Complementarity);
    expect(ratings.size() == 9, "golden response must yield nine ratings");
    for (int i = 0; i < 9; ++i) {
        expect(ratings[i].ksa_key() == stems[i], "ratings out of order");
        expect(ratings[i].score == scores[i], "score mismatch for " + std::string(stems[i]));
        expect(ratings[i].dimension == assessor::Dimension::Complementarity,
               "dimension mismatch");
        expect(!ratings[i].justification.empty(), "justification lost in parsing");
    }

    nlohmann::json missing = golden;
    missing.erase("s2_complementarity_score");
    expect_throws<SchemaError>(
        [&] {
            assessor::parse_impact_response(missing.dump(),
                                            assessor::Dimension::Complementarity);
        },
        "missing score key");

    nlohmann::json out_of_range = golden;
    out_of_range["k1_complementarity_score"] = "6";
    expect_throws<RangeError>(
        [&] {
            assessor::parse_impact_response(out_of_range.dump(),
                                            assessor::Dimension::Complementarity);
        },
        "score of 6");

    nlohmann::json blank = golden;
    blank["a3_assessment"] = "";
    expect_throws<ContentError>(
        [&] {
            assessor::parse_impact_response(blank.dump(),
                                            assessor::Dimension::Complementarity);
        },
        "empty justification");
}

void check_pinned_scores() {
    g_run_a.emplace("accept-run-a");
    execute_full_run(g_run_a->path());
    g_run_a_ok = true;
    const fs::path out = g_run_a->path();

    extractor::KsaSet ksa = extractor::ksa_from_json(
        nlohmann::json::parse(read_file(out / "ksa/0110.json")));
    auto slot_of = [&](const std::string& phrase) {
        for (const auto& item : ksa.items) {
            if (lower(item.statement).find(lower(phrase)) != std::string::npos) {
                return std::make_pair(item.category, item.slot);
            }
        }
        throw CheckFail("no 0110 statement mentions '" + phrase + "'");
    };

    assessor::SeriesAssessment a0110 = assessor::assessment_from_json(
        nlohmann::json::parse(read_file(out / "assess/0110.json")));
    auto score_of = [&](assessor::Dimension d, const std::string& phrase) {
        auto [cat, slot] = slot_of(phrase);
        for (const auto& r : a0110.ratings) {
            if (r.dimension == d && r.category == cat && r.slot == slot) return r.score;
        }
        throw CheckFail("no rating found for '" + phrase + "'");
    };

    expect(score_of(assessor::Dimension::Complementarity, "Data Analysis") == 5,
           "0110 Data Analysis complementarity != 5");
    expect(score_of(assessor::Dimension::Substitutivity, "Data Analysis") == 4,
           "0110 Data Analysis substitutivity != 4");
    expect(score_of(assessor::Dimension::Complementarity, "Economic Principles") == 4,
           "0110 Economic Principles complementarity != 4");
    expect(score_of(assessor::Dimension::Substitutivity, "Economic Principles") == 2,
           "0110 Economic Principles substitutivity != 2");
    expect(score_of(assessor::Dimension::Complementarity, "Economic Institutions") == 3,
           "0110 Economic Institutions complementarity != 3");
    expect(score_of(assessor::Dimension::Augmentation, "Economic Institutions") == 2,
           "0110 Economic Institutions augmentation != 2");

    assessor::SeriesAssessment a7420 = assessor::assessment_from_json(
        nlohmann::json::parse(read_file(out / "assess/7420.json")));
    expect_near(a7420.dim_avg(assessor::Dimension::Substitutivity), 1.0, 1e-9,
                "7420 substitutivity average");

    assessor::SeriesAssessment a0084 = assessor::assessment_from_json(
        nlohmann::json::parse(read_file(out / "assess/0084.json")));
    expect_near(a0084.dim_avg(assessor::Dimension::Complementarity), 2.0, 1e-9,
                "0084 complementarity average");
    expect_near(a0084.dim_avg(assessor::Dimension::Augmentation), 2.0, 1e-9,
                "0084 augmentation average");
    expect_near(a0084.dim_avg(assessor::Dimension::Substitutivity), 1.0, 1e-9,
                "0084 substitutivity average");
}

void check_aggregate_orderings() {
    expect(g_run_a_ok, "pipeline run unavailable (criterion 6 failed earlier)");
    const fs::path report = g_run_a->path() / "report";

    // stats_overall.csv: plain CSV, no quoting in the first two columns.
    std::map<std::pair<std::string, std::string>, double> mean_by_dim_cat;
    {
        std::istringstream in(read_file(report / "stats_overall.csv"));
        std::string line;
        std::getline(in, line);  // header
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            std::istringstream cells(line);
            std::string dim, cat, mean;
            std::getline(cells, dim, ',');
            std::getline(cells, cat, ',');
            std::getline(cells, mean, ',');
            mean_by_dim_cat[{dim, cat}] = std::stod(mean);
        }
    }
    expect(mean_by_dim_cat.size() == 9, "stats_overall.csv must have nine data rows");
    for (const char* cat : {"Knowledge", "Skills", "Abilities"}) {
        double c = mean_by_dim_cat.at({"Complementarity", cat});
        double a = mean_by_dim_cat.at({"Augmentation", cat});
        double s = mean_by_dim_cat.at({"Substitutivity", cat});
        expect(c > a, std::string(cat) + ": complementarity mean not above augmentation");
        expect(a > s, std::string(cat) + ": augmentation mean not above substitutivity");
    }

    // stats_family.csv: the trade family name is quoted because it contains
    // commas, so locate rows by their exact prefixes.
    std::string family_csv = read_file(report / "stats_family.csv");
    auto mean_after = [&](const std::string& prefix) {
        std::size_t at = family_csv.find(prefix);
        expect(at != std::string::npos, "stats_family.csv row missing: " + prefix);
        std::size_t begin = at + prefix.size();
        std::size_t end = family_csv.find(',', begin);
        return std::stod(family_csv.substr(begin, end - begin));
    };
    double wc = mean_after("White Collar,Complementarity,");
    double tcl = mean_after("\"Trade, Craft and Labor\",Complementarity,");
    expect(wc > tcl,
           "white-collar complementarity mean (" + std::to_string(wc) +
               ") not above trade/craft/labor (" + std::to_string(tcl) + ")");
}

void check_describe_oracle() {
    std::mt19937 rng(777);
    std::uniform_int_distribution<int> len_dist(1, 60);
    std::uniform_real_distribution<double> val_dist(-1000.0, 1000.0);

    auto oracle_quantile = [](const std::vector<double>& sorted, double p) {
        double h = static_cast<double>(sorted.size() - 1) * p;
        std::size_t lo = static_cast<std::size_t>(std::floor(h));
        std::size_t hi = static_cast<std::size_t>(std::ceil(h));
        double frac = h - static_cast<double>(lo);
        return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
    };

    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<double> values(len_dist(rng));
        for (auto& v : values) v = val_dist(rng);

        analytics::DescriptiveStats got = analytics::describe(values);

        double mean = std::accumulate(values.begin(), values.end(), 0.0) /
                      static_cast<double>(values.size());
        double sd = 0.0;
        if (values.size() > 1) {
            double ss = 0.0;
            for (double v : values) ss += (v - mean) * (v - mean);
            sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
        }
        std::vector<double> sorted = values;
        std::sort(sorted.begin(), sorted.end());

        std::string label = "trial " + std::to_string(trial);
        expect_near(got.mean, mean, 1e-9, label + " mean");
        expect_near(got.sd, sd, 1e-9, label + " sd");
        expect_near(got.min, sorted.front(), 1e-9, label + " min");
        expect_near(got.q1, oracle_quantile(sorted, 0.25), 1e-9, label + " q1");
        expect_near(got.median, oracle_quantile(sorted, 0.5), 1e-9, label + " median");
        expect_near(got.q3, oracle_quantile(sorted, 0.75), 1e-9, label + " q3");
        expect_near(got.max, sorted.back(), 1e-9, label + " max");
        expect(got.n == values.size(), label + " n");
    }
}

void check_reproducibility() {
    expect(g_run_a_ok, "pipeline run unavailable (criterion 6 failed earlier)");
    g_run_b.emplace("accept-run-b");
    execute_full_run(g_run_b->path());

    for (const char* sub : {"ksa", "assess"}) {
        auto tree_a = snapshot_tree(g_run_a->path() / sub);
        auto tree_b = snapshot_tree(g_run_b->path() / sub);
        expect(!tree_a.empty(), std::string(sub) + "/ is empty");
        expect(tree_a.size() == tree_b.size(),
               std::string(sub) + "/ file sets differ between runs");
        for (const auto& [rel, bytes] : tree_a) {
            auto it = tree_b.find(rel);
            expect(it != tree_b.end(), sub + ("/" + rel) + " missing from second run");
            expect(bytes == it->second, sub + ("/" + rel) + " differs between runs");
        }
    }

    for (const char* name :
         {"stats_overall.csv", "stats_family.csv", "rankings_complementarity.csv",
          "rankings_augmentation.csv", "rankings_substitutivity.csv"}) {
        std::string a = read_file(g_run_a->path() / "report" / name);
        std::string b = read_file(g_run_b->path() / "report" / name);
        expect(a == b, std::string("report/") + name + " differs between runs");
    }
}

}  // namespace

int main() {
    criterion(1, "token windows stay within size, stride, and coverage bounds",
              check_chunker);
    criterion(2, "exact search matches brute force and ANN recall clears 0.95",
              check_vector_search);
    criterion(3, "prompt templates render with their scale anchors", check_prompt_anchors);
    criterion(4, "a three-series scripted run makes exactly twelve generation calls",
              check_generation_call_count);
    criterion(5, "the impact parser accepts golden JSON and rejects malformed variants",
              check_impact_parser);
    criterion(6, "persisted assessments reproduce the pinned series scores",
              check_pinned_scores);
    criterion(7, "aggregate tables order dimensions and families as expected",
              check_aggregate_orderings);
    criterion(8, "descriptive statistics agree with an independent oracle",
              check_describe_oracle);
    criterion(9, "scripted end-to-end runs are byte-for-byte reproducible",
              check_reproducibility);

    if (g_failures == 0) {
        std::printf("all 9 acceptance criteria passed\n");
        return 0;
    }
    std::printf("%d acceptance criteria failed\n", g_failures);
    return 1;
}
