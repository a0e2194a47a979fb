// End-to-end tests for the pipeline runner: config loading, roster parsing,
// knowledge-base builds, batch assessment with resume/force semantics,
// reporting, and byte-level reproducibility of scripted runs.
#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
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
using Catch::Matchers::ContainsSubstring;

namespace {

// Restores an environment variable to its prior state on scope exit.
class EnvGuard {
public:
    EnvGuard(std::string name, const char* value) : name_(std::move(name)) {
        const char* old = std::getenv(name_.c_str());
        if (old != nullptr) saved_ = old;
        if (value != nullptr) {
            ::setenv(name_.c_str(), value, 1);
        } else {
            ::unsetenv(name_.c_str());
        }
    }
    ~EnvGuard() {
        if (saved_.has_value()) {
            ::setenv(name_.c_str(), saved_->c_str(), 1);
        } else {
            ::unsetenv(name_.c_str());
        }
    }
    EnvGuard(const EnvGuard&) = delete;
    EnvGuard& operator=(const EnvGuard&) = delete;

private:
    std::string name_;
    std::optional<std::string> saved_;
};

fs::path write_config(const fs::path& dir, const std::string& body) {
    fs::path p = dir / "config.json";
    write_file(p, body);
    return p;
}

// Loads the shipped fixture config and redirects output to `out_dir`.
orchestrator::RunConfig fixture_config(const fs::path& out_dir) {
    orchestrator::RunConfig cfg = orchestrator::load_config(fixtures_dir() / "config.json");
    cfg.output_dir = out_dir;
    return cfg;
}

std::size_t count_regular_files(const fs::path& dir) {
    if (!fs::exists(dir)) return 0;
    std::size_t n = 0;
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
        if (e.is_regular_file()) ++n;
    }
    return n;
}

std::size_t line_count(const std::string& text) {
    return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

// Collects path -> bytes for every regular file under dir, keyed relative.
std::map<std::string, std::string> snapshot_tree(const fs::path& dir) {
    std::map<std::string, std::string> out;
    if (!fs::exists(dir)) return out;
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
        if (!e.is_regular_file()) continue;
        out[fs::relative(e.path(), dir).generic_string()] = read_file(e.path());
    }
    return out;
}

}  // namespace

TEST_CASE("config loader resolves relative paths against the config directory") {
    TempDir tmp("ksarag-cfg");
    fs::path p = write_config(tmp.path(), R"({"fixture_dir": "responses"})");
    orchestrator::RunConfig cfg = orchestrator::load_config(p);

    CHECK(cfg.kb_occupational_dir == tmp.path() / "kb_occupational");
    CHECK(cfg.kb_ai_capability_dir == tmp.path() / "kb_ai_capability");
    CHECK(cfg.series_roster == tmp.path() / "roster.csv");
    CHECK(cfg.family_map == tmp.path() / "families.csv");
    CHECK(cfg.prompt_dir == tmp.path() / "prompts");
    CHECK(cfg.fixture_dir == tmp.path() / "responses");
    CHECK(cfg.output_dir == tmp.path() / "out");

    CHECK(cfg.backend == orchestrator::BackendKind::Scripted);
    CHECK(cfg.chunk_size == 500);
    CHECK(cfg.chunk_overlap == 100);
    CHECK(cfg.context_budget == 3500);
    CHECK(cfg.temperature == 1.0);
    CHECK(cfg.concurrency == 4);
    CHECK(cfg.model_name == "gpt-4o");
    CHECK(cfg.embedding.provider == "hashed");
    CHECK(cfg.embedding.dim == 256);
}

TEST_CASE("config loader keeps absolute paths untouched") {
    TempDir tmp("ksarag-cfg-abs");
    fs::path p = write_config(tmp.path(),
                              R"({"fixture_dir": "responses", "output_dir": "/var/tmp/ksarag-out"})");
    orchestrator::RunConfig cfg = orchestrator::load_config(p);
    CHECK(cfg.output_dir == fs::path("/var/tmp/ksarag-out"));
}

TEST_CASE("config loader rejects malformed input") {
    TempDir tmp("ksarag-cfg-bad");

    SECTION("missing file") {
        CHECK_THROWS_AS(orchestrator::load_config(tmp.path() / "nope.json"), ConfigError);
    }
    SECTION("invalid JSON") {
        fs::path p = write_config(tmp.path(), "{");
        CHECK_THROWS_AS(orchestrator::load_config(p), ConfigError);
    }
    SECTION("top level is not an object") {
        fs::path p = write_config(tmp.path(), "[]");
        CHECK_THROWS_AS(orchestrator::load_config(p), ConfigError);
    }
    SECTION("unknown key") {
        fs::path p = write_config(tmp.path(), R"({"fixture_dir": "r", "surprise": 1})");
        CHECK_THROWS_WITH(orchestrator::load_config(p), ContainsSubstring("not recognized"));
    }
    SECTION("api_key must come from the environment, not the file") {
        fs::path p = write_config(tmp.path(), R"({"fixture_dir": "r", "api_key": "sk-x"})");
        CHECK_THROWS_AS(orchestrator::load_config(p), ConfigError);
    }
}

TEST_CASE("config validation rejects out-of-range values") {
    TempDir tmp("ksarag-cfg-val");

    SECTION("unknown backend") {
        fs::path p = write_config(tmp.path(), R"({"backend": "teapot"})");
        CHECK_THROWS_AS(orchestrator::load_config(p), ConfigError);
    }
    SECTION("unknown index mode") {
        fs::path p = write_config(tmp.path(), R"({"fixture_dir": "r", "index_mode": "fuzzy"})");
        CHECK_THROWS_AS(orchestrator::load_config(p), ConfigError);
    }
    SECTION("temperature outside range") {
        fs::path p = write_config(tmp.path(), R"({"fixture_dir": "r", "temperature": 3.0})");
        CHECK_THROWS_AS(orchestrator::load_config(p), ConfigError);
    }
    SECTION("concurrency below one") {
        fs::path p = write_config(tmp.path(), R"({"fixture_dir": "r", "concurrency": 0})");
        CHECK_THROWS_AS(orchestrator::load_config(p), ConfigError);
    }
    SECTION("scripted backend requires a fixture directory") {
        fs::path p = write_config(tmp.path(), "{}");
        CHECK_THROWS_WITH(orchestrator::load_config(p), ContainsSubstring("fixture_dir"));
    }
    SECTION("chunk overlap must be smaller than chunk size") {
        fs::path p = write_config(
            tmp.path(), R"({"fixture_dir": "r", "chunk_size": 400, "chunk_overlap": 400})");
        CHECK_THROWS_AS(orchestrator::load_config(p), ConfigError);
    }
    SECTION("embedding dim too small") {
        fs::path p = write_config(tmp.path(),
                                  R"({"fixture_dir": "r", "embedding": {"dim": 4}})");
        CHECK_THROWS_AS(orchestrator::load_config(p), ConfigError);
    }
    SECTION("unknown embedding provider") {
        fs::path p = write_config(
            tmp.path(), R"({"fixture_dir": "r", "embedding": {"provider": "quantum"}})");
        CHECK_THROWS_AS(orchestrator::load_config(p), ConfigError);
    }
}

TEST_CASE("environment variables supply endpoint settings") {
    TempDir tmp("ksarag-cfg-env");
    fs::path p = write_config(tmp.path(),
                              R"({"fixture_dir": "responses", "api_base": "http://file.example"})");

    SECTION("file value used when the environment is empty") {
        EnvGuard base("KSARAG_API_BASE", nullptr);
        EnvGuard key("KSARAG_API_KEY", nullptr);
        orchestrator::RunConfig cfg = orchestrator::load_config(p);
        CHECK(cfg.api_base == "http://file.example");
        CHECK(cfg.api_key.empty());
    }

    SECTION("environment wins over the file") {
        EnvGuard base("KSARAG_API_BASE", "http://env.example:9");
        EnvGuard key("KSARAG_API_KEY", "sk-test");
        orchestrator::RunConfig cfg = orchestrator::load_config(p);
        CHECK(cfg.api_base == "http://env.example:9");
        CHECK(cfg.api_key == "sk-test");

        // Credentials and endpoints never leak into the run snapshot.
        nlohmann::json snap = cfg.snapshot();
        CHECK_FALSE(snap.contains("api_key"));
        CHECK_FALSE(snap.contains("api_base"));
        CHECK(snap["backend"] == "scripted");
        CHECK(snap["model_name"] == "gpt-4o");
    }
}

TEST_CASE("overrides replace backend, fixture directory, and output directory") {
    TempDir tmp("ksarag-cfg-ovr");
    fs::path p = write_config(tmp.path(), R"({"fixture_dir": "responses"})");
    orchestrator::RunConfig cfg = orchestrator::load_config(p);

    orchestrator::Overrides o;
    o.backend = orchestrator::BackendKind::Live;
    o.fixture_dir = tmp.path() / "other-fixtures";
    o.output_dir = tmp.path() / "custom-out";
    orchestrator::apply_overrides(cfg, o);

    CHECK(cfg.backend == orchestrator::BackendKind::Live);
    CHECK(cfg.fixture_dir == tmp.path() / "other-fixtures");
    CHECK(cfg.output_dir == tmp.path() / "custom-out");

    // Clearing the fixture dir while scripted must fail re-validation.
    orchestrator::RunConfig cfg2 = orchestrator::load_config(p);
    orchestrator::Overrides bad;
    bad.fixture_dir = fs::path();
    CHECK_THROWS_AS(orchestrator::apply_overrides(cfg2, bad), ConfigError);
}

TEST_CASE("roster loads series entries and resolves description paths") {
    std::vector<orchestrator::RosterEntry> roster =
        orchestrator::load_roster(fixtures_dir() / "roster.csv");
    REQUIRE(roster.size() == 24);
    CHECK(roster[0].series_code == "0110");
    CHECK(roster[0].series_title == "Economist");
    CHECK(roster[0].description_path == fixtures_dir() / "descriptions/0110.txt");
    CHECK(fs::exists(roster[0].description_path));

    // Every code is a unique four-digit string.
    for (const auto& e : roster) {
        CHECK(e.series_code.size() == 4);
        CHECK(e.series_code.find_first_not_of("0123456789") == std::string::npos);
    }
}

TEST_CASE("roster parses quoted titles and headerless files") {
    TempDir tmp("ksarag-roster");

    SECTION("quoted title containing a comma") {
        fs::path p = tmp.path() / "roster.csv";
        write_file(p,
                   "series_code,series_title,description_path\n"
                   "0042,\"Analyst, Senior\",desc/0042.txt\n");
        auto roster = orchestrator::load_roster(p);
        REQUIRE(roster.size() == 1);
        CHECK(roster[0].series_title == "Analyst, Senior");
        CHECK(roster[0].description_path == tmp.path() / "desc/0042.txt");
    }

    SECTION("file without a header row") {
        fs::path p = tmp.path() / "roster.csv";
        write_file(p,
                   "0042,Analyst,desc/0042.txt\n"
                   "0043,Auditor,desc/0043.txt\n");
        auto roster = orchestrator::load_roster(p);
        REQUIRE(roster.size() == 2);
        CHECK(roster[0].series_code == "0042");
        CHECK(roster[1].series_code == "0043");
    }
}

TEST_CASE("roster rejects malformed rows") {
    TempDir tmp("ksarag-roster-bad");
    fs::path p = tmp.path() / "roster.csv";

    SECTION("wrong field count") {
        write_file(p, "series_code,series_title,description_path\n0042,Analyst\n");
        CHECK_THROWS_WITH(orchestrator::load_roster(p), ContainsSubstring("expected 3 fields"));
    }
    SECTION("code too short") {
        write_file(p, "12,Analyst,d.txt\n");
        CHECK_THROWS_AS(orchestrator::load_roster(p), ConfigError);
    }
    SECTION("code with letters") {
        write_file(p, "01a0,Analyst,d.txt\n");
        CHECK_THROWS_AS(orchestrator::load_roster(p), ConfigError);
    }
    SECTION("duplicate code") {
        write_file(p, "0042,Analyst,d.txt\n0042,Other,e.txt\n");
        CHECK_THROWS_AS(orchestrator::load_roster(p), ConfigError);
    }
    SECTION("empty roster") {
        write_file(p, "series_code,series_title,description_path\n");
        CHECK_THROWS_WITH(orchestrator::load_roster(p), ContainsSubstring("lists no series"));
    }
    SECTION("missing file") {
        CHECK_THROWS_AS(orchestrator::load_roster(tmp.path() / "nope.csv"), ConfigError);
    }
}

TEST_CASE("knowledge bases build deterministically") {
    TempDir out_a("ksarag-kb-a");
    TempDir out_b("ksarag-kb-b");

    orchestrator::Runner runner_a(fixture_config(out_a.path()));
    runner_a.build_kb();
    orchestrator::Runner runner_b(fixture_config(out_b.path()));
    runner_b.build_kb();

    const char* names[] = {"kb/occupational.manifest.jsonl", "kb/occupational.index",
                           "kb/ai_capability.manifest.jsonl", "kb/ai_capability.index"};
    for (const char* name : names) {
        fs::path pa = out_a.path() / name;
        fs::path pb = out_b.path() / name;
        INFO(name);
        REQUIRE(fs::exists(pa));
        REQUIRE(fs::exists(pb));
        CHECK(read_file(pa) == read_file(pb));
    }

    // The manifest holds one JSON chunk record per line.
    std::string manifest = read_file(out_a.path() / "kb/occupational.manifest.jsonl");
    REQUIRE(line_count(manifest) > 0);
    std::istringstream in(manifest);
    std::string first_line;
    std::getline(in, first_line);
    nlohmann::json rec = nlohmann::json::parse(first_line);
    CHECK(rec.contains("doc_id"));
    CHECK(rec.contains("ordinal"));
    CHECK(rec.contains("text"));
}

TEST_CASE("scripted assessment processes the roster and resumes") {
    TempDir out("ksarag-assess");
    orchestrator::RunConfig cfg = fixture_config(out.path());
    orchestrator::Runner runner(cfg);
    runner.build_kb();

    genclient::ScriptedBackend first(cfg.fixture_dir);
    orchestrator::AssessResult res = runner.assess(false, std::nullopt, &first);
    REQUIRE(res.outcomes.size() == 24);
    for (const auto& o : res.outcomes) {
        INFO(o.series_code << ": " << o.error);
        CHECK(o.status == orchestrator::SeriesStatus::Ok);
    }
    CHECK(res.exit_code() == 0);
    // Four generations per series: one extraction plus three impact calls.
    CHECK(first.calls() == 96);

    CHECK(count_regular_files(out.path() / "ksa") == 24);
    CHECK(count_regular_files(out.path() / "assess") == 24);
    CHECK(count_regular_files(out.path() / "audit") == 96);

    // Spot-check one persisted assessment round-trips with sane averages.
    nlohmann::json doc = nlohmann::json::parse(read_file(out.path() / "assess/0110.json"));
    assessor::SeriesAssessment a = assessor::assessment_from_json(doc);
    CHECK(a.series_code == "0110");
    REQUIRE(a.ratings.size() == 27);
    CHECK(a.dim_avg(assessor::Dimension::Complementarity) ==
          Catch::Approx(35.0 / 9.0).margin(1e-9));
    CHECK(a.dim_avg(assessor::Dimension::Augmentation) == Catch::Approx(3.0).margin(1e-9));
    CHECK(a.dim_avg(assessor::Dimension::Substitutivity) ==
          Catch::Approx(21.0 / 9.0).margin(1e-9));

    nlohmann::json manifest =
        nlohmann::json::parse(read_file(out.path() / "run_manifest.json"));
    CHECK(manifest["series"].size() == 24);
    CHECK(manifest["series"]["0110"]["status"] == "ok");
    CHECK(manifest["config"]["backend"] == "scripted");
    CHECK_FALSE(manifest["config"].contains("api_key"));
    CHECK(manifest["files"].contains("ksa/0110.json"));
    CHECK(manifest["files"].contains("assess/0110.json"));
    CHECK(manifest.contains("finished_at"));

    SECTION("second run skips existing assessments") {
        genclient::ScriptedBackend second(cfg.fixture_dir);
        orchestrator::AssessResult res2 = runner.assess(false, std::nullopt, &second);
        REQUIRE(res2.outcomes.size() == 24);
        for (const auto& o : res2.outcomes) {
            CHECK(o.status == orchestrator::SeriesStatus::Skipped);
        }
        CHECK(res2.exit_code() == 0);
        CHECK(second.calls() == 0);
    }

    SECTION("force reruns every series") {
        genclient::ScriptedBackend forced(cfg.fixture_dir);
        orchestrator::AssessResult res3 = runner.assess(true, std::nullopt, &forced);
        REQUIRE(res3.outcomes.size() == 24);
        for (const auto& o : res3.outcomes) {
            CHECK(o.status == orchestrator::SeriesStatus::Ok);
        }
        CHECK(forced.calls() == 96);
    }
}

TEST_CASE("assessment can target a single series") {
    TempDir out("ksarag-single");
    orchestrator::RunConfig cfg = fixture_config(out.path());
    orchestrator::Runner runner(cfg);
    runner.build_kb();

    genclient::ScriptedBackend backend(cfg.fixture_dir);
    orchestrator::AssessResult res = runner.assess(false, std::string("0110"), &backend);
    REQUIRE(res.outcomes.size() == 1);
    CHECK(res.outcomes[0].series_code == "0110");
    CHECK(res.outcomes[0].status == orchestrator::SeriesStatus::Ok);
    CHECK(backend.calls() == 4);
    CHECK(count_regular_files(out.path() / "ksa") == 1);
    CHECK(count_regular_files(out.path() / "assess") == 1);

    CHECK_THROWS_WITH(runner.assess(false, std::string("9999"), &backend),
                      ContainsSubstring("is not in the roster"));
}

TEST_CASE("assessment before building knowledge bases fails cleanly") {
    TempDir out("ksarag-nobuild");
    orchestrator::Runner runner(fixture_config(out.path()));
    CHECK_THROWS_WITH(runner.assess(), ContainsSubstring("run build-kb first"));
}

TEST_CASE("per-series failures do not poison the batch") {
    TempDir out("ksarag-isolate");
    TempDir aux("ksarag-isolate-aux");

    // 9998 has a description on disk but no scripted responses, so its
    // extraction fails while 0110 proceeds normally.
    write_file(aux.path() / "9998.txt", "Ghost Series\n\nA series with no fixtures.\n");
    fs::path roster = aux.path() / "roster.csv";
    write_file(roster, "series_code,series_title,description_path\n"
                       "0110,Economist," + (fixtures_dir() / "descriptions/0110.txt").string() +
                       "\n"
                       "9998,Ghost Series," + (aux.path() / "9998.txt").string() + "\n");

    orchestrator::RunConfig cfg = fixture_config(out.path());
    cfg.series_roster = roster;
    orchestrator::Runner runner(cfg);
    runner.build_kb();

    orchestrator::AssessResult res = runner.assess();
    REQUIRE(res.outcomes.size() == 2);
    CHECK(res.outcomes[0].series_code == "0110");
    CHECK(res.outcomes[0].status == orchestrator::SeriesStatus::Ok);
    CHECK(res.outcomes[1].series_code == "9998");
    CHECK(res.outcomes[1].status == orchestrator::SeriesStatus::ExtractFailed);
    CHECK_THAT(res.outcomes[1].error, ContainsSubstring("9998_ksa_extract"));
    CHECK(res.exit_code() == 1);

    CHECK(fs::exists(out.path() / "ksa/0110.json"));
    CHECK(fs::exists(out.path() / "assess/0110.json"));
    CHECK_FALSE(fs::exists(out.path() / "ksa/9998.json"));
    CHECK_FALSE(fs::exists(out.path() / "assess/9998.json"));

    std::string manifest = read_file(out.path() / "run_manifest.json");
    CHECK_THAT(manifest, ContainsSubstring("extract_failed"));
}

TEST_CASE("a failing impact dimension yields a partial assessment") {
    TempDir out("ksarag-partial");
    TempDir aux("ksarag-partial-aux");

    // Mirror the 0110 fixtures but replace the augmentation response with
    // prose that can never parse, even after the JSON-only retry.
    fs::path fixdir = aux.path() / "responses";
    fs::create_directories(fixdir);
    for (const char* key : {"ksa_extract", "complementarity", "substitutivity"}) {
        std::string name = std::string("0110_") + key + ".json";
        fs::copy_file(fixtures_dir() / "responses" / name, fixdir / name);
    }
    write_file(fixdir / "0110_augmentation.json", "I would rather chat about the weather.\n");

    fs::path roster = aux.path() / "roster.csv";
    write_file(roster, "series_code,series_title,description_path\n"
                       "0110,Economist," + (fixtures_dir() / "descriptions/0110.txt").string() +
                       "\n");

    orchestrator::RunConfig cfg = fixture_config(out.path());
    cfg.series_roster = roster;
    cfg.fixture_dir = fixdir;
    orchestrator::Runner runner(cfg);
    runner.build_kb();

    genclient::ScriptedBackend backend(cfg.fixture_dir);
    orchestrator::AssessResult res = runner.assess(false, std::nullopt, &backend);
    REQUIRE(res.outcomes.size() == 1);
    CHECK(res.outcomes[0].status == orchestrator::SeriesStatus::AssessPartial);
    CHECK_THAT(res.outcomes[0].error, ContainsSubstring("augmentation"));
    CHECK(res.exit_code() == 1);
    // Extraction (1) + complementarity (1) + augmentation attempt and retry (2).
    CHECK(backend.calls() == 4);

    CHECK(fs::exists(out.path() / "ksa/0110.json"));
    CHECK_FALSE(fs::exists(out.path() / "assess/0110.json"));
    CHECK(fs::exists(out.path() / "audit/0110_augmentation.txt"));
    CHECK(fs::exists(out.path() / "audit/0110_augmentation_retry.txt"));
}

TEST_CASE("report aggregates assessments into CSV tables and a summary") {
    TempDir out("ksarag-report");
    orchestrator::RunConfig cfg = fixture_config(out.path());
    orchestrator::Runner runner(cfg);

    SECTION("report before assess fails cleanly") {
        CHECK_THROWS_WITH(runner.report(), ContainsSubstring("run assess first"));
    }

    SECTION("full pipeline report") {
        runner.build_kb();
        genclient::ScriptedBackend backend(cfg.fixture_dir);
        REQUIRE(runner.assess(false, std::nullopt, &backend).exit_code() == 0);
        runner.report();

        fs::path report = out.path() / "report";
        std::string overall = read_file(report / "stats_overall.csv");
        CHECK(line_count(overall) == 10);  // header + 3 dimensions x 3 categories
        CHECK_THAT(overall,
                   ContainsSubstring("dimension,category,Mean,SD,Min,Q1,Median,Q3,Max"));
        CHECK_THAT(overall, ContainsSubstring("Complementarity,Knowledge,"));
        CHECK_THAT(overall, ContainsSubstring("Substitutivity,Abilities,"));

        std::string family = read_file(report / "stats_family.csv");
        CHECK(line_count(family) == 7);  // header + 2 families x 3 dimensions
        CHECK_THAT(family, ContainsSubstring("White Collar,Complementarity,"));
        CHECK_THAT(family, ContainsSubstring("\"Trade, Craft and Labor\",Substitutivity,"));

        for (const char* dim : {"complementarity", "augmentation", "substitutivity"}) {
            std::string rankings =
                read_file(report / (std::string("rankings_") + dim + ".csv"));
            INFO(dim);
            CHECK(line_count(rankings) == 25);  // header + 24 series
            CHECK_THAT(rankings,
                       ContainsSubstring("rank,series_code,series_title,dimension,value"));
        }

        nlohmann::json summary = nlohmann::json::parse(read_file(report / "summary.json"));
        CHECK(summary["n_series"] == 24);
        CHECK(summary["family_counts"]["white_collar"] == 20);
        CHECK(summary["family_counts"]["trade_craft_labor"] == 4);
        double c = summary["dimension_means"]["complementarity"].get<double>();
        double a = summary["dimension_means"]["augmentation"].get<double>();
        double s = summary["dimension_means"]["substitutivity"].get<double>();
        CHECK(c > a);
        CHECK(a > s);
    }
}

TEST_CASE("scripted end-to-end runs are byte-for-byte reproducible") {
    TempDir out_a("ksarag-repro-a");
    TempDir out_b("ksarag-repro-b");

    orchestrator::Runner runner_a(fixture_config(out_a.path()));
    REQUIRE(runner_a.run_all().exit_code() == 0);
    orchestrator::Runner runner_b(fixture_config(out_b.path()));
    REQUIRE(runner_b.run_all().exit_code() == 0);

    for (const char* sub : {"ksa", "assess", "report"}) {
        auto tree_a = snapshot_tree(out_a.path() / sub);
        auto tree_b = snapshot_tree(out_b.path() / sub);
        INFO(sub);
        REQUIRE_FALSE(tree_a.empty());
        REQUIRE(tree_a.size() == tree_b.size());
        for (const auto& [rel, bytes] : tree_a) {
            INFO(rel);
            REQUIRE(tree_b.count(rel) == 1);
            CHECK(bytes == tree_b.at(rel));
        }
    }
}
