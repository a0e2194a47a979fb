#pragma once
// Corpus-wide statistics and rankings over a set of series assessments:
// descriptive stats per dimension × KSA category, the white-collar vs
// trade-craft-labor family split, and per-dimension occupation rankings.
// Quartiles use linear interpolation between closest ranks (the common
// type-7 rule); SD is the sample (n-1) definition. Every emitted number is
// printed with two decimals, rounded half-up.

#include "ksarag/assessor.hpp"
#include "ksarag/errors.hpp"
#include "ksarag/text.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace ksarag::analytics {

struct DescriptiveStats {
    double mean = 0.0;
    double sd = 0.0;
    double min = 0.0;
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double max = 0.0;
    std::size_t n = 0;
};

namespace detail {

// Type-7 quantile: h = (n-1)p, linear interpolation between floor(h) and the
// next order statistic.
inline double quantile_sorted(const std::vector<double>& sorted, double p) {
    const std::size_t n = sorted.size();
    if (n == 1) return sorted[0];
    double h = static_cast<double>(n - 1) * p;
    std::size_t lo = static_cast<std::size_t>(h);
    if (lo >= n - 1) return sorted[n - 1];
    double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace detail

inline DescriptiveStats describe(std::vector<double> values) {
    if (values.empty()) throw ParameterError("describe: empty input");
    for (double v : values) {
        if (!std::isfinite(v)) throw ParameterError("describe: non-finite value");
    }
    std::sort(values.begin(), values.end());

    DescriptiveStats s;
    s.n = values.size();
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(s.n);
    if (s.n >= 2) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        s.sd = std::sqrt(ss / static_cast<double>(s.n - 1));
    }
    s.min = values.front();
    s.max = values.back();
    s.q1 = detail::quantile_sorted(values, 0.25);
    s.median = detail::quantile_sorted(values, 0.5);
    s.q3 = detail::quantile_sorted(values, 0.75);
    return s;
}

enum class Family { WhiteCollar, TradeCraftLabor, Unclassified };

inline const char* family_key(Family f) {
    switch (f) {
        case Family::WhiteCollar: return "white_collar";
        case Family::TradeCraftLabor: return "trade_craft_labor";
        case Family::Unclassified: return "unclassified";
    }
    throw ParameterError("unknown family");
}

// Label used in report rows (mirrors the published table wording).
inline const char* family_label(Family f) {
    switch (f) {
        case Family::WhiteCollar: return "White Collar";
        case Family::TradeCraftLabor: return "Trade, Craft and Labor";
        case Family::Unclassified: return "Unclassified";
    }
    throw ParameterError("unknown family");
}

// series_code -> family, loaded from a two-column CSV data file. Unknown
// series never default silently: lookups answer Unclassified and the caller
// decides how loudly to complain.
class FamilyMap {
public:
    static FamilyMap load_csv(const std::filesystem::path& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw ConfigError("cannot read family map: " + path.string());
        FamilyMap fm;
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            std::string t = text::trim(line);
            if (t.empty() || t[0] == '#') continue;
            if (line_no == 1 && t.rfind("series_code", 0) == 0) continue;  // header
            std::size_t comma = t.find(',');
            if (comma == std::string::npos) {
                throw ConfigError("family map " + path.string() + " line " +
                                  std::to_string(line_no) + ": expected 'code,family'");
            }
            std::string code = text::trim(t.substr(0, comma));
            std::string fam = text::to_lower(text::trim(t.substr(comma + 1)));
            Family family;
            if (fam == "white_collar") {
                family = Family::WhiteCollar;
            } else if (fam == "trade_craft_labor") {
                family = Family::TradeCraftLabor;
            } else {
                throw ConfigError("family map " + path.string() + " line " +
                                  std::to_string(line_no) + ": unknown family '" + fam + "'");
            }
            fm.map_[code] = family;
        }
        return fm;
    }

    Family lookup(const std::string& series_code) const {
        auto it = map_.find(series_code);
        return it == map_.end() ? Family::Unclassified : it->second;
    }

    std::size_t size() const { return map_.size(); }

private:
    std::map<std::string, Family> map_;
};

struct OverallStatsRow {
    assessor::Dimension dimension = assessor::Dimension::Complementarity;
    extractor::KsaCategory category = extractor::KsaCategory::Knowledge;
    DescriptiveStats stats;
};

// Nine rows (dimension-major, then Knowledge/Skills/Abilities) of stats over
// the per-series category means.
inline std::vector<OverallStatsRow> overall_stats(
    const std::vector<assessor::SeriesAssessment>& assessments) {
    if (assessments.empty()) throw ParameterError("overall_stats: no assessments");
    std::vector<OverallStatsRow> rows;
    for (assessor::Dimension d : assessor::kAllDimensions) {
        for (extractor::KsaCategory c : extractor::kAllCategories) {
            std::vector<double> values;
            values.reserve(assessments.size());
            for (const auto& a : assessments) values.push_back(a.category_dim_avg(c, d));
            rows.push_back(OverallStatsRow{d, c, describe(std::move(values))});
        }
    }
    return rows;
}

struct FamilyStatsRow {
    Family family = Family::WhiteCollar;
    assessor::Dimension dimension = assessor::Dimension::Complementarity;
    DescriptiveStats stats;
};

// Family-major rows of stats over per-series dimension means. Unclassified
// series are excluded with a warning; a family with no series is omitted
// with a warning rather than reported as an empty row.
inline std::vector<FamilyStatsRow> family_stats(
    const std::vector<assessor::SeriesAssessment>& assessments, const FamilyMap& families,
    std::vector<std::string>* warnings = nullptr) {
    if (assessments.empty()) throw ParameterError("family_stats: no assessments");

    std::map<Family, std::vector<const assessor::SeriesAssessment*>> grouped;
    for (const auto& a : assessments) {
        Family f = families.lookup(a.series_code);
        if (f == Family::Unclassified) {
            if (warnings != nullptr) {
                warnings->push_back("series " + a.series_code +
                                    " is unclassified; excluded from family stats");
            }
            continue;
        }
        grouped[f].push_back(&a);
    }

    std::vector<FamilyStatsRow> rows;
    for (Family f : {Family::WhiteCollar, Family::TradeCraftLabor}) {
        auto it = grouped.find(f);
        if (it == grouped.end()) {
            if (warnings != nullptr) {
                warnings->push_back(std::string("family '") + family_label(f) +
                                    "' has no assessed series; row omitted");
            }
            continue;
        }
        for (assessor::Dimension d : assessor::kAllDimensions) {
            std::vector<double> values;
            values.reserve(it->second.size());
            for (const auto* a : it->second) values.push_back(a->dim_avg(d));
            rows.push_back(FamilyStatsRow{f, d, describe(std::move(values))});
        }
    }
    return rows;
}

struct RankingRow {
    std::string series_code;
    std::string series_title;
    assessor::Dimension dimension = assessor::Dimension::Complementarity;
    double value = 0.0;
    int rank = 0;
};

// Ranks series by their dimension mean, descending; ties break by series
// code ascending. With top_n = bottom_n = 0 the full permutation is
// returned; otherwise the head and tail blocks (deduplicated when they
// overlap). An optional family filter restricts the candidate set first.
inline std::vector<RankingRow> rank(const std::vector<assessor::SeriesAssessment>& assessments,
                                    assessor::Dimension dimension,
                                    std::optional<Family> family_filter = std::nullopt,
                                    const FamilyMap* families = nullptr,
                                    std::size_t top_n = 0, std::size_t bottom_n = 0) {
    if (family_filter.has_value() && families == nullptr) {
        throw ParameterError("rank: family filter requires a family map");
    }
    std::vector<RankingRow> all;
    for (const auto& a : assessments) {
        if (family_filter.has_value() &&
            families->lookup(a.series_code) != *family_filter) {
            continue;
        }
        all.push_back(RankingRow{a.series_code, a.series_title, dimension,
                                 a.dim_avg(dimension), 0});
    }
    std::sort(all.begin(), all.end(), [](const RankingRow& x, const RankingRow& y) {
        if (x.value != y.value) return x.value > y.value;
        return x.series_code < y.series_code;
    });
    for (std::size_t i = 0; i < all.size(); ++i) all[i].rank = static_cast<int>(i + 1);

    if (top_n == 0 && bottom_n == 0) return all;
    if (top_n + bottom_n >= all.size()) return all;
    std::vector<RankingRow> out(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(top_n));
    out.insert(out.end(), all.end() - static_cast<std::ptrdiff_t>(bottom_n), all.end());
    return out;
}

// --- CSV emission ----------------------------------------------------------

// Two-decimal fixed formatting, half-up (2.445 -> "2.45"). The tiny nudge
// absorbs binary representation error so decimal-intent halves round up.
inline std::string format_2dp(double v) {
    double nudged = v * 100.0 + (v >= 0.0 ? 1e-9 : -1e-9);
    long long cents = std::llround(nudged);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%lld.%02lld", cents / 100,
                  cents < 0 ? -(cents % 100) : cents % 100);
    return buf;
}

inline std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

inline std::string stats_cells(const DescriptiveStats& s) {
    return format_2dp(s.mean) + "," + format_2dp(s.sd) + "," + format_2dp(s.min) + "," +
           format_2dp(s.q1) + "," + format_2dp(s.median) + "," + format_2dp(s.q3) + "," +
           format_2dp(s.max);
}

inline const char* category_plural(extractor::KsaCategory c) {
    switch (c) {
        case extractor::KsaCategory::Knowledge: return "Knowledge";
        case extractor::KsaCategory::Skill: return "Skills";
        case extractor::KsaCategory::Ability: return "Abilities";
    }
    throw ParameterError("unknown KSA category");
}

inline void write_stats_overall_csv(const std::filesystem::path& path,
                                    const std::vector<OverallStatsRow>& rows) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ParameterError("cannot write " + path.string());
    out << "dimension,category,Mean,SD,Min,Q1,Median,Q3,Max\n";
    for (const auto& row : rows) {
        out << assessor::dimension_name(row.dimension) << ','
            << category_plural(row.category) << ',' << stats_cells(row.stats) << '\n';
    }
}

inline void write_stats_family_csv(const std::filesystem::path& path,
                                   const std::vector<FamilyStatsRow>& rows) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ParameterError("cannot write " + path.string());
    out << "family,dimension,Mean,SD,Min,Q1,Median,Q3,Max\n";
    for (const auto& row : rows) {
        out << csv_escape(family_label(row.family)) << ','
            << assessor::dimension_name(row.dimension) << ',' << stats_cells(row.stats)
            << '\n';
    }
}

inline void write_rankings_csv(const std::filesystem::path& path,
                               const std::vector<RankingRow>& rows) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ParameterError("cannot write " + path.string());
    out << "rank,series_code,series_title,dimension,value\n";
    for (const auto& row : rows) {
        out << row.rank << ',' << csv_escape(row.series_code) << ','
            << csv_escape(row.series_title) << ',' << assessor::dimension_name(row.dimension)
            << ',' << format_2dp(row.value) << '\n';
    }
}

}  // namespace ksarag::analytics
