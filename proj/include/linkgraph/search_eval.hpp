#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "corpus.hpp"
#include "error.hpp"
#include "graph.hpp"
#include "local_metrics.hpp"
#include "parallel.hpp"

namespace linkgraph {

// Queries with at most this many matching nodes are dropped.
inline constexpr std::size_t kMinCandidates = 10;
// "Top ten" positions per list and the strict-majority vote threshold out of ten lists.
inline constexpr std::size_t kTopPositions = 10;
inline constexpr std::size_t kMajorityVotes = 6;
inline constexpr std::size_t kBucketCount = 11;

namespace text {

// Decodes one UTF-8 sequence at s[pos]; malformed input yields U+FFFD and advances one byte.
inline char32_t decode(std::string_view s, std::size_t &pos) {
    const auto lead = static_cast<unsigned char>(s[pos]);
    std::size_t len = lead < 0x80 ? 1 : (lead >> 5) == 0x6 ? 2 : (lead >> 4) == 0xE ? 3 : (lead >> 3) == 0x1E ? 4 : 0;
    if (len == 0 || pos + len > s.size()) {
        ++pos;
        return U'\uFFFD';
    }
    char32_t cp = len == 1 ? lead : lead & (0xFF >> (len + 1));
    for (std::size_t k = 1; k < len; ++k) {
        const auto b = static_cast<unsigned char>(s[pos + k]);
        if ((b & 0xC0) != 0x80) {
            ++pos;
            return U'\uFFFD';
        }
        cp = (cp << 6) | (b & 0x3F);
    }
    pos += len;
    return cp;
}

inline void encode(char32_t cp, std::string &out) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

// Word characters: ASCII letters and digits, plus every non-ASCII code point outside the
// Latin-1 punctuation, general punctuation/symbol, CJK punctuation and specials blocks.
inline bool is_word_char(char32_t cp) {
    if (cp < 0x80) return (cp >= '0' && cp <= '9') || (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z');
    if (cp < 0xC0) return cp == 0xAA || cp == 0xB2 || cp == 0xB3 || cp == 0xB5 || cp == 0xB9 || cp == 0xBA;
    if (cp == 0xD7 || cp == 0xF7) return false;
    if (cp >= 0x2000 && cp <= 0x2BFF) return false;
    if (cp >= 0x3000 && cp <= 0x303F) return false;
    if (cp >= 0xFE30 && cp <= 0xFE4F) return false;
    if (cp >= 0xFF00 && cp <= 0xFF0F) return false;
    if (cp >= 0xFFF0 && cp <= 0xFFFF) return false;
    return true;
}

// Simple lowercase mapping for Latin, Greek and Cyrillic capitals.
inline char32_t fold_case(char32_t cp) {
    if (cp >= 'A' && cp <= 'Z') return cp + 0x20;
    if (cp < 0xC0) return cp;
    if (cp <= 0xDE && cp != 0xD7) return cp + 0x20;
    if (cp >= 0x100 && cp <= 0x137) return cp | 1;
    if (cp >= 0x139 && cp <= 0x148) return (cp & 1) ? cp + 1 : cp;
    if (cp >= 0x14A && cp <= 0x177) return cp | 1;
    if (cp == 0x178) return 0xFF;
    if (cp == 0x179 || cp == 0x17B || cp == 0x17D) return cp + 1;
    if (cp >= 0x391 && cp <= 0x3AB && cp != 0x3A2) return cp + 0x20;
    if (cp >= 0x410 && cp <= 0x42F) return cp + 0x20;
    if (cp >= 0x400 && cp <= 0x40F) return cp + 0x50;
    return cp;
}

// Lowercased maximal runs of word characters.
inline std::vector<std::string> tokenize(std::string_view s) {
    std::vector<std::string> tokens;
    std::string current;
    for (std::size_t pos = 0; pos < s.size();) {
        const char32_t cp = decode(s, pos);
        if (is_word_char(cp)) {
            encode(fold_case(cp), current);
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

} // namespace text

/**
 * Token sequences of every page (title followed by body text), interned to integers.
 * A keyword matches a page when its token sequence occurs contiguously in the page's.
 */
class TextIndex {
public:
    TextIndex() = default;

    explicit TextIndex(const Corpus &corpus) {
        pages_.reserve(corpus.pages.size());
        for (const Page &page : corpus.pages) {
            std::vector<std::uint32_t> ids;
            for (auto *field : {&page.title, &page.text}) {
                for (auto &token : text::tokenize(*field)) ids.push_back(intern(token));
                // Keep title and body from forming a phrase across the boundary.
                ids.push_back(kBoundary);
            }
            pages_.push_back(std::move(ids));
        }
    }

    std::size_t page_count() const noexcept { return pages_.size(); }

    // Ascending node indices of matching pages; empty for a keyword with no word characters.
    std::vector<NodeId> match(std::string_view keyword) const {
        std::vector<std::uint32_t> phrase;
        for (const auto &token : text::tokenize(keyword)) {
            auto it = dictionary_.find(token);
            if (it == dictionary_.end()) return {};
            phrase.push_back(it->second);
        }
        std::vector<NodeId> matches;
        if (phrase.empty()) return matches;
        for (NodeId i = 0; i < pages_.size(); ++i)
            if (std::search(pages_[i].begin(), pages_[i].end(), phrase.begin(), phrase.end()) != pages_[i].end())
                matches.push_back(i);
        return matches;
    }

private:
    static constexpr std::uint32_t kBoundary = UINT32_MAX;

    std::uint32_t intern(const std::string &token) {
        return dictionary_.try_emplace(token, static_cast<std::uint32_t>(dictionary_.size())).first->second;
    }

    std::unordered_map<std::string, std::uint32_t> dictionary_;
    std::vector<std::vector<std::uint32_t>> pages_;
};

inline std::vector<NodeId> match_keyword(const Corpus &corpus, std::string_view keyword) {
    if (keyword.empty()) throw Error("keyword must be nonempty");
    return TextIndex(corpus).match(keyword);
}

// X sorted by nonincreasing feature value, ties by ascending node index.
inline std::vector<NodeId> answer_list(const std::vector<NodeId> &candidates, const FeatureVector &feature) {
    std::vector<NodeId> list(candidates);
    std::sort(list.begin(), list.end(), [&](NodeId a, NodeId b) {
        const double va = feature.values[a], vb = feature.values[b];
        return va != vb ? va > vb : a < b;
    });
    return list;
}

/**
 * Majority-vote relevant set: when |X| > 10, the nodes found among the first ten positions
 * of at least six of the ten feature-sorted lists of X; otherwise empty (query dropped).
 * Returned in ascending node order.
 */
inline std::vector<NodeId> relevant_set(const std::vector<NodeId> &candidates, const FeatureSet &features) {
    if (candidates.size() <= kMinCandidates) return {};
    std::unordered_map<NodeId, std::size_t> votes;
    for (const auto &feature : features) {
        const auto list = answer_list(candidates, feature);
        for (std::size_t k = 0; k < kTopPositions && k < list.size(); ++k) ++votes[list[k]];
    }
    std::vector<NodeId> relevant;
    for (const auto &[node, count] : votes)
        if (count >= kMajorityVotes) relevant.push_back(node);
    std::sort(relevant.begin(), relevant.end());
    return relevant;
}

struct PrecisionRecall {
    std::vector<double> precision;  // index k-1 holds Precision(k)
    std::vector<double> recall;
    std::vector<std::size_t> relevant_in_prefix;
    std::size_t relevant_total = 0;
};

inline PrecisionRecall precision_recall(const std::vector<NodeId> &answers, const std::vector<NodeId> &relevant) {
    if (relevant.empty()) throw Error("query dropped: relevant set is empty");
    std::vector<NodeId> sorted_relevant(relevant);
    std::sort(sorted_relevant.begin(), sorted_relevant.end());
    PrecisionRecall pr;
    pr.relevant_total = sorted_relevant.size();
    std::size_t hits = 0;
    for (std::size_t k = 1; k <= answers.size(); ++k) {
        if (std::binary_search(sorted_relevant.begin(), sorted_relevant.end(), answers[k - 1])) ++hits;
        pr.relevant_in_prefix.push_back(hits);
        pr.precision.push_back(static_cast<double>(hits) / static_cast<double>(k));
        pr.recall.push_back(static_cast<double>(hits) / static_cast<double>(pr.relevant_total));
    }
    return pr;
}

// Buckets [0,0.1), ..., [0.9,1) and [1,1]; computed from integer counts so no
// floating-point rounding can move a point across a boundary.
inline std::size_t recall_bucket(std::size_t hits, std::size_t relevant_total) {
    return hits * 10 / relevant_total;
}

struct PRCurve {
    Feature feature = Feature::InDegree;
    std::array<double, kBucketCount> precision_sum{};
    std::array<std::size_t, kBucketCount> count{};

    static constexpr double abscissa(std::size_t bucket) { return static_cast<double>(bucket) / 10.0; }

    std::optional<double> mean_precision(std::size_t bucket) const {
        if (count[bucket] == 0) return std::nullopt;
        return precision_sum[bucket] / static_cast<double>(count[bucket]);
    }

    void add(const PrecisionRecall &pr) {
        for (std::size_t k = 0; k < pr.precision.size(); ++k) {
            const auto b = recall_bucket(pr.relevant_in_prefix[k], pr.relevant_total);
            precision_sum[b] += pr.precision[k];
            ++count[b];
        }
    }
};

struct QueryResult {
    std::string keyword;
    std::vector<NodeId> candidates;  // X
    std::vector<NodeId> relevant;    // R; empty means the query was dropped
    std::array<std::vector<NodeId>, kFeatureCount> answers;
    std::array<PrecisionRecall, kFeatureCount> scores;

    bool dropped() const noexcept { return relevant.empty(); }
};

inline QueryResult evaluate_query(std::string keyword, std::vector<NodeId> candidates, const FeatureSet &features) {
    QueryResult q;
    q.keyword = std::move(keyword);
    q.candidates = std::move(candidates);
    q.relevant = relevant_set(q.candidates, features);
    if (q.dropped()) return q;
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
        q.answers[f] = answer_list(q.candidates, features[f]);
        q.scores[f] = precision_recall(q.answers[f], q.relevant);
    }
    return q;
}

// Each (query, k) point adds its Precision to the bucket holding its Recall.
inline PRCurve bucketed_curve(const std::vector<QueryResult> &results, Feature feature) {
    PRCurve curve;
    curve.feature = feature;
    bool any = false;
    for (const auto &q : results) {
        if (q.dropped()) continue;
        curve.add(q.scores[static_cast<std::size_t>(feature)]);
        any = true;
    }
    if (!any) throw Error("no query survived: every relevant set is empty");
    return curve;
}

enum class KeywordStatus { Evaluated, Dropped, NotProcessed };

inline std::string_view to_string(KeywordStatus s) {
    switch (s) {
    case KeywordStatus::Evaluated: return "evaluated";
    case KeywordStatus::Dropped: return "dropped";
    case KeywordStatus::NotProcessed: return "not_processed";
    }
    return "?";
}

struct KeywordOutcome {
    std::string keyword;
    std::size_t candidates = 0;
    KeywordStatus status = KeywordStatus::NotProcessed;
};

struct SuiteResult {
    std::vector<QueryResult> queries;  // evaluated queries, keyword-file order
    std::vector<KeywordOutcome> report;
    std::array<PRCurve, kFeatureCount> curves;
};

/**
 * Walks the keywords in rank order, evaluating those with more than ten candidates until
 * `limit` have been evaluated. Keywords after the limit is reached are reported as not
 * processed.
 */
inline SuiteResult evaluate_keywords(const TextIndex &index, const FeatureSet &features,
                                     const std::vector<std::string> &keywords, std::size_t limit = 100,
                                     unsigned threads = 0) {
    std::vector<std::vector<NodeId>> matches(keywords.size());
    parallel_for(keywords.size(), threads, [&](std::size_t k) { matches[k] = index.match(keywords[k]); });

    SuiteResult suite;
    for (std::size_t k = 0; k < keywords.size(); ++k) {
        KeywordOutcome outcome{keywords[k], matches[k].size(), KeywordStatus::NotProcessed};
        if (suite.queries.size() < limit) {
            auto q = evaluate_query(keywords[k], std::move(matches[k]), features);
            outcome.status = q.dropped() ? KeywordStatus::Dropped : KeywordStatus::Evaluated;
            if (!q.dropped()) suite.queries.push_back(std::move(q));
        }
        suite.report.push_back(std::move(outcome));
    }
    for (std::size_t f = 0; f < kFeatureCount; ++f) suite.curves[f] = bucketed_curve(suite.queries, kAllFeatures[f]);
    return suite;
}

inline std::vector<std::string> load_keywords(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read keyword file '" + path + "'");
    std::vector<std::string> keywords;
    std::string line;
    while (std::getline(in, line)) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t\r");
        keywords.push_back(line.substr(first, last - first + 1));
    }
    return keywords;
}

inline SuiteResult run_keyword_suite(const Corpus &corpus, const DirectedGraph &graph,
                                     const std::vector<std::string> &keywords, std::size_t limit = 100,
                                     const PowerIterationOptions &opt = {}) {
    if (graph.node_count() != corpus.pages.size()) throw Error("graph was not built from this corpus");
    return evaluate_keywords(TextIndex(corpus), compute_all_features(graph, opt), keywords, limit, opt.threads);
}

} // namespace linkgraph
