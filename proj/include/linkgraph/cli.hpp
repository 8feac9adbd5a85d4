#pragma once

#include <chrono>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "corpus.hpp"
#include "error.hpp"
#include "format.hpp"
#include "global_metrics.hpp"
#include "local_metrics.hpp"
#include "percolation.hpp"
#include "search_eval.hpp"

namespace linkgraph::cli {

inline constexpr std::string_view kVersion = "1.0.0";
inline constexpr double kReferenceTolerance = 1e-16;

struct RunConfig {
    std::string command;
    std::string corpus;
    std::string variant = "all";
    std::string feature;
    std::string schedule = "random";
    double tol = 1e-12;
    std::size_t max_iters = 100000;
    std::size_t trials = 10;
    std::uint64_t seed = 0;
    std::size_t recompute_every = 0;
    std::string format = "csv";
    std::string output;
    std::string keywords;
    std::size_t limit = 100;
    std::string drop_report;
    unsigned threads = 0;
    bool deterministic = false;

    PowerIterationOptions power() const { return {tol, max_iters, threads}; }
};

using Cell = std::variant<std::string, std::uint64_t, double, std::optional<double>>;

struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

// Everything one invocation writes: an ordered metadata block and one or more tables.
struct Document {
    std::vector<std::pair<std::string, std::string>> metadata;
    std::vector<Table> tables;
    std::optional<nlohmann::ordered_json> drop_report;

    void note(std::string key, std::string value) { metadata.emplace_back(std::move(key), std::move(value)); }
};

namespace detail {

inline std::string csv_cell(const Cell &c) {
    return std::visit(
        [](const auto &v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::string>) return fmt::csv_field(v);
            else if constexpr (std::is_same_v<T, std::uint64_t>) return std::to_string(v);
            else return fmt::real(v);
        },
        c);
}

inline nlohmann::ordered_json json_cell(const Cell &c) {
    return std::visit(
        [](const auto &v) -> nlohmann::ordered_json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::string> || std::is_same_v<T, std::uint64_t>) return v;
            else if constexpr (std::is_same_v<T, double>) return fmt::json_real(std::optional<double>(v));
            else return fmt::json_real(v);
        },
        c);
}

inline void write_csv(const Document &doc, std::ostream &out) {
    for (const auto &[key, value] : doc.metadata) out << "# " << key << ": " << value << '\n';
    for (const auto &table : doc.tables) {
        if (doc.tables.size() > 1) out << "# table: " << table.name << '\n';
        for (std::size_t c = 0; c < table.columns.size(); ++c) out << (c ? "," : "") << table.columns[c];
        out << '\n';
        for (const auto &row : table.rows) {
            for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << csv_cell(row[c]);
            out << '\n';
        }
    }
}

inline nlohmann::ordered_json metadata_json(const Document &doc) {
    nlohmann::ordered_json meta = nlohmann::ordered_json::object();
    for (const auto &[key, value] : doc.metadata) {
        auto &slot = meta[key];
        if (slot.is_null()) slot = value;
        else if (slot.is_array()) slot.push_back(value);
        else slot = nlohmann::ordered_json::array({slot, value});
    }
    return meta;
}

inline void write_json(const Document &doc, std::ostream &out) {
    nlohmann::ordered_json root;
    root["metadata"] = metadata_json(doc);
    for (const auto &table : doc.tables) {
        auto rows = nlohmann::ordered_json::array();
        for (const auto &row : table.rows) {
            nlohmann::ordered_json obj;
            for (std::size_t c = 0; c < row.size(); ++c) obj[table.columns[c]] = json_cell(row[c]);
            rows.push_back(std::move(obj));
        }
        root[table.name] = std::move(rows);
    }
    if (doc.drop_report) root["drop_report"] = *doc.drop_report;
    out << root.dump(2) << '\n';
}

inline std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

inline std::string real_text(double v) { return fmt::real(v); }

inline bool uses_power_iteration(const RunConfig &cfg) {
    if (cfg.command == "search-eval") return true;
    const std::string &f = cfg.command == "percolate" ? cfg.schedule : cfg.feature;
    return f == "hub" || f == "authority" || f == "pagerank" || f == "all";
}

// Header shared by every output. Thread count and output paths are deliberately absent:
// they never change results.
inline Document start_document(const RunConfig &cfg) {
    Document doc;
    doc.note("tool", "linkgraph " + std::string(kVersion));
    doc.note("command", cfg.command);
    doc.note("corpus", cfg.corpus);
    doc.note("variant", cfg.variant);
    if (!cfg.feature.empty()) doc.note("feature", cfg.feature);
    if (cfg.command == "percolate") {
        doc.note("schedule", cfg.schedule);
        doc.note("trials", std::to_string(cfg.trials));
        doc.note("seed", std::to_string(cfg.seed));
        doc.note("recompute_every", std::to_string(cfg.recompute_every));
    }
    if (cfg.command == "search-eval") {
        doc.note("keywords", cfg.keywords);
        doc.note("limit", std::to_string(cfg.limit));
    }
    if (uses_power_iteration(cfg)) {
        doc.note("tol", real_text(cfg.tol));
        doc.note("max_iters", std::to_string(cfg.max_iters));
        if (cfg.tol != kReferenceTolerance)
            doc.note("deviation", "power iterations stop at tolerance " + real_text(cfg.tol)
                                      + " instead of the 1e-16 interval criterion");
        if (cfg.command == "search-eval" || cfg.feature == "pagerank" || cfg.schedule == "pagerank"
            || cfg.schedule == "all")
            doc.note("deviation", "pagerank applies rho_i = 0.15 + 0.85 sum rho_j/outdeg_j verbatim; "
                                  "sink nodes redistribute nothing");
    }
    if (cfg.command == "percolate" && cfg.schedule != "random")
        doc.note("deviation", cfg.recompute_every == 0
                                  ? "targeted features are ranked once on the intact graph"
                                  : "targeted features are re-ranked every " + std::to_string(cfg.recompute_every)
                                        + " isolations");
    if (cfg.command == "search-eval")
        doc.note("deviation", "keyword matching is case-insensitive on token boundaries over title and body text");
    if (!cfg.deterministic) doc.note("generated", utc_timestamp());
    return doc;
}

struct Loaded {
    Corpus corpus;
    DirectedGraph graph;
};

inline Loaded load(const RunConfig &cfg, Document &doc, std::ostream &err) {
    Loaded l{load_corpus(cfg.corpus), {}};
    l.graph = build_graph(l.corpus, *parse_variant(cfg.variant));
    doc.note("dangling_links_dropped", std::to_string(l.corpus.dangling_links_dropped));
    if (l.corpus.dangling_links_dropped > 0)
        err << "warning: dropped " << l.corpus.dangling_links_dropped << " link(s) to pages not in the corpus\n";
    return l;
}

inline Document run_ingest(const RunConfig &cfg, std::ostream &err) {
    Document doc = start_document(cfg);
    auto l = load(cfg, doc, err);
    doc.note("pages", std::to_string(l.corpus.pages.size()));
    Table t{"graphs", {"variant", "n", "m"}, {}};
    for (auto variant : {GraphVariant::AllLinks, GraphVariant::SeeAlsoOnly}) {
        const auto g = build_graph(l.corpus, variant);
        t.rows.push_back({std::string(to_string(variant)), std::uint64_t{g.node_count()}, std::uint64_t{g.edge_count()}});
    }
    doc.tables.push_back(std::move(t));
    return doc;
}

inline Document run_global(const RunConfig &cfg, std::ostream &err) {
    Document doc = start_document(cfg);
    auto l = load(cfg, doc, err);
    const auto r = global_report(l.graph, cfg.threads);
    Table t{"global",
            {"n", "m", "mean_in_degree", "mean_degree", "antiparallel_fraction", "gscc_fraction", "avg_distance",
             "finite_pair_count", "clustering", "triangle_count", "path_triple_count", "random_clustering",
             "second_moment", "assortativity_out_in", "assortativity_in_out", "assortativity_out_out",
             "assortativity_in_in"},
            {}};
    std::vector<Cell> row{std::uint64_t{r.n},
                          std::uint64_t{r.m},
                          r.degrees.mean_in_degree,
                          r.degrees.mean_degree,
                          r.degrees.antiparallel_fraction,
                          r.gscc_fraction,
                          r.distance.average,
                          std::uint64_t{r.distance.finite_pairs},
                          r.clustering.coefficient,
                          std::uint64_t{r.clustering.triangles},
                          std::uint64_t{r.clustering.path_triples},
                          r.clustering.random_coefficient,
                          r.clustering.second_moment};
    for (const auto &a : r.assortativity) row.emplace_back(a);
    t.rows.push_back(std::move(row));
    doc.tables.push_back(std::move(t));
    return doc;
}

inline Document run_local(const RunConfig &cfg, std::ostream &err) {
    Document doc = start_document(cfg);
    auto l = load(cfg, doc, err);
    const auto v = compute_feature(l.graph, *parse_feature(cfg.feature), cfg.power());
    Table t{"values", {"id", "value"}, {}};
    for (NodeId i = 0; i < l.graph.node_count(); ++i) t.rows.push_back({l.graph.label(i), v.values[i]});
    doc.tables.push_back(std::move(t));
    return doc;
}

inline Document run_ccd(const RunConfig &cfg, std::ostream &err) {
    Document doc = start_document(cfg);
    auto l = load(cfg, doc, err);
    const auto v = compute_feature(l.graph, *parse_feature(cfg.feature), cfg.power());
    Table t{"ccd", {"z", "F"}, {}};
    for (const auto &p : ccd(v)) t.rows.push_back({p.z, p.fraction_above});
    doc.tables.push_back(std::move(t));
    return doc;
}

inline Document run_percolate(const RunConfig &cfg, std::ostream &err) {
    Document doc = start_document(cfg);
    auto l = load(cfg, doc, err);
    const RandomSchedule random{cfg.seed, cfg.trials};

    if (cfg.schedule == "all") {
        std::vector<PercolationTrace> traces;
        traces.push_back(isolate_run(l.graph, random, cfg.power()));
        for (Feature f : kAllFeatures)
            traces.push_back(isolate_run(l.graph, TargetedSchedule{f, cfg.recompute_every}, cfg.power()));
        Table summary{"breakdown", {"schedule", "breakdown_fraction"}, {}};
        for (const auto &row : breakdown_summary(traces)) summary.rows.push_back({row.schedule, row.breakdown_fraction});
        Table series{"traces", {"schedule", "isolated_count", "isolated_fraction", "S"}, {}};
        for (const auto &trace : traces)
            for (const auto &p : trace.points)
                series.rows.push_back({trace.schedule, std::uint64_t{p.isolated_count}, p.isolated_fraction, p.gscc_fraction});
        doc.tables.push_back(std::move(summary));
        doc.tables.push_back(std::move(series));
        return doc;
    }

    IsolationSchedule schedule = random;
    if (cfg.schedule != "random") schedule = TargetedSchedule{*parse_feature(cfg.schedule), cfg.recompute_every};
    const auto trace = isolate_run(l.graph, schedule, cfg.power());
    doc.note("breakdown_fraction", real_text(trace.breakdown_fraction));
    Table t{"trace", {"isolated_count", "isolated_fraction", "S"}, {}};
    for (const auto &p : trace.points) t.rows.push_back({std::uint64_t{p.isolated_count}, p.isolated_fraction, p.gscc_fraction});
    doc.tables.push_back(std::move(t));
    return doc;
}

inline nlohmann::ordered_json drop_report_json(const SuiteResult &suite) {
    nlohmann::ordered_json report = nlohmann::ordered_json::array();
    for (const auto &k : suite.report)
        report.push_back({{"keyword", k.keyword}, {"candidates", k.candidates}, {"status", to_string(k.status)}});
    return report;
}

inline Document run_search_eval(const RunConfig &cfg, std::ostream &err) {
    Document doc = start_document(cfg);
    auto l = load(cfg, doc, err);
    const auto suite = run_keyword_suite(l.corpus, l.graph, load_keywords(cfg.keywords), cfg.limit, cfg.power());
    doc.note("evaluated_keywords", std::to_string(suite.queries.size()));
    Table t{"curves", {"feature", "bucket_abscissa", "mean_precision", "count"}, {}};
    for (const auto &curve : suite.curves)
        for (std::size_t b = 0; b < kBucketCount; ++b)
            t.rows.push_back({std::string(to_string(curve.feature)), PRCurve::abscissa(b), curve.mean_precision(b),
                              std::uint64_t{curve.count[b]}});
    doc.tables.push_back(std::move(t));
    doc.drop_report = drop_report_json(suite);
    return doc;
}

inline void emit(const Document &doc, const RunConfig &cfg, std::ostream &out, std::ostream &err) {
    std::ostringstream body;
    if (cfg.format == "json") write_json(doc, body);
    else write_csv(doc, body);

    if (cfg.output.empty()) {
        out << body.str();
    } else {
        std::ofstream file(cfg.output, std::ios::binary);
        if (!file) throw Error("cannot write '" + cfg.output + "'");
        file << body.str();
    }

    // CSV has no room for the drop report; it goes to its own JSON file.
    if (doc.drop_report && cfg.format != "json") {
        nlohmann::ordered_json report;
        report["metadata"] = metadata_json(doc);
        report["drop_report"] = *doc.drop_report;
        const std::string path = !cfg.drop_report.empty() ? cfg.drop_report
                                 : !cfg.output.empty()    ? cfg.output + ".drops.json"
                                                          : std::string();
        if (path.empty()) {
            err << report.dump(2) << '\n';
        } else {
            std::ofstream file(path, std::ios::binary);
            if (!file) throw Error("cannot write '" + path + "'");
            file << report.dump(2) << '\n';
        }
    }
}

} // namespace detail

/**
 * Parses arguments (without the program name), runs one subcommand and writes its output.
 * Returns 0 on success, 2 on a usage error, 1 on any failure while running.
 */
inline int dispatch(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    RunConfig cfg;
    CLI::App app{"Directed-graph analytics for hyperlink corpora", "linkgraph"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));

    std::vector<std::string> feature_names(kFeatureNames.begin(), kFeatureNames.end());
    feature_names.push_back("graphcentrality");
    std::vector<std::string> schedules = feature_names;
    schedules.push_back("random");
    schedules.push_back("all");

    auto common = [&](CLI::App *sub) {
        sub->add_option("--corpus", cfg.corpus, "Corpus file (one JSON page record per line)")->required();
        sub->add_option("--variant", cfg.variant, "Edge set: all (in-text + see-also) or seealso")
            ->check(CLI::IsMember({"all", "seealso"}))
            ->capture_default_str();
        sub->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
        sub->add_option("--output,-o", cfg.output, "Output file (default: standard output)");
        sub->add_option("--threads", cfg.threads, "Worker threads (0: available parallelism)")->capture_default_str();
        sub->add_flag("--deterministic", cfg.deterministic, "Suppress the timestamp in the output header");
    };
    auto power = [&](CLI::App *sub) {
        sub->add_option("--tol", cfg.tol, "Power-iteration tolerance")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        sub->add_option("--max-iters", cfg.max_iters, "Power-iteration cap")->check(CLI::PositiveNumber)->capture_default_str();
    };

    auto *ingest = app.add_subcommand("ingest", "Parse a corpus and report n and m for both graph variants");
    common(ingest);
    auto *global = app.add_subcommand("global", "Global features of one graph variant");
    common(global);
    auto *local = app.add_subcommand("local", "Per-node values of one local feature");
    common(local);
    power(local);
    local->add_option("--feature", cfg.feature, "Local feature")->required()->check(CLI::IsMember(feature_names));
    auto *ccd_cmd = app.add_subcommand("ccd", "Complementary cumulative distribution of one local feature");
    common(ccd_cmd);
    power(ccd_cmd);
    ccd_cmd->add_option("--feature", cfg.feature, "Local feature")->required()->check(CLI::IsMember(feature_names));
    auto *percolate = app.add_subcommand("percolate", "GSCC decay under node isolation");
    common(percolate);
    power(percolate);
    percolate->add_option("--schedule", cfg.schedule, "random, a local feature, or all")
        ->check(CLI::IsMember(schedules))
        ->capture_default_str();
    percolate->add_option("--trials", cfg.trials, "Random trials to average")->check(CLI::PositiveNumber)->capture_default_str();
    percolate->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
    percolate->add_option("--recompute-every", cfg.recompute_every,
                          "Re-rank targeted features every k isolations (0: rank once)")
        ->capture_default_str();
    auto *search = app.add_subcommand("search-eval", "Keyword-search Precision-Recall per local feature");
    common(search);
    power(search);
    search->add_option("--keywords", cfg.keywords, "Keyword file, one per line in rank order")->required();
    search->add_option("--limit", cfg.limit, "Maximum number of evaluated keywords")->check(CLI::PositiveNumber)->capture_default_str();
    search->add_option("--drop-report", cfg.drop_report, "Where to write the JSON drop report for CSV output");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion &e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << "\n\n";
        const auto subs = app.get_subcommands();
        err << (subs.empty() ? app.help() : subs.front()->help());
        return 2;
    }

    const auto *chosen = app.get_subcommands().front();
    cfg.command = chosen->get_name();
    if (cfg.feature == "graphcentrality") cfg.feature = "graph";
    if (cfg.schedule == "graphcentrality") cfg.schedule = "graph";

    try {
        Document doc;
        if (cfg.command == "ingest") doc = detail::run_ingest(cfg, err);
        else if (cfg.command == "global") doc = detail::run_global(cfg, err);
        else if (cfg.command == "local") doc = detail::run_local(cfg, err);
        else if (cfg.command == "ccd") doc = detail::run_ccd(cfg, err);
        else if (cfg.command == "percolate") doc = detail::run_percolate(cfg, err);
        else doc = detail::run_search_eval(cfg, err);
        detail::emit(doc, cfg, out, err);
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

} // namespace linkgraph::cli
