#pragma once

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "error.hpp"
#include "graph.hpp"

namespace linkgraph {

enum class LinkKind { InText, SeeAlso, ReferencedBy };

enum class GraphVariant { AllLinks, SeeAlsoOnly };

struct Link {
    std::string target;
    LinkKind kind = LinkKind::InText;
};

struct Page {
    std::string id;
    std::string title;
    std::string text;
    std::vector<Link> links;
};

// Pages are kept sorted by id, so a page's position is its node index in every graph
// built from the corpus.
struct Corpus {
    std::vector<Page> pages;
    std::size_t dangling_links_dropped = 0;

    std::optional<NodeId> find(std::string_view id) const {
        auto it = std::lower_bound(pages.begin(), pages.end(), id,
                                   [](const Page &p, std::string_view key) { return p.id < key; });
        if (it == pages.end() || it->id != id) return std::nullopt;
        return static_cast<NodeId>(it - pages.begin());
    }
};

inline std::optional<LinkKind> parse_link_kind(std::string_view s) {
    if (s == "intext") return LinkKind::InText;
    if (s == "seealso") return LinkKind::SeeAlso;
    if (s == "referencedby") return LinkKind::ReferencedBy;
    return std::nullopt;
}

inline std::string_view to_string(LinkKind kind) {
    switch (kind) {
    case LinkKind::InText: return "intext";
    case LinkKind::SeeAlso: return "seealso";
    case LinkKind::ReferencedBy: return "referencedby";
    }
    return "?";
}

inline std::optional<GraphVariant> parse_variant(std::string_view s) {
    if (s == "all") return GraphVariant::AllLinks;
    if (s == "seealso") return GraphVariant::SeeAlsoOnly;
    return std::nullopt;
}

inline std::string_view to_string(GraphVariant v) {
    return v == GraphVariant::AllLinks ? "all" : "seealso";
}

namespace detail {

inline const nlohmann::json &require_field(const nlohmann::json &obj, const char *name,
                                           nlohmann::json::value_t type, std::size_t line) {
    auto it = obj.find(name);
    if (it == obj.end()) throw ParseError(line, std::string("missing field '") + name + "'");
    if (it->type() != type) throw ParseError(line, std::string("field '") + name + "' has the wrong type");
    return *it;
}

} // namespace detail

/**
 * Reads newline-delimited page records:
 *
 *   {"id": "...", "title": "...", "text": "...", "links": [{"target": "...", "kind": "intext"}]}
 *
 * Blank lines are skipped. Links whose target is not a page of the corpus are dropped
 * and counted in Corpus::dangling_links_dropped.
 */
inline Corpus parse_corpus(std::istream &in) {
    using value_t = nlohmann::json::value_t;
    Corpus corpus;
    std::unordered_map<std::string, std::size_t> first_seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;

        nlohmann::json record;
        try {
            record = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error &e) {
            throw ParseError(line_no, std::string("invalid JSON: ") + e.what());
        }
        if (!record.is_object()) throw ParseError(line_no, "record is not an object");

        Page page;
        page.id = detail::require_field(record, "id", value_t::string, line_no).get<std::string>();
        page.title = detail::require_field(record, "title", value_t::string, line_no).get<std::string>();
        page.text = detail::require_field(record, "text", value_t::string, line_no).get<std::string>();
        for (const auto &link : detail::require_field(record, "links", value_t::array, line_no)) {
            if (!link.is_object()) throw ParseError(line_no, "link is not an object");
            const auto &kind_name = detail::require_field(link, "kind", value_t::string, line_no);
            auto kind = parse_link_kind(kind_name.get_ref<const std::string &>());
            if (!kind) throw ParseError(line_no, "unknown link kind '" + kind_name.get<std::string>() + "'");
            page.links.push_back(
                {detail::require_field(link, "target", value_t::string, line_no).get<std::string>(), *kind});
        }

        auto [it, inserted] = first_seen.emplace(page.id, line_no);
        if (!inserted)
            throw ParseError(line_no, "duplicate page id '" + page.id + "' (first seen on line "
                                          + std::to_string(it->second) + ")");
        corpus.pages.push_back(std::move(page));
    }
    if (in.bad()) throw Error("read failure while parsing corpus");

    std::sort(corpus.pages.begin(), corpus.pages.end(),
              [](const Page &a, const Page &b) { return a.id < b.id; });
    for (auto &page : corpus.pages) {
        const auto before = page.links.size();
        std::erase_if(page.links, [&](const Link &l) { return !first_seen.contains(l.target); });
        corpus.dangling_links_dropped += before - page.links.size();
    }
    return corpus;
}

inline Corpus load_corpus(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open corpus file '" + path + "'");
    return parse_corpus(in);
}

// ReferencedBy links never produce edges; SeeAlsoOnly additionally drops InText links.
inline DirectedGraph build_graph(const Corpus &corpus, GraphVariant variant) {
    std::vector<std::pair<NodeId, NodeId>> edges;
    std::vector<std::string> labels;
    labels.reserve(corpus.pages.size());
    for (NodeId i = 0; i < corpus.pages.size(); ++i) {
        const Page &page = corpus.pages[i];
        labels.push_back(page.id);
        for (const Link &link : page.links) {
            if (link.kind == LinkKind::ReferencedBy) continue;
            if (variant == GraphVariant::SeeAlsoOnly && link.kind != LinkKind::SeeAlso) continue;
            if (auto target = corpus.find(link.target)) edges.emplace_back(i, *target);
        }
    }
    return DirectedGraph(corpus.pages.size(), std::move(edges), std::move(labels));
}

} // namespace linkgraph
