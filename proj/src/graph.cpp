#include "mosaiclink/graph.hpp"

#include <algorithm>
#include <fstream>
#include <unordered_map>

#include "dsu.hpp"
#include "mosaiclink/errors.hpp"

namespace mosaiclink {

SocialGraphData build_social_graph(
    const std::map<std::string, std::set<std::string>>& meetings) {
    SocialGraphData g;
    for (const auto& [meeting_id, identities] : meetings) {
        g.meeting_index[meeting_id] = identities;
        for (auto a = identities.begin(); a != identities.end(); ++a) {
            g.nodes.insert(*a);
            for (auto b = std::next(a); b != identities.end(); ++b) {
                ++g.edges[{*a, *b}];  // set iteration keeps *a < *b
            }
        }
    }
    return g;
}

namespace {

std::vector<std::string> node_list(const SocialGraphData& g) {
    return {g.nodes.begin(), g.nodes.end()};
}

}  // namespace

std::vector<std::set<std::string>> connected_components(const SocialGraphData& g) {
    const std::vector<std::string> nodes = node_list(g);
    std::unordered_map<std::string, std::size_t> index_of;
    index_of.reserve(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) index_of.emplace(nodes[i], i);

    detail::DisjointSet dsu(nodes.size());
    for (const auto& [pair, weight] : g.edges) {
        (void)weight;
        dsu.unite(index_of.at(pair.first), index_of.at(pair.second));
    }

    std::map<std::size_t, std::set<std::string>> by_root;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        by_root[dsu.find(i)].insert(nodes[i]);
    }
    std::vector<std::set<std::string>> components;
    components.reserve(by_root.size());
    for (auto& [root, members] : by_root) components.push_back(std::move(members));
    std::sort(components.begin(), components.end(),
              [](const std::set<std::string>& a, const std::set<std::string>& b) {
                  return *a.begin() < *b.begin();
              });
    return components;
}

ComponentStats component_stats(const SocialGraphData& g) {
    if (g.nodes.empty()) {
        throw EmptyGraphError("component statistics need a non-empty graph");
    }
    const std::vector<std::set<std::string>> components = connected_components(g);

    std::unordered_map<std::string, std::size_t> component_of;
    component_of.reserve(g.nodes.size());
    for (std::size_t c = 0; c < components.size(); ++c) {
        for (const std::string& n : components[c]) component_of.emplace(n, c);
    }
    std::vector<int> edge_counts(components.size(), 0);
    for (const auto& [pair, weight] : g.edges) {
        (void)weight;
        ++edge_counts[component_of.at(pair.first)];  // endpoints share a component
    }

    ComponentStats stats;
    stats.component_count = static_cast<int>(components.size());
    stats.mean_nodes =
        static_cast<double>(g.nodes.size()) / static_cast<double>(components.size());
    stats.mean_edges =
        static_cast<double>(g.edges.size()) / static_cast<double>(components.size());

    std::size_t best = 0;
    for (std::size_t c = 1; c < components.size(); ++c) {
        const auto key = [&](std::size_t i) {
            return std::make_tuple(components[i].size(), edge_counts[i]);
        };
        // Components are already ordered by smallest member id, so on a full
        // tie the earlier one wins.
        if (key(c) > key(best)) best = c;
    }
    stats.largest_nodes = static_cast<int>(components[best].size());
    stats.largest_edges = edge_counts[best];
    return stats;
}

void export_edge_list(const SocialGraphData& g, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw WriteError("cannot open edge list for writing: " + path.string());
    }
    out << "source,target,weight\n";
    for (const auto& [pair, weight] : g.edges) {
        out << pair.first << ',' << pair.second << ',' << weight << '\n';
    }
    out.flush();
    if (!out) {
        throw WriteError("failed writing edge list: " + path.string());
    }
}

}  // namespace mosaiclink
