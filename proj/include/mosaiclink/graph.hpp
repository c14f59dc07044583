#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace mosaiclink {

// Co-participation graph over identity clusters. Edge keys are ordered
// (first < second); the weight counts meetings the pair shared.
struct SocialGraphData {
    std::set<std::string> nodes;
    std::map<std::pair<std::string, std::string>, int> edges;
    std::map<std::string, std::set<std::string>> meeting_index;

    bool operator==(const SocialGraphData&) const = default;
};

struct ComponentStats {
    int component_count = 0;
    double mean_nodes = 0.0;
    double mean_edges = 0.0;
    int largest_nodes = 0;
    int largest_edges = 0;

    bool operator==(const ComponentStats&) const = default;
};

/// One node per identity seen in at least one meeting; one edge per identity
/// pair that shared a meeting, weighted by how many meetings they shared.
SocialGraphData build_social_graph(
    const std::map<std::string, std::set<std::string>>& meetings);

/// Maximal connected node sets, ordered by smallest member id.
std::vector<std::set<std::string>> connected_components(const SocialGraphData& g);

/// Component count, per-component means, and the largest component sized by
/// nodes (ties by edges, then smallest member id).
/// Throws EmptyGraphError when the graph has no nodes.
ComponentStats component_stats(const SocialGraphData& g);

/// Writes "source,target,weight" rows sorted by (source, target); an empty
/// graph yields a header-only file. Throws WriteError on I/O failure.
void export_edge_list(const SocialGraphData& g, const std::filesystem::path& path);

}  // namespace mosaiclink
