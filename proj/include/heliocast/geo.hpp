#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <vector>

namespace helio {

inline constexpr double kEarthRadiusKm = 6371.0;

struct Location {
    int id = 0;
    double latitude = 0.0;   // degrees, [-90, 90]
    double longitude = 0.0;  // degrees, [-180, 180]
};

// Great-circle distance on the mean-radius sphere.
double haversine_km(const Location& a, const Location& b);

// Undirected weighted graph over sensor sites. Edges are stored once with
// u < v; adjacency lists are kept sorted by neighbour id.
struct SpatialGraph {
    struct Edge {
        int u = 0;
        int v = 0;
        double distance_km = 0.0;
        double weight = 0.0;  // similarity, exp(-d^2 / 2 sigma^2)
    };
    struct Neighbor {
        int node = 0;
        double weight = 0.0;
    };

    int n = 0;
    std::vector<Edge> edges;
    std::vector<std::vector<Neighbor>> adj;

    void build_adjacency();
    bool has_edge(int u, int v) const;
    bool connected() const;
};

// Complete graph over all location pairs with Gaussian-kernel similarity
// weights; sigma defaults to the median pairwise distance (nullopt). When
// prune_frac > 0 the longest prune_frac of the edges are dropped.
SpatialGraph build_graph(std::span<const Location> locations,
                         std::optional<double> kernel_sigma_km = std::nullopt,
                         double prune_frac = 0.0);

// Locations CSV: header `id,latitude,longitude`.
std::vector<Location> load_locations_csv(const std::filesystem::path& path);
void save_locations_csv(const std::filesystem::path& path, std::span<const Location> locations);

// Graph CSV: header `u,v,distance_km,weight`.
SpatialGraph load_graph_csv(const std::filesystem::path& path);
void save_graph_csv(const std::filesystem::path& path, const SpatialGraph& graph);

}  // namespace helio
