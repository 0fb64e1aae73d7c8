#include "heliocast/geo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "heliocast/csv.hpp"
#include "heliocast/errors.hpp"

namespace helio {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

void check_coordinates(const Location& loc) {
    if (!(loc.latitude >= -90.0 && loc.latitude <= 90.0))
        throw ParameterOutOfRange("latitude " + format_double(loc.latitude));
    if (!(loc.longitude >= -180.0 && loc.longitude <= 180.0))
        throw ParameterOutOfRange("longitude " + format_double(loc.longitude));
}

// Union-find over node ids, used for the post-prune connectivity check.
struct DisjointSet {
    std::vector<int> parent;
    explicit DisjointSet(int n) : parent(n) {
        for (int i = 0; i < n; ++i) parent[i] = i;
    }
    int find(int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[a] = b;
        return true;
    }
};

}  // namespace

double haversine_km(const Location& a, const Location& b) {
    check_coordinates(a);
    check_coordinates(b);
    const double lat1 = a.latitude * kDegToRad;
    const double lat2 = b.latitude * kDegToRad;
    const double dlat = (b.latitude - a.latitude) * kDegToRad;
    const double dlon = (b.longitude - a.longitude) * kDegToRad;
    const double s1 = std::sin(dlat / 2.0);
    const double s2 = std::sin(dlon / 2.0);
    const double h = s1 * s1 + std::cos(lat1) * std::cos(lat2) * s2 * s2;
    return 2.0 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(h)));
}

void SpatialGraph::build_adjacency() {
    adj.assign(n, {});
    for (const Edge& e : edges) {
        adj[e.u].push_back({e.v, e.weight});
        adj[e.v].push_back({e.u, e.weight});
    }
    for (auto& neighbors : adj)
        std::sort(neighbors.begin(), neighbors.end(),
                  [](const Neighbor& a, const Neighbor& b) { return a.node < b.node; });
}

bool SpatialGraph::has_edge(int u, int v) const {
    const auto& neighbors = adj[u];
    auto it = std::lower_bound(neighbors.begin(), neighbors.end(), v,
                               [](const Neighbor& nb, int node) { return nb.node < node; });
    return it != neighbors.end() && it->node == v;
}

bool SpatialGraph::connected() const {
    if (n == 0) return false;
    DisjointSet ds(n);
    int components = n;
    for (const Edge& e : edges)
        if (ds.unite(e.u, e.v)) --components;
    return components == 1;
}

SpatialGraph build_graph(std::span<const Location> locations,
                         std::optional<double> kernel_sigma_km, double prune_frac) {
    const int n = static_cast<int>(locations.size());
    if (n < 2) throw ParameterOutOfRange("need at least 2 locations");
    if (!(prune_frac >= 0.0 && prune_frac < 1.0))
        throw ParameterOutOfRange("prune_frac must be in [0, 1)");

    SpatialGraph g;
    g.n = n;
    g.edges.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (int u = 0; u < n; ++u) {
        for (int v = u + 1; v < n; ++v) {
            const double d = haversine_km(locations[u], locations[v]);
            if (d <= 0.0)
                throw DuplicateCoordinates("locations " + std::to_string(locations[u].id) +
                                           " and " + std::to_string(locations[v].id));
            g.edges.push_back({u, v, d, 0.0});
        }
    }

    double sigma;
    if (kernel_sigma_km) {
        sigma = *kernel_sigma_km;
        if (sigma <= 0.0) throw ParameterOutOfRange("kernel sigma must be positive");
    } else {
        // median pairwise distance
        std::vector<double> distances(g.edges.size());
        for (std::size_t i = 0; i < g.edges.size(); ++i) distances[i] = g.edges[i].distance_km;
        auto mid = distances.begin() + distances.size() / 2;
        std::nth_element(distances.begin(), mid, distances.end());
        sigma = *mid;
    }
    for (auto& e : g.edges) e.weight = std::exp(-(e.distance_km * e.distance_km) / (2.0 * sigma * sigma));

    if (prune_frac > 0.0) {
        const std::size_t m = g.edges.size();
        const std::size_t keep = static_cast<std::size_t>(std::llround((1.0 - prune_frac) * m));
        // longest first; equal distances resolved by (u, v) order
        std::sort(g.edges.begin(), g.edges.end(), [](const SpatialGraph::Edge& a, const SpatialGraph::Edge& b) {
            if (a.distance_km != b.distance_km) return a.distance_km > b.distance_km;
            if (a.u != b.u) return a.u < b.u;
            return a.v < b.v;
        });
        g.edges.erase(g.edges.begin(), g.edges.end() - keep);
    }
    std::sort(g.edges.begin(), g.edges.end(), [](const SpatialGraph::Edge& a, const SpatialGraph::Edge& b) {
        if (a.u != b.u) return a.u < b.u;
        return a.v < b.v;
    });

    if (!g.connected())
        throw DisconnectedAfterPrune("prune_frac " + format_double(prune_frac) +
                                     " disconnects the graph");
    g.build_adjacency();
    return g;
}

std::vector<Location> load_locations_csv(const std::filesystem::path& path) {
    const auto lines = read_lines(path);
    if (lines[0] != "id,latitude,longitude")
        throw MalformedHeader(path.string() + ": expected 'id,latitude,longitude'");
    std::vector<Location> locations;
    locations.reserve(lines.size() - 1);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto fields = split_csv_line(lines[i]);
        if (fields.size() != 3)
            throw UnparseableRow("line " + std::to_string(i + 1) + ": expected 3 fields");
        Location loc;
        loc.id = static_cast<int>(parse_int_field(fields[0], i + 1));
        loc.latitude = parse_double_field(fields[1], i + 1);
        loc.longitude = parse_double_field(fields[2], i + 1);
        check_coordinates(loc);
        locations.push_back(loc);
    }
    // ids must be 0..n-1 in order
    for (std::size_t i = 0; i < locations.size(); ++i)
        if (locations[i].id != static_cast<int>(i))
            throw UnparseableRow("location ids must be contiguous from 0");
    return locations;
}

void save_locations_csv(const std::filesystem::path& path, std::span<const Location> locations) {
    std::string out = "id,latitude,longitude\n";
    for (const auto& loc : locations) {
        out += std::to_string(loc.id);
        out += ',';
        out += format_double(loc.latitude);
        out += ',';
        out += format_double(loc.longitude);
        out += '\n';
    }
    write_text_file(path, out);
}

SpatialGraph load_graph_csv(const std::filesystem::path& path) {
    const auto lines = read_lines(path);
    if (lines[0] != "u,v,distance_km,weight")
        throw MalformedHeader(path.string() + ": expected 'u,v,distance_km,weight'");
    SpatialGraph g;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto fields = split_csv_line(lines[i]);
        if (fields.size() != 4)
            throw UnparseableRow("line " + std::to_string(i + 1) + ": expected 4 fields");
        SpatialGraph::Edge e;
        e.u = static_cast<int>(parse_int_field(fields[0], i + 1));
        e.v = static_cast<int>(parse_int_field(fields[1], i + 1));
        e.distance_km = parse_double_field(fields[2], i + 1);
        e.weight = parse_double_field(fields[3], i + 1);
        if (e.u >= e.v || e.distance_km <= 0.0 || e.weight <= 0.0)
            throw UnparseableRow("line " + std::to_string(i + 1) + ": invalid edge");
        g.edges.push_back(e);
        g.n = std::max(g.n, e.v + 1);
    }
    g.build_adjacency();
    return g;
}

void save_graph_csv(const std::filesystem::path& path, const SpatialGraph& graph) {
    std::string out = "u,v,distance_km,weight\n";
    for (const auto& e : graph.edges) {
        out += std::to_string(e.u);
        out += ',';
        out += std::to_string(e.v);
        out += ',';
        out += format_double(e.distance_km);
        out += ',';
        out += format_double(e.weight);
        out += '\n';
    }
    write_text_file(path, out);
}

}  // namespace helio
