#include <fcsplan/network.hpp>

#include <algorithm>
#include <fstream>
#include <limits>
#include <queue>
#include <set>
#include <sstream>

#include <json.hpp>

namespace fcsplan {

namespace {

std::string arc_str(const Arc& a) {
    std::ostringstream os;
    os << "(" << a.u << "," << a.v << ")";
    return os.str();
}

}  // namespace

void TransportGraph::finalize() {
    if (n_nodes < 1) throw ValidationError("graph has no nodes");
    if (distance_unit_miles <= 0.0) throw ValidationError("distance_unit_miles must be > 0");

    std::set<std::pair<NodeId, NodeId>> seen;
    adjacency.assign(static_cast<std::size_t>(n_nodes) + 1, {});
    for (std::size_t i = 0; i < arcs.size(); ++i) {
        const Arc& a = arcs[i];
        const std::string where = "arcs[" + std::to_string(i) + "] " + arc_str(a);
        if (!has_node(a.u) || !has_node(a.v))
            throw ValidationError(where + ": endpoint not a graph node");
        if (a.u == a.v) throw ValidationError(where + ": self-loop");
        if (!(a.distance > 0.0)) throw ValidationError(where + ": distance must be > 0");
        const auto key = std::minmax(a.u, a.v);
        if (!seen.insert(key).second) throw ValidationError(where + ": duplicate arc");
        adjacency[a.u].push_back({a.v, a.distance});
        adjacency[a.v].push_back({a.u, a.distance});
    }
    for (auto& nbrs : adjacency)
        std::sort(nbrs.begin(), nbrs.end(),
                  [](const Neighbor& x, const Neighbor& y) { return x.node < y.node; });

    // connectivity
    std::vector<char> visited(static_cast<std::size_t>(n_nodes) + 1, 0);
    std::queue<NodeId> frontier;
    frontier.push(1);
    visited[1] = 1;
    int reached = 1;
    while (!frontier.empty()) {
        const NodeId u = frontier.front();
        frontier.pop();
        for (const Neighbor& nb : adjacency[u]) {
            if (!visited[nb.node]) {
                visited[nb.node] = 1;
                ++reached;
                frontier.push(nb.node);
            }
        }
    }
    if (reached != n_nodes) {
        for (NodeId n = 1; n <= n_nodes; ++n)
            if (!visited[n])
                throw ValidationError("graph is disconnected: node " + std::to_string(n) +
                                      " unreachable from node 1");
    }
}

int CoupledNetwork::candidate_index(NodeId node) const {
    if (node < 1 || node > transport.n_nodes) return -1;
    if (!candidate_index_of_.empty()) return candidate_index_of_[node];
    for (std::size_t i = 0; i < candidates.size(); ++i)
        if (candidates[i] == node) return static_cast<int>(i);
    return -1;
}

void CoupledNetwork::validate() {
    const int n = transport.n_nodes;
    if (static_cast<int>(electric_node_of.size()) != n + 1)
        throw ValidationError("electric_map must cover every transport node");
    std::set<NodeId> electric_seen;
    for (NodeId t = 1; t <= n; ++t) {
        const NodeId e = electric_node_of[t];
        if (e < 1)
            throw ValidationError("electric_map: missing entry for node " + std::to_string(t));
        if (!electric_seen.insert(e).second)
            throw ValidationError("electric_map: electric node " + std::to_string(e) +
                                  " mapped twice");
    }
    std::set<NodeId> cand_seen;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const NodeId c = candidates[i];
        const std::string where = "candidates[" + std::to_string(i) + "]";
        if (!transport.has_node(c))
            throw ValidationError(where + ": node " + std::to_string(c) + " not in graph");
        if (!cand_seen.insert(c).second)
            throw ValidationError(where + ": node " + std::to_string(c) + " listed twice");
    }
    candidate_index_of_.assign(static_cast<std::size_t>(n) + 1, -1);
    for (std::size_t i = 0; i < candidates.size(); ++i)
        candidate_index_of_[candidates[i]] = static_cast<int>(i);
}

CoupledNetwork load_network(const std::string& json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("network document: ") + e.what());
    }

    auto require = [&](const char* key) -> const nlohmann::json& {
        if (!doc.contains(key))
            throw ValidationError(std::string("network document: missing key '") + key + "'");
        return doc.at(key);
    };

    CoupledNetwork net;

    const auto& nodes = require("nodes");
    if (!nodes.is_array() || nodes.empty())
        throw ValidationError("nodes: expected a non-empty int array");
    std::vector<NodeId> ids;
    for (const auto& v : nodes) {
        if (!v.is_number_integer()) throw ValidationError("nodes: entries must be integers");
        ids.push_back(v.get<NodeId>());
    }
    std::vector<NodeId> sorted_ids = ids;
    std::sort(sorted_ids.begin(), sorted_ids.end());
    for (std::size_t i = 0; i < sorted_ids.size(); ++i) {
        if (sorted_ids[i] != static_cast<NodeId>(i) + 1)
            throw ValidationError("nodes: ids must be unique and contiguous from 1");
    }
    net.transport.n_nodes = static_cast<int>(ids.size());

    const auto& arcs = require("arcs");
    if (!arcs.is_array()) throw ValidationError("arcs: expected an array of [u,v,dist] triples");
    for (std::size_t i = 0; i < arcs.size(); ++i) {
        const auto& t = arcs[i];
        if (!t.is_array() || t.size() != 3 || !t[0].is_number_integer() ||
            !t[1].is_number_integer() || !t[2].is_number())
            throw ValidationError("arcs[" + std::to_string(i) + "]: expected [u, v, dist]");
        net.transport.arcs.push_back({t[0].get<NodeId>(), t[1].get<NodeId>(), t[2].get<double>()});
    }

    const auto& unit = require("distance_unit_miles");
    if (!unit.is_number()) throw ValidationError("distance_unit_miles: expected a number");
    net.transport.distance_unit_miles = unit.get<double>();

    net.transport.finalize();

    const auto& emap = require("electric_map");
    if (!emap.is_object()) throw ValidationError("electric_map: expected an object");
    net.electric_node_of.assign(static_cast<std::size_t>(net.transport.n_nodes) + 1, 0);
    for (const auto& [key, value] : emap.items()) {
        NodeId t = 0;
        try {
            t = std::stoi(key);
        } catch (...) {
            throw ValidationError("electric_map: key '" + key + "' is not a node id");
        }
        if (!net.transport.has_node(t))
            throw ValidationError("electric_map: key '" + key + "' is not a graph node");
        if (!value.is_number_integer())
            throw ValidationError("electric_map['" + key + "']: expected an integer");
        net.electric_node_of[t] = value.get<NodeId>();
    }

    const auto& cands = require("candidates");
    if (!cands.is_array()) throw ValidationError("candidates: expected an int array");
    for (const auto& v : cands) {
        if (!v.is_number_integer()) throw ValidationError("candidates: entries must be integers");
        net.candidates.push_back(v.get<NodeId>());
    }

    net.validate();
    return net;
}

CoupledNetwork load_network_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open network file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_network(buf.str());
}

TripChain shortest_path(const CoupledNetwork& net, NodeId origin, NodeId destination) {
    const TransportGraph& g = net.transport;
    if (!g.has_node(origin) || !g.has_node(destination))
        throw ValidationError("shortest_path: origin or destination not a graph node");

    TripChain chain;
    chain.origin = origin;
    chain.destination = destination;
    if (origin == destination) {
        chain.path = {origin};
        chain.length = 0.0;
        return chain;
    }

    // Dijkstra from the destination; the graph is undirected, so dist[u] is the
    // shortest distance from u to the destination.
    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(static_cast<std::size_t>(g.n_nodes) + 1, kInf);
    using Entry = std::pair<double, NodeId>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
    dist[destination] = 0.0;
    heap.push({0.0, destination});
    while (!heap.empty()) {
        const auto [d, u] = heap.top();
        heap.pop();
        if (d > dist[u]) continue;
        for (const auto& nb : g.adjacency[u]) {
            const double nd = d + nb.distance;
            if (nd < dist[nb.node]) {
                dist[nb.node] = nd;
                heap.push({nd, nb.node});
            }
        }
    }
    if (dist[origin] == kInf)
        throw ValidationError("shortest_path: destination " + std::to_string(destination) +
                              " unreachable from " + std::to_string(origin));

    // Walk greedily toward the destination. Neighbors are sorted by id, so the
    // first one on a shortest continuation yields the lexicographically
    // smallest node sequence among all minimum-distance paths.
    chain.path.push_back(origin);
    NodeId u = origin;
    while (u != destination) {
        NodeId next = 0;
        double step = 0.0;
        for (const auto& nb : g.adjacency[u]) {
            if (nb.distance + dist[nb.node] == dist[u]) {
                next = nb.node;
                step = nb.distance;
                break;
            }
        }
        if (next == 0)
            throw ValidationError("shortest_path: no shortest-path continuation from node " +
                                  std::to_string(u));
        chain.path.push_back(next);
        chain.length += step;
        u = next;
    }
    return chain;
}

double path_distance_miles(const CoupledNetwork& net, const TripChain& chain) {
    return chain.length * net.transport.distance_unit_miles;
}

}  // namespace fcsplan
