#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <fcsplan/types.hpp>

namespace fcsplan {

/// Thrown when an input document parses but violates a model invariant.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Thrown when an input file cannot be read or is not well-formed.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Arc {
    NodeId u = 0;
    NodeId v = 0;
    double distance = 0.0;  // in network units, > 0
};

/// Undirected, connected road network with node ids 1..n_nodes.
struct TransportGraph {
    int n_nodes = 0;
    std::vector<Arc> arcs;
    double distance_unit_miles = 1.0;

    // adjacency[u] sorted by neighbor id; built by finalize()
    struct Neighbor {
        NodeId node;
        double distance;
    };
    std::vector<std::vector<Neighbor>> adjacency;

    void finalize();  // builds adjacency, validates invariants
    bool has_node(NodeId n) const { return n >= 1 && n <= n_nodes; }
};

/// Road network coupled to an electric feeder: every transport node maps to a
/// distinct electric node, and a subset of transport nodes may host a station.
struct CoupledNetwork {
    TransportGraph transport;
    std::vector<NodeId> electric_node_of;  // index 1..n_nodes, injective
    std::vector<NodeId> candidates;        // ordered set K

    int num_candidates() const { return static_cast<int>(candidates.size()); }

    /// Index of node in the candidate set, or -1.
    int candidate_index(NodeId node) const;

    /// Checks invariants and rebuilds the candidate lookup. Must be called
    /// after any change to candidates; the network is immutable afterwards.
    void validate();

  private:
    std::vector<int> candidate_index_of_;
};

struct TripChain {
    NodeId origin = 0;
    NodeId destination = 0;
    std::vector<NodeId> path;  // origin ... destination, consecutive nodes adjacent
    double length = 0.0;       // network units
};

/// Parses and validates a network document (see README for the schema).
CoupledNetwork load_network(const std::string& json_text);
CoupledNetwork load_network_file(const std::string& path);

/// Minimum-distance path from origin to destination. Among equal-length paths
/// the lexicographically smallest node sequence is returned.
TripChain shortest_path(const CoupledNetwork& net, NodeId origin, NodeId destination);

double path_distance_miles(const CoupledNetwork& net, const TripChain& chain);

}  // namespace fcsplan
