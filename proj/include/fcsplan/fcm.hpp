#pragma once

#include <functional>
#include <vector>

#include <fcsplan/demand.hpp>
#include <fcsplan/network.hpp>
#include <fcsplan/types.hpp>

namespace fcsplan {

/// Optional refinement hook, disabled by default: when set, a station on a
/// chain's path only counts as reachable if the filter accepts it. Arguments
/// are the chain, the station node and the en-route distance to it in units.
using StationFilter = std::function<bool(const TripChain&, NodeId, double)>;

struct CapturedVehicle {
    int vehicle_id = 0;
    NodeId station_node = 0;   // first open station along the vehicle's path
    int charge_start_min = 0;  // arrival at that station
};

struct CaptureResult {
    BinaryVector y;          // capture indicator per chain, aligned with fleet.chains
    int captured_volume = 0; // sum of f_q over captured chains
    std::vector<CapturedVehicle> captured_vehicles;
    std::vector<NodeId> charging_node_of_chain;  // 0 when chain not captured
};

/// A chain is captured iff at least one open station lies on its path. The
/// charging node is the first open station in path order; the arrival time
/// there timestamps the vehicle's load pulse.
CaptureResult evaluate_capture(const CoupledNetwork& net, const Fleet& fleet,
                               const Placement& placement,
                               const StationFilter& reachable = nullptr);

/// A[q][k] = 1 iff candidate k lies on chain q's path. Capture through the
/// matrix must agree with the direct per-chain scan.
BinaryMatrix capture_matrix(const CoupledNetwork& net, const Fleet& fleet);

/// Captured volume computed from a precomputed capture matrix.
int captured_volume_from_matrix(const BinaryMatrix& matrix, const Fleet& fleet,
                                const Placement& placement);

}  // namespace fcsplan
