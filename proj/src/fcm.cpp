#include <fcsplan/fcm.hpp>

#include <cmath>

namespace fcsplan {

namespace {

/// Minutes from chain origin to the node at path position `pos`.
int travel_minutes(const CoupledNetwork& net, const TripChain& chain, std::size_t pos,
                   double avg_speed_mph) {
    double units = 0.0;
    for (std::size_t i = 0; i + 1 <= pos; ++i) {
        const NodeId a = chain.path[i];
        const NodeId b = chain.path[i + 1];
        for (const auto& nb : net.transport.adjacency[a]) {
            if (nb.node == b) {
                units += nb.distance;
                break;
            }
        }
    }
    const double miles = units * net.transport.distance_unit_miles;
    return static_cast<int>(std::lround(miles / avg_speed_mph * 60.0));
}

}  // namespace

CaptureResult evaluate_capture(const CoupledNetwork& net, const Fleet& fleet,
                               const Placement& placement, const StationFilter& reachable) {
    if (placement.size() != net.num_candidates())
        throw ValidationError("evaluate_capture: placement length must equal |K|");

    CaptureResult result;
    const int q_count = fleet.num_chains();
    result.y = BinaryVector::Zero(q_count);
    result.charging_node_of_chain.assign(q_count, 0);

    for (int q = 0; q < q_count; ++q) {
        const TripChain& chain = fleet.chains[q];
        double units = 0.0;
        for (std::size_t pos = 0; pos < chain.path.size(); ++pos) {
            if (pos > 0)
                for (const auto& nb : net.transport.adjacency[chain.path[pos - 1]])
                    if (nb.node == chain.path[pos]) {
                        units += nb.distance;
                        break;
                    }
            const int k = net.candidate_index(chain.path[pos]);
            if (k < 0 || !placement[k]) continue;
            if (reachable && !reachable(chain, chain.path[pos], units)) continue;
            result.y[q] = 1;
            result.captured_volume += fleet.flows[q];
            result.charging_node_of_chain[q] = chain.path[pos];
            const int travel = travel_minutes(net, chain, pos, fleet.spec.avg_speed_mph);
            for (int vi : fleet.chain_vehicles[q]) {
                const Vehicle& veh = fleet.vehicles[vi];
                result.captured_vehicles.push_back(
                    {veh.id, chain.path[pos], veh.depart_min + travel});
            }
            break;  // first usable open station along the path
        }
    }
    return result;
}

BinaryMatrix capture_matrix(const CoupledNetwork& net, const Fleet& fleet) {
    const int q_count = fleet.num_chains();
    BinaryMatrix matrix = BinaryMatrix::Zero(q_count, net.num_candidates());
    for (int q = 0; q < q_count; ++q)
        for (const NodeId node : fleet.chains[q].path) {
            const int k = net.candidate_index(node);
            if (k >= 0) matrix(q, k) = 1;
        }
    return matrix;
}

int captured_volume_from_matrix(const BinaryMatrix& matrix, const Fleet& fleet,
                                const Placement& placement) {
    if (placement.size() != matrix.cols())
        throw ValidationError("captured_volume_from_matrix: placement length must equal |K|");
    int volume = 0;
    for (Eigen::Index q = 0; q < matrix.rows(); ++q) {
        for (Eigen::Index k = 0; k < matrix.cols(); ++k) {
            if (matrix(q, k) && placement[k]) {
                volume += fleet.flows[q];
                break;
            }
        }
    }
    return volume;
}

}  // namespace fcsplan
