#include <fcsplan/io.hpp>

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace fcsplan {

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ParseError("cannot write file: " + path);
    out << content;
}

std::string format_double(double value) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    for (const char c : line) {
        if (c == ',' || c == ' ' || c == '\t') {
            if (!field.empty()) fields.push_back(std::move(field));
            field.clear();
        } else if (c != '\r') {
            field += c;
        }
    }
    if (!field.empty()) fields.push_back(std::move(field));
    return fields;
}

bool is_number(const std::string& s) {
    if (s.empty()) return false;
    char* end = nullptr;
    std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size();
}

}  // namespace

ArrayXd load_base_load_csv(const std::string& path) {
    std::istringstream in(read_text_file(path));
    std::string line;
    std::vector<double> values;
    int line_no = 0;
    long expected_index = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto fields = split_fields(line);
        if (fields.empty()) continue;
        if (line_no == 1 && !is_number(fields[0])) continue;  // header
        const std::string where = path + ":" + std::to_string(line_no);
        if (fields.size() != 2 || !is_number(fields[0]) || !is_number(fields[1]))
            throw ValidationError(where + ": expected 'interval_index,kw'");
        const long idx = std::strtol(fields[0].c_str(), nullptr, 10);
        if (idx != expected_index)
            throw ValidationError(where + ": interval_index out of order (expected " +
                                  std::to_string(expected_index) + ")");
        ++expected_index;
        values.push_back(std::strtod(fields[1].c_str(), nullptr));
    }
    if (values.empty()) throw ValidationError(path + ": no load rows");
    return Eigen::Map<const ArrayXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

std::vector<Placement> load_placements_file(const std::string& path, int num_candidates) {
    std::istringstream in(read_text_file(path));
    std::string line;
    std::vector<Placement> placements;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto fields = split_fields(line);
        if (fields.empty() || fields[0].starts_with('#')) continue;
        const std::string where = path + ":" + std::to_string(line_no);
        if (static_cast<int>(fields.size()) != num_candidates)
            throw ValidationError(where + ": expected " + std::to_string(num_candidates) +
                                  " entries, got " + std::to_string(fields.size()));
        Placement x(num_candidates);
        for (int k = 0; k < num_candidates; ++k) {
            if (fields[k] == "0")
                x[k] = 0;
            else if (fields[k] == "1")
                x[k] = 1;
            else
                throw ValidationError(where + ": entry " + std::to_string(k + 1) +
                                      " must be 0 or 1");
        }
        placements.push_back(std::move(x));
    }
    if (placements.empty()) throw ValidationError(path + ": no placements");
    return placements;
}

std::string fleet_csv(const Fleet& fleet) {
    std::ostringstream os;
    os << "vehicle_id,depart_min,origin,dest,path,f_q_group\n";
    for (const Vehicle& veh : fleet.vehicles) {
        const TripChain& chain = fleet.chains[veh.chain_index];
        os << veh.id << ',' << veh.depart_min << ',' << chain.origin << ',' << chain.destination
           << ',' << chain_signature(chain) << ',' << veh.chain_index << '\n';
    }
    return os.str();
}

std::string capture_csv(const Fleet& fleet, const CaptureResult& capture) {
    std::ostringstream os;
    os << "chain_signature,f_q,y_q,charging_node\n";
    for (int q = 0; q < fleet.num_chains(); ++q) {
        os << chain_signature(fleet.chains[q]) << ',' << fleet.flows[q] << ','
           << static_cast<int>(capture.y[q]) << ',' << capture.charging_node_of_chain[q] << '\n';
    }
    return os.str();
}

std::string history_csv(const std::vector<ce::IterationStats>& history) {
    std::ostringstream os;
    os << "iter,best_S,mean_elite_S";
    if (!history.empty())
        for (Eigen::Index j = 0; j < history.front().v.size(); ++j) os << ",v_" << (j + 1);
    os << '\n';
    for (const auto& it : history) {
        os << it.iteration << ',' << format_double(it.best_S) << ','
           << format_double(it.mean_elite_S);
        for (Eigen::Index j = 0; j < it.v.size(); ++j) os << ',' << format_double(it.v[j]);
        os << '\n';
    }
    return os.str();
}

}  // namespace fcsplan
