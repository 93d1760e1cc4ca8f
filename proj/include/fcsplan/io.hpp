#pragma once

#include <string>
#include <vector>

#include <fcsplan/ce.hpp>
#include <fcsplan/demand.hpp>
#include <fcsplan/fcm.hpp>
#include <fcsplan/gadm.hpp>
#include <fcsplan/network.hpp>
#include <fcsplan/objective.hpp>

namespace fcsplan {

/// CSV of `interval_index,kw` rows (header optional, indices 0..n-1 in order).
ArrayXd load_base_load_csv(const std::string& path);

/// One placement per line: |K| comma- or whitespace-separated 0/1 entries.
/// Bad rows are reported with their line number.
std::vector<Placement> load_placements_file(const std::string& path, int num_candidates);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

/// Shortest decimal representation that round-trips a double.
std::string format_double(double value);

std::string fleet_csv(const Fleet& fleet);
std::string capture_csv(const Fleet& fleet, const CaptureResult& capture);
std::string history_csv(const std::vector<ce::IterationStats>& history);

}  // namespace fcsplan
