#include <fcsplan/run.hpp>

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include <fcsplan/rng.hpp>

namespace fcsplan {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

double get_number(const json& obj, const char* key, double fallback, const std::string& ctx) {
    if (!obj.contains(key)) return fallback;
    if (!obj.at(key).is_number())
        throw ValidationError(ctx + "." + key + ": expected a number");
    return obj.at(key).get<double>();
}

std::int64_t get_integer(const json& obj, const char* key, std::int64_t fallback,
                         const std::string& ctx) {
    if (!obj.contains(key)) return fallback;
    if (!obj.at(key).is_number_integer())
        throw ValidationError(ctx + "." + key + ": expected an integer");
    return obj.at(key).get<std::int64_t>();
}

std::string resolve(const std::string& base_dir, const std::string& path) {
    if (path.empty() || fs::path(path).is_absolute() || base_dir.empty()) return path;
    return (fs::path(base_dir) / path).string();
}

OdPolicy parse_od_policy(const json& obj) {
    OdPolicy policy;
    if (!obj.contains("od_policy")) return policy;
    const json& od = obj.at("od_policy");
    if (!od.is_object() || !od.contains("type"))
        throw ValidationError("fleet.od_policy: expected an object with a 'type'");
    const std::string type = od.at("type").get<std::string>();
    if (type == "uniform") {
        policy.kind = OdPolicy::Kind::Uniform;
    } else if (type == "pairs") {
        policy.kind = OdPolicy::Kind::Pairs;
        if (!od.contains("pairs") || !od.at("pairs").is_array())
            throw ValidationError("fleet.od_policy.pairs: expected an array");
        for (const auto& row : od.at("pairs")) {
            if (!row.is_array() || row.size() < 2)
                throw ValidationError("fleet.od_policy.pairs: expected [origin, dest, weight?]");
            OdPolicy::WeightedPair p;
            p.origin = row[0].get<NodeId>();
            p.destination = row[1].get<NodeId>();
            p.weight = row.size() > 2 ? row[2].get<double>() : 1.0;
            policy.pairs.push_back(p);
        }
    } else {
        throw ValidationError("fleet.od_policy.type: unknown type '" + type + "'");
    }
    return policy;
}

}  // namespace

RunConfig RunConfig::from_json_text(const std::string& text, const std::string& base_dir) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("run config: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("run config: expected a JSON object");

    RunConfig cfg;
    if (!doc.contains("network") || !doc.at("network").is_string())
        throw ValidationError("config: missing 'network' path");
    cfg.network_path = resolve(base_dir, doc.at("network").get<std::string>());

    if (doc.contains("mode")) {
        const std::string mode = doc.at("mode").get<std::string>();
        if (mode == "ce")
            cfg.mode = RunMode::Ce;
        else if (mode == "enumerate")
            cfg.mode = RunMode::Enumerate;
        else if (mode == "evaluate-placement")
            cfg.mode = RunMode::EvaluatePlacement;
        else
            throw ValidationError("config.mode: unknown mode '" + mode + "'");
    }
    if (doc.contains("out_dir")) cfg.out_dir = doc.at("out_dir").get<std::string>();

    if (!doc.contains("base_load_csv") || !doc.at("base_load_csv").is_string())
        throw ValidationError("config: missing 'base_load_csv' path");
    cfg.base_load_csv = resolve(base_dir, doc.at("base_load_csv").get<std::string>());

    const json fleet = doc.contains("fleet") ? doc.at("fleet") : json::object();
    cfg.fleet.n_vehicles =
        static_cast<int>(get_integer(fleet, "n_vehicles", cfg.fleet.n_vehicles, "fleet"));
    if (fleet.contains("departure_window_hours")) {
        const auto& win = fleet.at("departure_window_hours");
        if (!win.is_array() || win.size() != 2)
            throw ValidationError("fleet.departure_window_hours: expected [start, end)");
        cfg.fleet.departure_start_hour = win[0].get<double>();
        cfg.fleet.departure_end_hour = win[1].get<double>();
    }
    cfg.fleet.od_policy = parse_od_policy(fleet);
    cfg.fleet.charge_energy_kwh =
        get_number(fleet, "charge_energy_kwh", cfg.fleet.charge_energy_kwh, "fleet");
    cfg.fleet.charge_power_kw =
        get_number(fleet, "charge_power_kw", cfg.fleet.charge_power_kw, "fleet");
    cfg.fleet.avg_speed_mph = get_number(fleet, "avg_speed_mph", cfg.fleet.avg_speed_mph, "fleet");

    const json xf = doc.contains("transformer") ? doc.at("transformer") : json::object();
    TransformerSpec& tr = cfg.objective.transformer;
    tr.rated_kva = get_number(xf, "rated_kva", tr.rated_kva, "transformer");
    tr.capital_cost = get_number(xf, "capital_cost", tr.capital_cost, "transformer");
    tr.no_load_loss_kw = get_number(xf, "no_load_loss_kw", tr.no_load_loss_kw, "transformer");
    tr.load_loss_rated_kw =
        get_number(xf, "load_loss_rated_kw", tr.load_loss_rated_kw, "transformer");
    tr.energy_price_per_kwh =
        get_number(xf, "energy_price_per_kwh", tr.energy_price_per_kwh, "transformer");
    tr.insulation_life_hours =
        get_number(xf, "insulation_life_hours", tr.insulation_life_hours, "transformer");
    const json th = xf.contains("thermal") ? xf.at("thermal") : json::object();
    tr.thermal.ambient_c = get_number(th, "ambient_c", tr.thermal.ambient_c, "thermal");
    tr.thermal.hotspot_rise_rated_c =
        get_number(th, "hotspot_rise_rated_c", tr.thermal.hotspot_rise_rated_c, "thermal");
    tr.thermal.top_oil_rise_rated_c =
        get_number(th, "top_oil_rise_rated_c", tr.thermal.top_oil_rise_rated_c, "thermal");
    tr.thermal.oil_exponent_n =
        get_number(th, "oil_exponent_n", tr.thermal.oil_exponent_n, "thermal");
    tr.thermal.winding_exponent_m =
        get_number(th, "winding_exponent_m", tr.thermal.winding_exponent_m, "thermal");
    tr.thermal.oil_time_constant_min =
        get_number(th, "oil_time_constant_min", tr.thermal.oil_time_constant_min, "thermal");

    const json obj = doc.contains("objective") ? doc.at("objective") : json::object();
    cfg.objective.capture_value_per_vehicle = get_number(
        obj, "capture_value_per_vehicle", cfg.objective.capture_value_per_vehicle, "objective");
    cfg.objective.penalty_coefficient =
        get_number(obj, "penalty_coefficient", cfg.objective.penalty_coefficient, "objective");
    if (obj.contains("penalty_form")) {
        const std::string form = obj.at("penalty_form").get<std::string>();
        if (form == "abs")
            cfg.objective.penalty_form = PenaltyForm::Abs;
        else if (form == "quadratic")
            cfg.objective.penalty_form = PenaltyForm::Quadratic;
        else
            throw ValidationError("objective.penalty_form: expected 'abs' or 'quadratic'");
    }
    if (!obj.contains("n_fcs")) throw ValidationError("objective: missing 'n_fcs'");
    cfg.objective.n_fcs = static_cast<int>(get_integer(obj, "n_fcs", 0, "objective"));
    cfg.objective.span_hours = get_number(obj, "span_hours", cfg.objective.span_hours, "objective");
    cfg.objective.interval_minutes = static_cast<int>(
        get_integer(obj, "interval_minutes", cfg.objective.interval_minutes, "objective"));

    const json ce = doc.contains("ce") ? doc.at("ce") : json::object();
    cfg.ce.n_samples = static_cast<int>(get_integer(ce, "n_samples", cfg.ce.n_samples, "ce"));
    cfg.ce.rarity = get_number(ce, "rarity", cfg.ce.rarity, "ce");
    cfg.ce.smoothing = get_number(ce, "smoothing", cfg.ce.smoothing, "ce");
    cfg.ce.max_iterations =
        static_cast<int>(get_integer(ce, "max_iterations", cfg.ce.max_iterations, "ce"));
    cfg.ce.degeneracy_epsilon =
        get_number(ce, "degeneracy_epsilon", cfg.ce.degeneracy_epsilon, "ce");
    cfg.ce.workers = static_cast<int>(get_integer(ce, "workers", cfg.ce.workers, "ce"));

    // One top-level seed drives every stream; explicit per-module seeds win.
    const bool has_fleet_seed = fleet.contains("seed");
    const bool has_ce_seed = ce.contains("seed");
    if (has_fleet_seed)
        cfg.fleet.seed = static_cast<std::uint64_t>(get_integer(fleet, "seed", 1, "fleet"));
    if (has_ce_seed) cfg.ce.seed = static_cast<std::uint64_t>(get_integer(ce, "seed", 1, "ce"));
    if (doc.contains("seed")) {
        const auto seed = static_cast<std::uint64_t>(get_integer(doc, "seed", 1, "config"));
        if (!has_fleet_seed) cfg.fleet.seed = seed;
        if (!has_ce_seed) cfg.ce.seed = splitmix64(seed);
    }

    if (doc.contains("placement")) {
        const auto& pl = doc.at("placement");
        if (!pl.is_array()) throw ValidationError("config.placement: expected node id array");
        for (const auto& v : pl) cfg.placement_nodes.push_back(v.get<NodeId>());
    }
    if (doc.contains("trace_objective"))
        cfg.trace_objective = doc.at("trace_objective").get<bool>();
    cfg.max_enumeration = static_cast<std::uint64_t>(
        get_integer(doc, "max_enumeration", static_cast<std::int64_t>(cfg.max_enumeration),
                    "config"));
    return cfg;
}

RunConfig RunConfig::from_file(const std::string& path) {
    const std::string text = read_text_file(path);
    return from_json_text(text, fs::path(path).parent_path().string());
}

Placement placement_from_nodes(const CoupledNetwork& net, const std::vector<NodeId>& nodes) {
    Placement x = Placement::Zero(net.num_candidates());
    for (const NodeId node : nodes) {
        const int k = net.candidate_index(node);
        if (k < 0)
            throw ValidationError("placement: node " + std::to_string(node) +
                                  " is not a candidate location");
        x[k] = 1;
    }
    return x;
}

std::vector<NodeId> station_nodes(const CoupledNetwork& net, const Placement& placement) {
    std::vector<NodeId> nodes;
    for (Eigen::Index k = 0; k < placement.size(); ++k)
        if (placement[k]) nodes.push_back(net.candidates[k]);
    return nodes;
}

namespace {

json evaluation_json(const CoupledNetwork& net, const Placement& placement,
                     const Evaluation& ev, const ObjectiveSpec& spec) {
    json out;
    out["S"] = ev.S;
    out["placement"] = std::vector<int>(placement.data(), placement.data() + placement.size());
    out["station_nodes"] = station_nodes(net, placement);
    out["captured_volume"] = ev.capture.captured_volume;
    out["capture_value"] = spec.capture_value_per_vehicle * ev.capture.captured_volume;
    out["penalty"] = ev.penalty;
    out["tco"] = {{"total", ev.tco.total},
                  {"aging_cost", ev.tco.aging_cost},
                  {"no_load_loss_cost", ev.tco.no_load_loss_cost},
                  {"load_loss_cost", ev.tco.load_loss_cost},
                  {"loss_of_life", ev.tco.loss_of_life}};
    return out;
}

void write_trace(const std::string& out_dir, const std::vector<json>& lines) {
    std::ostringstream os;
    for (const json& line : lines) os << line.dump() << '\n';
    write_text_file((fs::path(out_dir) / "objective_trace.jsonl").string(), os.str());
}

}  // namespace

int cmd_run(const RunConfig& config, std::string* error_message) {
    try {
        const CoupledNetwork net = load_network_file(config.network_path);
        ObjectiveSpec spec = config.objective;
        spec.base_load_kw = load_base_load_csv(config.base_load_csv);
        spec.validate(net);
        config.fleet.validate(net);
        config.ce.validate();
        if (config.mode == RunMode::EvaluatePlacement && config.placement_nodes.empty())
            throw ValidationError("config: evaluate-placement mode needs a 'placement' list");

        const Fleet fleet = generate_fleet(net, config.fleet);
        const Evaluator evaluator(net, fleet, spec);

        Placement chosen;
        json result;
        result["schema_version"] = 1;
        bool converged = true;

        if (config.mode == RunMode::Ce) {
            result["mode"] = "ce";
            const ce::CeResult ce_result = ce::run(evaluator, spec.n_fcs, config.ce);
            chosen = ce_result.placement;
            converged = ce_result.converged;
            result["converged"] = ce_result.converged;
            result["iterations"] = ce_result.iterations;
            fs::create_directories(config.out_dir);
            write_text_file((fs::path(config.out_dir) / "history.csv").string(),
                            history_csv(ce_result.history));
        } else if (config.mode == RunMode::Enumerate) {
            result["mode"] = "enumerate";
            const EnumerationResult best =
                brute_force_optimum(net, fleet, spec, config.max_enumeration);
            chosen = best.placement;
            result["evaluated"] = best.evaluated;
        } else {
            result["mode"] = "evaluate-placement";
            chosen = placement_from_nodes(net, config.placement_nodes);
        }

        const Evaluation ev = evaluator.evaluate(chosen);
        result["n_fcs"] = spec.n_fcs;
        result.update(evaluation_json(net, chosen, ev, spec));
        result["seeds"] = {{"fleet", config.fleet.seed}, {"ce", config.ce.seed}};

        fs::create_directories(config.out_dir);
        write_text_file((fs::path(config.out_dir) / "result.json").string(),
                        result.dump(2) + "\n");
        write_text_file((fs::path(config.out_dir) / "fleet.csv").string(), fleet_csv(fleet));
        write_text_file((fs::path(config.out_dir) / "capture.csv").string(),
                        capture_csv(fleet, ev.capture));
        if (config.trace_objective)
            write_trace(config.out_dir, {evaluation_json(net, chosen, ev, spec)});

        return converged ? kExitOk : kExitNotConverged;
    } catch (const ParseError& e) {
        if (error_message) *error_message = e.what();
        return kExitValidationFailure;
    } catch (const ValidationError& e) {
        if (error_message) *error_message = e.what();
        return kExitValidationFailure;
    }
}

int cmd_run_file(const std::string& config_path, std::string* error_message) {
    RunConfig config;
    try {
        config = RunConfig::from_file(config_path);
    } catch (const ParseError& e) {
        if (error_message) *error_message = e.what();
        return kExitConfigUnreadable;
    } catch (const ValidationError& e) {
        if (error_message) *error_message = e.what();
        return kExitValidationFailure;
    }
    return cmd_run(config, error_message);
}

int cmd_compare(const RunConfig& config, const std::string& placements_path,
                std::string* error_message) {
    try {
        const CoupledNetwork net = load_network_file(config.network_path);
        ObjectiveSpec spec = config.objective;
        spec.base_load_kw = load_base_load_csv(config.base_load_csv);
        spec.validate(net);
        config.fleet.validate(net);

        const Fleet fleet = generate_fleet(net, config.fleet);
        const Evaluator evaluator(net, fleet, spec);
        const std::vector<Placement> placements =
            load_placements_file(placements_path, net.num_candidates());

        struct Row {
            int input_index;
            Placement placement;
            Evaluation ev;
        };
        std::vector<Row> rows;
        std::vector<json> trace;
        for (std::size_t i = 0; i < placements.size(); ++i) {
            Row row{static_cast<int>(i), placements[i], evaluator.evaluate(placements[i])};
            if (config.trace_objective)
                trace.push_back(evaluation_json(net, row.placement, row.ev, spec));
            rows.push_back(std::move(row));
        }
        std::stable_sort(rows.begin(), rows.end(),
                         [](const Row& a, const Row& b) { return a.ev.S < b.ev.S; });

        std::ostringstream os;
        os << "rank,input_index,S,tco_total,captured_volume,capture_value,penalty,station_nodes\n";
        for (std::size_t r = 0; r < rows.size(); ++r) {
            const Row& row = rows[r];
            os << (r + 1) << ',' << row.input_index << ',' << format_double(row.ev.S) << ','
               << format_double(row.ev.tco.total) << ',' << row.ev.capture.captured_volume << ','
               << format_double(spec.capture_value_per_vehicle * row.ev.capture.captured_volume)
               << ',' << format_double(row.ev.penalty) << ',';
            const auto nodes = station_nodes(net, row.placement);
            for (std::size_t i = 0; i < nodes.size(); ++i) os << (i ? "|" : "") << nodes[i];
            os << '\n';
        }
        fs::create_directories(config.out_dir);
        write_text_file((fs::path(config.out_dir) / "compare.csv").string(), os.str());
        std::cout << os.str();
        if (config.trace_objective) write_trace(config.out_dir, trace);
        return kExitOk;
    } catch (const ParseError& e) {
        if (error_message) *error_message = e.what();
        return kExitValidationFailure;
    } catch (const ValidationError& e) {
        if (error_message) *error_message = e.what();
        return kExitValidationFailure;
    }
}

}  // namespace fcsplan
