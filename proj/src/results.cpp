#include "tcam/results.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "tcam/errors.hpp"

namespace tcam {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

const char* mode_name(SearchMode mode) { return mode == SearchMode::Tcam ? "tcam" : "cam"; }

// Colour-blind-safe qualitative palette, cycled for more tiers.
const std::vector<std::string> kPalette = {"#4477AA", "#EE6677", "#228833", "#CCBB44",
                                           "#66CCEE", "#AA3377", "#BBBBBB", "#EE7733"};

std::string dot_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

}  // namespace

ordered_json results_to_json(const DiscoverResult& result, const DiscoverSettings& settings, bool include_timings) {
    const auto& columns = result.data.columns;
    std::map<Edge, double> accepted_gain;
    for (const auto& entry : result.ordering.trace) accepted_gain[entry.edge] = entry.gain;

    ordered_json doc;
    doc["version"] = kResultsVersion;
    doc["mode"] = mode_name(result.mode);
    doc["columns"] = columns;
    doc["tiers"] = result.prior.tiers;
    ordered_json roots = ordered_json::array();
    for (auto r : result.prior.roots) roots.push_back(columns[r]);
    doc["roots"] = roots;

    ordered_json edges = ordered_json::array();
    for (const auto& edge : result.pruned.dag.edges()) {
        ordered_json e;
        e["source"] = columns[edge.first];
        e["target"] = columns[edge.second];
        if (auto it = accepted_gain.find(edge); it != accepted_gain.end()) {
            e["gain"] = it->second;
        } else {
            e["gain"] = nullptr;
        }
        e["p_value"] = result.pruned.p_values.at(edge);
        edges.push_back(e);
    }
    doc["edges"] = edges;

    ordered_json ordering = ordered_json::array();
    for (auto node : result.ordering.ordering.sequence()) ordering.push_back(columns[node]);
    doc["ordering"] = ordering;
    doc["scores"] = {{"initial", result.ordering.initial_score}, {"final", result.ordering.final_score}};
    doc["iterations"] = result.ordering.iterations();

    ordered_json ordered_graph = ordered_json::array();
    for (const auto& edge : result.ordering.dag_no.edges()) {
        ordered_graph.push_back({{"source", columns[edge.first]},
                                 {"target", columns[edge.second]},
                                 {"p_value", result.pruned.p_values.at(edge)}});
    }
    doc["ordered_graph"] = ordered_graph;

    ordered_json trace = ordered_json::array();
    for (const auto& entry : result.ordering.trace) {
        trace.push_back({{"source", columns[entry.edge.first]},
                         {"target", columns[entry.edge.second]},
                         {"gain", entry.gain},
                         {"score", entry.score}});
    }
    doc["trace"] = trace;

    ordered_json candidates = ordered_json::object();
    for (std::size_t l = 0; l < columns.size(); ++l) candidates[columns[l]] = result.neighbors.candidates[l].size();
    doc["pns"] = {{"threshold", settings.pns_threshold}, {"total", result.neighbors.total()}, {"candidates", candidates}};

    ordered_json prov_columns = ordered_json::array();
    for (std::size_t j = 0; j < columns.size(); ++j) {
        prov_columns.push_back({{"name", columns[j]}, {"imputed", result.data.provenance[j].imputed_count}});
    }
    ordered_json dropped = ordered_json::array();
    for (const auto& d : result.data.dropped) dropped.push_back({{"name", d.name}, {"reason", d.reason}});
    doc["provenance"] = {{"rows", result.data.n_rows()}, {"columns", prov_columns}, {"dropped", dropped}};

    doc["settings"] = {{"seed", settings.seed}, {"prune_alpha", settings.prune_alpha}, {"pns_threshold", settings.pns_threshold}};
    if (include_timings) {
        doc["timings"] = {{"prepare", result.timings.prepare},
                          {"pns", result.timings.pns},
                          {"ordering", result.timings.ordering},
                          {"pruning", result.timings.pruning},
                          {"total", result.timings.total}};
    } else {
        doc["timings"] = nullptr;
    }
    return doc;
}

std::vector<std::string> validate_results(const json& doc) {
    std::vector<std::string> problems;
    auto require = [&](const char* key, auto predicate, const char* what) {
        if (!doc.contains(key)) {
            problems.push_back(std::string("missing '") + key + "'");
        } else if (!predicate(doc[key])) {
            problems.push_back(std::string("'") + key + "' must be " + what);
        }
    };
    if (!doc.is_object()) return {"document must be an object"};
    require("version", [](const json& v) { return v.is_string() && v.get<std::string>() == kResultsVersion; },
            "the supported version string");
    require("columns", [](const json& v) {
        if (!v.is_array()) return false;
        std::set<std::string> seen;
        for (const auto& c : v) {
            if (!c.is_string() || !seen.insert(c.get<std::string>()).second) return false;
        }
        return true;
    }, "an array of unique strings");
    require("edges", [](const json& v) {
        if (!v.is_array()) return false;
        for (const auto& e : v) {
            if (!e.is_object() || !e.contains("source") || !e.contains("target") || !e.contains("gain") ||
                !e.contains("p_value") || !e["source"].is_string() || !e["target"].is_string() ||
                !(e["gain"].is_null() || e["gain"].is_number()) || !e["p_value"].is_number()) {
                return false;
            }
        }
        return true;
    }, "an array of {source, target, gain, p_value}");
    require("ordering", [](const json& v) { return v.is_array(); }, "an array");
    require("scores", [](const json& v) {
        return v.is_object() && v.contains("initial") && v.contains("final") && v["initial"].is_number() &&
               v["final"].is_number();
    }, "an object with numeric initial and final");
    require("provenance", [](const json& v) { return v.is_object(); }, "an object");
    require("timings", [](const json& v) { return v.is_null() || v.is_object(); }, "null or an object");
    if (!problems.empty()) return problems;

    std::set<std::string> names;
    for (const auto& c : doc["columns"]) names.insert(c.get<std::string>());
    for (const auto& e : doc["edges"]) {
        if (!names.count(e["source"].get<std::string>()) || !names.count(e["target"].get<std::string>())) {
            problems.push_back("edge references an unknown column");
        }
        const double pv = e["p_value"].get<double>();
        if (pv < 0.0 || pv > 1.0) problems.push_back("p_value outside [0, 1]");
    }
    if (doc["ordering"].size() != doc["columns"].size()) problems.push_back("ordering must list every column once");
    if (doc.contains("tiers") && (!doc["tiers"].is_array() || doc["tiers"].size() != doc["columns"].size())) {
        problems.push_back("'tiers' must have one entry per column");
    }
    return problems;
}

EdgeSet ResultsDocument::edge_set() const {
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < columns.size(); ++i) index[columns[i]] = i;
    EdgeSet out;
    for (const auto& e : edges) out.emplace(index.at(e.source), index.at(e.target));
    return out;
}

ResultsDocument parse_results(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(std::string("results: ") + e.what());
    }
    const auto problems = validate_results(doc);
    if (!problems.empty()) throw InputError("results: " + problems.front());

    ResultsDocument out;
    out.columns = doc["columns"].get<std::vector<std::string>>();
    if (doc.contains("tiers")) {
        out.tiers = doc["tiers"].get<std::vector<int>>();
    } else {
        out.tiers.assign(out.columns.size(), 1);
    }
    for (const auto& e : doc["edges"]) {
        ResultEdge edge;
        edge.source = e["source"].get<std::string>();
        edge.target = e["target"].get<std::string>();
        if (!e["gain"].is_null()) edge.gain = e["gain"].get<double>();
        edge.p_value = e["p_value"].get<double>();
        out.edges.push_back(edge);
    }
    if (doc["timings"].is_object() && doc["timings"].contains("total")) out.total_time = doc["timings"]["total"].get<double>();
    if (doc.contains("iterations")) out.iterations = doc["iterations"].get<std::size_t>();
    return out;
}

ordered_json truth_to_json(const SemSpec& spec) {
    const auto names = spec.column_names();
    ordered_json doc;
    doc["columns"] = names;
    ordered_json edges = ordered_json::array();
    for (const auto& [k, l] : spec.dag.edges()) edges.push_back({names[k], names[l]});
    doc["edges"] = edges;
    if (spec.tiers) {
        ordered_json tiers = ordered_json::object();
        for (std::size_t j = 0; j < names.size(); ++j) tiers[names[j]] = (*spec.tiers)[j];
        doc["tiers"] = tiers;
    }
    ordered_json functions = ordered_json::array();
    for (const auto& [edge, f] : spec.functions) {
        functions.push_back({{"source", names[edge.first]},
                             {"target", names[edge.second]},
                             {"kind", to_string(f.kind)},
                             {"a", f.amplitude},
                             {"b", f.frequency}});
    }
    doc["functions"] = functions;
    doc["noise_sd"] = spec.noise_sd;
    return doc;
}

TruthDocument parse_truth(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(std::string("truth: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("columns") || !doc.contains("edges")) {
        throw InputError("truth: expected 'columns' and 'edges'");
    }
    TruthDocument out;
    out.columns = doc["columns"].get<std::vector<std::string>>();
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < out.columns.size(); ++i) index[out.columns[i]] = i;
    for (const auto& e : doc["edges"]) {
        if (!e.is_array() || e.size() != 2) throw InputError("truth: edges must be [source, target]");
        auto s = index.find(e[0].get<std::string>());
        auto t = index.find(e[1].get<std::string>());
        if (s == index.end() || t == index.end()) throw InputError("truth: edge references unknown column");
        out.edges.emplace(s->second, t->second);
    }
    if (doc.contains("tiers")) {
        std::vector<int> tiers(out.columns.size(), 1);
        for (const auto& [name, tier] : doc["tiers"].items()) tiers.at(index.at(name)) = tier.get<int>();
        out.tiers = tiers;
    }
    return out;
}

std::string to_dot(const ResultsDocument& doc) {
    std::ostringstream out;
    out << "digraph causal_graph {\n";
    out << "  node [style=filled, fontname=\"Helvetica\"];\n";
    auto colour = [&](std::size_t node) {
        const int tier = node < doc.tiers.size() ? doc.tiers[node] : 1;
        return kPalette[static_cast<std::size_t>(std::max(tier, 1) - 1) % kPalette.size()];
    };
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < doc.columns.size(); ++i) {
        index[doc.columns[i]] = i;
        const int tier = i < doc.tiers.size() ? doc.tiers[i] : 1;
        out << "  " << dot_quote(doc.columns[i]) << " [fillcolor=" << dot_quote(colour(i)) << ", tier=" << tier << "];\n";
    }
    for (const auto& e : doc.edges) {
        out << "  " << dot_quote(e.source) << " -> " << dot_quote(e.target) << " [color=" << dot_quote(colour(index.at(e.source)))
            << "];\n";
    }
    out << "}\n";
    return out.str();
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

}  // namespace tcam
