#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "tcam/dataprep.hpp"
#include "tcam/discover.hpp"
#include "tcam/errors.hpp"
#include "tcam/metrics.hpp"
#include "tcam/results.hpp"
#include "tcam/semgen.hpp"

namespace tcam::cli {

namespace {

using nlohmann::ordered_json;

struct GlobalFlags {
    std::uint64_t seed = 0;
    int threads = 1;
    double prune_alpha = 1e-3;
    double pns_threshold = 1e-2;
    std::string mode;  // empty: decided by the prior
    int basis_size = 10;
    double backfit_tol = 1e-6;
    int backfit_max_iter = 50;
    double gcv_gamma = 1.4;
};

DiscoverOptions make_options(const GlobalFlags& flags) {
    DiscoverOptions options;
    if (flags.mode == "cam") options.mode = SearchMode::Cam;
    if (flags.mode == "tcam") options.mode = SearchMode::Tcam;
    options.smoother.basis_size = flags.basis_size;
    options.smoother.backfit_tol = flags.backfit_tol;
    options.smoother.backfit_max_iter = flags.backfit_max_iter;
    options.smoother.gcv_gamma = flags.gcv_gamma;
    options.pns.coef_threshold = flags.pns_threshold;
    options.prune.alpha = flags.prune_alpha;
    options.seed = flags.seed;
    options.exec.threads = flags.threads;
    return options;
}

DiscoverSettings make_settings(const GlobalFlags& flags) {
    return {flags.seed, flags.prune_alpha, flags.pns_threshold};
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw InputError("cannot write '" + path + "'");
    file << content;
    if (!file) throw InputError("write to '" + path + "' failed");
}

void emit(const std::string& path, const std::string& content, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << content;
    } else {
        write_file(path, content);
    }
}

double mean_of(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

// Sample standard deviation; 0 for fewer than two values.
double sd_of(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double m = mean_of(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

// Re-indexes `edges` (over `from` names) onto `to` names. Both name sets must
// coincide.
EdgeSet remap(const EdgeSet& edges, const std::vector<std::string>& from, const std::vector<std::string>& to) {
    std::vector<std::string> a = from, b = to;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) throw NodeMismatchError("graphs are over different node sets");
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < to.size(); ++i) index[to[i]] = i;
    EdgeSet out;
    for (const auto& [s, t] : edges) out.emplace(index.at(from[s]), index.at(from[t]));
    return out;
}

std::string prior_json_for(const SemSpec& spec) {
    const auto names = spec.column_names();
    ordered_json tiers = ordered_json::object();
    for (std::size_t j = 0; j < names.size(); ++j) tiers[names[j]] = (*spec.tiers)[j];
    ordered_json doc;
    doc["tiers"] = tiers;
    return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------

struct DiscoverArgs {
    std::string data;
    std::string prior;
    std::string out;
    std::string dot;
    bool timings = false;
};

int cmd_discover(const GlobalFlags& flags, const DiscoverArgs& args, std::ostream& out) {
    const Dataset raw = read_csv_file(args.data);
    std::optional<PriorKnowledge> prior;
    if (!args.prior.empty()) prior = load_prior_file(args.prior, raw.columns);

    const DiscoverResult result = discover(raw, prior, make_options(flags));
    const auto doc = results_to_json(result, make_settings(flags), args.timings);
    emit(args.out, doc.dump(2) + "\n", out);
    if (!args.dot.empty()) write_file(args.dot, to_dot(parse_results(doc.dump())));
    return kOk;
}

struct SimulateArgs {
    std::size_t p = 10;
    double edge_prob = 0.3;
    int tiers = 1;
    std::size_t n = 500;
    std::string out;
};

int cmd_simulate(const GlobalFlags& flags, const SimulateArgs& args, std::ostream& out) {
    if (args.p < 1) throw InputError("--p must be at least 1");
    if (!(args.edge_prob >= 0.0 && args.edge_prob <= 1.0)) throw InputError("--edge-prob must lie in [0, 1]");
    if (args.tiers < 1 || static_cast<std::size_t>(args.tiers) > args.p) throw InputError("--tiers must lie in [1, p]");
    if (args.n < 2) throw InputError("--n must be at least 2");

    const SemSpec spec = random_sem(args.p, args.edge_prob, args.tiers, flags.seed);
    const Dataset data = sample(spec, args.n, flags.seed + 1);

    std::ostringstream csv;
    write_csv(csv, data);
    write_file(args.out + ".csv", csv.str());
    write_file(args.out + ".truth.json", truth_to_json(spec).dump(2) + "\n");
    if (spec.tiers) write_file(args.out + ".prior.json", prior_json_for(spec));
    out << "wrote " << args.out << ".csv (" << args.n << " x " << args.p << "), " << spec.dag.edge_count()
        << " true edges\n";
    return kOk;
}

struct EvaluateArgs {
    std::vector<std::string> estimated;
    std::vector<std::string> truth;
    std::vector<std::string> expert;
    bool json = false;
};

int cmd_evaluate(const EvaluateArgs& args, std::ostream& out) {
    const bool expert_mode = !args.expert.empty();
    const auto& references = expert_mode ? args.expert : args.truth;
    if (references.empty()) throw InputError("evaluate needs --truth or --expert");
    if (references.size() != 1 && references.size() != args.estimated.size()) {
        throw InputError("give one reference graph, or one per --estimated file");
    }

    std::vector<double> distance, edges, precision, recall, time;
    ordered_json runs = ordered_json::array();
    for (std::size_t r = 0; r < args.estimated.size(); ++r) {
        const ResultsDocument est = parse_results(read_text_file(args.estimated[r]));
        const std::string& ref_path = references.size() == 1 ? references[0] : references[r];
        ordered_json run;
        run["estimated"] = args.estimated[r];
        run["edges"] = est.edges.size();
        edges.push_back(static_cast<double>(est.edges.size()));
        if (est.total_time) {
            time.push_back(*est.total_time);
            run["time"] = *est.total_time;
        }
        if (expert_mode) {
            const ExpertGraph expert = load_expert_json(read_text_file(ref_path), est.columns);
            const auto d = ashd(est.edge_set(), est.columns.size(), expert);
            distance.push_back(static_cast<double>(d));
            run["ashd"] = d;
        } else {
            const TruthDocument truth = parse_truth(read_text_file(ref_path));
            const EdgeSet truth_edges = remap(truth.edges, truth.columns, est.columns);
            const EdgeSet estimated = est.edge_set();
            const auto counts = compare_edges(estimated, truth_edges);
            const auto d = shd(estimated, truth_edges);
            distance.push_back(static_cast<double>(d));
            precision.push_back(counts.precision());
            recall.push_back(counts.recall());
            run["shd"] = d;
            run["precision"] = counts.precision();
            run["recall"] = counts.recall();
            run["true_positive"] = counts.true_positive;
            run["false_positive"] = counts.false_positive;
            run["false_negative"] = counts.false_negative;
        }
        runs.push_back(run);
    }

    const char* metric = expert_mode ? "ashd" : "shd";
    ordered_json summary;
    summary["runs"] = args.estimated.size();
    summary[std::string("mean_") + metric] = mean_of(distance);
    summary[std::string("sd_") + metric] = sd_of(distance);
    summary["mean_edges"] = mean_of(edges);
    summary["sd_edges"] = sd_of(edges);
    if (!expert_mode) {
        summary["mean_precision"] = mean_of(precision);
        summary["mean_recall"] = mean_of(recall);
    }
    if (time.size() == args.estimated.size()) summary["mean_time"] = mean_of(time);

    if (args.json) {
        ordered_json doc;
        doc["runs"] = runs;
        doc["summary"] = summary;
        out << doc.dump(2) << "\n";
        return kOk;
    }
    out << std::fixed << std::setprecision(3);
    for (const auto& run : runs) {
        out << run["estimated"].get<std::string>() << ": " << metric << " " << run[metric].get<std::size_t>()
            << ", edges " << run["edges"].get<std::size_t>();
        if (!expert_mode) {
            out << ", precision " << run["precision"].get<double>() << ", recall " << run["recall"].get<double>();
        }
        out << "\n";
    }
    if (args.estimated.size() > 1) {
        out << metric << " mean " << mean_of(distance) << " sd " << sd_of(distance) << " | #edges mean "
            << mean_of(edges) << " sd " << sd_of(edges);
        if (summary.contains("mean_time")) out << " | time " << mean_of(time);
        out << "\n";
    }
    return kOk;
}

struct ExportArgs {
    std::string results;
    std::string out;
};

int cmd_export_dot(const ExportArgs& args, std::ostream& out) {
    emit(args.out, to_dot(parse_results(read_text_file(args.results))), out);
    return kOk;
}

struct BenchmarkArgs {
    std::size_t p = 10;
    double edge_prob = 0.3;
    int tiers = 3;
    std::size_t n = 500;
    std::size_t runs = 20;
    bool json = false;
};

// CAM vs TCAM on synthetic data: for each seed simulate a tiered SEM and
// run CAM and TCAM on the same sample. The true graph is the sure-edge set of
// the expert graph, with nothing marked possible.
int cmd_benchmark(const GlobalFlags& flags, const BenchmarkArgs& args, std::ostream& out) {
    if (args.runs < 1) throw InputError("--runs must be at least 1");
    if (args.tiers < 1 || static_cast<std::size_t>(args.tiers) > args.p) throw InputError("--tiers must lie in [1, p]");
    if (!(args.edge_prob >= 0.0 && args.edge_prob <= 1.0)) throw InputError("--edge-prob must lie in [0, 1]");

    struct Stats {
        std::vector<double> ashd, edges, time, iterations;
    };
    std::map<std::string, Stats> stats;
    const std::vector<std::pair<std::string, SearchMode>> methods = {{"CAM", SearchMode::Cam}, {"TCAM", SearchMode::Tcam}};

    for (std::size_t r = 0; r < args.runs; ++r) {
        const std::uint64_t seed = flags.seed + r;
        const SemSpec spec = random_sem(args.p, args.edge_prob, args.tiers, seed);
        const Dataset data = sample(spec, args.n, seed + 1);
        PriorKnowledge prior = PriorKnowledge::trivial(args.p);
        if (spec.tiers) {
            prior.tiers = *spec.tiers;
            prior.normalize();
        }
        ExpertGraph expert;
        expert.node_count = args.p;
        expert.sure = spec.dag.edge_set();

        for (const auto& [name, mode] : methods) {
            DiscoverOptions options = make_options(flags);
            options.mode = mode;
            options.seed = seed;
            const auto start = std::chrono::steady_clock::now();
            const DiscoverResult result = discover(data, prior, options);
            const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            auto& s = stats[name];
            s.ashd.push_back(static_cast<double>(ashd(result.pruned.dag, expert)));
            s.edges.push_back(static_cast<double>(result.pruned.dag.edge_count()));
            s.time.push_back(elapsed);
            s.iterations.push_back(static_cast<double>(result.ordering.iterations()));
        }
    }

    if (args.json) {
        ordered_json doc = ordered_json::array();
        for (const auto& [name, mode] : methods) {
            const auto& s = stats[name];
            doc.push_back({{"method", name},
                           {"mean_ashd", mean_of(s.ashd)},
                           {"sd_ashd", sd_of(s.ashd)},
                           {"mean_edges", mean_of(s.edges)},
                           {"sd_edges", sd_of(s.edges)},
                           {"mean_time", mean_of(s.time)},
                           {"mean_iterations", mean_of(s.iterations)}});
        }
        out << doc.dump(2) << "\n";
        return kOk;
    }
    const double tcam_time = mean_of(stats["TCAM"].time);
    out << "runs " << args.runs << ", p " << args.p << ", tiers " << args.tiers << ", n " << args.n << "\n";
    out << std::left << std::setw(8) << "method" << std::right << std::setw(11) << "aSHD mean" << std::setw(9) << "sd"
        << std::setw(12) << "#edges mean" << std::setw(9) << "sd" << std::setw(10) << "time (s)" << std::setw(10)
        << "rel time" << std::setw(12) << "iterations" << "\n";
    out << std::fixed << std::setprecision(3);
    for (const auto& [name, mode] : methods) {
        const auto& s = stats[name];
        out << std::left << std::setw(8) << name << std::right << std::setw(11) << mean_of(s.ashd) << std::setw(9)
            << sd_of(s.ashd) << std::setw(12) << mean_of(s.edges) << std::setw(9) << sd_of(s.edges) << std::setw(10)
            << mean_of(s.time) << std::setw(10) << (tcam_time > 0 ? mean_of(s.time) / tcam_time : 0.0)
            << std::setw(12) << mean_of(s.iterations) << "\n";
    }
    return kOk;
}

struct MergeArgs {
    std::string mother;
    std::vector<std::string> children;
    std::string bom;
    std::string out;
};

int cmd_merge(const MergeArgs& args, std::ostream& out, std::ostream& err) {
    const PartTable mother = read_part_table_file(args.mother);
    std::vector<PartTable> children;
    for (const auto& path : args.children) children.push_back(read_part_table_file(path));
    const MergeResult merged = merge_bom(mother, children, read_bom_file(args.bom));
    for (const auto& w : merged.warnings) err << "warning: " << w << "\n";
    std::ostringstream csv;
    write_part_table(csv, merged.table);
    emit(args.out, csv.str(), out);
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Causal discovery with tiered background knowledge", "tcam"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalFlags flags;
    app.add_option("--seed", flags.seed, "Seed for CV folds and simulation");
    app.add_option("--threads", flags.threads, "Upper bound on concurrent regression fits")->check(CLI::PositiveNumber);
    app.add_option("--prune-alpha", flags.prune_alpha, "Keep edges with pruning p-value below this")
        ->check(CLI::Validator(
            [](const std::string& text) {
                double a = 0.0;
                if (!CLI::detail::lexical_cast(text, a) || !(a > 0.0 && a < 1.0)) {
                    return std::string("must lie strictly between 0 and 1");
                }
                return std::string{};
            },
            "FLOAT in (0, 1)"));
    app.add_option("--pns-threshold", flags.pns_threshold, "Minimum |LASSO coefficient| for a candidate parent")
        ->check(CLI::NonNegativeNumber);
    app.add_option("--mode", flags.mode, "Force cam or tcam (default: tcam iff the prior is informative)")
        ->check(CLI::IsMember({"cam", "tcam"}));
    app.add_option("--basis-size", flags.basis_size, "B-spline basis functions per smooth term")
        ->check(CLI::Range(4, 100));
    app.add_option("--backfit-tol", flags.backfit_tol, "Backfitting tolerance on fitted values")
        ->check(CLI::PositiveNumber);
    app.add_option("--backfit-max-iter", flags.backfit_max_iter, "Backfitting iteration cap")->check(CLI::PositiveNumber);
    app.add_option("--gcv-gamma", flags.gcv_gamma, "GCV cost per effective degree of freedom")
        ->check(CLI::Range(1.0, 10.0));

    DiscoverArgs discover_args;
    auto* discover_cmd = app.add_subcommand("discover", "Learn a causal graph from a CSV dataset");
    discover_cmd->add_option("data", discover_args.data, "Dataset CSV with a header row")->required();
    discover_cmd->add_option("--prior", discover_args.prior, "Prior knowledge JSON (tiers, forbidden, roots)");
    discover_cmd->add_option("--out", discover_args.out, "Results JSON path (default: stdout)");
    discover_cmd->add_option("--dot", discover_args.dot, "Also write a Graphviz file");
    discover_cmd->add_flag("--timings", discover_args.timings, "Record wall-clock timings in the results");

    SimulateArgs simulate_args;
    auto* simulate_cmd = app.add_subcommand("simulate", "Sample a random additive SEM");
    simulate_cmd->add_option("--p", simulate_args.p, "Number of variables");
    simulate_cmd->add_option("--edge-prob", simulate_args.edge_prob, "Probability of each order-respecting edge");
    simulate_cmd->add_option("--tiers", simulate_args.tiers, "Number of tiers");
    simulate_cmd->add_option("--n", simulate_args.n, "Number of samples");
    simulate_cmd->add_option("--out", simulate_args.out, "Output prefix")->required();

    EvaluateArgs evaluate_args;
    auto* evaluate_cmd = app.add_subcommand("evaluate", "Score estimated graphs against a reference");
    evaluate_cmd->add_option("--estimated", evaluate_args.estimated, "Results JSON (repeatable)")->required();
    auto* truth_opt = evaluate_cmd->add_option("--truth", evaluate_args.truth, "Ground-truth JSON from simulate");
    auto* expert_opt = evaluate_cmd->add_option("--expert", evaluate_args.expert, "Expert graph JSON (sure, possible)");
    truth_opt->excludes(expert_opt);
    evaluate_cmd->add_flag("--json", evaluate_args.json, "Machine-readable output");

    ExportArgs export_args;
    auto* export_cmd = app.add_subcommand("export-dot", "Render a results document as Graphviz");
    export_cmd->add_option("results", export_args.results, "Results JSON")->required();
    export_cmd->add_option("--out", export_args.out, "DOT path (default: stdout)");

    BenchmarkArgs bench_args;
    auto* bench_cmd = app.add_subcommand("benchmark", "CAM vs TCAM over simulated tiered SEMs");
    bench_cmd->add_option("--p", bench_args.p, "Number of variables");
    bench_cmd->add_option("--edge-prob", bench_args.edge_prob, "Edge probability");
    bench_cmd->add_option("--tiers", bench_args.tiers, "Number of tiers");
    bench_cmd->add_option("--n", bench_args.n, "Samples per run");
    bench_cmd->add_option("--runs", bench_args.runs, "Number of seeds");
    bench_cmd->add_flag("--json", bench_args.json, "Machine-readable output");

    MergeArgs merge_args;
    auto* merge_cmd = app.add_subcommand("merge", "Join child part tables into mother rows via a bill of materials");
    merge_cmd->add_option("--mother", merge_args.mother, "Mother part CSV (first column is the id)")->required();
    merge_cmd->add_option("--child", merge_args.children, "Child part CSV (repeatable)");
    merge_cmd->add_option("--bom", merge_args.bom, "BoM CSV with child_id, mother_id, position")->required();
    merge_cmd->add_option("--out", merge_args.out, "Merged CSV path (default: stdout)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kInputError;
    }

    try {
        if (*discover_cmd) return cmd_discover(flags, discover_args, out);
        if (*simulate_cmd) return cmd_simulate(flags, simulate_args, out);
        if (*evaluate_cmd) return cmd_evaluate(evaluate_args, out);
        if (*export_cmd) return cmd_export_dot(export_args, out);
        if (*bench_cmd) return cmd_benchmark(flags, bench_args, out);
        if (*merge_cmd) return cmd_merge(merge_args, out, err);
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << "\n";
        return kNumericalError;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kInternal;
    }
    return kInternal;
}

}  // namespace tcam::cli
