// Experiment driver: every estimator and validator behind one binary with
// reproducible configs. A run takes either a JSON config file (`run
// --config`) or per-subcommand flags; both paths produce the same artifacts:
// data files plus a manifest echoing the effective config with content
// hashes. Outputs are byte-stable for a fixed config and seed; wall time and
// the write timestamp live only in the manifest.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "stperc/clusters.hpp"
#include "stperc/config_io.hpp"
#include "stperc/configuration.hpp"
#include "stperc/environment.hpp"
#include "stperc/errors.hpp"
#include "stperc/estimators.hpp"
#include "stperc/graph.hpp"
#include "stperc/meanfield.hpp"
#include "stperc/quantum.hpp"
#include "stperc/rc.hpp"
#include "stperc/rc_quantum.hpp"
#include "stperc/spacetime.hpp"
#include "stperc/stats.hpp"
#include "stperc/util.hpp"
#include "stperc/validate.hpp"

namespace {

using nlohmann::json;
using namespace stperc;

// ------------------------------------------------------------- config plumbing

Graph parse_graph(const std::string& text) {
    if (text == "single") return Graph::single_vertex();
    const auto colon = text.find(':');
    if (colon != std::string::npos) {
        const std::string kind = text.substr(0, colon);
        const long n = std::stol(text.substr(colon + 1));
        if (n < 1) throw InvalidParameter("graph size must be positive: " + text);
        if (kind == "path") return Graph::path(static_cast<uint32_t>(n));
        if (kind == "cycle") return Graph::cycle(static_cast<uint32_t>(n));
        if (kind == "complete") return Graph::complete(static_cast<uint32_t>(n));
    }
    throw InvalidParameter("unknown graph descriptor '" + text +
                           "' (use single, path:N, cycle:N or complete:N)");
}

SpaceTimeBox parse_box(const json& cfg) {
    const Graph graph = parse_graph(cfg.at("graph").get<std::string>());
    const double time_length = cfg.at("time").get<double>();
    const std::string boundary = cfg.value("boundary", std::string("free"));
    if (boundary == "free") return SpaceTimeBox(graph, time_length, Boundary::Free);
    if (boundary == "periodic") return SpaceTimeBox(graph, time_length, Boundary::PeriodicAll);
    const std::string prefix = "periodic-on:";
    if (boundary.rfind(prefix, 0) == 0) {
        std::vector<uint32_t> subset;
        std::stringstream ss(boundary.substr(prefix.size()));
        for (std::string item; std::getline(ss, item, ',');)
            if (!item.empty()) subset.push_back(static_cast<uint32_t>(std::stoul(item)));
        return SpaceTimeBox(graph, time_length, subset);
    }
    throw InvalidParameter("unknown boundary '" + boundary +
                           "' (use free, periodic or periodic-on:v1,v2,...)");
}

std::vector<double> number_list(const json& cfg, const char* key,
                                const std::vector<double>& fallback) {
    if (!cfg.contains(key)) return fallback;
    return cfg.at(key).get<std::vector<double>>();
}

std::vector<uint32_t> index_list(const json& cfg, const char* key) {
    if (!cfg.contains(key)) return {};
    return cfg.at(key).get<std::vector<uint32_t>>();
}

// One emitted artifact; files are hashed into the manifest.
struct OutputFile {
    std::string name;
    std::string content;
};

struct ExperimentResult {
    json summary = json::object();
    std::vector<OutputFile> outputs;
    int exit_code = 0;
};

class CsvBuilder {
  public:
    explicit CsvBuilder(const std::string& header) { rows_ = header + "\n"; }

    template <typename... Cells>
    void row(const Cells&... cells) {
        bool first = true;
        ((rows_ += (first ? "" : ","), rows_ += cell_text(cells), first = false), ...);
        rows_ += "\n";
    }

    std::string str() const { return rows_; }

  private:
    static std::string cell_text(double x) { return format_double(x); }
    static std::string cell_text(uint64_t x) { return std::to_string(x); }
    static std::string cell_text(uint32_t x) { return std::to_string(x); }
    static std::string cell_text(int x) { return std::to_string(x); }
    static std::string cell_text(const std::string& x) { return x; }
    static std::string cell_text(const char* x) { return x; }

    std::string rows_;
};

// ------------------------------------------------------------- experiments

ExperimentResult run_percolation_decay(const json& cfg, int workers) {
    const SpaceTimeBox box = parse_box(cfg);
    const IntensityEnvironment env =
        IntensityEnvironment::uniform(cfg.at("lambda").get<double>(),
                                      cfg.at("delta").get<double>());
    const Point origin{cfg.at("origin_vertex").get<uint32_t>(),
                       cfg.at("origin_time").get<double>()};
    const uint64_t trials = cfg.value("trials", uint64_t{4000});
    const uint64_t seed = cfg.at("seed").get<uint64_t>();
    const bool directed = cfg.value("directed", false);

    DecayGrids grids;
    grids.size = number_list(cfg, "size_grid", {0.5, 1.0, 2.0, 3.0});
    grids.radius = number_list(cfg, "radius_grid", {1.0, 2.0, 3.0, 4.0});
    grids.space_extent = number_list(cfg, "space_grid", {1.0, 2.0, 3.0});
    grids.time_extent = number_list(cfg, "time_grid", {0.5, 1.0, 2.0});
    const DecayRates rates =
        estimate_decay_rates(box, env, origin, grids, trials, seed, directed, workers);

    CsvBuilder csv("statistic,threshold,trials,successes,frequency,stderr");
    json summary = json::object();
    const auto emit = [&](const char* name, const std::optional<DecayEstimate>& est) {
        if (!est) return;
        for (const SurvivalCell& cell : est->cells)
            csv.row(name, cell.threshold, cell.trials, cell.successes, cell.frequency,
                    cell.stderr_freq);
        summary[name] = {{"rate", est->rate}, {"rate_stderr", est->rate_stderr}};
    };
    emit("size", rates.size);
    emit("radius", rates.radius);
    emit("space_extent", rates.space_extent);
    emit("time_extent", rates.time_extent);

    ExperimentResult result;
    result.summary = {{"tail_rates", summary}};
    result.outputs.push_back({"decay.csv", csv.str()});
    return result;
}

ExperimentResult run_contact(const json& cfg, int workers) {
    const SpaceTimeBox box = parse_box(cfg);
    const IntensityEnvironment env =
        IntensityEnvironment::uniform(cfg.at("lambda").get<double>(),
                                      cfg.at("delta").get<double>());
    const Point origin{cfg.at("origin_vertex").get<uint32_t>(),
                       cfg.at("origin_time").get<double>()};
    const uint64_t trials = cfg.value("trials", uint64_t{4000});
    const std::vector<double> radii = number_list(cfg, "radii", {1, 2, 3, 4});
    const uint64_t seed = cfg.at("seed").get<uint64_t>();

    const std::vector<SurvivalCell> cells =
        radius_survival_curve(box, env, origin, radii, trials, seed, true, workers);

    CsvBuilder csv("threshold,trials,successes,frequency,stderr");
    for (const SurvivalCell& cell : cells)
        csv.row(cell.threshold, cell.trials, cell.successes, cell.frequency, cell.stderr_freq);

    ExperimentResult result;
    result.summary = {{"radii", radii.size()}, {"trials", trials}};
    result.outputs.push_back({"contact.csv", csv.str()});
    return result;
}

ExperimentResult run_rc_chain(const json& cfg, int /*workers*/) {
    const SpaceTimeBox box = parse_box(cfg);
    RcParams params;
    params.lambda = cfg.at("lambda").get<double>();
    params.delta = cfg.at("delta").get<double>();
    params.q = cfg.value("q", uint32_t{2});
    params.sweeps = cfg.value("sweeps", uint64_t{2000});
    params.burnin = cfg.value("burnin", uint64_t{200});
    const uint64_t seed = cfg.at("seed").get<uint64_t>();
    const uint64_t replica = cfg.value("replica", uint64_t{0});
    const uint64_t thin = std::max<uint64_t>(1, cfg.value("thin", uint64_t{1}));

    RcState state = rc_initial_state(box, params, seed, replica);
    rc_advance(state, params.burnin);

    CsvBuilder csv("sweep,clusters,cuts,bridges,largest_measure");
    std::vector<double> cluster_counts;
    rc_advance(state, params.sweeps, [&](const RcState& s) {
        if ((s.sweep_index - params.burnin) % thin != 0) return;
        const ClusterLabeling labeling = build_clusters(s.config, s.box);
        const double largest =
            labeling.cluster_count == 0
                ? 0.0
                : *std::max_element(labeling.measure.begin(), labeling.measure.end());
        cluster_counts.push_back(double(labeling.cluster_count));
        csv.row(s.sweep_index, uint64_t{labeling.cluster_count}, s.config.total_cuts(),
                s.config.total_bridges(), largest);
    });

    const SummaryStats stats = summarize(cluster_counts);
    ExperimentResult result;
    result.summary = {{"recorded_sweeps", stats.n},
                      {"mean_clusters", stats.mean},
                      {"stderr_clusters", stats.stderr_mean}};
    result.outputs.push_back({"rc_chain.csv", csv.str()});
    result.outputs.push_back({"rc_chain_checkpoint.txt", checkpoint_to_string(state)});
    return result;
}

ExperimentResult run_quantum_validate(const json& cfg, int /*workers*/) {
    const Graph graph = parse_graph(cfg.value("graph", std::string("path:2")));
    const double lambda = cfg.value("lambda", 1.0);
    const double delta = cfg.value("delta", 1.0);
    const double beta = cfg.value("beta", 1.0);
    const std::vector<uint32_t> keep = index_list(cfg, "keep");

    McParams mc;
    mc.sweeps = cfg.value("sweeps", uint64_t{100000});
    mc.burnin = cfg.value("burnin", uint64_t{1000});
    mc.batches = cfg.value("batches", uint32_t{32});
    mc.seed = cfg.at("seed").get<uint64_t>();
    mc.replica = cfg.value("replica", uint64_t{0});

    const DensityOperator full = gibbs_density(ising_hamiltonian(graph, lambda, delta), beta);
    const Eigen::MatrixXd exact = keep.empty() ? full.matrix() : reduced_density(full, keep).matrix();
    const MatrixEstimate estimate =
        keep.empty() ? rc_density_matrix(graph, lambda, delta, beta, mc)
                     : rc_reduced_density_matrix(graph, lambda, delta, beta, keep, mc);

    json elements = json::array();
    double max_abs_z = 0.0;
    for (Eigen::Index r = 0; r < exact.rows(); ++r)
        for (Eigen::Index c = 0; c < exact.cols(); ++c) {
            const double err = estimate.errors(r, c);
            const double z = err > 0.0 ? (estimate.values(r, c) - exact(r, c)) / err
                                       : (estimate.values(r, c) == exact(r, c) ? 0.0 : 1e300);
            max_abs_z = std::max(max_abs_z, std::fabs(z));
            elements.push_back({{"row", r},
                                {"col", c},
                                {"exact", exact(r, c)},
                                {"estimate", estimate.values(r, c)},
                                {"stderr", err},
                                {"z", z}});
        }
    const bool ok = max_abs_z <= 3.0;

    ExperimentResult result;
    result.summary = {{"elements", elements.size()}, {"max_abs_z", max_abs_z}, {"passed", ok}};
    result.outputs.push_back(
        {"quantum_validate.json",
         json{{"elements", elements}, {"max_abs_z", max_abs_z}, {"passed", ok}}.dump(2) + "\n"});
    result.exit_code = ok ? 0 : 2;
    return result;
}

ExperimentResult run_entanglement_sweep(const json& cfg, int /*workers*/) {
    const double lambda = cfg.value("lambda", 0.2);
    const double delta = cfg.value("delta", 1.0);
    const uint32_t l_min = cfg.value("l_min", uint32_t{2});
    const uint32_t l_max = cfg.value("l_max", uint32_t{6});
    const uint32_t m_max = cfg.value("m_max", uint32_t{3});
    if (l_min < 1 || l_max < l_min) throw InvalidParameter("need 1 <= l_min <= l_max");
    if (2 * m_max + l_max + 1 > 16)
        throw InvalidParameter("2*m_max + l_max + 1 exceeds the 16-site capacity");

    CsvBuilder csv("L,m,sites,block_sites,entropy,degenerate");
    for (uint32_t L = l_min; L <= l_max; ++L)
        for (uint32_t m = 0; m <= m_max; ++m) {
            bool degenerate = false;
            const DensityOperator rho = ground_state_reduced_density(
                chain_segment_graph(L, m), lambda, delta, chain_segment_block(L, m), &degenerate);
            csv.row(L, m, 2 * m + L + 1, L + 1, entanglement_entropy(rho),
                    degenerate ? 1 : 0);
        }

    ExperimentResult result;
    result.summary = {{"l_max", l_max}, {"m_max", m_max}};
    result.outputs.push_back({"entanglement.csv", csv.str()});
    return result;
}

ExperimentResult run_meanfield_giant(const json& cfg, int workers) {
    const uint32_t n = cfg.value("n", uint32_t{2000});
    const double beta = cfg.value("beta", 1.0);
    const double lambda = cfg.at("lambda").get<double>();
    const uint32_t q = cfg.value("q", uint32_t{1});
    const uint64_t replicas = cfg.value("replicas", uint64_t{50});
    const uint64_t sweeps = cfg.value("sweeps", uint64_t{2000});
    const uint64_t burnin = cfg.value("burnin", uint64_t{200});
    const uint64_t seed = cfg.at("seed").get<uint64_t>();

    std::vector<MeanFieldSample> samples(replicas);
    parallel_for(replicas, workers, [&](uint64_t r) {
        samples[r] = simulate_complete_graph(n, beta, lambda, q, sweeps, burnin, seed, r);
    });

    CsvBuilder csv("replica,largest_measure,fraction");
    std::vector<double> fractions;
    for (uint64_t r = 0; r < replicas; ++r) {
        csv.row(r, samples[r].largest_measure, samples[r].fraction);
        fractions.push_back(samples[r].fraction);
    }
    const SummaryStats stats = summarize(fractions);
    const double pi = survival_probability(beta, lambda, double(q), OffspringRate::Full);

    ExperimentResult result;
    result.summary = {{"mean_fraction", stats.mean},
                      {"stderr_fraction", stats.stderr_mean},
                      {"branching_pi", pi},
                      {"beta_pi", beta * pi},
                      {"critical_lambda", critical_lambda(beta, double(q))}};
    result.outputs.push_back({"meanfield.csv", csv.str()});
    return result;
}

ExperimentResult run_branching(const json& cfg, int workers) {
    const double beta = cfg.value("beta", 1.0);
    const double lambda = cfg.at("lambda").get<double>();
    const double q = cfg.value("q", 1.0);
    const std::string rate_name = cfg.value("rate", std::string("full"));
    const OffspringRate rate = [&] {
        if (rate_name == "full") return OffspringRate::Full;
        if (rate_name == "per-color") return OffspringRate::PerColor;
        throw InvalidParameter("unknown offspring rate '" + rate_name +
                               "' (use full or per-color)");
    }();
    const uint64_t trees = cfg.value("trees", uint64_t{100000});
    const uint64_t seed = cfg.at("seed").get<uint64_t>();

    const double pi = survival_probability(beta, lambda, q, rate);
    const BranchingEstimate sim =
        simulate_branching_survival(beta, lambda, q, rate, trees, seed, 0, workers);

    CsvBuilder csv("beta,lambda,q,rate,offspring_rate,fixed_point,simulated,stderr,trees");
    csv.row(beta, lambda, q, rate_name, offspring_rate_value(lambda, q, rate), pi,
            sim.probability, sim.stderr_value, sim.trees);

    ExperimentResult result;
    result.summary = {{"fixed_point", pi},
                      {"simulated", sim.probability},
                      {"stderr", sim.stderr_value}};
    result.outputs.push_back({"branching.csv", csv.str()});
    return result;
}

ExperimentResult run_validate(const json& cfg, int workers) {
    const std::string level_name = cfg.value("level", std::string("full"));
    if (level_name != "quick" && level_name != "full")
        throw InvalidParameter("unknown level '" + level_name + "' (use quick or full)");
    const ValidationLevel level =
        level_name == "quick" ? ValidationLevel::Quick : ValidationLevel::Full;
    const uint64_t seed = cfg.value("seed", kDefaultValidationSeed);
    std::vector<int> subset;
    if (cfg.contains("criteria")) subset = cfg.at("criteria").get<std::vector<int>>();

    const ValidationReport report = run_acceptance(level, seed, workers, subset);

    json rows = json::array();
    for (const CriterionResult& r : report.results) {
        std::cout << (r.passed ? "[PASS] " : "[FAIL] ") << "criterion " << r.index << ": "
                  << r.name << " (" << r.detail << ") [" << std::fixed << std::setprecision(1)
                  << r.seconds << "s]\n"
                  << std::defaultfloat;
        rows.push_back({{"index", r.index},
                        {"name", r.name},
                        {"passed", r.passed},
                        {"detail", r.detail},
                        {"records", r.records}});
    }
    std::cout.flush();

    ExperimentResult result;
    result.summary = {{"level", level_name},
                      {"seed", seed},
                      {"all_passed", report.all_passed()}};
    result.outputs.push_back(
        {"validation_report.json",
         json{{"level", level_name}, {"seed", seed}, {"all_passed", report.all_passed()},
              {"criteria", rows}}
                 .dump(2) +
             "\n"});
    result.exit_code = report.all_passed() ? 0 : 2;
    return result;
}

// ------------------------------------------------------------- driver

ExperimentResult dispatch(const std::string& kind, const json& cfg, int workers) {
    if (kind == "percolation-decay") return run_percolation_decay(cfg, workers);
    if (kind == "contact") return run_contact(cfg, workers);
    if (kind == "rc-chain") return run_rc_chain(cfg, workers);
    if (kind == "quantum-validate") return run_quantum_validate(cfg, workers);
    if (kind == "entanglement-sweep") return run_entanglement_sweep(cfg, workers);
    if (kind == "meanfield-giant") return run_meanfield_giant(cfg, workers);
    if (kind == "branching") return run_branching(cfg, workers);
    if (kind == "validate") return run_validate(cfg, workers);
    throw InvalidParameter("unknown experiment kind '" + kind + "'");
}

std::string iso_timestamp() {
    const std::time_t now = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    return buf;
}

int execute(const std::string& kind, json cfg, const std::string& out_dir, int workers) {
    const auto start = std::chrono::steady_clock::now();
    const ExperimentResult result = dispatch(kind, cfg, workers);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    std::filesystem::create_directories(out_dir);
    json outputs = json::array();
    for (const OutputFile& file : result.outputs) {
        const std::string path = out_dir + "/" + file.name;
        save_text_file(path, file.content);
        outputs.push_back({{"file", file.name}, {"sha1", sha1_hex(file.content)}});
    }
    const json manifest = {{"experiment", kind},     {"config", cfg},
                           {"summary", result.summary}, {"outputs", outputs},
                           {"seconds", seconds},     {"written_at", iso_timestamp()}};
    save_text_file(out_dir + "/manifest.json", manifest.dump(2) + "\n");

    std::cout << kind << ": wrote " << result.outputs.size() << " artifact"
              << (result.outputs.size() == 1 ? "" : "s") << " + manifest to " << out_dir
              << " (" << std::fixed << std::setprecision(1) << seconds << "s)\n"
              << std::defaultfloat;
    if (!result.summary.empty()) std::cout << "summary: " << result.summary.dump() << "\n";
    return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Space-time cluster toolkit: samplers, estimators and validators for "
                 "percolation-type models on graph x interval"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string out_dir = ".";
    int workers = 1;
    app.add_option("--out", out_dir, "Output directory for artifacts")->capture_default_str();
    app.add_option("--workers", workers, "Worker threads for replica-level parallelism")
        ->capture_default_str();

    std::string pending_kind;
    json cfg = json::object();

    const auto add_common = [&](CLI::App* sub, const char* kind, bool seed_required = true) {
        auto* opt = sub->add_option_function<uint64_t>(
            "--seed", [&cfg](const uint64_t& s) { cfg["seed"] = s; },
            "Random seed (all outputs are a pure function of config + seed)");
        if (seed_required) opt->required();
        sub->callback([&, kind] { pending_kind = kind; });
        return sub;
    };

    const auto opt_str = [&](CLI::App* sub, const char* key, const char* desc) {
        sub->add_option_function<std::string>(
            std::string("--") + key, [&cfg, key](const std::string& v) { cfg[key] = v; }, desc);
    };
    const auto opt_f64 = [&](CLI::App* sub, const char* key, const char* desc) {
        sub->add_option_function<double>(
            std::string("--") + key, [&cfg, key](const double& v) { cfg[key] = v; }, desc);
    };
    const auto opt_u64 = [&](CLI::App* sub, const char* key, const char* desc) {
        sub->add_option_function<uint64_t>(
            std::string("--") + key, [&cfg, key](const uint64_t& v) { cfg[key] = v; }, desc);
    };
    const auto opt_u32 = [&](CLI::App* sub, const char* key, const char* desc) {
        sub->add_option_function<uint32_t>(
            std::string("--") + key, [&cfg, key](const uint32_t& v) { cfg[key] = v; }, desc);
    };
    const auto opt_list = [&](CLI::App* sub, const char* key, const char* desc) {
        sub->add_option_function<std::vector<double>>(
            std::string("--") + key,
            [&cfg, key](const std::vector<double>& v) { cfg[key] = v; }, desc);
    };

    {
        auto* sub = app.add_subcommand(
            "percolation-decay",
            "Tail-rate fits for the origin cluster's size, radius and extents under "
            "independent cut and bridge processes (library: estimators)");
        add_common(sub, "percolation-decay");
        opt_str(sub, "graph", "Graph descriptor: single, path:N, cycle:N, complete:N");
        opt_f64(sub, "time", "Interval length T");
        opt_str(sub, "boundary", "free | periodic | periodic-on:v1,v2,...");
        opt_f64(sub, "lambda", "Bridge intensity per edge");
        opt_f64(sub, "delta", "Cut intensity per line");
        opt_u32(sub, "origin_vertex", "Origin vertex");
        opt_f64(sub, "origin_time", "Origin time in [0,T]");
        opt_u64(sub, "trials", "Independent samples");
        opt_list(sub, "size_grid", "Thresholds for the cluster-measure tail");
        opt_list(sub, "radius_grid", "Thresholds for the radius tail");
        opt_list(sub, "space_grid", "Thresholds for the graph-distance tail");
        opt_list(sub, "time_grid", "Thresholds for the time-offset tail");
        sub->get_option("--graph")->required();
        sub->get_option("--time")->required();
        sub->get_option("--lambda")->required();
        sub->get_option("--delta")->required();
        sub->get_option("--origin_vertex")->required();
        sub->get_option("--origin_time")->required();
    }
    {
        auto* sub = app.add_subcommand(
            "contact",
            "Survival frequencies of time-directed spread from an origin at growing radii "
            "(library: directed + estimators)");
        add_common(sub, "contact");
        opt_str(sub, "graph", "Graph descriptor");
        opt_f64(sub, "time", "Interval length T");
        opt_str(sub, "boundary", "free | periodic");
        opt_f64(sub, "lambda", "Bridge intensity per edge");
        opt_f64(sub, "delta", "Cut intensity per line");
        opt_u32(sub, "origin_vertex", "Origin vertex");
        opt_f64(sub, "origin_time", "Origin time in [0,T]");
        opt_u64(sub, "trials", "Independent samples");
        opt_list(sub, "radii", "Radius thresholds");
        sub->get_option("--graph")->required();
        sub->get_option("--time")->required();
        sub->get_option("--lambda")->required();
        sub->get_option("--delta")->required();
        sub->get_option("--origin_vertex")->required();
        sub->get_option("--origin_time")->required();
    }
    {
        auto* sub = app.add_subcommand(
            "rc-chain",
            "Cluster-weighted configuration chain: per-sweep observables and a bit-exact "
            "resumable checkpoint (library: rc)");
        add_common(sub, "rc-chain");
        opt_str(sub, "graph", "Graph descriptor");
        opt_f64(sub, "time", "Interval length T");
        opt_str(sub, "boundary", "free | periodic | periodic-on:v1,v2,...");
        opt_f64(sub, "lambda", "Bridge intensity per edge");
        opt_f64(sub, "delta", "Cut intensity per line");
        opt_u32(sub, "q", "Cluster weight (integer >= 1)");
        opt_u64(sub, "sweeps", "Recorded sweeps");
        opt_u64(sub, "burnin", "Discarded initial sweeps");
        opt_u64(sub, "thin", "Record every thin-th sweep");
        opt_u64(sub, "replica", "Replica index (stream namespace)");
        sub->get_option("--graph")->required();
        sub->get_option("--time")->required();
        sub->get_option("--lambda")->required();
        sub->get_option("--delta")->required();
    }
    {
        auto* sub = app.add_subcommand(
            "quantum-validate",
            "Thermal (or reduced) density-matrix elements of the transverse-field Ising "
            "model: chain estimates against exact diagonalization, reported as z-scores "
            "(library: quantum + rc_quantum; exits 2 when any |z| > 3)");
        add_common(sub, "quantum-validate");
        opt_str(sub, "graph", "Graph descriptor (<= 12 sites for exact diagonalization)");
        opt_f64(sub, "lambda", "Coupling strength");
        opt_f64(sub, "delta", "Transverse field strength");
        opt_f64(sub, "beta", "Inverse temperature");
        opt_u64(sub, "sweeps", "Recorded sweeps");
        opt_u64(sub, "burnin", "Discarded initial sweeps");
        opt_u32(sub, "batches", "Batch count for error bars");
        sub->add_option_function<std::vector<uint32_t>>(
            "--keep",
            [&cfg](const std::vector<uint32_t>& v) { cfg["keep"] = v; },
            "Kept vertices for a reduced matrix (empty = full matrix)");
    }
    {
        auto* sub = app.add_subcommand(
            "entanglement-sweep",
            "Ground-state block entanglement entropies over block sizes L and margins m "
            "(library: quantum + rc_quantum)");
        add_common(sub, "entanglement-sweep", /*seed_required=*/false);
        opt_f64(sub, "lambda", "Coupling strength");
        opt_f64(sub, "delta", "Transverse field strength");
        opt_u32(sub, "l_min", "Smallest block size L");
        opt_u32(sub, "l_max", "Largest block size L");
        opt_u32(sub, "m_max", "Largest margin m (sites = 2m + L + 1 <= 16)");
    }
    {
        auto* sub = app.add_subcommand(
            "meanfield-giant",
            "Largest-cluster fraction on the complete graph against the branching "
            "fixed point (library: meanfield)");
        add_common(sub, "meanfield-giant");
        opt_u32(sub, "n", "Vertices of the complete graph");
        opt_f64(sub, "beta", "Circle length");
        opt_f64(sub, "lambda", "Total bridge intensity (per-edge rate lambda/n)");
        opt_u32(sub, "q", "Cluster weight (1 = direct sampling)");
        opt_u64(sub, "replicas", "Independent replicas");
        opt_u64(sub, "sweeps", "Chain sweeps (q >= 2 only)");
        opt_u64(sub, "burnin", "Chain burn-in (q >= 2 only)");
        sub->get_option("--lambda")->required();
    }
    {
        auto* sub = app.add_subcommand(
            "branching",
            "Survival probability of the interval branching process: fixed-point value "
            "and tree simulation side by side (library: meanfield)");
        add_common(sub, "branching");
        opt_f64(sub, "beta", "Circle length");
        opt_f64(sub, "lambda", "Bridge intensity");
        opt_f64(sub, "q", "Cluster weight (real, >= 1)");
        opt_str(sub, "rate", "Offspring rate: full | per-color");
        opt_u64(sub, "trees", "Simulated trees");
        sub->get_option("--lambda")->required();
    }
    {
        auto* sub = app.add_subcommand(
            "validate",
            "Acceptance suite: nine oracle- and property-based criteria over the whole "
            "library; exits 2 when any criterion fails");
        add_common(sub, "validate", /*seed_required=*/false);
        opt_str(sub, "level", "quick | full");
        sub->add_option_function<std::vector<int>>(
            "--criteria", [&cfg](const std::vector<int>& v) { cfg["criteria"] = v; },
            "Criterion indices to run (default: all)");
    }
    {
        auto* sub = app.add_subcommand(
            "run", "Run an experiment described by a JSON config file with an "
                   "\"experiment\" key; remaining keys are that experiment's parameters");
        static std::string config_path;
        sub->add_option("--config", config_path, "Path to the JSON config")->required();
        sub->callback([&] {
            const std::string text = load_text_file(config_path);
            cfg = json::parse(text);
            if (!cfg.contains("experiment"))
                throw InvalidParameter("config needs an \"experiment\" key");
            pending_kind = cfg.at("experiment").get<std::string>();
            cfg.erase("experiment");
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        return execute(pending_kind, cfg, out_dir, workers);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
