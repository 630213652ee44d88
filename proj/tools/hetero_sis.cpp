// hetero-sis: SIS propagation over multi-profile networks.
// Subcommands: gen, analyze, simulate, repro. Exit codes: 0 success,
// 2 usage/config error, 1 runtime failure (repro: 1 when its check fails).
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hsis/clique.hpp"
#include "hsis/graph.hpp"
#include "hsis/meanfield.hpp"
#include "hsis/profile.hpp"
#include "hsis/scenarios.hpp"
#include "hsis/sim.hpp"
#include "hsis/spectral.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace hsis;

namespace {

constexpr const char* kToolVersion = "0.1.0";

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fnv1a_hex(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

json provenance(const std::string& canonical_config, std::uint64_t rng_seed) {
    return json{{"tool_version", kToolVersion},
                {"config_hash", fnv1a_hex(canonical_config)},
                {"rng_seed", rng_seed}};
}

std::vector<std::string> provenance_comments(const json& prov) {
    std::ostringstream line;
    line << "tool_version=" << prov["tool_version"].get<std::string>()
         << " config_hash=" << prov["config_hash"].get<std::string>()
         << " rng_seed=" << prov["rng_seed"].get<std::uint64_t>();
    return {line.str()};
}

void write_json(const json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << "\n";
}

void emit_report(const json& j, const std::string& out_path) {
    if (out_path.empty())
        std::cout << j.dump(2) << std::endl;
    else
        write_json(j, out_path);
}

// ---------------------------------------------------------------------------
// experiment inputs shared by analyze/simulate

struct GraphSpec {
    std::string file;
    std::string format = "snap";
    std::string generator;  // clique | powerlaw | er
    std::size_t n = 0;
    double exponent = 2.72;
    double scale = 0.0;
    double edge_prob = 0.0;
    double avg_degree = 0.0;
    std::uint64_t seed = 0;

    std::string canonical() const {
        std::ostringstream s;
        s << "graph{file=" << file << ",format=" << format << ",gen=" << generator << ",n=" << n
          << ",exp=" << exponent << ",scale=" << scale << ",p=" << edge_prob
          << ",deg=" << avg_degree << ",seed=" << seed << "}";
        return s.str();
    }
};

struct ExperimentSpec {
    GraphSpec graph;
    std::string assign = "random:2";
    std::uint64_t assign_seed = 0;
    std::string params_file;
    std::string params_inline;  // JSON text, e.g. from --config

    std::string canonical() const {
        std::ostringstream s;
        s << graph.canonical() << ";assign=" << assign << ";assign_seed=" << assign_seed
          << ";params=" << (params_inline.empty() ? params_file : params_inline);
        return s.str();
    }
};

struct Experiment {
    Graph graph;
    ProfileMap pm;
    ProfileParams params;
    std::optional<LoadResult> load_info;
    std::vector<std::string> warnings;
};

Graph build_graph(const GraphSpec& spec, std::optional<LoadResult>& load_info) {
    if (!spec.file.empty()) {
        if (!fs::exists(spec.file))
            throw ConfigError("graph file does not exist: " + spec.file);
        EdgeListFormat fmt;
        if (spec.format == "snap")
            fmt = EdgeListFormat::snap;
        else if (spec.format == "csv")
            fmt = EdgeListFormat::csv;
        else
            throw ConfigError("unknown edge-list format: " + spec.format);
        auto loaded = load_edge_list(spec.file, fmt);
        Graph g = std::move(loaded.graph);
        load_info = std::move(loaded);
        return g;
    }
    if (spec.generator == "clique") return gen_clique(spec.n);
    if (spec.generator == "powerlaw")
        return gen_powerlaw(spec.n, spec.exponent, spec.scale, spec.seed);
    if (spec.generator == "er") {
        double p = spec.edge_prob;
        if (p <= 0.0 && spec.avg_degree > 0.0 && spec.n > 1)
            p = spec.avg_degree / static_cast<double>(spec.n - 1);
        return gen_erdos_renyi(spec.n, p, spec.seed);
    }
    throw ConfigError("no graph source: give --graph <file> or --gen clique|powerlaw|er");
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    return parts;
}

Experiment resolve_experiment(const ExperimentSpec& spec) {
    std::optional<LoadResult> load_info;
    Graph g = build_graph(spec.graph, load_info);

    if (spec.params_file.empty() && spec.params_inline.empty())
        throw ConfigError("missing --params <file.json>");
    if (!spec.params_file.empty() && !fs::exists(spec.params_file))
        throw ConfigError("params file does not exist: " + spec.params_file);
    ProfileParams params = !spec.params_inline.empty()
                               ? ProfileParams::from_json_text(spec.params_inline)
                               : ProfileParams::from_json_file(spec.params_file);

    auto parts = split(spec.assign, ':');
    if (parts[0] == "random") {
        std::uint32_t k =
            parts.size() > 1 ? static_cast<std::uint32_t>(std::stoul(parts[1])) : params.k();
        ProfileMap pm = assign_random_split(g, k, spec.assign_seed);
        return Experiment{std::move(g), std::move(pm), std::move(params), std::move(load_info), {}};
    }
    if (parts[0] == "file") {
        if (parts.size() < 2) throw ConfigError("assign=file needs a path: file:<csv>");
        std::ifstream in(parts[1]);
        if (!in) throw std::runtime_error("cannot open assignment file: " + parts[1]);
        std::vector<std::uint32_t> assignment(g.node_count(), 0);
        std::string line;
        std::uint32_t kmax = 1;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty() || line[0] == '#') continue;
            if (line_no == 1 && line.find_first_not_of("0123456789, \t\r") != std::string::npos)
                continue;
            auto cols = split(line, ',');
            if (cols.size() < 2) throw std::runtime_error(parts[1] + ": expected node_id,profile");
            std::size_t node = std::stoul(cols[0]);
            std::uint32_t prof = static_cast<std::uint32_t>(std::stoul(cols[1]));
            if (node >= g.node_count()) throw std::runtime_error(parts[1] + ": node id out of range");
            assignment[node] = prof;
            kmax = std::max(kmax, prof + 1);
        }
        ProfileMap pm(std::move(assignment), std::max(kmax, params.k()));
        return Experiment{std::move(g), std::move(pm), std::move(params), std::move(load_info), {}};
    }
    if (parts[0] == "attr") {
        if (parts.size() < 3) throw ConfigError("assign=attr needs attr:<csv>:<b1,b2,...>");
        std::vector<double> bins;
        for (const auto& b : split(parts[2], ',')) bins.push_back(std::stod(b));
        const std::vector<std::int64_t>* original = load_info ? &load_info->original_ids : nullptr;
        auto res = assign_by_attribute(g, parts[1], bins, original);
        std::vector<std::string> warn;
        if (res.dropped_nodes > 0) {
            std::ostringstream w;
            w << res.dropped_nodes << " nodes without attribute values were dropped";
            warn.push_back(w.str());
        }
        for (auto b : res.empty_bins) {
            std::ostringstream w;
            w << "attribute bin " << b << " is empty";
            warn.push_back(w.str());
        }
        return Experiment{std::move(res.graph), std::move(res.profiles), std::move(params),
                          std::move(load_info), std::move(warn)};
    }
    throw ConfigError("unknown assignment spec: " + spec.assign +
                      " (expected random:<k>, file:<csv> or attr:<csv>:<bins>)");
}

void check_profile_coverage(const Experiment& e, std::vector<std::string>& warnings) {
    if (e.pm.k() > e.params.k()) {
        std::ostringstream msg;
        msg << "assignment uses " << e.pm.k() << " profiles but params define " << e.params.k();
        throw ConfigError(msg.str());
    }
    for (auto q : e.pm.unused_profiles()) {
        std::ostringstream w;
        w << "profile " << q << " has no nodes";
        warnings.push_back(w.str());
    }
}

SeedSpec parse_seed_spec(const std::string& s) {
    auto parts = split(s, ':');
    if (parts[0] == "top" && parts.size() == 2) return SeedSpec::top_degree(std::stod(parts[1]));
    if (parts[0] == "bottom" && parts.size() == 2)
        return SeedSpec::bottom_degree(std::stod(parts[1]));
    if (parts[0] == "per-profile" && parts.size() == 2)
        return SeedSpec::per_profile_count(std::stoul(parts[1]));
    if (parts[0] == "nodes" && parts.size() == 2) {
        std::vector<NodeId> nodes;
        for (const auto& t : split(parts[1], ','))
            nodes.push_back(static_cast<NodeId>(std::stoul(t)));
        return SeedSpec::explicit_list(std::move(nodes));
    }
    throw ConfigError("unknown seed spec: " + s +
                      " (expected top:<f>, bottom:<f>, per-profile:<n> or nodes:<a,b,...>)");
}

// --config file: values present in the JSON override the flag values
void apply_config_overrides(const std::string& path, ExperimentSpec& spec, SimConfig* sim,
                            std::string* seed_spec, std::string* out_dir) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config: " + path);
    json cfg;
    try {
        cfg = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    if (cfg.contains("graph")) {
        const auto& g = cfg["graph"];
        if (g.contains("file")) spec.graph.file = g["file"].get<std::string>();
        if (g.contains("format")) spec.graph.format = g["format"].get<std::string>();
        if (g.contains("generator")) spec.graph.generator = g["generator"].get<std::string>();
        if (g.contains("n")) spec.graph.n = g["n"].get<std::size_t>();
        if (g.contains("exponent")) spec.graph.exponent = g["exponent"].get<double>();
        if (g.contains("scale")) spec.graph.scale = g["scale"].get<double>();
        if (g.contains("edge_prob")) spec.graph.edge_prob = g["edge_prob"].get<double>();
        if (g.contains("avg_degree")) spec.graph.avg_degree = g["avg_degree"].get<double>();
        if (g.contains("seed")) spec.graph.seed = g["seed"].get<std::uint64_t>();
    }
    if (cfg.contains("assign")) spec.assign = cfg["assign"].get<std::string>();
    if (cfg.contains("assign_seed")) spec.assign_seed = cfg["assign_seed"].get<std::uint64_t>();
    if (cfg.contains("params_file")) spec.params_file = cfg["params_file"].get<std::string>();
    if (cfg.contains("params")) spec.params_inline = cfg["params"].dump();
    if (sim) {
        if (cfg.contains("rounds")) sim->rounds = cfg["rounds"].get<std::size_t>();
        if (cfg.contains("replications"))
            sim->replications = cfg["replications"].get<std::size_t>();
        if (cfg.contains("rng_seed")) sim->rng_seed = cfg["rng_seed"].get<std::uint64_t>();
        if (cfg.contains("record_every")) sim->record_every = cfg["record_every"].get<std::size_t>();
        if (cfg.contains("steady_window_frac"))
            sim->steady_window_frac = cfg["steady_window_frac"].get<double>();
        if (cfg.contains("steady_range_frac"))
            sim->steady_range_frac = cfg["steady_range_frac"].get<double>();
    }
    if (seed_spec && cfg.contains("seed_spec")) *seed_spec = cfg["seed_spec"].get<std::string>();
    if (out_dir && cfg.contains("out_dir")) *out_dir = cfg["out_dir"].get<std::string>();
}

void emit_remap_if_loaded(const Experiment& e, const std::string& out_dir) {
    if (e.load_info && !out_dir.empty()) {
        fs::create_directories(out_dir);
        write_remap_csv(e.load_info->original_ids, (fs::path(out_dir) / "remap.csv").string());
    }
}

// ---------------------------------------------------------------------------
// trace output

void write_trace_csv(const SimTrace& tr, std::uint32_t k, const json& prov,
                     const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    for (const auto& c : provenance_comments(prov)) out << "# " << c << "\n";
    out << "round";
    for (std::uint32_t q = 0; q < k; ++q) out << ",profile_" << q;
    out << ",total\n";
    for (std::size_t r = 0; r < tr.recorded_rounds.size(); ++r) {
        out << tr.recorded_rounds[r];
        for (std::uint32_t q = 0; q < k; ++q) out << "," << tr.counts[r][q];
        out << "," << tr.totals[r] << "\n";
    }
}

void write_aggregate_csv(const SimAggregate& agg, const json& prov, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    for (const auto& c : provenance_comments(prov)) out << "# " << c << "\n";
    const std::uint32_t k = static_cast<std::uint32_t>(agg.profile_sizes.size());
    out << "round";
    for (std::uint32_t q = 0; q < k; ++q) out << ",mean_" << q << ",std_" << q;
    out << ",mean_total\n";
    for (std::size_t r = 0; r < agg.recorded_rounds.size(); ++r) {
        out << agg.recorded_rounds[r];
        double total = 0.0;
        for (std::uint32_t q = 0; q < k; ++q) {
            out << "," << agg.mean[r][q] << "," << agg.stddev[r][q];
            total += agg.mean[r][q];
        }
        out << "," << total << "\n";
    }
}

void write_final_state_csv(const SimTrace& tr, const std::vector<std::uint32_t>& assignment,
                           const json& prov, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    for (const auto& c : provenance_comments(prov)) out << "# " << c << "\n";
    out << "node_id,profile,state\n";
    for (std::size_t i = 0; i < tr.final_state.size(); ++i)
        out << i << "," << assignment[i] << "," << (tr.final_state[i] ? 1 : 0) << "\n";
}

json sim_summary(const SimResult& res, const SimConfig& cfg, const json& prov,
                 double wall_seconds) {
    json j;
    j["provenance"] = prov;
    j["replications"] = cfg.replications;
    j["rounds"] = cfg.rounds;
    j["initial_infected"] = res.initial_infected.size();
    j["steady"] = res.aggregate.steady;
    j["steady_fraction"] = res.aggregate.steady_fraction;
    j["profile_sizes"] = res.aggregate.profile_sizes;
    json finals = json::array();
    for (std::uint32_t q = 0; q < res.aggregate.profile_sizes.size(); ++q) {
        double f = res.aggregate.mean.back()[q] /
                   std::max<double>(1.0, static_cast<double>(res.aggregate.profile_sizes[q]));
        finals.push_back(f);
    }
    j["final_fraction"] = finals;
    std::size_t absorbed = 0;
    for (const auto& tr : res.traces)
        if (tr.absorbed_round.has_value()) ++absorbed;
    j["absorbed_replications"] = absorbed;
    j["wall_time_ms"] = wall_seconds * 1000.0;
    return j;
}

json eigen_json(const EigenPair2& e) {
    return json{{"lambda1", {{"re", e.lambda1.real()}, {"im", e.lambda1.imag()}}},
                {"lambda2", {{"re", e.lambda2.real()}, {"im", e.lambda2.imag()}}},
                {"discriminant", e.discriminant}};
}

json verdict_json(const StabilityVerdict& v) {
    json j;
    j["fixed_point"] = v.fixed_point;
    j["coordinates"] = {{"infected_a", v.at.infected_a}, {"infected_b", v.at.infected_b}};
    j["eigenvalues"] = eigen_json(v.eigenvalues);
    j["stable"] = v.stable;
    j["non_hyperbolic"] = v.non_hyperbolic;
    if (v.condition_value)
        j["condition_value"] = *v.condition_value;
    else
        j["condition_value"] = nullptr;
    return j;
}

// ---------------------------------------------------------------------------
// subcommand bodies

int cmd_gen(const std::string& kind, const GraphSpec& spec, const std::string& out_path,
            bool json_stdout) {
    std::optional<LoadResult> unused;
    GraphSpec g = spec;
    g.generator = kind;
    Graph graph = build_graph(g, unused);

    json prov = provenance(g.canonical(), g.seed);
    write_edge_list_snap(graph, out_path, provenance_comments(prov));

    json meta;
    meta["generator"] = kind;
    meta["n"] = graph.node_count();
    meta["edges"] = graph.edge_count();
    meta["seed"] = g.seed;
    if (kind == "powerlaw") {
        meta["exponent"] = g.exponent;
        meta["scale"] = g.scale;
    }
    if (kind == "er") meta["edge_prob"] = g.edge_prob > 0 ? g.edge_prob : g.avg_degree;
    meta["provenance"] = prov;
    meta["path"] = out_path;
    write_json(meta, out_path + ".meta.json");

    if (json_stdout)
        std::cout << meta.dump(2) << std::endl;
    else
        std::cout << "wrote " << out_path << " (" << graph.node_count() << " nodes, "
                  << graph.edge_count() << " edges)" << std::endl;
    return 0;
}

int cmd_analyze_clique(double n, double beta_a, double delta_a, double beta_b, double delta_b,
                       const std::string& fixed_point, const std::string& out_path) {
    std::ostringstream canon;
    canon << "analyze-clique{n=" << n << ",ba=" << beta_a << ",da=" << delta_a << ",bb=" << beta_b
          << ",db=" << delta_b << ",fp=" << fixed_point << "}";
    json report;
    report["n"] = n;
    json formulas = json::array();

    auto parts = split(fixed_point, ':');
    if (parts[0] == "zero") {
        CliqueSystem sys(n, beta_a, delta_a, beta_b, delta_b);
        auto v = analyze_zero(sys);
        report.update(verdict_json(v));
        formulas.push_back(
            "condition_value = N*(delta_a*beta_b + delta_b*beta_a)/(delta_a*delta_b)");
        formulas.push_back("stable iff condition_value < 1");
    } else if (parts[0] == "full" || parts[0] == "mixed") {
        if (parts.size() != 2) throw ConfigError("expected --fixed-point " + parts[0] + ":<c>");
        double c = std::stod(parts[1]);
        bool full = parts[0] == "full";
        if (beta_a <= 0.0 && beta_b <= 0.0) {
            // derive the infection rates that put the fixed point at the target
            auto [da, db] = full ? derive_rates_full_infection(n, c, delta_a, delta_b)
                                 : derive_rates_mixed(n, c, delta_a, delta_b);
            beta_a = da;
            beta_b = db;
            report["derived_rates"] = {{"beta_a", beta_a}, {"beta_b", beta_b}};
            formulas.push_back(full ? "beta = delta/(2N(1-c)) per profile"
                                    : "beta_a = (delta_a/N)(1-c)/c; beta_b = (delta_b/N)c/(1-c)");
        }
        CliqueSystem sys(n, beta_a, delta_a, beta_b, delta_b);
        CliqueState target = full ? CliqueState{c * n, c * n} : CliqueState{(1.0 - c) * n, c * n};
        auto v = analyze_at(sys, target, full ? "full_infection" : "mixed");
        report.update(verdict_json(v));
        report["c"] = c;
        formulas.push_back("eigenvalues of the 2x2 jacobian at the fixed point");
    } else {
        throw ConfigError("unknown --fixed-point: " + fixed_point);
    }

    report["rates"] = {{"beta_a", beta_a}, {"delta_a", delta_a}, {"beta_b", beta_b},
                       {"delta_b", delta_b}};
    report["formulas"] = formulas;
    report["provenance"] = provenance(canon.str(), 0);
    emit_report(report, out_path);
    return 0;
}

int cmd_analyze_zero_stability(const ExperimentSpec& spec, const std::string& out_path,
                               const std::string& out_dir) {
    Experiment e = resolve_experiment(spec);
    std::vector<std::string> warnings = e.warnings;
    check_profile_coverage(e, warnings);
    auto sm = build_matrices(e.pm, e.params);
    auto rep = zero_stability(e.graph, sm);

    json j;
    j["rho"] = rep.rho;
    j["stable"] = rep.stable;
    j["verdict"] = rep.verdict;
    j["metzler_abscissa"] = rep.metzler_abscissa;
    j["restricted_to_component"] = rep.restricted_to_component;
    j["component_size"] = rep.component_size;
    j["power_iterations"] = rep.iterations;
    j["graph"] = {{"nodes", e.graph.node_count()}, {"edges", e.graph.edge_count()}};
    j["formulas"] = {"rho = spectral_radius(Delta^-1 B A); stable iff rho < 1",
                     "cross-check: abscissa(B A - Delta) < 0"};
    j["warnings"] = warnings;
    j["provenance"] = provenance(spec.canonical(), spec.assign_seed);
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
    emit_remap_if_loaded(e, out_dir);
    emit_report(j, out_path);
    return 0;
}

int cmd_analyze_pf(const ExperimentSpec& spec, double tol, const std::string& out_path,
                   const std::string& out_dir) {
    Experiment e = resolve_experiment(spec);
    std::vector<std::string> warnings = e.warnings;
    check_profile_coverage(e, warnings);
    auto sm = build_matrices(e.pm, e.params);
    auto p = pf_fixed_point(e.graph, sm, tol);

    json j;
    j["residual"] = mf_residual(e.graph, sm, p);
    json per_profile = json::array();
    for (std::uint32_t q = 0; q < e.pm.k(); ++q) {
        double sum = 0.0, mn = 1.0, mx = 0.0;
        std::size_t count = 0;
        for (NodeId i = 0; i < e.graph.node_count(); ++i) {
            if (e.pm.profile_of(i) != q) continue;
            sum += p[i];
            mn = std::min(mn, p[i]);
            mx = std::max(mx, p[i]);
            ++count;
        }
        per_profile.push_back({{"profile", q},
                               {"mean", count ? sum / count : 0.0},
                               {"min", count ? mn : 0.0},
                               {"max", count ? mx : 0.0},
                               {"nodes", count}});
    }
    j["per_profile"] = per_profile;
    j["warnings"] = warnings;
    j["provenance"] = provenance(spec.canonical(), spec.assign_seed);

    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        std::ofstream out(fs::path(out_dir) / "pf_fixed_point.csv");
        out << "node_id,profile,p\n";
        for (NodeId i = 0; i < e.graph.node_count(); ++i)
            out << i << "," << e.pm.profile_of(i) << "," << p[i] << "\n";
        emit_remap_if_loaded(e, out_dir);
    }
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
    emit_report(j, out_path);
    return 0;
}

int cmd_analyze_bounds(const ExperimentSpec& spec, const std::string& mode, double a, double b,
                       double x, const std::string& out_path, const std::string& out_dir) {
    Experiment e = resolve_experiment(spec);
    std::vector<std::string> warnings = e.warnings;
    check_profile_coverage(e, warnings);
    auto dp = degrees(e.graph, e.pm);

    BoundsQuery q{a, b, std::nullopt};
    BoundsReport rep;
    if (mode == "flood") {
        rep = flood_bounds(dp, e.params, q);
    } else if (mode == "mixed") {
        if (x <= 0.0) throw ConfigError("--mode mixed needs --x > 1");
        q.x = x;
        rep = mixed_bounds(dp, e.params, q);
    } else {
        throw ConfigError("unknown --mode: " + mode + " (flood or mixed)");
    }

    json j;
    j["mode"] = mode;
    j["a"] = a;
    j["b"] = b;
    if (q.x) j["x"] = *q.x;
    json windows = json::array();
    for (const auto& w : rep.windows)
        windows.push_back({{"name", w.name}, {"lower", w.lower}, {"upper", w.upper}});
    j["windows"] = windows;
    std::size_t passing = 0;
    for (auto v : rep.node_pass) passing += v;
    j["nodes_passing"] = passing;
    j["nodes_total"] = rep.node_pass.size();
    j["all_pass"] = rep.all_pass;
    j["warnings"] = warnings;
    j["provenance"] = provenance(spec.canonical(), spec.assign_seed);
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
    emit_remap_if_loaded(e, out_dir);
    emit_report(j, out_path);
    return 0;
}

int cmd_analyze_integrate(const ExperimentSpec& spec, double t_end, double dt, double p0,
                          const std::string& out_path) {
    Experiment e = resolve_experiment(spec);
    std::vector<std::string> warnings = e.warnings;
    check_profile_coverage(e, warnings);
    auto sm = build_matrices(e.pm, e.params);

    IntegrateOptions opt;
    opt.t_end = t_end;
    opt.dt = dt;
    auto traj = mf_integrate(e.graph, sm, std::vector<double>(e.graph.node_count(), p0), opt);

    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path);
        if (!file) throw std::runtime_error("cannot write " + out_path);
        os = &file;
    }
    json prov = provenance(spec.canonical() + ";integrate", spec.assign_seed);
    for (const auto& c : provenance_comments(prov)) *os << "# " << c << "\n";

    const std::size_t n = e.graph.node_count();
    if (n <= 64) {
        *os << "t";
        for (std::size_t i = 0; i < n; ++i) *os << ",p_" << i;
        *os << "\n";
        for (std::size_t r = 0; r < traj.times.size(); ++r) {
            *os << traj.times[r];
            for (double v : traj.states[r]) *os << "," << v;
            *os << "\n";
        }
    } else {
        // aggregated per-profile means for larger systems
        *os << "t";
        for (std::uint32_t q = 0; q < e.pm.k(); ++q) *os << ",mean_p_profile_" << q;
        *os << "\n";
        auto sizes = e.pm.profile_sizes();
        for (std::size_t r = 0; r < traj.times.size(); ++r) {
            *os << traj.times[r];
            std::vector<double> acc(e.pm.k(), 0.0);
            for (NodeId i = 0; i < n; ++i) acc[e.pm.profile_of(i)] += traj.states[r][i];
            for (std::uint32_t q = 0; q < e.pm.k(); ++q)
                *os << "," << acc[q] / std::max<double>(1.0, static_cast<double>(sizes[q]));
            *os << "\n";
        }
    }
    std::cerr << "steady=" << (traj.steady ? "yes" : "no") << " t_final=" << traj.t_final
              << " clamp_events=" << traj.clamp_events << "\n";
    return 0;
}

int cmd_simulate(const ExperimentSpec& spec, SimConfig cfg, const std::string& seed_spec,
                 const std::string& out_dir, bool json_stdout) {
    auto start = std::chrono::steady_clock::now();
    Experiment e = resolve_experiment(spec);
    std::vector<std::string> warnings = e.warnings;
    check_profile_coverage(e, warnings);
    cfg.seeding = parse_seed_spec(seed_spec);

    auto res = run_simulation(e.graph, e.pm, e.params, cfg);
    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    std::string canon = spec.canonical() + ";seed_spec=" + seed_spec;
    json prov = provenance(canon, cfg.rng_seed);
    json summary = sim_summary(res, cfg, prov, wall);
    summary["warnings"] = warnings;

    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        for (std::size_t r = 0; r < res.traces.size(); ++r) {
            char name[32];
            std::snprintf(name, sizeof(name), "rep_%03zu.csv", r);
            write_trace_csv(res.traces[r], e.pm.k(), prov, (fs::path(out_dir) / name).string());
        }
        write_aggregate_csv(res.aggregate, prov, (fs::path(out_dir) / "aggregate.csv").string());
        write_final_state_csv(res.traces.front(), e.pm.assignment(), prov,
                              (fs::path(out_dir) / "final_state.csv").string());
        write_json(summary, (fs::path(out_dir) / "summary.json").string());
        emit_remap_if_loaded(e, out_dir);
    }
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
    if (json_stdout || out_dir.empty()) std::cout << summary.dump(2) << std::endl;
    return 0;
}

int cmd_repro(const std::string& name, const ScenarioOptions& opt, const std::string& out_dir,
              bool json_stdout) {
    auto start = std::chrono::steady_clock::now();
    ScenarioRun run = run_scenario(name, opt);
    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    std::ostringstream canon;
    canon << "repro{" << name << ",full=" << run.full_scale << ",seed=" << opt.rng_seed << "}";
    json prov = provenance(canon.str(), opt.rng_seed);

    if (!out_dir.empty()) {
        fs::path dir = fs::path(out_dir) / name;
        fs::create_directories(dir);

        json manifest;
        manifest["scenario"] = run.name;
        manifest["full_scale"] = run.full_scale;
        manifest["graph"] = {{"nodes", run.node_count}, {"edges", run.edge_count}};
        json rates = json::array();
        for (const auto& r : run.rates) rates.push_back({{"beta", r.beta}, {"delta", r.delta}});
        manifest["rates"] = rates;
        manifest["rounds"] = run.cfg.rounds;
        manifest["replications"] = run.cfg.replications;
        manifest["notes"] = run.notes;
        manifest["provenance"] = prov;
        write_json(manifest, (dir / "manifest.json").string());

        for (std::size_t r = 0; r < run.sim.traces.size(); ++r) {
            char fname[32];
            std::snprintf(fname, sizeof(fname), "rep_%03zu.csv", r);
            write_trace_csv(run.sim.traces[r], run.profile_count, prov, (dir / fname).string());
        }
        write_aggregate_csv(run.sim.aggregate, prov, (dir / "aggregate.csv").string());
        write_final_state_csv(run.sim.traces.front(), run.profile_assignment, prov,
                              (dir / "final_state.csv").string());

        json check;
        check["predicate"] = run.predicate;
        check["measured"] = run.detail;
        check["pass"] = run.pass;
        check["wall_time_ms"] = wall * 1000.0;
        write_json(check, (dir / "check.json").string());
    }

    std::cout << "repro " << run.name << ": " << (run.pass ? "PASS" : "FAIL") << " -- "
              << run.detail << std::endl;
    for (const auto& note : run.notes) std::cout << "  note: " << note << std::endl;
    return run.pass ? 0 : 1;
}

void add_experiment_flags(CLI::App* cmd, ExperimentSpec& spec) {
    cmd->add_option("--graph", spec.graph.file, "edge-list file");
    cmd->add_option("--format", spec.graph.format, "edge-list format: snap|csv")
        ->check(CLI::IsMember({"snap", "csv"}));
    cmd->add_option("--gen", spec.graph.generator,
                    "generator instead of a file: clique|powerlaw|er");
    cmd->add_option("--n", spec.graph.n, "generator node count");
    cmd->add_option("--exponent", spec.graph.exponent, "power-law exponent");
    cmd->add_option("--scale", spec.graph.scale, "power-law degree cap");
    cmd->add_option("--edge-prob", spec.graph.edge_prob, "er edge probability");
    cmd->add_option("--avg-degree", spec.graph.avg_degree, "er average degree");
    cmd->add_option("--gen-seed", spec.graph.seed, "generator seed");
    cmd->add_option("--assign", spec.assign,
                    "profiles: random:<k> | file:<csv> | attr:<csv>:<bins>");
    cmd->add_option("--assign-seed", spec.assign_seed, "assignment seed");
    cmd->add_option("--params", spec.params_file, "per-profile rates JSON file");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"SIS virus propagation over multi-profile networks"};
    app.require_subcommand(1);

    // ---- gen
    auto* gen = app.add_subcommand("gen", "generate a graph and write a SNAP edge list");
    gen->require_subcommand(1);
    GraphSpec gen_spec;
    std::string gen_out;

    auto* gen_clique_cmd = gen->add_subcommand("clique", "complete graph");
    gen_clique_cmd->add_option("--n", gen_spec.n, "node count")->required();
    gen_clique_cmd->add_option("-o,--out", gen_out, "output path")->required();

    auto* gen_pl = gen->add_subcommand("powerlaw", "configuration-model power-law graph");
    gen_pl->add_option("--n", gen_spec.n, "node count")->required();
    gen_pl->add_option("--exponent", gen_spec.exponent, "degree exponent (> 1)");
    gen_pl->add_option("--scale", gen_spec.scale, "degree cap (0 = n-1)");
    gen_pl->add_option("--seed", gen_spec.seed, "rng seed");
    gen_pl->add_option("-o,--out", gen_out, "output path")->required();

    auto* gen_er = gen->add_subcommand("er", "Erdos-Renyi G(n,p)");
    gen_er->add_option("--n", gen_spec.n, "node count")->required();
    gen_er->add_option("--p", gen_spec.edge_prob, "edge probability");
    gen_er->add_option("--avg-degree", gen_spec.avg_degree, "average degree (alternative to --p)");
    gen_er->add_option("--seed", gen_spec.seed, "rng seed");
    gen_er->add_option("-o,--out", gen_out, "output path")->required();

    // ---- analyze
    auto* analyze = app.add_subcommand("analyze", "fixed-point and stability reports");
    analyze->require_subcommand(1);

    auto* an_clique = analyze->add_subcommand("clique", "closed-form two-profile clique analysis");
    double cl_n = 0, cl_ba = 0, cl_da = 0, cl_bb = 0, cl_db = 0;
    std::string cl_fp = "zero", cl_out;
    an_clique->add_option("--n", cl_n, "nodes per profile")->required();
    an_clique->add_option("--beta-a", cl_ba, "profile-A infection rate");
    an_clique->add_option("--delta-a", cl_da, "profile-A healing rate")->required();
    an_clique->add_option("--beta-b", cl_bb, "profile-B infection rate");
    an_clique->add_option("--delta-b", cl_db, "profile-B healing rate")->required();
    an_clique->add_option("--fixed-point", cl_fp, "zero | full:<c> | mixed:<c>");
    an_clique->add_option("-o,--out", cl_out, "write the JSON report here");

    ExperimentSpec zs_spec;
    std::string zs_out, zs_dir, zs_config;
    auto* an_zero = analyze->add_subcommand("zero-stability", "spectral verdict for extinction");
    add_experiment_flags(an_zero, zs_spec);
    an_zero->add_option("--config", zs_config, "JSON config (overrides flags)");
    an_zero->add_option("-o,--out", zs_out, "write the JSON report here");
    an_zero->add_option("--out-dir", zs_dir, "directory for side outputs (remap table)");

    ExperimentSpec pf_spec;
    std::string pf_out, pf_dir, pf_config;
    double pf_tol = 1e-10;
    auto* an_pf =
        analyze->add_subcommand("pf-fixed-point", "nontrivial fixed point above threshold");
    add_experiment_flags(an_pf, pf_spec);
    an_pf->add_option("--config", pf_config, "JSON config (overrides flags)");
    an_pf->add_option("--tol", pf_tol, "fixed-point residual tolerance");
    an_pf->add_option("-o,--out", pf_out, "write the JSON report here");
    an_pf->add_option("--out-dir", pf_dir, "directory for the per-node state CSV");

    ExperimentSpec bd_spec;
    std::string bd_mode, bd_out, bd_dir, bd_config;
    double bd_a = 0, bd_b = 0, bd_x = 0;
    auto* an_bounds = analyze->add_subcommand("bounds", "degree windows for target footprints");
    add_experiment_flags(an_bounds, bd_spec);
    an_bounds->add_option("--config", bd_config, "JSON config (overrides flags)");
    an_bounds->add_option("--mode", bd_mode, "flood | mixed")->required();
    an_bounds->add_option("--a", bd_a, "lower probability bound")->required();
    an_bounds->add_option("--b", bd_b, "upper probability bound")->required();
    an_bounds->add_option("--x", bd_x, "separation factor (mixed mode)");
    an_bounds->add_option("-o,--out", bd_out, "write the JSON report here");
    an_bounds->add_option("--out-dir", bd_dir, "directory for side outputs (remap table)");

    ExperimentSpec it_spec;
    std::string it_out, it_config;
    double it_tend = 100.0, it_dt = 0.0, it_p0 = 0.1;
    auto* an_int = analyze->add_subcommand("integrate", "mean-field trajectory CSV");
    add_experiment_flags(an_int, it_spec);
    an_int->add_option("--config", it_config, "JSON config (overrides flags)");
    an_int->add_option("--t-end", it_tend, "integration horizon");
    an_int->add_option("--dt", it_dt, "step size (0 = automatic)");
    an_int->add_option("--p0", it_p0, "uniform initial probability");
    an_int->add_option("-o,--out", it_out, "trajectory CSV path (default stdout)");

    // ---- simulate
    ExperimentSpec sim_spec;
    SimConfig sim_cfg;
    std::string sim_seed_spec = "top:0.05", sim_dir, sim_config_path;
    bool sim_json = false;
    auto* simulate = app.add_subcommand("simulate", "stochastic SIS simulation");
    add_experiment_flags(simulate, sim_spec);
    simulate->add_option("--config", sim_config_path, "JSON config (overrides flags)");
    simulate->add_option("--rounds", sim_cfg.rounds, "rounds per replication");
    simulate->add_option("--replications", sim_cfg.replications, "independent replications");
    simulate->add_option("--rng-seed", sim_cfg.rng_seed, "master rng seed");
    simulate->add_option("--record-every", sim_cfg.record_every, "rounds between samples");
    simulate->add_option("--seed-spec", sim_seed_spec,
                         "initial infection: top:<f> | bottom:<f> | per-profile:<n> | nodes:<list>");
    simulate->add_option("--steady-window-frac", sim_cfg.steady_window_frac,
                         "trailing window fraction for the steady check");
    simulate->add_option("--steady-range-frac", sim_cfg.steady_range_frac,
                         "allowed count range as a fraction of profile size");
    simulate->add_option("-o,--out-dir", sim_dir, "directory for trace CSVs and summary");
    simulate->add_flag("--json", sim_json, "print the summary JSON to stdout");

    // ---- repro
    std::string repro_name, repro_dir = "repro-out", repro_graph;
    ScenarioOptions repro_opt;
    std::size_t repro_reps = 0, repro_rounds = 0;
    auto* repro =
        app.add_subcommand("repro", "scripted reproduction of the reference experiments");
    repro->add_option("name", repro_name, "scenario name (an invalid name lists the options)")
        ->required();
    repro->add_flag("--full-scale", repro_opt.full_scale, "original sizes instead of desk scale");
    repro->add_option("--graph", repro_graph, "edge list for full-scale arbitrary scenarios");
    repro->add_option("--replications", repro_reps, "override replication count");
    repro->add_option("--rounds", repro_rounds, "override round count");
    repro->add_option("--rng-seed", repro_opt.rng_seed, "master rng seed");
    repro->add_option("-o,--out-dir", repro_dir, "bundle output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;  // help/version exit 0, usage errors exit 2
    }

    try {
        if (gen_clique_cmd->parsed()) return cmd_gen("clique", gen_spec, gen_out);
        if (gen_pl->parsed()) return cmd_gen("powerlaw", gen_spec, gen_out);
        if (gen_er->parsed()) return cmd_gen("er", gen_spec, gen_out);

        if (an_clique->parsed())
            return cmd_analyze_clique(cl_n, cl_ba, cl_da, cl_bb, cl_db, cl_fp, cl_out);
        if (an_zero->parsed()) {
            if (!zs_config.empty())
                apply_config_overrides(zs_config, zs_spec, nullptr, nullptr, &zs_dir);
            return cmd_analyze_zero_stability(zs_spec, zs_out, zs_dir);
        }
        if (an_pf->parsed()) {
            if (!pf_config.empty())
                apply_config_overrides(pf_config, pf_spec, nullptr, nullptr, &pf_dir);
            return cmd_analyze_pf(pf_spec, pf_tol, pf_out, pf_dir);
        }
        if (an_bounds->parsed()) {
            if (!bd_config.empty())
                apply_config_overrides(bd_config, bd_spec, nullptr, nullptr, &bd_dir);
            return cmd_analyze_bounds(bd_spec, bd_mode, bd_a, bd_b, bd_x, bd_out, bd_dir);
        }
        if (an_int->parsed()) {
            if (!it_config.empty())
                apply_config_overrides(it_config, it_spec, nullptr, nullptr, nullptr);
            return cmd_analyze_integrate(it_spec, it_tend, it_dt, it_p0, it_out);
        }
        if (simulate->parsed()) {
            if (!sim_config_path.empty())
                apply_config_overrides(sim_config_path, sim_spec, &sim_cfg, &sim_seed_spec,
                                       &sim_dir);
            return cmd_simulate(sim_spec, sim_cfg, sim_seed_spec, sim_dir, sim_json);
        }
        if (repro->parsed()) {
            if (!repro_graph.empty()) repro_opt.graph_path = repro_graph;
            if (repro_reps > 0) repro_opt.replications = repro_reps;
            if (repro_rounds > 0) repro_opt.rounds = repro_rounds;
            return cmd_repro(repro_name, repro_opt, repro_dir);
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << std::endl;
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid arguments: " << e.what() << std::endl;
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 1;
    }
    return 2;
}
