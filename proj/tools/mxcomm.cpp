#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cli_support.hpp"
#include "mxcomm/benchmark.hpp"
#include "mxcomm/ncp.hpp"
#include "mxcomm/parallel.hpp"
#include "mxcomm/ppr.hpp"
#include "mxcomm/sweep.hpp"

using namespace mxcli;
using mxcomm::StateId;

namespace {

struct SamplingFlags {
    double gamma = mxcomm::kDefaultGamma;
    std::size_t grid_size = mxcomm::kDefaultGridSize;
    std::size_t threads = 0;
    bool deterministic = false;
};

void add_input(CLI::App* cmd, InputOptions& in) {
    cmd->add_option("input", in.path, "edge list: layer node layer node [weight]")->required();
    cmd->add_flag("--directed", in.directed, "treat edges as directed");
    cmd->add_flag("--weighted", in.weighted, "read the fifth column as edge weight");
    cmd->add_option("--meta", in.meta, "JSON sidecar with directed/weighted/layer names");
}

void add_walk(CLI::App* cmd, WalkOptions& walk) {
    cmd->add_option("--walk", walk.kind, "classical | relaxed | physical")
        ->check(CLI::IsMember({"classical", "relaxed", "physical"}))
        ->capture_default_str();
    cmd->add_option("--omega", walk.omega, "interlayer coupling of the classical walk")->capture_default_str();
    cmd->add_option("--relax-rate", walk.relax_rate, "relax rate r (relaxed walk; physical switch weights)")
        ->capture_default_str();
    cmd->add_option("--switch-file", walk.switch_file, "physical walk switch weights: node layer_from layer_to weight");
    cmd->add_option("--teleport", walk.teleport, "unrecorded teleportation rate (default 0.05 directed, 0 undirected)");
}

void add_output(CLI::App* cmd, std::string& path) {
    cmd->add_option("-o,--output", path, "output path (default stdout)");
}

void add_sampling(CLI::App* cmd, SamplingFlags& s) {
    cmd->add_option("--gamma", s.gamma, "PageRank teleportation parameter")->capture_default_str();
    cmd->add_option("--grid-size", s.grid_size, "number of epsilon values")->capture_default_str();
    cmd->add_option("--threads", s.threads, "worker threads (default: MXCOMM_THREADS or all cores)");
    cmd->add_flag("--deterministic", s.deterministic, "record that the run must be reproducible");
}

void check_gamma(double gamma) {
    if (!(gamma >= 0.0 && gamma < 1.0)) throw RangeError("--gamma must lie in [0,1)");
}

std::size_t resolve_threads(std::size_t t) { return t == 0 ? mxcomm::default_worker_count() : t; }

json input_config(const InputOptions& in, const mxcomm::MultiplexNetwork& net) {
    json j;
    j["input"] = in.path;
    if (!in.meta.empty()) j["meta"] = in.meta;
    j["directed"] = net.directed();
    j["weighted"] = in.weighted;
    j["state_nodes"] = net.num_states();
    return j;
}

void merge_into(json& target, const json& extra) {
    for (auto it = extra.begin(); it != extra.end(); ++it) target[it.key()] = it.value();
}

LoadedNetwork load_and_warn(const InputOptions& in) {
    auto loaded = load_input(in);
    for (const auto& w : loaded.warnings) std::cerr << "warning: " << w << '\n';
    return loaded;
}

struct NcpOutput {
    std::string path;
    std::string community_dir;
    bool json = false;
};

void write_ncp(const NcpOutput& o, const mxcomm::NcpCurve& curve, const mxcomm::MultiplexNetwork& net, json config) {
    config["epsilons"] = curve.metadata.epsilons;
    config["runs"] = curve.metadata.runs;
    auto seed_label = [&](const mxcomm::Provenance& p) -> std::string {
        if (p.seed < 0) return "";
        const auto id = static_cast<std::uint32_t>(p.seed);
        return p.seed_mode == mxcomm::SeedMode::physical ? net.node_label(id) : net.state_label(id);
    };
    auto members = [&](std::size_t k) {
        std::vector<std::string> labels;
        for (StateId u : curve.community(k).members) labels.push_back(net.state_label(u));
        return labels;
    };
    if (!o.community_dir.empty()) std::filesystem::create_directories(o.community_dir);
    auto community_file = [&](std::size_t k) {
        const auto name = (std::filesystem::path(o.community_dir) / ("size_" + std::to_string(k) + ".txt")).string();
        std::ofstream f(name);
        if (!f) throw std::system_error(errno, std::generic_category(), "cannot write " + o.community_dir);
        for (const auto& l : members(k)) f << l << '\n';
        return name;
    };

    Output out(o.path);
    auto& os = out.stream();
    if (o.json) {
        json doc;
        doc["schema"] = "mxcomm.ncp/1";
        doc["config"] = config;
        doc["points"] = json::array();
        for (std::size_t k : curve.sizes()) {
            const auto& pt = curve.at(k);
            json j;
            j["size"] = k;
            j["conductance"] = pt.conductance;
            j["seed_mode"] = mxcomm::to_string(pt.provenance.seed_mode);
            j["seed"] = seed_label(pt.provenance);
            j["epsilon"] = pt.provenance.epsilon;
            if (!o.community_dir.empty()) j["community_file"] = community_file(k);
            j["members"] = members(k);
            doc["points"].push_back(std::move(j));
        }
        os << doc.dump(2) << '\n';
        return;
    }
    write_header(os, "mxcomm.ncp/1", config);
    os << "size,conductance,seed_mode,seed,epsilon,community_file\n";
    for (std::size_t k : curve.sizes()) {
        const auto& pt = curve.at(k);
        os << k << ',' << fmt(pt.conductance) << ',' << mxcomm::to_string(pt.provenance.seed_mode) << ','
           << csv_field(seed_label(pt.provenance)) << ',' << fmt(pt.provenance.epsilon) << ','
           << (o.community_dir.empty() ? "" : csv_field(community_file(k))) << '\n';
    }
}

// ---------------------------------------------------------------------------

int cmd_aggregate(const InputOptions& in, const std::vector<std::string>& layers, const std::string& output) {
    auto loaded = load_and_warn(in);
    const auto& net = loaded.net;
    std::vector<mxcomm::LayerId> ids;
    for (const auto& l : layers) {
        auto a = net.find_layer(l);
        if (!a) throw RangeError("unknown layer '" + l + "'");
        ids.push_back(*a);
    }
    if (ids.empty()) {
        for (mxcomm::LayerId a = 0; a < net.num_layers(); ++a) ids.push_back(a);
    }
    auto agg = mxcomm::aggregate(net, ids);
    json config = input_config(in, net);
    config["layers"] = layers;
    Output out(output);
    auto& os = out.stream();
    write_header(os, "mxcomm.aggregate/1", config);
    os << "row,col,weight\n";
    for (const auto& e : agg.entries()) {
        // undirected: one row per unordered pair
        if (agg.symmetric() && e.col < e.row) continue;
        os << csv_field(net.node_label(e.row)) << ',' << csv_field(net.node_label(e.col)) << ',' << fmt(e.weight)
           << '\n';
    }
    return 0;
}

mxcomm::SeedVector seed_from_flags(const mxcomm::MultiplexNetwork& net, const std::vector<std::string>& states,
                                   const std::string& physical, json& config) {
    if (!physical.empty() && !states.empty()) throw RangeError("give either --seed-state or --seed-physical");
    if (!physical.empty()) {
        config["seed_physical"] = physical;
        return mxcomm::SeedVector::physical(net, resolve_node(net, physical));
    }
    if (states.empty()) throw RangeError("a seed is required (--seed-state or --seed-physical)");
    std::vector<StateId> ids;
    for (const auto& s : states) ids.push_back(resolve_state(net, s));
    config["seed_state"] = states;
    return mxcomm::SeedVector::uniform(ids);
}

int cmd_appr(const InputOptions& in, const WalkOptions& walk, const SamplingFlags& sampling,
             const std::vector<std::string>& seed_states, const std::string& seed_physical,
             std::optional<double> epsilon, const std::string& output, const std::string& sweep_output) {
    check_gamma(sampling.gamma);
    auto loaded = load_and_warn(in);
    const auto& net = loaded.net;
    auto built = build_walk(net, walk);
    json config = input_config(in, net);
    merge_into(config, walk_config(walk, built));
    config["gamma"] = sampling.gamma;
    auto seed = seed_from_flags(net, seed_states, seed_physical, config);
    const double eps = epsilon.value_or(mxcomm::epsilon_grid(built.volumes, sampling.grid_size).back());
    if (!(eps > 0.0)) throw RangeError("--epsilon must be > 0");
    config["epsilon"] = eps;

    auto state = mxcomm::appr_push(built.model, built.volumes, seed, sampling.gamma, eps);
    config["pushes"] = state.pushes;
    {
        Output out(output);
        auto& os = out.stream();
        write_header(os, "mxcomm.appr/1", config);
        os << "state,node,layer,p,p_over_v,residual\n";
        std::size_t i = 0, j = 0;
        while (i < state.p.size() || j < state.residual.size()) {
            StateId u;
            double p = 0.0, e = 0.0;
            if (j >= state.residual.size() || (i < state.p.size() && state.p[i].first <= state.residual[j].first)) {
                u = state.p[i].first;
            } else {
                u = state.residual[j].first;
            }
            if (i < state.p.size() && state.p[i].first == u) p = state.p[i++].second;
            if (j < state.residual.size() && state.residual[j].first == u) e = state.residual[j++].second;
            os << csv_field(net.state_label(u)) << ',' << csv_field(net.node_label(net.node_of(u))) << ','
               << csv_field(net.layer_label(net.layer_of(u))) << ',' << fmt(p) << ','
               << (built.volumes[u] > 0.0 ? fmt(p / built.volumes[u]) : (p > 0.0 ? "inf" : "0")) << ',' << fmt(e)
               << '\n';
        }
    }
    if (!sweep_output.empty()) {
        auto score = mxcomm::degree_normalized(state.p, built.volumes);
        auto sweep = mxcomm::sweep_cut(built.model, built.volumes, score);
        std::sort(score.begin(), score.end(), [](const auto& a, const auto& b) {
            return a.second != b.second ? a.second > b.second : a.first < b.first;
        });
        Output out(sweep_output);
        auto& os = out.stream();
        write_header(os, "mxcomm.sweep/1", config);
        os << "rank,state,score,conductance\n";
        for (std::size_t k = 0; k < sweep.order.size(); ++k) {
            os << k + 1 << ',' << csv_field(net.state_label(sweep.order[k])) << ',' << fmt(score[k].second) << ','
               << fmt(sweep.conductance[k]) << '\n';
        }
    }
    return 0;
}

int cmd_conductance(const InputOptions& in, const WalkOptions& walk, const std::string& community,
                    const std::string& output) {
    auto loaded = load_and_warn(in);
    const auto& net = loaded.net;
    auto built = build_walk(net, walk);
    auto members = read_state_list(net, community);
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    json config = input_config(in, net);
    merge_into(config, walk_config(walk, built));
    config["community"] = community;
    double volume = 0.0;
    for (StateId u : members) volume += built.volumes[u];
    const double phi = mxcomm::conductance(built.model, built.volumes, members);
    Output out(output);
    auto& os = out.stream();
    write_header(os, "mxcomm.conductance/1", config);
    os << "size,volume,conductance\n" << members.size() << ',' << fmt(volume) << ',' << fmt(phi) << '\n';
    return 0;
}

int cmd_ncp(const InputOptions& in, const WalkOptions& walk, const SamplingFlags& sampling, const std::string& mode,
            std::uint64_t rng, std::size_t max_inclusions, const NcpOutput& output) {
    check_gamma(sampling.gamma);
    if (max_inclusions == 0) throw RangeError("--max-inclusions must be >= 1");
    auto loaded = load_and_warn(in);
    const auto& net = loaded.net;
    auto built = build_walk(net, walk);
    mxcomm::SamplingOptions opts;
    opts.seed_mode = mode == "physical" ? mxcomm::SeedMode::physical : mxcomm::SeedMode::state;
    opts.gamma = sampling.gamma;
    opts.grid_size = sampling.grid_size;
    opts.max_inclusions = max_inclusions;
    opts.rng_seed = rng;
    opts.threads = resolve_threads(sampling.threads);
    auto curve = mxcomm::sample_ncp(built.model, built.volumes, net, opts);

    json config = input_config(in, net);
    merge_into(config, walk_config(walk, built));
    config["gamma"] = sampling.gamma;
    config["grid_size"] = sampling.grid_size;
    config["seed_mode"] = mode;
    config["max_inclusions"] = max_inclusions;
    config["rng"] = rng;
    config["deterministic"] = sampling.deterministic;
    write_ncp(output, curve, net, config);
    return 0;
}

int cmd_local_ncp(const InputOptions& in, const WalkOptions& walk, const SamplingFlags& sampling,
                  const std::vector<std::string>& seed_states, const std::string& seed_set,
                  const NcpOutput& output) {
    check_gamma(sampling.gamma);
    auto loaded = load_and_warn(in);
    const auto& net = loaded.net;
    auto built = build_walk(net, walk);
    std::vector<StateId> seeds;
    for (const auto& s : seed_states) seeds.push_back(resolve_state(net, s));
    if (!seed_set.empty()) {
        auto more = read_state_list(net, seed_set);
        seeds.insert(seeds.end(), more.begin(), more.end());
    }
    if (seeds.empty()) throw RangeError("a seed set is required (--seed-state or --seed-set)");
    auto curve = mxcomm::local_ncp(built.model, built.volumes, seeds, sampling.gamma, sampling.grid_size);

    json config = input_config(in, net);
    merge_into(config, walk_config(walk, built));
    config["gamma"] = sampling.gamma;
    config["grid_size"] = sampling.grid_size;
    std::vector<std::string> labels;
    for (StateId u : seeds) labels.push_back(net.state_label(u));
    config["seed_set"] = labels;
    write_ncp(output, curve, net, config);
    return 0;
}

int cmd_community(const InputOptions& in, const WalkOptions& walk, const SamplingFlags& sampling,
                  const std::string& seed_state, const std::string& output) {
    check_gamma(sampling.gamma);
    auto loaded = load_and_warn(in);
    const auto& net = loaded.net;
    auto built = build_walk(net, walk);
    const StateId seed = resolve_state(net, seed_state);
    auto c = mxcomm::best_community(built.model, built.volumes, seed, sampling.gamma, sampling.grid_size);

    json config = input_config(in, net);
    merge_into(config, walk_config(walk, built));
    config["gamma"] = sampling.gamma;
    config["grid_size"] = sampling.grid_size;
    config["seed_state"] = seed_state;
    json result;
    result["schema"] = "mxcomm.community/1";
    result["config"] = config;
    result["size"] = c.members.size();
    result["conductance"] = c.members.empty() ? json(nullptr) : json(c.conductance);
    result["epsilon"] = c.provenance.epsilon;
    std::vector<std::string> labels;
    for (StateId u : c.members) labels.push_back(net.state_label(u));
    result["members"] = labels;
    Output out(output);
    out.stream() << result.dump(2) << '\n';
    return 0;
}

struct BenchmarkFlags {
    mxcomm::BenchmarkSpec spec;
    std::string network;
    std::string partition;
    std::string experiment;
    std::vector<double> ratios;
    std::size_t seeds = 100;
};

int cmd_benchmark(const BenchmarkFlags& b, const WalkOptions& walk, const SamplingFlags& sampling) {
    check_gamma(sampling.gamma);
    try {
        if (auto warning = b.spec.validate(); !warning.empty()) std::cerr << "warning: " << warning << '\n';
    } catch (const std::invalid_argument& e) {
        throw RangeError(e.what());
    }
    if (b.network.empty() && b.partition.empty() && b.experiment.empty()) {
        throw RangeError("nothing to do: give --network, --partition and/or --experiment");
    }
    json config;
    config["n"] = b.spec.n;
    config["layers"] = b.spec.layers;
    config["communities"] = b.spec.communities;
    config["lambda"] = b.spec.lambda;
    config["p_in"] = b.spec.p_in;
    config["p_out"] = b.spec.p_out;
    config["rng"] = b.spec.rng_seed;

    if (!b.network.empty() || !b.partition.empty()) {
        auto inst = mxcomm::generate_benchmark(b.spec);
        if (!b.network.empty()) {
            Output out(b.network);
            out.stream() << "# benchmark " << config.dump() << '\n';
            mxcomm::write_edge_list(out.stream(), inst.network);
        }
        if (!b.partition.empty()) {
            Output out(b.partition);
            auto& os = out.stream();
            write_header(os, "mxcomm.partition/1", config);
            os << "node,layer,community\n";
            const auto& net = inst.network;
            for (StateId u = 0; u < net.num_states(); ++u) {
                os << net.node_label(net.node_of(u)) << ',' << net.layer_label(net.layer_of(u)) << ','
                   << inst.partition.planted[u] + 1 << '\n';
            }
        }
    }

    if (!b.experiment.empty()) {
        if (b.seeds == 0) throw RangeError("--seeds must be >= 1");
        if (walk.kind == "physical") throw RangeError("the recovery experiment supports classical and relaxed walks");
        mxcomm::WalkConfig wc{walk.kind == "relaxed" ? mxcomm::WalkKind::relaxed : mxcomm::WalkKind::classical,
                              walk.kind == "relaxed" ? walk.relax_rate : walk.omega};
        if (wc.kind == mxcomm::WalkKind::relaxed && !(wc.parameter >= 0.0 && wc.parameter <= 1.0)) {
            throw RangeError("--relax-rate must lie in [0,1]");
        }
        if (wc.kind == mxcomm::WalkKind::classical && !(wc.parameter >= 0.0)) throw RangeError("--omega must be >= 0");
        std::vector<double> p_outs;
        for (double r : b.ratios) p_outs.push_back(r * b.spec.p_in);
        if (p_outs.empty()) p_outs.push_back(b.spec.p_out);

        mxcomm::RecoveryOptions opts;
        opts.n_seeds = b.seeds;
        opts.gamma = sampling.gamma;
        opts.grid_size = sampling.grid_size;
        opts.threads = resolve_threads(sampling.threads);
        json exp_config = config;
        exp_config.erase("p_out");
        exp_config["p_out"] = p_outs;
        exp_config["seeds"] = b.seeds;
        exp_config["gamma"] = sampling.gamma;
        exp_config["grid_size"] = sampling.grid_size;
        Output out(b.experiment);
        auto& os = out.stream();
        write_header(os, "mxcomm.recovery/1", exp_config);
        os << "p_out,lambda,walk,param,median,q1,q3,lo,hi\n";
        for (double p_out : p_outs) {
            auto spec = b.spec;
            spec.p_out = p_out;
            try {
                spec.validate();
            } catch (const std::invalid_argument& e) {
                throw RangeError(e.what());
            }
            auto res = mxcomm::recovery_experiment(spec, wc, opts);
            const auto& s = res.summary;
            os << fmt(p_out) << ',' << fmt(spec.lambda) << ',' << walk.kind << ',' << fmt(wc.parameter) << ','
               << fmt(s.median) << ',' << fmt(s.q1) << ',' << fmt(s.q3) << ',' << fmt(s.lo) << ',' << fmt(s.hi)
               << '\n';
        }
    }
    return 0;
}

int report(const char* kind, int code, const std::string& message, std::size_t line = 0) {
    json err;
    err["error"] = kind;
    err["message"] = message;
    if (line > 0) err["line"] = line;
    err["exit_code"] = code;
    std::cerr << err.dump() << '\n';
    return code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Local community detection in multiplex networks"};
    app.require_subcommand(1);

    InputOptions in;
    WalkOptions walk;
    SamplingFlags sampling;
    std::string output;

    auto* agg = app.add_subcommand("aggregate", "sum the layers into a single-layer network");
    add_input(agg, in);
    add_output(agg, output);
    std::vector<std::string> agg_layers;
    agg->add_option("--layers", agg_layers, "restrict to these layers");

    std::vector<std::string> seed_states;
    std::string seed_physical;
    std::optional<double> epsilon;
    std::string sweep_output;
    auto* appr = app.add_subcommand("appr", "approximate personalized PageRank by push");
    add_input(appr, in);
    add_walk(appr, walk);
    add_sampling(appr, sampling);
    add_output(appr, output);
    appr->add_option("--seed-state", seed_states, "seed state node(s) node@layer");
    appr->add_option("--seed-physical", seed_physical, "seed physical node");
    appr->add_option("--epsilon", epsilon, "truncation (default: smallest grid value 1/sum(v))");
    appr->add_option("--sweep", sweep_output, "also write the sweep over p/v to this path");

    std::string community_file;
    auto* cond = app.add_subcommand("conductance", "conductance of a set of state nodes");
    add_input(cond, in);
    add_walk(cond, walk);
    add_output(cond, output);
    cond->add_option("--community", community_file, "one state node per line")->required();

    std::string seed_mode = "state";
    std::uint64_t rng = 0;
    std::size_t max_inclusions = mxcomm::kDefaultMaxInclusions;
    NcpOutput ncp_out;
    auto* ncp = app.add_subcommand("ncp", "sample the network community profile");
    add_input(ncp, in);
    add_walk(ncp, walk);
    add_sampling(ncp, sampling);
    ncp->add_option("--seed-mode", seed_mode, "state | physical")
        ->check(CLI::IsMember({"state", "physical"}))
        ->capture_default_str();
    ncp->add_option("--rng", rng, "random seed")->capture_default_str();
    ncp->add_option("--max-inclusions", max_inclusions, "drop a seed after this many inclusions")->capture_default_str();
    ncp->add_option("-o,--output", ncp_out.path, "output path (default stdout)");
    ncp->add_option("--community-dir", ncp_out.community_dir, "write each community to DIR/size_<k>.txt");
    ncp->add_flag("--json", ncp_out.json, "JSON output with communities inline");

    std::string seed_set;
    auto* lncp = app.add_subcommand("local-ncp", "local community profile of a seed set");
    add_input(lncp, in);
    add_walk(lncp, walk);
    add_sampling(lncp, sampling);
    lncp->add_option("--seed-state", seed_states, "seed state node(s) node@layer");
    lncp->add_option("--seed-set", seed_set, "file with one state node per line");
    lncp->add_option("-o,--output", ncp_out.path, "output path (default stdout)");
    lncp->add_option("--community-dir", ncp_out.community_dir, "write each community to DIR/size_<k>.txt");
    lncp->add_flag("--json", ncp_out.json, "JSON output with communities inline");

    std::string community_seed;
    auto* comm = app.add_subcommand("community", "best local community of a state node");
    add_input(comm, in);
    add_walk(comm, walk);
    add_sampling(comm, sampling);
    add_output(comm, output);
    comm->add_option("--seed-state", community_seed, "seed state node node@layer")->required();

    BenchmarkFlags bench;
    auto* bm = app.add_subcommand("benchmark", "multiplex block-model benchmark and recovery experiment");
    bm->add_option("--n", bench.spec.n, "nodes")->capture_default_str();
    bm->add_option("--l", bench.spec.layers, "layers")->capture_default_str();
    bm->add_option("--c", bench.spec.communities, "communities")->capture_default_str();
    bm->add_option("--lambda", bench.spec.lambda, "layer mixing")->capture_default_str();
    bm->add_option("--pin", bench.spec.p_in, "within-community edge probability")->capture_default_str();
    bm->add_option("--pout", bench.spec.p_out, "between-community edge probability")->capture_default_str();
    bm->add_option("--rng", bench.spec.rng_seed, "random seed")->capture_default_str();
    bm->add_option("--network", bench.network, "write the edge list here");
    bm->add_option("--partition", bench.partition, "write node,layer,community here");
    bm->add_option("--experiment", bench.experiment, "run the recovery experiment, summary CSV here");
    bm->add_option("--ratios", bench.ratios, "p_out/p_in values for the experiment (default: --pout)");
    bm->add_option("--seeds", bench.seeds, "seed nodes per experiment point")->capture_default_str();
    add_walk(bm, walk);
    add_sampling(bm, sampling);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return report("usage", kExitUsage, e.what());
    }

    try {
        if (*agg) return cmd_aggregate(in, agg_layers, output);
        if (*appr) return cmd_appr(in, walk, sampling, seed_states, seed_physical, epsilon, output, sweep_output);
        if (*cond) return cmd_conductance(in, walk, community_file, output);
        if (*ncp) return cmd_ncp(in, walk, sampling, seed_mode, rng, max_inclusions, ncp_out);
        if (*lncp) return cmd_local_ncp(in, walk, sampling, seed_states, seed_set, ncp_out);
        if (*comm) return cmd_community(in, walk, sampling, community_seed, output);
        if (*bm) return cmd_benchmark(bench, walk, sampling);
    } catch (const std::system_error& e) {
        return report("file_not_found", kExitNotFound, e.what());
    } catch (const mxcomm::ParseError& e) {
        return report("parse_error", kExitParse, e.what(), e.line());
    } catch (const RangeError& e) {
        return report("parameter_range", kExitRange, e.what());
    } catch (const mxcomm::NonErgodicError& e) {
        return report("non_ergodic", kExitNumerical, e.what());
    } catch (const mxcomm::DanglingError& e) {
        return report("dangling", kExitNumerical, e.what());
    } catch (const mxcomm::ConvergenceError& e) {
        return report("no_convergence", kExitNumerical, e.what());
    } catch (const std::domain_error& e) {
        return report("numerical", kExitNumerical, e.what());
    } catch (const std::invalid_argument& e) {
        return report("parameter_range", kExitRange, e.what());
    } catch (const std::exception& e) {
        return report("internal", 1, e.what());
    }
    return kExitUsage;
}
