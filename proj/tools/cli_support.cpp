#include "cli_support.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mxcli {

mxcomm::StateId resolve_state(const mxcomm::MultiplexNetwork& net, const std::string& label) {
    auto u = net.find_state(label);
    if (!u) throw RangeError("unknown state node '" + label + "' (expected node@layer)");
    return *u;
}

mxcomm::NodeId resolve_node(const mxcomm::MultiplexNetwork& net, const std::string& label) {
    auto i = net.find_node(label);
    if (!i) throw RangeError("unknown node '" + label + "'");
    return *i;
}

namespace {

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::system_error(std::make_error_code(std::errc::no_such_file_or_directory), path);
    return in;
}

std::vector<std::string> fields_of(std::string line) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::vector<std::string> fields;
    for (std::string f; ls >> f;) fields.push_back(f);
    return fields;
}

} // namespace

std::vector<mxcomm::StateId> read_state_list(const mxcomm::MultiplexNetwork& net, const std::string& path) {
    auto in = open_input(path);
    std::vector<mxcomm::StateId> states;
    std::string line;
    for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
        auto f = fields_of(line);
        if (f.empty()) continue;
        std::optional<mxcomm::StateId> u;
        if (f.size() == 1) {
            u = net.find_state(f[0]);
        } else if (f.size() == 2) {
            auto i = net.find_node(f[0]);
            auto a = net.find_layer(f[1]);
            if (i && a) u = net.state_of(*i, *a);
        } else {
            throw mxcomm::ParseError("expected 'node@layer' or 'node layer'", lineno);
        }
        if (!u) throw mxcomm::ParseError("unknown state node", lineno);
        states.push_back(*u);
    }
    if (states.empty()) throw mxcomm::ParseError("no state nodes listed", 0);
    return states;
}

mxcomm::LayerSwitchWeights read_switch_file(const mxcomm::MultiplexNetwork& net, const std::string& path) {
    auto in = open_input(path);
    auto sw = mxcomm::identity_switch_weights(net);
    std::string line;
    for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
        auto f = fields_of(line);
        if (f.empty()) continue;
        if (f.size() != 4) throw mxcomm::ParseError("expected 'node layer_from layer_to weight'", lineno);
        auto i = net.find_node(f[0]);
        auto a = net.find_layer(f[1]);
        auto b = net.find_layer(f[2]);
        if (!i || !a || !b) throw mxcomm::ParseError("unknown node or layer", lineno);
        double w = 0.0;
        try {
            std::size_t used = 0;
            w = std::stod(f[3], &used);
            if (used != f[3].size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw mxcomm::ParseError("bad weight '" + f[3] + "'", lineno);
        }
        if (!(w >= 0.0) || !std::isfinite(w)) throw mxcomm::ParseError("switch weights must be finite and >= 0", lineno);
        auto states = net.states_of(*i);
        auto ua = net.state_of(*i, *a), ub = net.state_of(*i, *b);
        if (!ua || !ub) throw mxcomm::ParseError("node is not present in that layer", lineno);
        const auto pa = static_cast<std::size_t>(std::find(states.begin(), states.end(), *ua) - states.begin());
        const auto pb = static_cast<std::size_t>(std::find(states.begin(), states.end(), *ub) - states.begin());
        sw.blocks[*i][pa * states.size() + pb] = w;
    }
    return sw;
}

BuiltWalk build_walk(const mxcomm::MultiplexNetwork& net, const WalkOptions& walk) {
    BuiltWalk built;
    if (walk.kind == "classical") {
        if (!(walk.omega >= 0.0)) throw RangeError("--omega must be >= 0");
        built.model = mxcomm::classical_transition(net, walk.omega);
    } else if (walk.kind == "relaxed") {
        if (!(walk.relax_rate >= 0.0 && walk.relax_rate <= 1.0)) throw RangeError("--relax-rate must lie in [0,1]");
        built.model = mxcomm::relaxed_transition(net, walk.relax_rate);
    } else if (walk.kind == "physical") {
        if (!(walk.relax_rate >= 0.0 && walk.relax_rate <= 1.0)) throw RangeError("--relax-rate must lie in [0,1]");
        auto sw = walk.switch_file.empty() ? mxcomm::relaxed_switch_weights(net, walk.relax_rate)
                                           : read_switch_file(net, walk.switch_file);
        built.model = mxcomm::physical_transition(net, sw);
    } else {
        throw RangeError("unknown walk '" + walk.kind + "'");
    }
    built.teleport = walk.teleport.value_or(net.directed() ? 0.05 : 0.0);
    if (!(built.teleport >= 0.0 && built.teleport <= 1.0)) throw RangeError("--teleport must lie in [0,1]");
    if (built.teleport > 0.0) built.model = mxcomm::enable_teleportation(built.model, net, built.teleport);
    built.volumes = mxcomm::walk_volumes(built.model, net);
    return built;
}

json walk_config(const WalkOptions& walk, const BuiltWalk& built) {
    json j;
    j["walk"] = walk.kind;
    if (walk.kind == "classical") j["omega"] = walk.omega;
    if (walk.kind == "relaxed" || (walk.kind == "physical" && walk.switch_file.empty())) j["relax_rate"] = walk.relax_rate;
    if (walk.kind == "physical" && !walk.switch_file.empty()) j["switch_file"] = walk.switch_file;
    j["teleport"] = built.teleport;
    return j;
}

} // namespace mxcli
