#include "mxcomm/multiplex.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace mxcomm {

ParseError::ParseError(const std::string& what, std::size_t line)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

std::uint32_t InternTable::intern(std::string_view label) {
    auto it = ids_.find(std::string(label));
    if (it != ids_.end()) return it->second;
    const auto id = static_cast<std::uint32_t>(labels_.size());
    labels_.emplace_back(label);
    ids_.emplace(labels_.back(), id);
    return id;
}

std::optional<std::uint32_t> InternTable::find(std::string_view label) const {
    auto it = ids_.find(std::string(label));
    if (it == ids_.end()) return std::nullopt;
    return it->second;
}

// ---------------------------------------------------------------------------
// MultiplexNetwork

std::optional<StateId> MultiplexNetwork::state_of(NodeId i, LayerId alpha) const {
    if (i >= num_nodes()) return std::nullopt;
    for (StateId u : states_of(i)) {
        if (state_layer_[u] == alpha) return u;
    }
    return std::nullopt;
}

std::span<const StateId> MultiplexNetwork::states_of(NodeId i) const {
    return {node_states_.data() + node_state_offsets_[i], node_state_offsets_[i + 1] - node_state_offsets_[i]};
}

std::span<const Arc> MultiplexNetwork::out_arcs(StateId u) const {
    return {out_arcs_.data() + out_offsets_[u], out_offsets_[u + 1] - out_offsets_[u]};
}

std::span<const Arc> MultiplexNetwork::in_arcs(StateId u) const {
    return {in_arcs_.data() + in_offsets_[u], in_offsets_[u + 1] - in_offsets_[u]};
}

double MultiplexNetwork::weight(StateId u, StateId w) const {
    auto arcs = out_arcs(u);
    auto it = std::lower_bound(arcs.begin(), arcs.end(), w,
                               [](const Arc& a, StateId t) { return a.target < t; });
    return (it != arcs.end() && it->target == w) ? it->weight : 0.0;
}

std::string MultiplexNetwork::state_label(StateId u) const {
    return node_label(node_of(u)) + "@" + layer_label(layer_of(u));
}

std::optional<StateId> MultiplexNetwork::find_state(std::string_view label) const {
    const auto at = label.rfind('@');
    if (at == std::string_view::npos) return std::nullopt;
    auto node = find_node(label.substr(0, at));
    auto layer = find_layer(label.substr(at + 1));
    if (!node || !layer) return std::nullopt;
    return state_of(*node, *layer);
}

// ---------------------------------------------------------------------------
// MultiplexBuilder

void MultiplexBuilder::add_state(NodeId i, LayerId alpha) {
    explicit_states_.emplace_back(i, alpha);
}

void MultiplexBuilder::add_edge(LayerId alpha, NodeId src, NodeId dst, double weight) {
    if (!(weight >= 0.0) || !std::isfinite(weight)) {
        throw std::invalid_argument("edge weight must be finite and non-negative");
    }
    edges_.push_back({alpha, src, dst, weight});
}

MultiplexNetwork MultiplexBuilder::build(std::size_t* duplicates) && {
    MultiplexNetwork net;
    net.directed_ = directed_;
    net.nodes_ = std::move(nodes_);
    net.layers_ = std::move(layers_);

    // State nodes ordered by (node, layer) so each physical node's states are contiguous.
    std::vector<std::pair<NodeId, LayerId>> pairs = std::move(explicit_states_);
    pairs.reserve(pairs.size() + 2 * edges_.size());
    for (const auto& e : edges_) {
        pairs.emplace_back(e.src, e.layer);
        pairs.emplace_back(e.dst, e.layer);
    }
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());

    const std::size_t n_states = pairs.size();
    const std::size_t n_nodes = net.nodes_.size();
    net.state_node_.resize(n_states);
    net.state_layer_.resize(n_states);
    net.node_state_offsets_.assign(n_nodes + 1, 0);
    net.node_states_.resize(n_states);
    for (std::size_t u = 0; u < n_states; ++u) {
        net.state_node_[u] = pairs[u].first;
        net.state_layer_[u] = pairs[u].second;
        net.node_states_[u] = static_cast<StateId>(u);
        ++net.node_state_offsets_[pairs[u].first + 1];
    }
    for (std::size_t i = 0; i < n_nodes; ++i) net.node_state_offsets_[i + 1] += net.node_state_offsets_[i];

    auto state_id = [&](NodeId i, LayerId a) {
        auto it = std::lower_bound(pairs.begin(), pairs.end(), std::make_pair(i, a));
        return static_cast<StateId>(it - pairs.begin());
    };

    struct Triple {
        StateId src;
        StateId dst;
        double w;
    };
    std::vector<Triple> arcs;
    arcs.reserve(directed_ ? edges_.size() : 2 * edges_.size());
    for (const auto& e : edges_) {
        const StateId s = state_id(e.src, e.layer);
        const StateId d = state_id(e.dst, e.layer);
        arcs.push_back({s, d, e.weight});
        if (!directed_ && s != d) arcs.push_back({d, s, e.weight});
    }
    edges_.clear();
    std::sort(arcs.begin(), arcs.end(),
              [](const Triple& a, const Triple& b) { return a.src != b.src ? a.src < b.src : a.dst < b.dst; });

    std::size_t merged = 0;
    std::vector<Triple> unique_arcs;
    unique_arcs.reserve(arcs.size());
    for (const auto& a : arcs) {
        if (!unique_arcs.empty() && unique_arcs.back().src == a.src && unique_arcs.back().dst == a.dst) {
            unique_arcs.back().w += a.w;
            ++merged;
        } else {
            unique_arcs.push_back(a);
        }
    }
    if (duplicates) *duplicates = merged;

    net.out_offsets_.assign(n_states + 1, 0);
    net.in_offsets_.assign(n_states + 1, 0);
    net.out_strength_.assign(n_states, 0.0);
    net.in_strength_.assign(n_states, 0.0);
    for (const auto& a : unique_arcs) {
        ++net.out_offsets_[a.src + 1];
        ++net.in_offsets_[a.dst + 1];
        net.out_strength_[a.src] += a.w;
        net.in_strength_[a.dst] += a.w;
        net.total_weight_ += a.w;
    }
    for (std::size_t u = 0; u < n_states; ++u) {
        net.out_offsets_[u + 1] += net.out_offsets_[u];
        net.in_offsets_[u + 1] += net.in_offsets_[u];
    }
    net.out_arcs_.resize(unique_arcs.size());
    net.in_arcs_.resize(unique_arcs.size());
    std::vector<std::size_t> in_fill(net.in_offsets_.begin(), net.in_offsets_.end() - 1);
    for (std::size_t k = 0; k < unique_arcs.size(); ++k) {
        const auto& a = unique_arcs[k];
        net.out_arcs_[k] = {a.dst, a.w};
        net.in_arcs_[in_fill[a.dst]++] = {a.src, a.w};
    }
    // in-arcs come out sorted by source because unique_arcs is sorted by source.

    net.node_strength_.assign(n_nodes, 0.0);
    for (std::size_t u = 0; u < n_states; ++u) net.node_strength_[net.state_node_[u]] += net.out_strength_[u];
    return net;
}

// ---------------------------------------------------------------------------
// Edge-list I/O

MultiplexNetwork load_multiplex(std::istream& in, const LoadOptions& options, std::vector<std::string>* warnings) {
    MultiplexBuilder builder(options.directed);
    std::string line;
    std::size_t line_no = 0;
    std::size_t self_edges = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream fields(line);
        std::vector<std::string> tok;
        for (std::string t; fields >> t;) tok.push_back(std::move(t));
        if (tok.empty()) continue;
        if (tok.size() != 4 && tok.size() != 5) {
            throw ParseError("expected 'layer src layer dst [weight]', got " + std::to_string(tok.size()) + " fields",
                             line_no);
        }
        if (tok[0] != tok[2]) {
            throw ParseError("interlayer edge in input (layer '" + tok[0] + "' vs '" + tok[2] + "')", line_no);
        }
        double w = 1.0;
        if (tok.size() == 5) {
            std::size_t used = 0;
            try {
                w = std::stod(tok[4], &used);
            } catch (const std::exception&) {
                throw ParseError("invalid weight '" + tok[4] + "'", line_no);
            }
            if (used != tok[4].size() || !std::isfinite(w)) throw ParseError("invalid weight '" + tok[4] + "'", line_no);
            if (w < 0.0) throw ParseError("negative weight " + tok[4], line_no);
            if (!options.weighted) w = 1.0;
        }
        const LayerId layer = builder.intern_layer(tok[0]);
        const NodeId src = builder.intern_node(tok[1]);
        const NodeId dst = builder.intern_node(tok[3]);
        if (src == dst) ++self_edges;
        builder.add_edge(layer, src, dst, w);
    }
    if (builder.num_edges() == 0) throw ParseError("no edges", 0);

    std::size_t duplicates = 0;
    auto net = std::move(builder).build(&duplicates);
    if (warnings) {
        if (self_edges > 0) warnings->push_back(std::to_string(self_edges) + " self-edge(s) in input");
        if (duplicates > 0) warnings->push_back(std::to_string(duplicates) + " repeated arc(s) merged by summing weights");
    }
    return net;
}

MultiplexNetwork load_multiplex(const std::filesystem::path& path, const LoadOptions& options,
                                std::vector<std::string>* warnings) {
    std::ifstream in(path);
    if (!in) throw std::system_error(std::make_error_code(std::errc::no_such_file_or_directory), path.string());
    return load_multiplex(in, options, warnings);
}

void write_edge_list(std::ostream& out, const MultiplexNetwork& net) {
    const auto precision = out.precision(17);
    for (StateId u = 0; u < net.num_states(); ++u) {
        for (const Arc& a : net.out_arcs(u)) {
            if (!net.directed() && a.target < u) continue;
            const auto& layer = net.layer_label(net.layer_of(u));
            out << layer << ' ' << net.node_label(net.node_of(u)) << ' ' << layer << ' '
                << net.node_label(net.node_of(a.target));
            if (a.weight != 1.0) out << ' ' << a.weight;
            out << '\n';
        }
    }
    out.precision(precision);
}

NetworkMetadata read_metadata(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::system_error(std::make_error_code(std::errc::no_such_file_or_directory), path.string());
    NetworkMetadata meta;
    try {
        const auto doc = nlohmann::json::parse(in);
        if (doc.contains("directed")) meta.directed = doc.at("directed").get<bool>();
        if (doc.contains("weighted")) meta.weighted = doc.at("weighted").get<bool>();
        if (doc.contains("layers")) {
            for (const auto& [key, value] : doc.at("layers").items()) meta.layer_names[key] = value.get<std::string>();
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path.string() + ": " + e.what(), 0);
    }
    return meta;
}

// ---------------------------------------------------------------------------
// Aggregation

double AggregateNetwork::weight(NodeId i, NodeId j) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), std::make_pair(i, j),
                               [](const Entry& e, const std::pair<NodeId, NodeId>& key) {
                                   return std::make_pair(e.row, e.col) < key;
                               });
    return (it != entries_.end() && it->row == i && it->col == j) ? it->weight : 0.0;
}

AggregateNetwork aggregate(const MultiplexNetwork& net, std::span<const LayerId> layers) {
    std::vector<char> include(net.num_layers(), 0);
    for (LayerId a : layers) {
        if (a < include.size()) include[a] = 1;
    }
    std::map<std::pair<NodeId, NodeId>, double> sums;
    for (StateId u = 0; u < net.num_states(); ++u) {
        if (!include[net.layer_of(u)]) continue;
        const NodeId j = net.node_of(u);
        for (const Arc& a : net.out_arcs(u)) sums[{net.node_of(a.target), j}] += a.weight;
    }
    AggregateNetwork agg;
    agg.num_nodes_ = net.num_nodes();
    agg.symmetric_ = !net.directed();
    agg.entries_.reserve(sums.size());
    for (const auto& [key, w] : sums) agg.entries_.push_back({key.first, key.second, w});
    return agg;
}

AggregateNetwork aggregate(const MultiplexNetwork& net) {
    std::vector<LayerId> all(net.num_layers());
    for (LayerId a = 0; a < all.size(); ++a) all[a] = a;
    return aggregate(net, all);
}

} // namespace mxcomm
