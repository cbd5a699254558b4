#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace mxcomm {

using NodeId = std::uint32_t;
using LayerId = std::uint32_t;
using StateId = std::uint32_t;

/// Weighted arc between two state nodes of the same layer.
struct Arc {
    StateId target;
    double weight;
};

/// Raised for malformed edge-list input. `line()` is 1-based, 0 when the
/// error is not tied to a particular line.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line);
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Bidirectional label table mapping arbitrary strings to dense ids.
class InternTable {
public:
    std::uint32_t intern(std::string_view label);
    std::optional<std::uint32_t> find(std::string_view label) const;
    const std::string& label(std::uint32_t id) const { return labels_[id]; }
    std::size_t size() const noexcept { return labels_.size(); }

private:
    std::vector<std::string> labels_;
    std::unordered_map<std::string, std::uint32_t> ids_;
};

/// Multiplex network with state nodes (physical node, layer) and weighted
/// intralayer arcs. Interlayer structure is not stored here; it is induced
/// by the walk model. Immutable once built.
class MultiplexNetwork {
public:
    std::size_t num_layers() const noexcept { return layers_.size(); }
    std::size_t num_nodes() const noexcept { return nodes_.size(); }
    std::size_t num_states() const noexcept { return state_node_.size(); }
    std::size_t num_arcs() const noexcept { return out_arcs_.size(); }
    bool directed() const noexcept { return directed_; }

    NodeId node_of(StateId u) const { return state_node_[u]; }
    LayerId layer_of(StateId u) const { return state_layer_[u]; }
    std::optional<StateId> state_of(NodeId i, LayerId alpha) const;

    /// State nodes of physical node i, ordered by layer id.
    std::span<const StateId> states_of(NodeId i) const;

    std::span<const Arc> out_arcs(StateId u) const;
    /// Incoming arcs; `Arc::target` holds the source state node.
    std::span<const Arc> in_arcs(StateId u) const;

    double out_strength(StateId u) const { return out_strength_[u]; }
    double in_strength(StateId u) const { return in_strength_[u]; }
    /// Total intralayer out-strength of physical node i across all layers.
    double node_strength(NodeId i) const { return node_strength_[i]; }
    double total_weight() const noexcept { return total_weight_; }

    /// Weight of arc u -> w (0 when absent).
    double weight(StateId u, StateId w) const;

    const std::string& node_label(NodeId i) const { return nodes_.label(i); }
    const std::string& layer_label(LayerId a) const { return layers_.label(a); }
    /// "node@layer"
    std::string state_label(StateId u) const;
    std::optional<NodeId> find_node(std::string_view label) const { return nodes_.find(label); }
    std::optional<LayerId> find_layer(std::string_view label) const { return layers_.find(label); }
    /// Resolves a "node@layer" label. The last '@' separates the layer.
    std::optional<StateId> find_state(std::string_view label) const;

    /// True when every physical node has a state node in every layer.
    bool node_aligned() const noexcept { return num_states() == num_nodes() * num_layers(); }

private:
    friend class MultiplexBuilder;

    bool directed_ = false;
    InternTable nodes_;
    InternTable layers_;

    std::vector<NodeId> state_node_;
    std::vector<LayerId> state_layer_;
    std::vector<std::size_t> node_state_offsets_;
    std::vector<StateId> node_states_;

    std::vector<std::size_t> out_offsets_;
    std::vector<Arc> out_arcs_;
    std::vector<std::size_t> in_offsets_;
    std::vector<Arc> in_arcs_;

    std::vector<double> out_strength_;
    std::vector<double> in_strength_;
    std::vector<double> node_strength_;
    double total_weight_ = 0.0;
};

/// Incremental construction of a MultiplexNetwork. State nodes are created
/// implicitly by edges, or explicitly with add_state().
class MultiplexBuilder {
public:
    explicit MultiplexBuilder(bool directed) : directed_(directed) {}

    NodeId intern_node(std::string_view label) { return nodes_.intern(label); }
    LayerId intern_layer(std::string_view label) { return layers_.intern(label); }

    void add_state(NodeId i, LayerId alpha);
    /// Adds src -> dst in layer alpha (and the mirror arc when undirected).
    /// Throws std::invalid_argument on negative or non-finite weight.
    void add_edge(LayerId alpha, NodeId src, NodeId dst, double weight = 1.0);

    std::size_t num_edges() const noexcept { return edges_.size(); }

    /// Repeated arcs are summed; the count of merged repeats is reported
    /// through `duplicates` when non-null.
    MultiplexNetwork build(std::size_t* duplicates = nullptr) &&;

private:
    struct PendingEdge {
        LayerId layer;
        NodeId src;
        NodeId dst;
        double weight;
    };

    bool directed_;
    InternTable nodes_;
    InternTable layers_;
    std::vector<std::pair<NodeId, LayerId>> explicit_states_;
    std::vector<PendingEdge> edges_;
};

struct LoadOptions {
    bool directed = false;
    bool weighted = false;
};

/// Reads `layer src layer dst [weight]` records. `#` starts a comment.
/// Non-fatal issues (self-edges, repeated edges) are appended to `warnings`.
MultiplexNetwork load_multiplex(std::istream& in, const LoadOptions& options,
                                std::vector<std::string>* warnings = nullptr);
MultiplexNetwork load_multiplex(const std::filesystem::path& path, const LoadOptions& options,
                                std::vector<std::string>* warnings = nullptr);

/// Writes the network in the edge-list format accepted by load_multiplex.
/// Undirected networks emit each edge once.
void write_edge_list(std::ostream& out, const MultiplexNetwork& net);

/// Optional JSON sidecar: {"directed": bool, "weighted": bool,
/// "layers": {"<label>": "<display name>", ...}}.
struct NetworkMetadata {
    std::optional<bool> directed;
    std::optional<bool> weighted;
    std::unordered_map<std::string, std::string> layer_names;
};
NetworkMetadata read_metadata(const std::filesystem::path& path);

/// Single-layer projection: entry (i, j) sums over layers the intralayer
/// weight of the arc from j to i.
class AggregateNetwork {
public:
    struct Entry {
        NodeId row;
        NodeId col;
        double weight;
    };

    std::size_t num_nodes() const noexcept { return num_nodes_; }
    bool symmetric() const noexcept { return symmetric_; }
    double weight(NodeId i, NodeId j) const;
    /// Non-zero entries ordered by (row, col).
    std::span<const Entry> entries() const noexcept { return entries_; }

private:
    friend AggregateNetwork aggregate(const MultiplexNetwork&, std::span<const LayerId>);

    std::size_t num_nodes_ = 0;
    bool symmetric_ = true;
    std::vector<Entry> entries_;
};

AggregateNetwork aggregate(const MultiplexNetwork& net);
/// Aggregate over a subset of layers.
AggregateNetwork aggregate(const MultiplexNetwork& net, std::span<const LayerId> layers);

} // namespace mxcomm
