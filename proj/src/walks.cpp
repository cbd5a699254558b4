#include "mxcomm/walks.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mxcomm {

const char* to_string(WalkKind kind) {
    switch (kind) {
    case WalkKind::classical: return "classical";
    case WalkKind::relaxed: return "relaxed";
    case WalkKind::physical: return "physical";
    case WalkKind::custom: return "custom";
    }
    return "unknown";
}

// ---------------------------------------------------------------------------
// TransitionModel

TransitionModel TransitionModel::from_rows(WalkKind kind, double parameter,
                                           std::vector<std::vector<Transition>> rows) {
    TransitionModel m;
    m.kind_ = kind;
    m.parameter_ = parameter;
    const std::size_t n = rows.size();
    m.dangling_.assign(n, 0);
    m.row_offsets_.assign(n + 1, 0);
    m.col_offsets_.assign(n + 1, 0);

    for (std::size_t u = 0; u < n; ++u) {
        auto& row = rows[u];
        std::sort(row.begin(), row.end(), [](const Transition& a, const Transition& b) { return a.target < b.target; });
        std::size_t out = 0;
        for (std::size_t k = 0; k < row.size(); ++k) {
            if (row[k].prob <= 0.0) continue;
            if (out > 0 && row[out - 1].target == row[k].target) {
                row[out - 1].prob += row[k].prob;
            } else {
                row[out++] = row[k];
            }
        }
        row.resize(out);
        double total = 0.0;
        for (const auto& t : row) total += t.prob;
        if (total <= 0.0) {
            row.clear();
            m.dangling_[u] = 1;
            ++m.num_dangling_;
        } else {
            for (auto& t : row) t.prob /= total;
        }
        m.row_offsets_[u + 1] = m.row_offsets_[u] + row.size();
        for (const auto& t : row) ++m.col_offsets_[t.target + 1];
    }
    for (std::size_t u = 0; u < n; ++u) m.col_offsets_[u + 1] += m.col_offsets_[u];

    m.rows_.reserve(m.row_offsets_[n]);
    m.cols_.resize(m.row_offsets_[n]);
    std::vector<std::size_t> fill(m.col_offsets_.begin(), m.col_offsets_.end() - 1);
    for (std::size_t u = 0; u < n; ++u) {
        for (const auto& t : rows[u]) {
            m.rows_.push_back(t);
            m.cols_[fill[t.target]++] = {static_cast<StateId>(u), t.prob};
        }
    }
    return m;
}

double TransitionModel::probability(StateId from, StateId to) const {
    if (dangling_[from]) {
        auto it = std::lower_bound(teleport_support_.begin(), teleport_support_.end(), to,
                                   [](const Transition& t, StateId s) { return t.target < s; });
        return (it != teleport_support_.end() && it->target == to) ? it->prob : 0.0;
    }
    auto r = row(from);
    auto it = std::lower_bound(r.begin(), r.end(), to, [](const Transition& t, StateId s) { return t.target < s; });
    return (it != r.end() && it->target == to) ? it->prob : 0.0;
}

void TransitionModel::require_stochastic() const {
    if (num_dangling_ > 0 && !teleport_) {
        throw DanglingError(std::to_string(num_dangling_) +
                            " dangling state node(s) without teleportation; enable teleportation");
    }
}

TransitionModel TransitionModel::with_teleportation(Teleportation teleport) const {
    if (teleport.seed.size() != num_states()) throw std::invalid_argument("teleportation seed has wrong length");
    if (!(teleport.rate >= 0.0 && teleport.rate <= 1.0)) throw std::invalid_argument("teleportation rate must lie in [0,1]");
    double total = 0.0;
    for (double s : teleport.seed) {
        if (!(s >= 0.0)) throw std::invalid_argument("teleportation seed must be non-negative");
        total += s;
    }
    if (total <= 0.0) throw std::invalid_argument("teleportation seed has no mass");
    TransitionModel m = *this;
    m.teleport_support_.clear();
    for (auto& s : teleport.seed) s /= total;
    for (std::size_t u = 0; u < teleport.seed.size(); ++u) {
        if (teleport.seed[u] > 0.0) m.teleport_support_.push_back({static_cast<StateId>(u), teleport.seed[u]});
    }
    m.teleport_ = std::move(teleport);
    return m;
}

// ---------------------------------------------------------------------------
// Walk constructions

TransitionModel classical_transition(const MultiplexNetwork& net, double omega) {
    if (!(omega >= 0.0) || !std::isfinite(omega)) throw std::invalid_argument("omega must be finite and >= 0");
    std::vector<std::vector<Transition>> rows(net.num_states());
    for (StateId u = 0; u < net.num_states(); ++u) {
        auto& row = rows[u];
        for (const Arc& a : net.out_arcs(u)) row.push_back({a.target, a.weight});
        if (omega > 0.0) {
            for (StateId w : net.states_of(net.node_of(u))) {
                if (w != u) row.push_back({w, omega});
            }
        }
    }
    return TransitionModel::from_rows(WalkKind::classical, omega, std::move(rows));
}

TransitionModel relaxed_transition(const MultiplexNetwork& net, double r) {
    if (!(r >= 0.0 && r <= 1.0)) throw std::invalid_argument("relax rate must lie in [0,1]");
    std::vector<std::vector<Transition>> rows(net.num_states());
    for (StateId u = 0; u < net.num_states(); ++u) {
        const NodeId i = net.node_of(u);
        const double own = net.out_strength(u);
        const double total = net.node_strength(i);
        auto& row = rows[u];
        // Without intralayer out-strength the stay term is folded into the
        // relaxation term; from_rows renormalises the row.
        const double stay = own > 0.0 ? (1.0 - r) : 0.0;
        const double jump = own > 0.0 ? r : (r > 0.0 ? 1.0 : 0.0);
        if (stay > 0.0) {
            for (const Arc& a : net.out_arcs(u)) row.push_back({a.target, stay * a.weight / own});
        }
        if (jump > 0.0 && total > 0.0) {
            for (StateId w : net.states_of(i)) {
                for (const Arc& a : net.out_arcs(w)) row.push_back({a.target, jump * a.weight / total});
            }
        }
    }
    return TransitionModel::from_rows(WalkKind::relaxed, r, std::move(rows));
}

LayerSwitchWeights identity_switch_weights(const MultiplexNetwork& net) {
    LayerSwitchWeights sw;
    sw.blocks.resize(net.num_nodes());
    for (NodeId i = 0; i < net.num_nodes(); ++i) {
        const std::size_t k = net.states_of(i).size();
        sw.blocks[i].assign(k * k, 0.0);
        for (std::size_t a = 0; a < k; ++a) sw.blocks[i][a * k + a] = 1.0;
    }
    return sw;
}

LayerSwitchWeights relaxed_switch_weights(const MultiplexNetwork& net, double r) {
    if (!(r >= 0.0 && r <= 1.0)) throw std::invalid_argument("relax rate must lie in [0,1]");
    LayerSwitchWeights sw;
    sw.blocks.resize(net.num_nodes());
    for (NodeId i = 0; i < net.num_nodes(); ++i) {
        auto states = net.states_of(i);
        const std::size_t k = states.size();
        auto& block = sw.blocks[i];
        block.assign(k * k, 0.0);
        const double total = net.node_strength(i);
        for (std::size_t a = 0; a < k; ++a) {
            for (std::size_t b = 0; b < k; ++b) {
                block[a * k + b] = (a == b ? (1.0 - r) * total : 0.0) + r * net.out_strength(states[b]);
            }
        }
    }
    return sw;
}

namespace {

void check_switches(const MultiplexNetwork& net, const LayerSwitchWeights& switches) {
    if (switches.blocks.size() != net.num_nodes()) throw std::invalid_argument("switch weights: one block per physical node required");
    for (NodeId i = 0; i < net.num_nodes(); ++i) {
        const std::size_t k = net.states_of(i).size();
        if (switches.blocks[i].size() != k * k) throw std::invalid_argument("switch weights: block size mismatch");
        for (double w : switches.blocks[i]) {
            if (!(w >= 0.0) || !std::isfinite(w)) throw std::invalid_argument("switch weights must be finite and >= 0");
        }
    }
}

// Effective switch weight from state index a to b of node i: layers without
// intralayer out-strength cannot host the second stage.
double usable_switch(const MultiplexNetwork& net, const LayerSwitchWeights& switches, NodeId i, std::size_t a,
                     std::size_t b) {
    auto states = net.states_of(i);
    if (net.out_strength(states[b]) <= 0.0) return 0.0;
    return switches.blocks[i][a * states.size() + b];
}

} // namespace

TransitionModel physical_transition(const MultiplexNetwork& net, const LayerSwitchWeights& switches) {
    check_switches(net, switches);
    std::vector<std::vector<Transition>> rows(net.num_states());
    for (NodeId i = 0; i < net.num_nodes(); ++i) {
        auto states = net.states_of(i);
        const std::size_t k = states.size();
        for (std::size_t a = 0; a < k; ++a) {
            double switch_total = 0.0;
            for (std::size_t b = 0; b < k; ++b) switch_total += usable_switch(net, switches, i, a, b);
            if (switch_total <= 0.0) continue;
            auto& row = rows[states[a]];
            for (std::size_t b = 0; b < k; ++b) {
                const double sw = usable_switch(net, switches, i, a, b);
                if (sw <= 0.0) continue;
                const StateId via = states[b];
                const double step = sw / switch_total / net.out_strength(via);
                for (const Arc& arc : net.out_arcs(via)) row.push_back({arc.target, step * arc.weight});
            }
        }
    }
    return TransitionModel::from_rows(WalkKind::physical, 0.0, std::move(rows));
}

TransitionModel make_walk(const MultiplexNetwork& net, const WalkConfig& config) {
    switch (config.kind) {
    case WalkKind::classical: return classical_transition(net, config.parameter);
    case WalkKind::relaxed: return relaxed_transition(net, config.parameter);
    case WalkKind::physical: return physical_transition(net, relaxed_switch_weights(net, config.parameter));
    case WalkKind::custom: break;
    }
    throw std::invalid_argument("custom walks are built with transition_from_arcs");
}

TransitionModel transition_from_arcs(std::size_t num_states, std::span<const WeightedArc> arcs, WalkKind kind,
                                     double parameter) {
    std::vector<std::vector<Transition>> rows(num_states);
    for (const auto& a : arcs) {
        if (a.source >= num_states || a.target >= num_states) throw std::out_of_range("arc endpoint out of range");
        if (!(a.weight >= 0.0)) throw std::invalid_argument("arc weight must be >= 0");
        rows[a.source].push_back({a.target, a.weight});
    }
    return TransitionModel::from_rows(kind, parameter, std::move(rows));
}

std::vector<WeightedArc> transformed_physical_arcs(const MultiplexNetwork& net, const LayerSwitchWeights& switches) {
    check_switches(net, switches);
    std::vector<WeightedArc> arcs;
    for (NodeId i = 0; i < net.num_nodes(); ++i) {
        auto states = net.states_of(i);
        for (std::size_t a = 0; a < states.size(); ++a) {
            for (std::size_t b = 0; b < states.size(); ++b) {
                const double sw = usable_switch(net, switches, i, a, b);
                if (sw <= 0.0) continue;
                const StateId via = states[b];
                for (const Arc& arc : net.out_arcs(via)) {
                    arcs.push_back({states[a], arc.target, sw * arc.weight / net.out_strength(via)});
                }
            }
        }
    }
    return arcs;
}

std::vector<double> in_strength_seed(const MultiplexNetwork& net, WalkKind kind, double omega) {
    std::vector<double> seed(net.num_states());
    double total = 0.0;
    for (StateId u = 0; u < net.num_states(); ++u) {
        seed[u] = net.in_strength(u);
        if (kind == WalkKind::classical) {
            seed[u] += omega * static_cast<double>(net.states_of(net.node_of(u)).size() - 1);
        }
        total += seed[u];
    }
    if (total <= 0.0) throw std::invalid_argument("network has no in-strength to seed teleportation");
    for (auto& s : seed) s /= total;
    return seed;
}

TransitionModel enable_teleportation(const TransitionModel& model, const MultiplexNetwork& net, double rate) {
    if (model.num_states() != net.num_states()) throw std::invalid_argument("model does not match network");
    if (!(rate > 0.0 && rate <= 1.0)) throw std::invalid_argument("teleportation rate must lie in (0,1]");
    const double omega = model.kind() == WalkKind::classical ? model.parameter() : 0.0;
    return model.with_teleportation({rate, in_strength_seed(net, model.kind(), omega)});
}

// ---------------------------------------------------------------------------
// Stationary distribution

namespace {

// Number of closed communicating classes of the operator's support graph
// (iterative Tarjan).
std::size_t closed_class_count(const TransitionModel& model) {
    const std::size_t n = model.num_states();
    constexpr std::size_t unvisited = static_cast<std::size_t>(-1);
    std::vector<std::size_t> index(n, unvisited), low(n, 0), comp(n, unvisited);
    std::vector<char> on_stack(n, 0);
    std::vector<StateId> stack;
    std::vector<std::vector<StateId>> succ(n);
    for (StateId u = 0; u < n; ++u) {
        model.for_each_out(u, [&](StateId w, double) { succ[u].push_back(w); });
    }
    std::size_t counter = 0, n_comp = 0;
    struct Frame {
        StateId node;
        std::size_t next;
    };
    std::vector<Frame> call;
    for (StateId root = 0; root < n; ++root) {
        if (index[root] != unvisited) continue;
        call.push_back({root, 0});
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = 1;
        while (!call.empty()) {
            auto& f = call.back();
            if (f.next < succ[f.node].size()) {
                const StateId w = succ[f.node][f.next++];
                if (index[w] == unvisited) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = 1;
                    call.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[f.node] = std::min(low[f.node], index[w]);
                }
                continue;
            }
            const StateId v = f.node;
            call.pop_back();
            if (!call.empty()) low[call.back().node] = std::min(low[call.back().node], low[v]);
            if (low[v] == index[v]) {
                StateId w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = 0;
                    comp[w] = n_comp;
                } while (w != v);
                ++n_comp;
            }
        }
    }
    std::vector<char> open(n_comp, 0);
    for (StateId u = 0; u < n; ++u) {
        for (StateId w : succ[u]) {
            if (comp[w] != comp[u]) open[comp[u]] = 1;
        }
    }
    return static_cast<std::size_t>(std::count(open.begin(), open.end(), 0));
}

} // namespace

void propagate(const TransitionModel& model, std::span<const double> x, std::span<double> out) {
    double dangling_mass = 0.0;
    for (StateId u = 0; u < model.num_states(); ++u) {
        if (model.dangling(u)) dangling_mass += x[u];
    }
    std::fill(out.begin(), out.end(), 0.0);
    for (StateId u = 0; u < model.num_states(); ++u) {
        double acc = 0.0;
        for (const auto& t : model.column(u)) acc += t.prob * x[t.target];
        out[u] = acc;
    }
    if (dangling_mass > 0.0) {
        for (const auto& t : model.teleport_support()) out[t.target] += dangling_mass * t.prob;
    }
}

Distribution stationary_distribution(const TransitionModel& model, const StationaryOptions& options) {
    model.require_stochastic();
    const std::size_t n = model.num_states();
    if (n == 0) throw std::invalid_argument("empty model");
    if (const auto closed = closed_class_count(model); closed > 1) {
        throw NonErgodicError("stationary distribution is not unique: " + std::to_string(closed) +
                              " closed classes; enable teleportation");
    }
    Distribution p(n, 1.0 / static_cast<double>(n)), next(n);
    double residual = 0.0;
    for (std::size_t it = 0; it < options.max_iter; ++it) {
        propagate(model, p, next);
        residual = 0.0;
        for (std::size_t u = 0; u < n; ++u) residual += std::abs(next[u] - p[u]);
        if (residual <= options.tol) {
            const double total = std::accumulate(next.begin(), next.end(), 0.0);
            for (auto& x : next) x /= total;
            return next;
        }
        // lazy step: same fixed point, no oscillation on periodic chains
        double total = 0.0;
        for (std::size_t u = 0; u < n; ++u) {
            p[u] = 0.5 * (p[u] + next[u]);
            total += p[u];
        }
        for (auto& x : p) x /= total;
    }
    throw ConvergenceError("stationary distribution did not converge in " + std::to_string(options.max_iter) +
                               " iterations",
                           residual);
}

VolumeVector teleported_volumes(const TransitionModel& model, const MultiplexNetwork& net, double rate) {
    if (model.num_states() != net.num_states()) throw std::invalid_argument("model does not match network");
    if (!(rate >= 0.0 && rate <= 1.0)) throw std::invalid_argument("teleportation rate must lie in [0,1]");
    const std::size_t n = model.num_states();
    const auto scale = static_cast<double>(n);

    if (rate == 0.0) {
        auto p = stationary_distribution(model);
        for (auto& x : p) x *= scale;
        return p;
    }

    const TransitionModel tele = enable_teleportation(model, net, rate);
    const auto& seed = tele.teleportation()->seed;
    std::vector<double> x(seed), next(n);
    constexpr double tol = 1e-14;
    const std::size_t max_iter = 1'000'000;
    double residual = 0.0;
    for (std::size_t it = 0; it < max_iter; ++it) {
        propagate(tele, x, next);
        residual = 0.0;
        for (std::size_t u = 0; u < n; ++u) {
            next[u] = (1.0 - rate) * next[u] + rate * seed[u];
            residual += std::abs(next[u] - x[u]);
        }
        x.swap(next);
        if (residual <= tol) {
            const double total = std::accumulate(x.begin(), x.end(), 0.0);
            for (auto& value : x) value *= scale / total;
            return x;
        }
    }
    throw ConvergenceError("teleported PageRank did not converge", residual);
}

VolumeVector walk_volumes(const TransitionModel& model, const MultiplexNetwork& net) {
    if (model.num_states() != net.num_states()) throw std::invalid_argument("model does not match network");
    if (model.teleportation()) return teleported_volumes(model, net, model.teleportation()->rate);

    const bool reversible =
        !net.directed() && (model.kind() == WalkKind::classical || model.kind() == WalkKind::relaxed);
    if (!reversible) return teleported_volumes(model, net, 0.0);

    model.require_stochastic();
    VolumeVector v(net.num_states());
    double total = 0.0;
    for (StateId u = 0; u < net.num_states(); ++u) {
        v[u] = net.out_strength(u);
        if (model.kind() == WalkKind::classical) {
            v[u] += model.parameter() * static_cast<double>(net.states_of(net.node_of(u)).size() - 1);
        }
        total += v[u];
    }
    const auto scale = static_cast<double>(net.num_states());
    for (auto& x : v) x *= scale / total;
    return v;
}

} // namespace mxcomm
