#pragma once

#include <string>

#include "quditlab/circuit.hpp"

namespace quditlab {

enum class Topology {
    TypeALinear,
    TypeBLinear,
    TypeBTree,
    TypeAReuseTree,
    TypeATwoControlTree,
    StarFlip,
    StarShift,
};

inline const char* topology_name(Topology t) {
    switch (t) {
        case Topology::TypeALinear: return "type-a-linear";
        case Topology::TypeBLinear: return "type-b-linear";
        case Topology::TypeBTree: return "type-b-tree";
        case Topology::TypeAReuseTree: return "type-a-reuse-tree";
        case Topology::TypeATwoControlTree: return "type-a-two-control-tree";
        case Topology::StarFlip: return "star-flip";
        case Topology::StarShift: return "star-shift";
    }
    return "?";
}

inline Topology parse_topology(const std::string& s) {
    for (Topology t : {Topology::TypeALinear, Topology::TypeBLinear, Topology::TypeBTree,
                       Topology::TypeAReuseTree, Topology::TypeATwoControlTree,
                       Topology::StarFlip, Topology::StarShift})
        if (s == topology_name(t)) return t;
    throw validation_error("unknown topology '" + s + "'");
}

struct BuildReport {
    Circuit circuit;
    int depth = 0;
    int gate_count = 0;
    std::vector<int> max_level_used;
};

inline bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

inline int log2_exact(int n) {
    int l = 0;
    while ((1 << l) < n) ++l;
    return l;
}

namespace detail {

inline void require_shape(Topology t, int n) {
    if (n < 2) throw validation_error("encoder needs at least 2 controls");
    switch (t) {
        case Topology::TypeBTree:
        case Topology::TypeAReuseTree:
            if (!is_power_of_two(n))
                throw validation_error(std::string(topology_name(t)) +
                                       " requires the control count to be a power of two");
            break;
        case Topology::TypeATwoControlTree:
            if (!is_power_of_two(n + 1) || n < 3)
                throw validation_error("type-a-two-control-tree requires n = 2^m - 1 controls, m >= 2");
            break;
        default:
            break;
    }
}

// In-order layout of the two-control tree over sites [lo, hi]: the middle
// site is the fresh target, the flanks recurse. Emits gates bottom-up, leaf
// layer first, with control level 1 at the leaves and 2 above.
inline int two_control_build(int lo, int hi, std::vector<std::vector<GateSpec>>& layers,
                             std::vector<int>& target_sites, int layer) {
    int count = hi - lo + 1;
    if (count == 1) return lo;
    int third = (count - 1) / 2;
    int left_rep = two_control_build(lo, lo + third - 1, layers, target_sites, layer + 1);
    int mid = lo + third;
    int right_rep = two_control_build(mid + 1, hi, layers, target_sites, layer + 1);
    int level = (third == 1) ? 1 : 2;
    if (static_cast<size_t>(layer) >= layers.size()) layers.resize(static_cast<size_t>(layer) + 1);
    layers[static_cast<size_t>(layer)].push_back(
        controlled({{left_rep, level}, {right_rep, level}}, flip(mid, 1, 2)));
    target_sites.push_back(mid);
    return mid;
}

} // namespace detail

/// First-half (encoding) circuit: on the all-ones control input the root
/// site ends at its activation level; on any input with a zero control it
/// does not. Pair convention throughout: pairs are taken in string order and
/// the second element survives as the representative.
inline BuildReport build_encoder(Topology topology, int n) {
    detail::require_shape(topology, n);

    std::vector<int> dims;
    std::vector<GateSpec> gates;
    CircuitMeta meta;
    meta.topology = topology_name(topology);
    meta.role = "encoder";
    meta.control_count = n;
    for (int i = 0; i < n; ++i) meta.input_sites.push_back(i);

    switch (topology) {
        case Topology::TypeALinear: {
            dims.assign(static_cast<size_t>(n), 3);
            for (int k = 1; k < n; ++k)
                gates.push_back(controlled({{k - 1, k == 1 ? 1 : 2}}, flip(k, 1, 2)));
            meta.root_site = n - 1;
            meta.activation_level = 2;
            break;
        }
        case Topology::TypeBLinear: {
            dims.assign(static_cast<size_t>(n), 3);
            for (int k = 1; k < n; ++k) gates.push_back(swap_gate(k - 1, 0, 2, k, 0, 1));
            meta.root_site = n - 1;
            meta.activation_level = 1;
            break;
        }
        case Topology::TypeBTree: {
            dims.assign(static_cast<size_t>(n), 3);
            std::vector<int> reps(static_cast<size_t>(n));
            for (int i = 0; i < n; ++i) reps[static_cast<size_t>(i)] = i;
            while (reps.size() > 1) {
                std::vector<int> next;
                for (size_t i = 0; i + 1 < reps.size(); i += 2) {
                    gates.push_back(swap_gate(reps[i], 0, 2, reps[i + 1], 0, 1));
                    next.push_back(reps[i + 1]);
                }
                reps = std::move(next);
            }
            meta.root_site = n - 1;
            meta.activation_level = 1;
            break;
        }
        case Topology::TypeAReuseTree: {
            dims.assign(static_cast<size_t>(n), 2);
            std::vector<int> reps(static_cast<size_t>(n));
            for (int i = 0; i < n; ++i) reps[static_cast<size_t>(i)] = i;
            int level = 1;
            while (reps.size() > 1) {
                std::vector<int> next;
                for (size_t i = 0; i + 1 < reps.size(); i += 2) {
                    int tgt = reps[i + 1];
                    gates.push_back(controlled({{reps[i], level}}, flip(tgt, level, level + 1)));
                    dims[static_cast<size_t>(tgt)] = level + 2; // grows with each reuse as a target
                    next.push_back(tgt);
                }
                reps = std::move(next);
                ++level;
            }
            meta.root_site = n - 1;
            meta.activation_level = level; // log2(n) + 1
            break;
        }
        case Topology::TypeATwoControlTree: {
            dims.assign(static_cast<size_t>(n), 2);
            std::vector<std::vector<GateSpec>> layers;
            std::vector<int> targets;
            int root = detail::two_control_build(0, n - 1, layers, targets, 0);
            for (int t : targets) dims[static_cast<size_t>(t)] = 3;
            for (auto it = layers.rbegin(); it != layers.rend(); ++it)
                for (auto& g : *it) gates.push_back(std::move(g));
            meta.root_site = root;
            meta.activation_level = 2;
            break;
        }
        case Topology::StarFlip:
        case Topology::StarShift: {
            dims.assign(static_cast<size_t>(n), 2);
            dims.push_back(n + 1); // the hub counts successes in its levels
            int hub = n;
            for (int i = 0; i < n; ++i) {
                if (topology == Topology::StarFlip)
                    gates.push_back(controlled({{i, 1}}, flip(hub, i, i + 1)));
                else
                    gates.push_back(controlled({{i, 1}}, shift(hub, +1)));
            }
            meta.root_site = hub;
            meta.activation_level = n;
            break;
        }
    }

    BuildReport r;
    r.circuit = Circuit(SiteDims(dims), std::move(gates), std::move(meta));
    r.depth = r.circuit.depth();
    r.gate_count = static_cast<int>(r.circuit.gate_count());
    r.max_level_used = r.circuit.max_level_used();
    return r;
}

/// Encoder + central controlled target + exact mirror. On qubit-subspace
/// inputs the whole circuit acts as the n-controlled target operation. Star
/// builds conjugate a flip target with its subspace Hadamard, phasing the
/// hub-controlled step.
inline BuildReport build_full_mct(Topology topology, int n, const GateSpec& target_op) {
    BuildReport enc = build_encoder(topology, n);
    const Circuit& ec = enc.circuit;

    auto target_sites = involved_sites(target_op);
    if (target_sites.size() != 1 || target_sites.front() != 0)
        throw validation_error("target_op must act on single site 0 of the dedicated target");

    int target = ec.site_count();
    std::vector<int> dims = ec.dims.dims;
    int target_dim = 3;
    std::visit(
        [&](const auto& op) {
            using T = std::decay_t<decltype(op)>;
            if constexpr (std::is_same_v<T, SubspaceFlip> || std::is_same_v<T, SubspaceHadamard>)
                target_dim = std::max(3, std::max(op.a, op.b) + 1);
            else if constexpr (std::is_same_v<T, SubspacePhase>)
                target_dim = std::max(3, op.level + 1);
            else if constexpr (std::is_same_v<T, CyclicShift>)
                target_dim = 3;
            else
                throw validation_error("unsupported target operation");
        },
        target_op.op());
    dims.push_back(target_dim);

    // target_op is expressed on site 0 of its own register; move it here.
    auto retarget = [&](const GateSpec& in) -> GateSpec {
        return std::visit(
            [&](const auto& op) -> GateSpec {
                using T = std::decay_t<decltype(op)>;
                if constexpr (std::is_same_v<T, SubspaceFlip>) return flip(target, op.a, op.b);
                else if constexpr (std::is_same_v<T, SubspacePhase>) return phase(target, op.level);
                else if constexpr (std::is_same_v<T, CyclicShift>) return shift(target, op.step);
                else if constexpr (std::is_same_v<T, SubspaceHadamard>) return hadamard(target, op.a, op.b);
                else throw validation_error("unsupported target operation");
            },
            in.op());
    };

    std::vector<GateSpec> gates = ec.gates;
    std::vector<std::pair<int, int>> root_ctl = {{ec.meta.root_site, ec.meta.activation_level}};

    bool star = (topology == Topology::StarFlip || topology == Topology::StarShift);
    const auto* flip_target = target_op.get_if<SubspaceFlip>();
    if (star && flip_target) {
        // H-conjugated form: the controlled flip becomes a controlled phase
        // between the Hadamards. Same unitary, hub-controlled-phase layout.
        gates.push_back(hadamard(target, flip_target->a, flip_target->b));
        gates.push_back(controlled(root_ctl, phase(target, flip_target->b)));
        gates.push_back(hadamard(target, flip_target->a, flip_target->b));
    } else {
        gates.push_back(controlled(root_ctl, retarget(target_op)));
    }

    for (auto it = ec.gates.rbegin(); it != ec.gates.rend(); ++it) gates.push_back(inverse(*it));

    CircuitMeta meta = ec.meta;
    meta.role = "full";
    meta.target_site = target;

    BuildReport r;
    r.circuit = Circuit(SiteDims(dims), std::move(gates), std::move(meta));
    r.depth = r.circuit.depth();
    r.gate_count = static_cast<int>(r.circuit.gate_count());
    r.max_level_used = r.circuit.max_level_used();
    return r;
}

} // namespace quditlab
