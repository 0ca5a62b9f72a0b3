#pragma once

#include <algorithm>
#include <functional>
#include <string>
#include <vector>

#include "quditlab/gates.hpp"

namespace quditlab {

/// Bookkeeping the builders attach to a circuit: which topology produced it,
/// whether it is the first half only, which sites are enumerable inputs, and
/// where the AND result lands.
struct CircuitMeta {
    std::string topology = "custom";
    std::string role = "custom"; // "encoder" | "full" | "custom"
    int control_count = 0;
    std::vector<int> input_sites;
    int root_site = -1;
    int activation_level = -1;
    int target_site = -1;
};

struct Circuit {
    SiteDims dims;
    std::vector<GateSpec> gates;
    CircuitMeta meta;

    Circuit() = default;
    Circuit(SiteDims d, std::vector<GateSpec> g, CircuitMeta m = {})
        : dims(std::move(d)), gates(std::move(g)), meta(std::move(m)) {
        validate();
    }

    void validate() const {
        dims.validate();
        for (const auto& g : gates) validate_gate(g, dims);
        for (int s : meta.input_sites)
            if (s < 0 || s >= dims.size())
                throw validation_error("meta input site out of range");
    }

    int site_count() const { return dims.size(); }
    size_t gate_count() const { return gates.size(); }

    bool is_classical() const {
        for (const auto& g : gates)
            if (!quditlab::is_classical(g)) return false;
        return true;
    }

    /// Sites whose binary assignments are enumerated for statistics.
    /// Builders set meta.input_sites; plain circuits default to all sites.
    std::vector<int> input_sites() const {
        if (!meta.input_sites.empty()) return meta.input_sites;
        std::vector<int> all(static_cast<size_t>(dims.size()));
        for (int i = 0; i < dims.size(); ++i) all[static_cast<size_t>(i)] = i;
        return all;
    }

    Circuit mirrored() const {
        std::vector<GateSpec> inv;
        inv.reserve(gates.size());
        for (auto it = gates.rbegin(); it != gates.rend(); ++it) inv.push_back(inverse(*it));
        CircuitMeta m = meta;
        m.role = "custom";
        return Circuit(dims, std::move(inv), std::move(m));
    }

    /// Greedy circuit depth: a gate starts after the latest busy slot among
    /// its sites.
    int depth() const {
        std::vector<int> busy(static_cast<size_t>(dims.size()), 0);
        int d = 0;
        for (const auto& g : gates) {
            int start = 0;
            auto sites = involved_sites(g);
            for (int s : sites) start = std::max(start, busy[static_cast<size_t>(s)]);
            for (int s : sites) busy[static_cast<size_t>(s)] = start + 1;
            d = std::max(d, start + 1);
        }
        return d;
    }

    /// Highest level index each site's gates reference (control levels,
    /// subspace levels; a cyclic shift touches the whole ladder).
    std::vector<int> max_level_used() const {
        std::vector<int> m(static_cast<size_t>(dims.size()), 0);
        auto bump = [&](int site, int level) {
            m[static_cast<size_t>(site)] = std::max(m[static_cast<size_t>(site)], level);
        };
        std::function<void(const GateSpec&)> walk = [&](const GateSpec& g) {
            std::visit(
                [&](const auto& op) {
                    using T = std::decay_t<decltype(op)>;
                    if constexpr (std::is_same_v<T, SubspaceFlip> ||
                                  std::is_same_v<T, SubspaceHadamard>) {
                        bump(op.site, std::max(op.a, op.b));
                    } else if constexpr (std::is_same_v<T, SubspacePhase>) {
                        bump(op.site, op.level);
                    } else if constexpr (std::is_same_v<T, CyclicShift>) {
                        bump(op.site, dims[op.site] - 1);
                    } else if constexpr (std::is_same_v<T, SubspaceSwap>) {
                        bump(op.site1, std::max(op.a, op.b));
                        bump(op.site2, std::max(op.c, op.d));
                    } else if constexpr (std::is_same_v<T, Controlled>) {
                        for (const auto& [s, l] : op.controls) bump(s, l);
                        walk(*op.inner);
                    }
                },
                g.op());
        };
        for (const auto& g : gates) walk(g);
        return m;
    }
};

/// Undirected edges between sites co-appearing in a gate, sorted and deduped.
inline std::vector<std::pair<int, int>> interaction_graph(const Circuit& c) {
    std::vector<std::pair<int, int>> edges;
    for (const auto& g : c.gates) {
        auto sites = involved_sites(g);
        for (size_t i = 0; i < sites.size(); ++i)
            for (size_t j = i + 1; j < sites.size(); ++j) {
                int a = std::min(sites[i], sites[j]);
                int b = std::max(sites[i], sites[j]);
                if (a != b) edges.emplace_back(a, b);
            }
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return edges;
}

/// True when the interaction graph connects every site (singleton registers
/// count as connected).
inline bool interaction_connected(const Circuit& c) {
    int n = c.site_count();
    if (n <= 1) return true;
    std::vector<int> parent(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) parent[static_cast<size_t>(i)] = i;
    std::function<int(int)> find = [&](int x) {
        while (parent[static_cast<size_t>(x)] != x) {
            parent[static_cast<size_t>(x)] = parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
            x = parent[static_cast<size_t>(x)];
        }
        return x;
    };
    for (auto [a, b] : interaction_graph(c)) parent[static_cast<size_t>(find(a))] = find(b);
    int root = find(0);
    for (int i = 1; i < n; ++i)
        if (find(i) != root) return false;
    return true;
}

} // namespace quditlab
