#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <random>
#include <thread>

#include "quditlab/classical.hpp"
#include "quditlab/build.hpp"

namespace quditlab {

using BigInt = boost::multiprecision::cpp_int;

struct SampledMode {
    uint64_t samples = 0;
    uint64_t seed = 0;
};

/// Counts of modified-cluster sizes over binary control inputs.
struct ClusterHistogram {
    int n = 0; // number of enumerated input sites
    BigInt total_configs = 0;
    std::map<int, BigInt> counts;
    bool exhaustive = true;
    SampledMode sampled; // meaningful when !exhaustive

    double frequency(int size) const {
        auto it = counts.find(size);
        if (it == counts.end()) return 0.0;
        return static_cast<double>(it->second) / static_cast<double>(total_configs);
    }
};

/// Mean number of modified sites per configuration: sum_s s * counts[s] / total.
inline double empirical_S(const ClusterHistogram& h) {
    if (h.total_configs == 0) return 0.0;
    BigInt weighted = 0;
    for (const auto& [s, c] : h.counts) weighted += BigInt(s) * c;
    return static_cast<double>(weighted) / static_cast<double>(h.total_configs);
}

/// Permutation image of a basis input under a classical circuit.
inline BasisString classical_image(const Circuit& circuit, const BasisString& input) {
    auto perm = classify_classical(circuit);
    if (!perm) throw validation_error("classical_image: circuit is not classical");
    return perm->image(input);
}

namespace detail {

class UnionFind {
public:
    explicit UnionFind(int n) : parent_(static_cast<size_t>(n)) {
        for (int i = 0; i < n; ++i) parent_[static_cast<size_t>(i)] = i;
    }
    int find(int x) {
        while (parent_[static_cast<size_t>(x)] != x) {
            parent_[static_cast<size_t>(x)] = parent_[static_cast<size_t>(parent_[static_cast<size_t>(x)])];
            x = parent_[static_cast<size_t>(x)];
        }
        return x;
    }
    void unite(int a, int b) {
        int ra = find(a), rb = find(b);
        if (ra != rb) parent_[static_cast<size_t>(ra)] = rb;
    }

private:
    std::vector<int> parent_;
};

/// Cluster sizes for one binary assignment of the input sites. A cluster is
/// a connected set of modified sites; connectivity is carried by the gates
/// that actually fired on this input, so clusters reproduce the worked
/// string runs on chains and the modified paths on trees.
inline void cluster_sizes_for_config(const Circuit& circuit, uint64_t config,
                                     const std::vector<int>& inputs, BasisString& scratch,
                                     std::vector<int>& sizes_out) {
    const int sites = circuit.site_count();
    scratch.digits.assign(static_cast<size_t>(sites), 0);
    for (size_t i = 0; i < inputs.size(); ++i)
        scratch[inputs[i]] = static_cast<uint8_t>((config >> i) & 1ULL);
    BasisString initial = scratch;

    UnionFind uf(sites);
    std::vector<std::pair<int, int>> fired_links;
    for (const auto& g : circuit.gates) {
        if (apply_classical(g, circuit.dims, scratch)) {
            auto inv = involved_sites(g);
            for (size_t i = 0; i < inv.size(); ++i)
                for (size_t j = i + 1; j < inv.size(); ++j)
                    fired_links.emplace_back(inv[i], inv[j]);
        }
    }

    std::vector<bool> modified(static_cast<size_t>(sites), false);
    for (int i = 0; i < sites; ++i) modified[static_cast<size_t>(i)] = scratch[i] != initial[i];
    for (auto [a, b] : fired_links)
        if (modified[static_cast<size_t>(a)] && modified[static_cast<size_t>(b)]) uf.unite(a, b);

    sizes_out.clear();
    std::vector<int> comp_size(static_cast<size_t>(sites), 0);
    for (int i = 0; i < sites; ++i)
        if (modified[static_cast<size_t>(i)]) ++comp_size[static_cast<size_t>(uf.find(i))];
    for (int i = 0; i < sites; ++i)
        if (comp_size[static_cast<size_t>(i)] > 0) sizes_out.push_back(comp_size[static_cast<size_t>(i)]);
}

inline std::map<int, uint64_t> histogram_over_range(const Circuit& circuit,
                                                    const std::vector<int>& inputs,
                                                    uint64_t begin, uint64_t end) {
    std::map<int, uint64_t> h;
    BasisString scratch;
    std::vector<int> sizes;
    for (uint64_t cfg = begin; cfg < end; ++cfg) {
        cluster_sizes_for_config(circuit, cfg, inputs, scratch, sizes);
        for (int s : sizes) ++h[s];
    }
    return h;
}

} // namespace detail

inline ClusterHistogram cluster_histogram_exhaustive(const Circuit& circuit, int workers = 1,
                                                     int max_inputs = 24) {
    if (!circuit.is_classical())
        throw validation_error("cluster_histogram: circuit is not classical");
    auto inputs = circuit.input_sites();
    int n = static_cast<int>(inputs.size());
    if (n > max_inputs)
        throw capacity_error("exhaustive enumeration over " + std::to_string(n) +
                             " inputs exceeds cap " + std::to_string(max_inputs));
    if (workers < 1) workers = 1;
    uint64_t total = 1ULL << n;

    // Contiguous chunks, merged in chunk order: histogram merging is integer
    // addition, so the result is identical for any worker count.
    std::vector<std::map<int, uint64_t>> parts(static_cast<size_t>(workers));
    std::vector<std::thread> pool;
    uint64_t chunk = (total + static_cast<uint64_t>(workers) - 1) / static_cast<uint64_t>(workers);
    for (int w = 0; w < workers; ++w) {
        uint64_t b = std::min<uint64_t>(total, static_cast<uint64_t>(w) * chunk);
        uint64_t e = std::min<uint64_t>(total, b + chunk);
        pool.emplace_back([&, w, b, e] {
            parts[static_cast<size_t>(w)] = detail::histogram_over_range(circuit, inputs, b, e);
        });
    }
    for (auto& t : pool) t.join();

    ClusterHistogram h;
    h.n = n;
    h.exhaustive = true;
    h.total_configs = BigInt(1) << n;
    for (const auto& part : parts)
        for (const auto& [s, c] : part) h.counts[s] += c;
    return h;
}

inline ClusterHistogram cluster_histogram_sampled(const Circuit& circuit, uint64_t samples,
                                                  uint64_t seed) {
    if (!circuit.is_classical())
        throw validation_error("cluster_histogram: circuit is not classical");
    auto inputs = circuit.input_sites();
    int n = static_cast<int>(inputs.size());
    if (n > 63) throw capacity_error("sampled enumeration supports at most 63 input sites");

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<uint64_t> dist(0, (1ULL << n) - 1);
    ClusterHistogram h;
    h.n = n;
    h.exhaustive = false;
    h.sampled = SampledMode{samples, seed};
    h.total_configs = samples;
    BasisString scratch;
    std::vector<int> sizes;
    for (uint64_t i = 0; i < samples; ++i) {
        detail::cluster_sizes_for_config(circuit, dist(rng), inputs, scratch, sizes);
        for (int s : sizes) ++h.counts[s];
    }
    return h;
}

/// Number of maximal 1-runs of exactly length k over all binary strings of
/// length n, by direct enumeration.
inline BigInt runs_brute(int n, int k) {
    if (k < 1 || k > n) throw validation_error("runs_brute: need 1 <= k <= n");
    if (n > 26) throw capacity_error("runs_brute: n too large for enumeration");
    uint64_t count = 0;
    for (uint64_t s = 0; s < (1ULL << n); ++s) {
        int run = 0;
        for (int i = 0; i <= n; ++i) {
            bool one = i < n && ((s >> i) & 1ULL);
            if (one) ++run;
            else {
                if (run == k) ++count;
                run = 0;
            }
        }
    }
    return BigInt(count);
}

/// Closed form (n-k+3) 2^{n-k-2} for the same count; integral for k <= n-1.
inline BigInt runs_exact(int n, int k) {
    if (k < 1 || k > n - 1)
        throw validation_error("runs_exact: closed form needs 1 <= k <= n-1");
    if (k == n - 1) return BigInt(2); // (n-k+3) 2^{-1} = 4/2
    return BigInt(n - k + 3) << (n - k - 2);
}

/// Predicted frequency of size-k modified clusters per configuration, taken
/// verbatim from the per-topology closed forms. No closed form exists for
/// the star layouts.
inline double predicted_frequency(Topology t, int n, int k) {
    if (k < 1) throw validation_error("predicted_frequency: k >= 1");
    switch (t) {
        case Topology::TypeALinear:
            return std::pow(2.0, -k);
        case Topology::TypeBLinear:
            return (n - k + 3) * std::pow(2.0, -k - 2) - std::pow(2.0, -k);
        case Topology::TypeBTree:
            return n * std::pow(2.0, -std::pow(2.0, k) - k);
        case Topology::TypeAReuseTree:
            return (static_cast<double>(n) / k) * std::pow(2.0, -k);
        case Topology::TypeATwoControlTree:
            return (static_cast<double>(n + 1) / (k + 1)) *
                   std::pow(2.0, -k - static_cast<double>(n + 1) / (k + 1));
        case Topology::StarFlip:
        case Topology::StarShift:
            throw validation_error("no cluster-frequency closed form for star topologies");
    }
    throw validation_error("predicted_frequency: bad topology");
}

/// Partial sum route for the figure of merit. The linear topologies use the
/// summands their closed forms integrate (k 2^{-k} and k(n-k) 2^{-k}/4); the
/// trees sum k * predicted_frequency(k).
inline double figure_of_merit_partial_sum(Topology t, int n) {
    double s = 0.0;
    switch (t) {
        case Topology::TypeALinear:
            for (int k = 1; k <= n; ++k) s += k * std::pow(2.0, -k);
            return s;
        case Topology::TypeBLinear:
            for (int k = 1; k <= n; ++k) s += 0.25 * k * (n - k) * std::pow(2.0, -k);
            return s;
        default:
            for (int k = 1; k <= n; ++k) s += k * predicted_frequency(t, n, k);
            return s;
    }
}

/// Closed form where one exists, otherwise the partial sum.
inline double figure_of_merit(Topology t, int n) {
    if (n < 1) throw validation_error("figure_of_merit: n >= 1");
    double p2n = std::pow(2.0, -n);
    switch (t) {
        case Topology::TypeALinear:
            return 2.0 - (n + 2) * p2n;
        case Topology::TypeBLinear:
            return (n / 4.0) * (2.0 - (n + 2) * p2n) -
                   0.25 * (6.0 - (static_cast<double>(n) * n + 4.0 * n + 6.0) * p2n);
        default:
            return figure_of_merit_partial_sum(t, n);
    }
}

/// R[N][k]: disjoint modified paths of length k over all configurations of a
/// depth-N pairing tree, by the recurrence
///   R^{(N+1)}_{k>N} = 0,  R^{(N+1)}_N = 1,
///   R^{(N+1)}_{k<N} = 2^{2^{N-1}+1} R^{(N)}_k
///                   + (2^{2^{N-k-1}+1} - 1) R^{(N-k)}_k
///                   + 2^{2^{N-k-1}} (2^{2^{N-k-1}} - 1).
/// Values grow double-exponentially; counts are exact big integers.
struct RecurrenceTable {
    int depth = 0;
    // values[N][k] for 1 <= N <= depth, 0 <= k <= depth (k=0 unused)
    std::vector<std::vector<BigInt>> values;

    const BigInt& at(int N, int k) const {
        if (N < 1 || N > depth || k < 1 || k > depth)
            throw validation_error("RecurrenceTable: index out of range");
        return values[static_cast<size_t>(N)][static_cast<size_t>(k)];
    }
};

inline RecurrenceTable tree_recurrence(int depth_max, int cap = 6) {
    if (depth_max < 1) throw validation_error("tree_recurrence: depth >= 1");
    if (depth_max > cap)
        throw capacity_error("tree_recurrence: depth " + std::to_string(depth_max) +
                             " exceeds cap " + std::to_string(cap));
    RecurrenceTable t;
    t.depth = depth_max;
    t.values.assign(static_cast<size_t>(depth_max) + 1,
                    std::vector<BigInt>(static_cast<size_t>(depth_max) + 1, BigInt(0)));
    for (int N = 1; N < depth_max; ++N) { // fills row N+1
        for (int k = 1; k <= depth_max; ++k) {
            BigInt v;
            if (k > N) v = 0;
            else if (k == N) v = 1;
            else {
                BigInt p_half = BigInt(1) << (1 << (N - 1));       // 2^{2^{N-1}}
                BigInt p_sub = BigInt(1) << (1 << (N - k - 1));    // 2^{2^{N-k-1}}
                v = 2 * p_half * t.values[static_cast<size_t>(N)][static_cast<size_t>(k)] +
                    (2 * p_sub - 1) * t.values[static_cast<size_t>(N - k)][static_cast<size_t>(k)] +
                    p_sub * (p_sub - 1);
            }
            t.values[static_cast<size_t>(N) + 1][static_cast<size_t>(k)] = v;
        }
    }
    return t;
}

/// Brute-force counterpart of the recurrence: per configuration, the maximal
/// number of disjoint k-edge paths that fit inside the modified clusters.
/// Each cluster is a path of `s` sites, packing floor(s / (k+1)) such paths;
/// the uniform offset between path length and cluster site count is 1.
inline BigInt disjoint_path_count(const ClusterHistogram& h, int k) {
    if (k < 1) throw validation_error("disjoint_path_count: k >= 1");
    BigInt total = 0;
    for (const auto& [s, c] : h.counts) total += BigInt(s / (k + 1)) * c;
    return total;
}

} // namespace quditlab
