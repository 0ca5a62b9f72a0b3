#pragma once

#include <cmath>
#include <map>

#include "quditlab/circuit.hpp"

namespace quditlab {

/// Sparse pure state: ordered map from basis label to amplitude. Entries with
/// |amp| below the prune threshold are dropped so drift never densifies the
/// map. Map ordering keeps every traversal deterministic.
struct StateVector {
    SiteDims dims;
    std::map<BasisString, cplx> amplitudes;
    double prune = kPruneThreshold;

    StateVector() = default;

    static StateVector basis_state(const SiteDims& dims, const BasisString& b) {
        b.validate(dims);
        StateVector s;
        s.dims = dims;
        s.amplitudes.emplace(b, cplx(1.0, 0.0));
        return s;
    }

    /// Even superposition of |0> and |1> on each listed site, |0> elsewhere.
    static StateVector uniform_plus(const SiteDims& dims, const std::vector<int>& plus_sites) {
        StateVector s;
        s.dims = dims;
        s.amplitudes.emplace(BasisString::zeros(dims.size()), cplx(1.0, 0.0));
        const double r = 1.0 / std::sqrt(2.0);
        for (int site : plus_sites) {
            if (site < 0 || site >= dims.size())
                throw validation_error("uniform_plus: site out of range");
            std::map<BasisString, cplx> next;
            for (const auto& [b, a] : s.amplitudes) {
                BasisString b0 = b, b1 = b;
                b0[site] = 0;
                b1[site] = 1;
                next[b0] += a * r;
                next[b1] += a * r;
            }
            s.amplitudes = std::move(next);
        }
        return s;
    }

    static StateVector normalized(SiteDims dims, std::map<BasisString, cplx> amps,
                                  double prune_threshold = kPruneThreshold) {
        StateVector s;
        s.dims = std::move(dims);
        s.amplitudes = std::move(amps);
        s.prune = prune_threshold;
        for (const auto& [b, a] : s.amplitudes) b.validate(s.dims);
        double n = std::sqrt(s.norm_sq());
        if (n < 1e-14) throw validation_error("StateVector: cannot normalize zero state");
        for (auto& [b, a] : s.amplitudes) a /= n;
        s.prune_small();
        return s;
    }

    double norm_sq() const {
        double n = 0.0;
        for (const auto& [b, a] : amplitudes) n += std::norm(a);
        return n;
    }

    void prune_small() {
        for (auto it = amplitudes.begin(); it != amplitudes.end();) {
            if (std::abs(it->second) < prune) it = amplitudes.erase(it);
            else ++it;
        }
    }

    cplx amplitude(const BasisString& b) const {
        auto it = amplitudes.find(b);
        return it == amplitudes.end() ? cplx(0.0, 0.0) : it->second;
    }

    size_t support_size() const { return amplitudes.size(); }
};

inline cplx inner_product(const StateVector& x, const StateVector& y) {
    if (!(x.dims == y.dims)) throw validation_error("inner_product: dimension mismatch");
    // iterate over the smaller support
    const StateVector& small = x.support_size() <= y.support_size() ? x : y;
    const StateVector& large = x.support_size() <= y.support_size() ? y : x;
    bool conj_small = &small == &x;
    cplx acc(0.0, 0.0);
    for (const auto& [b, a] : small.amplitudes) {
        cplx other = large.amplitude(b);
        acc += conj_small ? std::conj(a) * other : std::conj(other) * a;
    }
    return acc;
}

/// Sparse gate application; never expands to the dense product space.
inline StateVector apply_gate(const StateVector& state, const GateSpec& gate) {
    validate_gate(gate, state.dims);
    StateVector out;
    out.dims = state.dims;
    out.prune = state.prune;
    std::vector<BasisTerm> terms;
    for (const auto& [b, a] : state.amplitudes) {
        terms.clear();
        apply_to_basis(gate, state.dims, b, terms);
        for (auto& t : terms) out.amplitudes[t.basis] += a * t.amp;
    }
    out.prune_small();
    return out;
}

} // namespace quditlab
