#pragma once

#include <set>

#include "quditlab/dense.hpp"

namespace quditlab {

inline StateVector run(const StateVector& state, const Circuit& circuit) {
    if (!(state.dims == circuit.dims))
        throw validation_error("run: state and circuit dimensions differ");
    StateVector s = state;
    for (const auto& g : circuit.gates) s = apply_gate(s, g);
    return s;
}

/// Gate index at which to insert an extra operation while running a circuit.
struct ErrorInjection {
    int position = 0;
    GateSpec error;

    ErrorInjection(int pos, GateSpec e) : position(pos), error(std::move(e)) {}

    void validate(const Circuit& c) const {
        if (position < 0 || position > static_cast<int>(c.gate_count()))
            throw validation_error("injection position outside circuit");
        validate_gate(error, c.dims);
    }
};

inline StateVector run_with_error(const StateVector& state, const Circuit& circuit,
                                  const ErrorInjection& injection) {
    if (!(state.dims == circuit.dims))
        throw validation_error("run_with_error: state and circuit dimensions differ");
    injection.validate(circuit);
    StateVector s = state;
    int idx = 0;
    for (const auto& g : circuit.gates) {
        if (idx == injection.position) s = apply_gate(s, injection.error);
        s = apply_gate(s, g);
        ++idx;
    }
    if (idx == injection.position) s = apply_gate(s, injection.error);
    return s;
}

struct DensityMatrix {
    SiteDims dims;
    Matrix mat;

    double trace_defect() const {
        cplx tr(0.0, 0.0);
        for (long i = 0; i < mat.n; ++i) tr += mat(i, i);
        return std::abs(tr - cplx(1.0, 0.0));
    }

    double hermiticity_defect() const { return mat.max_abs_diff(mat.adjoint()); }
};

inline DensityMatrix density_matrix(const StateVector& s) {
    long total = s.dims.total(caps::density());
    DensityMatrix rho;
    rho.dims = s.dims;
    rho.mat = Matrix(total);
    for (const auto& [bx, ax] : s.amplitudes)
        for (const auto& [by, ay] : s.amplitudes)
            rho.mat(bx.index(s.dims), by.index(s.dims)) = ax * std::conj(ay);
    return rho;
}

namespace detail {

inline std::vector<int> sorted_keep(const std::vector<int>& keep, int n_sites) {
    if (keep.empty()) throw validation_error("partial trace must keep at least one site");
    std::set<int> uniq(keep.begin(), keep.end());
    if (static_cast<int>(uniq.size()) != static_cast<int>(keep.size()))
        throw validation_error("partial trace: duplicate site in keep set");
    for (int s : uniq)
        if (s < 0 || s >= n_sites) throw validation_error("partial trace: site out of range");
    return {uniq.begin(), uniq.end()};
}

} // namespace detail

/// Traces out every site not in `keep`.
inline DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep) {
    auto ks = detail::sorted_keep(keep, rho.dims.size());
    std::vector<int> env;
    for (int i = 0; i < rho.dims.size(); ++i)
        if (!std::binary_search(ks.begin(), ks.end(), i)) env.push_back(i);

    std::vector<int> kdims, edims;
    for (int s : ks) kdims.push_back(rho.dims[s]);
    for (int s : env) edims.push_back(rho.dims[s]);
    SiteDims keep_dims{kdims};
    long kd = keep_dims.total(caps::density());
    long ed = 1;
    for (int d : edims) ed *= d;

    auto full_index = [&](long kidx, long eidx) {
        BasisString b = BasisString::zeros(rho.dims.size());
        long kq = kidx;
        for (int i = static_cast<int>(ks.size()) - 1; i >= 0; --i) {
            b[ks[static_cast<size_t>(i)]] = static_cast<uint8_t>(kq % kdims[static_cast<size_t>(i)]);
            kq /= kdims[static_cast<size_t>(i)];
        }
        long eq = eidx;
        for (int i = static_cast<int>(env.size()) - 1; i >= 0; --i) {
            b[env[static_cast<size_t>(i)]] = static_cast<uint8_t>(eq % edims[static_cast<size_t>(i)]);
            eq /= edims[static_cast<size_t>(i)];
        }
        return b.index(rho.dims);
    };

    DensityMatrix out;
    out.dims = keep_dims;
    out.mat = Matrix(kd);
    for (long r = 0; r < kd; ++r)
        for (long c = 0; c < kd; ++c) {
            cplx acc(0.0, 0.0);
            for (long e = 0; e < ed; ++e) acc += rho.mat(full_index(r, e), full_index(c, e));
            out.mat(r, c) = acc;
        }
    return out;
}

/// Reduced density matrix of a sparse pure state without building the full
/// rho: amplitudes are bucketed by the environment digits first.
inline DensityMatrix reduced_state(const StateVector& s, const std::vector<int>& keep) {
    auto ks = detail::sorted_keep(keep, s.dims.size());
    std::vector<int> env;
    for (int i = 0; i < s.dims.size(); ++i)
        if (!std::binary_search(ks.begin(), ks.end(), i)) env.push_back(i);

    std::vector<int> kdims;
    for (int site : ks) kdims.push_back(s.dims[site]);
    SiteDims keep_dims{kdims};
    long kd = keep_dims.total(caps::density());

    std::map<std::vector<uint8_t>, std::vector<std::pair<long, cplx>>> buckets;
    for (const auto& [b, a] : s.amplitudes) {
        std::vector<uint8_t> ekey;
        ekey.reserve(env.size());
        for (int site : env) ekey.push_back(b[site]);
        long kidx = 0;
        for (size_t i = 0; i < ks.size(); ++i) kidx = kidx * kdims[i] + b[ks[i]];
        buckets[std::move(ekey)].emplace_back(kidx, a);
    }

    DensityMatrix out;
    out.dims = keep_dims;
    out.mat = Matrix(kd);
    for (const auto& [ekey, terms] : buckets)
        for (const auto& [ri, ra] : terms)
            for (const auto& [ci, ca] : terms) out.mat(ri, ci) += ra * std::conj(ca);
    return out;
}

inline double purity(const DensityMatrix& rho) {
    double p = 0.0;
    for (long i = 0; i < rho.mat.n; ++i)
        for (long j = 0; j < rho.mat.n; ++j) p += std::real(rho.mat(i, j) * rho.mat(j, i));
    return p;
}

/// <psi| rho |psi> for a single-site state against a single-site density
/// matrix.
inline double state_overlap(const std::vector<cplx>& psi, const DensityMatrix& rho) {
    if (rho.dims.size() != 1 || static_cast<long>(psi.size()) != rho.mat.n)
        throw validation_error("state_overlap expects one site and matching dimension");
    cplx acc(0.0, 0.0);
    for (long i = 0; i < rho.mat.n; ++i)
        for (long j = 0; j < rho.mat.n; ++j)
            acc += std::conj(psi[static_cast<size_t>(i)]) * rho.mat(i, j) * psi[static_cast<size_t>(j)];
    return std::real(acc);
}

} // namespace quditlab
