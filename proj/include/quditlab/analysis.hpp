#pragma once

#include "quditlab/build.hpp"
#include "quditlab/sim.hpp"

namespace quditlab {

/// Per-site qubit-subspace input (alpha_j |0> + beta_j |1>), normalized.
struct AmplitudeProfile {
    std::vector<std::pair<cplx, cplx>> amps;

    AmplitudeProfile() = default;
    explicit AmplitudeProfile(std::vector<std::pair<cplx, cplx>> a) : amps(std::move(a)) {
        validate();
    }

    static AmplitudeProfile uniform(int n) {
        const double r = 1.0 / std::sqrt(2.0);
        return AmplitudeProfile(
            std::vector<std::pair<cplx, cplx>>(static_cast<size_t>(n), {cplx(r), cplx(r)}));
    }

    void validate() const {
        if (amps.empty()) throw validation_error("AmplitudeProfile: empty");
        for (const auto& [a, b] : amps)
            if (std::abs(std::norm(a) + std::norm(b) - 1.0) > 1e-12)
                throw validation_error("AmplitudeProfile: site amplitudes not normalized");
    }

    int size() const { return static_cast<int>(amps.size()); }
    cplx alpha(int j) const { return amps[static_cast<size_t>(j)].first; }
    cplx beta(int j) const { return amps[static_cast<size_t>(j)].second; }
};

/// P_j = prod_{k<j} |beta_k|^2, with P_0 = 1. Non-increasing in j.
struct PrefixProduct {
    std::vector<double> values;

    explicit PrefixProduct(const AmplitudeProfile& p) {
        values.resize(static_cast<size_t>(p.size()) + 1);
        values[0] = 1.0;
        for (int j = 0; j < p.size(); ++j)
            values[static_cast<size_t>(j) + 1] = values[static_cast<size_t>(j)] * std::norm(p.beta(j));
    }

    double operator[](int j) const { return values[static_cast<size_t>(j)]; }
};

/// Product input over qutrits for the excitation chain.
inline StateVector profile_input(const AmplitudeProfile& p) {
    SiteDims dims = SiteDims::uniform(p.size(), 3);
    std::map<BasisString, cplx> amps;
    amps.emplace(BasisString::zeros(p.size()), cplx(1.0, 0.0));
    std::map<BasisString, cplx> next;
    for (int site = 0; site < p.size(); ++site) {
        next.clear();
        for (const auto& [b, a] : amps) {
            BasisString b0 = b, b1 = b;
            b0[site] = 0;
            b1[site] = 1;
            if (std::abs(p.alpha(site)) > 0) next[b0] += a * p.alpha(site);
            if (std::abs(p.beta(site)) > 0) next[b1] += a * p.beta(site);
        }
        amps = next;
    }
    StateVector s;
    s.dims = dims;
    s.amplitudes = std::move(amps);
    s.prune_small();
    return s;
}

/// Output of the excitation-chain encoder on a product input, built directly
/// from its nested closed form: while the 1-prefix survives, each fired site
/// holds |2> (site 0 keeps |1>); the first alpha-branch site holds |0> and
/// frees everything after it.
inline StateVector closed_final_state(const AmplitudeProfile& profile) {
    int n = profile.size();
    if (n < 2) throw validation_error("closed_final_state: need n >= 2");
    SiteDims dims = SiteDims::uniform(n, 3);
    std::map<BasisString, cplx> amps;

    // branch where the first p sites took the beta branch (p = 0..n)
    for (int p = 0; p <= n; ++p) {
        cplx prefix_amp(1.0, 0.0);
        for (int j = 0; j < p; ++j) prefix_amp *= profile.beta(j);
        if (std::abs(prefix_amp) < kPruneThreshold) continue;

        BasisString head = BasisString::zeros(n);
        for (int j = 0; j < p; ++j) head[j] = (j == 0) ? 1 : 2;

        if (p == n) {
            amps[head] += prefix_amp;
            continue;
        }
        // site p takes alpha|0>, sites beyond p stay in their input states
        cplx amp_p = prefix_amp * profile.alpha(p);
        if (std::abs(amp_p) < kPruneThreshold) continue;
        int tail = n - p - 1;
        for (long mask = 0; mask < (1L << tail); ++mask) {
            BasisString b = head;
            cplx a = amp_p;
            for (int t = 0; t < tail; ++t) {
                int site = p + 1 + t;
                bool one = (mask >> t) & 1L;
                b[site] = one ? 1 : 0;
                a *= one ? profile.beta(site) : profile.alpha(site);
            }
            if (std::abs(a) >= kPruneThreshold) amps[b] += a;
        }
    }

    StateVector s;
    s.dims = dims;
    s.amplitudes = std::move(amps);
    s.prune_small();
    return s;
}

/// Closed-form purity of the partial trace over site j of the encoder output.
/// The boundary term for the last site uses alpha_{n} == 1; this convention
/// matches the numerical partial trace exactly.
inline double purity_prediction(int j, const AmplitudeProfile& profile) {
    int n = profile.size();
    if (j < 0 || j >= n) throw validation_error("purity_prediction: site out of range");
    PrefixProduct P(profile);
    double a2 = std::norm(profile.alpha(j));
    double b2 = std::norm(profile.beta(j));
    double Pj = P[j];
    double a_next4 = (j + 1 < n) ? std::norm(profile.alpha(j + 1)) * std::norm(profile.alpha(j + 1)) : 1.0;
    double bracket = Pj * Pj + (1.0 - Pj) * (1.0 - Pj);
    return a2 * a2 + b2 * b2 * bracket +
           2.0 * a2 * b2 * (a_next4 * Pj * Pj + (1.0 - Pj) * (1.0 - Pj));
}

enum class ErrorKind { Z0, Z1, Z2, X01, X12, X02 };

inline const char* error_kind_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::Z0: return "Z0";
        case ErrorKind::Z1: return "Z1";
        case ErrorKind::Z2: return "Z2";
        case ErrorKind::X01: return "X01";
        case ErrorKind::X12: return "X12";
        case ErrorKind::X02: return "X02";
    }
    return "?";
}

inline ErrorKind parse_error_kind(const std::string& s) {
    for (ErrorKind k : {ErrorKind::Z0, ErrorKind::Z1, ErrorKind::Z2, ErrorKind::X01,
                        ErrorKind::X12, ErrorKind::X02})
        if (s == error_kind_name(k)) return k;
    throw validation_error("unknown error kind '" + s + "'");
}

inline GateSpec error_gate(ErrorKind kind, int site) {
    switch (kind) {
        case ErrorKind::Z0: return phase(site, 0);
        case ErrorKind::Z1: return phase(site, 1);
        case ErrorKind::Z2: return phase(site, 2);
        case ErrorKind::X01: return flip(site, 0, 1);
        case ErrorKind::X12: return flip(site, 1, 2);
        case ErrorKind::X02: return flip(site, 0, 2);
    }
    throw validation_error("bad error kind");
}

/// A mid-circuit error pushed through the excitation-chain decoder: how the
/// injected operator looks at the circuit boundary.
struct PropagatedError {
    ErrorKind kind;
    int site = 0;
    int n = 0;
    std::string description;
    Matrix matrix; // over the n-qutrit control register
};

namespace detail {

inline Matrix projector_ones_prefix(int upto_inclusive, int n) {
    // I - 2 (|1..1><1..1| on sites 0..upto) x I
    SiteDims dims = SiteDims::uniform(n, 3);
    long D = dims.total(caps::dense_unitary());
    Matrix m = Matrix::identity(D);
    for (long idx = 0; idx < D; ++idx) {
        BasisString b = BasisString::from_index(idx, dims);
        bool all_ones = true;
        for (int j = 0; j <= upto_inclusive; ++j)
            if (b[j] != 1) { all_ones = false; break; }
        if (all_ones) m(idx, idx) = -1.0;
    }
    return m;
}

inline Matrix conditional_shift_after_flip(int k, int n) {
    // X01 on site k, then X+ on site k conditioned on sites < k all |1>
    // (meaningful for k >= 1; the first site propagates differently).
    SiteDims dims = SiteDims::uniform(n, 3);
    long D = dims.total(caps::dense_unitary());
    Matrix m(D);
    for (long col = 0; col < D; ++col) {
        BasisString b = BasisString::from_index(col, dims);
        if (b[k] == 0) b[k] = 1;
        else if (b[k] == 1) b[k] = 0;
        bool prefix_ones = true;
        for (int j = 0; j < k; ++j)
            if (b[j] != 1) { prefix_ones = false; break; }
        if (prefix_ones) b[k] = static_cast<uint8_t>((b[k] + 1) % 3);
        m(b.index(dims), col) = 1.0;
    }
    return m;
}

inline Matrix first_site_flip01(int n) {
    // Only the first chain gate sees an X01 on site 0: the conjugation is a
    // (0,1) flip there plus a (1,2) flip on site 1 whenever site 0 sits in
    // the qubit subspace.
    SiteDims dims = SiteDims::uniform(n, 3);
    long D = dims.total(caps::dense_unitary());
    Matrix m(D);
    for (long col = 0; col < D; ++col) {
        BasisString b = BasisString::from_index(col, dims);
        bool qubit0 = b[0] != 2;
        if (b[0] == 0) b[0] = 1;
        else if (b[0] == 1) b[0] = 0;
        if (n > 1 && qubit0) {
            if (b[1] == 1) b[1] = 2;
            else if (b[1] == 2) b[1] = 1;
        }
        m(b.index(dims), col) = 1.0;
    }
    return m;
}

inline Matrix local_flip_with_successor(int k, int n) {
    // X12 on site k, then X12 on site k+1 conditioned on site k in {1,2}.
    SiteDims dims = SiteDims::uniform(n, 3);
    long D = dims.total(caps::dense_unitary());
    Matrix m(D);
    for (long col = 0; col < D; ++col) {
        BasisString b = BasisString::from_index(col, dims);
        uint8_t v = b[k];
        if (v == 1) b[k] = 2;
        else if (v == 2) b[k] = 1;
        if (k + 1 < n && (v == 1 || v == 2)) {
            if (b[k + 1] == 1) b[k + 1] = 2;
            else if (b[k + 1] == 2) b[k + 1] = 1;
        }
        m(b.index(dims), col) = 1.0;
    }
    return m;
}

inline Matrix local_error(ErrorKind kind, int k, int n) {
    SiteDims dims = SiteDims::uniform(n, 3);
    return gate_unitary(error_gate(kind, k), dims);
}

} // namespace detail

/// Closed propagated forms for the excitation chain (matrices over the
/// control register, valid on qubit-subspace inputs):
///   Z0 stays local; Z2 becomes a phase on the all-ones prefix through site
///   k (local for k = 0); Z1 = -Z0 Z2; X12 touches only site k and its
///   successor; X01 adds a cyclic shift on site k conditioned on the
///   preceding prefix (for k = 0, where only one gate sees the error, it
///   reduces to a flip pair on sites 0 and 1); X02 = X01 X12 X01.
inline PropagatedError propagate_error(ErrorKind kind, int k, int n) {
    if (k < 0 || k >= n) throw validation_error("propagate_error: site out of range");
    PropagatedError out;
    out.kind = kind;
    out.site = k;
    out.n = n;
    switch (kind) {
        case ErrorKind::Z0:
            out.description = "Z0 on site " + std::to_string(k) + " (commutes, stays local)";
            out.matrix = detail::local_error(ErrorKind::Z0, k, n);
            break;
        case ErrorKind::Z2:
            if (k == 0) {
                out.description = "Z2 on site 0 (no level-2 support upstream, stays local)";
                out.matrix = detail::local_error(ErrorKind::Z2, 0, n);
            } else {
                out.description = "phase flip on inputs with sites 0.." + std::to_string(k) +
                                  " all |1>";
                out.matrix = detail::projector_ones_prefix(k, n);
            }
            break;
        case ErrorKind::Z1: {
            out.description = "-(Z0 form)(Z2 form) on site " + std::to_string(k);
            PropagatedError z0 = propagate_error(ErrorKind::Z0, k, n);
            PropagatedError z2 = propagate_error(ErrorKind::Z2, k, n);
            out.matrix = (z0.matrix * z2.matrix).scaled(cplx(-1.0, 0.0));
            break;
        }
        case ErrorKind::X12:
            out.description = "flip (1,2) on site " + std::to_string(k) +
                              (k + 1 < n ? " plus a (1,2) flip on its successor when site " +
                                               std::to_string(k) + " is excited"
                                         : " (last site, stays local)");
            out.matrix = detail::local_flip_with_successor(k, n);
            break;
        case ErrorKind::X01:
            if (k == 0) {
                out.description = "flip (0,1) on site 0 plus a (1,2) flip on site 1";
                out.matrix = detail::first_site_flip01(n);
            } else {
                out.description = "flip (0,1) on site " + std::to_string(k) +
                                  " plus a cyclic shift conditioned on the preceding all-ones prefix";
                out.matrix = detail::conditional_shift_after_flip(k, n);
            }
            break;
        case ErrorKind::X02: {
            out.description = "X01 X12 X01 composite on site " + std::to_string(k);
            PropagatedError x01 = propagate_error(ErrorKind::X01, k, n);
            PropagatedError x12 = propagate_error(ErrorKind::X12, k, n);
            out.matrix = x01.matrix * x12.matrix * x01.matrix;
            break;
        }
    }
    return out;
}

/// Numerical conjugation of the injected error by the encoder:
/// U_enc^dagger E U_enc, the operator the decoder hands back to the inputs.
inline Matrix conjugated_error(ErrorKind kind, int k, int n) {
    BuildReport enc = build_encoder(Topology::TypeALinear, n);
    Matrix u = circuit_unitary(enc.circuit);
    Matrix e = detail::local_error(kind, k, n);
    return u.adjoint() * e * u;
}

/// Max column difference between two operators over qubit-subspace inputs.
inline double qubit_subspace_column_diff(const Matrix& a, const Matrix& b, int n) {
    SiteDims dims = SiteDims::uniform(n, 3);
    double m = 0.0;
    for (long cfg = 0; cfg < (1L << n); ++cfg) {
        BasisString in = BasisString::zeros(n);
        for (int i = 0; i < n; ++i) in[i] = static_cast<uint8_t>((cfg >> i) & 1L);
        long col = in.index(dims);
        for (long r = 0; r < a.n; ++r) m = std::max(m, std::abs(a(r, col) - b(r, col)));
    }
    return m;
}

/// Input for dispersion runs: profile on the control sites, an X-eigenstate
/// (|0>+|1>)/sqrt 2 on the target so the central gate never entangles it,
/// |0> on any other ancilla. With no error the circuit then returns every
/// control to its input exactly, making D = 1 the baseline.
inline StateVector dispersion_input(const Circuit& full, const AmplitudeProfile& profile) {
    if (static_cast<int>(full.meta.input_sites.size()) != profile.size())
        throw validation_error("dispersion_input: profile size does not match circuit inputs");
    std::map<BasisString, cplx> amps;
    amps.emplace(BasisString::zeros(full.site_count()), cplx(1.0, 0.0));
    std::map<BasisString, cplx> next;
    for (int idx = 0; idx < profile.size(); ++idx) {
        int site = full.meta.input_sites[static_cast<size_t>(idx)];
        next.clear();
        for (const auto& [b, a] : amps) {
            BasisString b0 = b, b1 = b;
            b0[site] = 0;
            b1[site] = 1;
            if (std::abs(profile.alpha(idx)) > 0) next[b0] += a * profile.alpha(idx);
            if (std::abs(profile.beta(idx)) > 0) next[b1] += a * profile.beta(idx);
        }
        amps = next;
    }
    if (full.meta.target_site >= 0) {
        const double r = 1.0 / std::sqrt(2.0);
        next.clear();
        for (const auto& [b, a] : amps) {
            BasisString b0 = b, b1 = b;
            b0[full.meta.target_site] = 0;
            b1[full.meta.target_site] = 1;
            next[b0] += a * r;
            next[b1] += a * r;
        }
        amps = next;
    }
    StateVector s;
    s.dims = full.dims;
    s.amplitudes = std::move(amps);
    s.prune_small();
    return s;
}

/// D(rho_f, i): overlap of site i's reduced output state with its ideal
/// input state, after running the full circuit with the injected error.
inline double dispersion(const Circuit& full, const ErrorInjection& injection, int i,
                         const AmplitudeProfile& profile) {
    if (i < 0 || i >= profile.size()) throw validation_error("dispersion: site out of range");
    StateVector in = dispersion_input(full, profile);
    StateVector out = run_with_error(in, full, injection);
    int site = full.meta.input_sites.empty() ? i : full.meta.input_sites[static_cast<size_t>(i)];
    DensityMatrix rho = reduced_state(out, {site});
    std::vector<cplx> psi(static_cast<size_t>(rho.mat.n), cplx(0.0, 0.0));
    psi[0] = profile.alpha(i);
    psi[1] = profile.beta(i);
    return state_overlap(psi, rho);
}

/// The stated closed forms: 1 - 4 P_i |a_i|^2 |b_i|^2 for Z2 and
/// 1 - P_i (1 - |a_i|^2 |b_i|^2) for X01.
inline double dispersion_prediction(ErrorKind kind, int i, const AmplitudeProfile& profile) {
    if (i < 0 || i >= profile.size())
        throw validation_error("dispersion_prediction: site out of range");
    PrefixProduct P(profile);
    double a2 = std::norm(profile.alpha(i));
    double b2 = std::norm(profile.beta(i));
    if (kind == ErrorKind::Z2) return 1.0 - 4.0 * P[i] * a2 * b2;
    if (kind == ErrorKind::X01) return 1.0 - P[i] * (1.0 - a2 * b2);
    throw validation_error("dispersion_prediction: closed forms exist for Z2 and X01 only");
}

} // namespace quditlab
