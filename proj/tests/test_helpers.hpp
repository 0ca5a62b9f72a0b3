#pragma once

#include <random>

#include "quditlab/quditlab.hpp"

namespace test_helpers {

using namespace quditlab;

inline GateSpec random_gate(const SiteDims& dims, std::mt19937_64& rng, bool classical_only) {
    auto site = [&]() { return static_cast<int>(rng() % static_cast<uint64_t>(dims.size())); };
    auto two_levels = [&](int s, int& a, int& b) {
        int d = dims[s];
        a = static_cast<int>(rng() % static_cast<uint64_t>(d));
        do { b = static_cast<int>(rng() % static_cast<uint64_t>(d)); } while (b == a);
    };
    int kinds = classical_only ? 4 : 6;
    switch (rng() % static_cast<uint64_t>(kinds)) {
        case 0: {
            int s = site(), a, b;
            two_levels(s, a, b);
            return flip(s, a, b);
        }
        case 1: {
            int s = site();
            return shift(s, rng() % 2 ? +1 : -1);
        }
        case 2: {
            if (dims.size() < 2) {
                int s = site(), a, b;
                two_levels(s, a, b);
                return flip(s, a, b);
            }
            int s1 = site(), s2;
            do { s2 = site(); } while (s2 == s1);
            int a, b, c, d;
            two_levels(s1, a, b);
            two_levels(s2, c, d);
            return swap_gate(s1, a, b, s2, c, d);
        }
        case 3: {
            if (dims.size() < 2) {
                int s = site(), a, b;
                two_levels(s, a, b);
                return flip(s, a, b);
            }
            int tgt = site(), ctl;
            do { ctl = site(); } while (ctl == tgt);
            int lvl = static_cast<int>(rng() % static_cast<uint64_t>(dims[ctl]));
            int a, b;
            two_levels(tgt, a, b);
            return controlled({{ctl, lvl}}, flip(tgt, a, b));
        }
        case 4: {
            int s = site();
            return phase(s, static_cast<int>(rng() % static_cast<uint64_t>(dims[s])));
        }
        default: {
            int s = site(), a, b;
            two_levels(s, a, b);
            return hadamard(s, a, b);
        }
    }
}

inline StateVector random_state(const SiteDims& dims, std::mt19937_64& rng, int support) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::map<BasisString, cplx> amps;
    long total = 1;
    for (int d : dims.dims) total *= d;
    for (int i = 0; i < support; ++i) {
        long idx = static_cast<long>(rng() % static_cast<uint64_t>(total));
        amps[BasisString::from_index(idx, dims)] = cplx(gauss(rng), gauss(rng));
    }
    return StateVector::normalized(dims, std::move(amps));
}

inline AmplitudeProfile random_profile(int n, std::mt19937_64& rng, double beta_floor = 0.0) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<std::pair<cplx, cplx>> amps;
    for (int i = 0; i < n; ++i) {
        cplx a(gauss(rng), gauss(rng));
        cplx b(gauss(rng), gauss(rng));
        if (std::abs(b) < beta_floor) b += cplx(beta_floor, 0.0);
        double norm = std::sqrt(std::norm(a) + std::norm(b));
        amps.emplace_back(a / norm, b / norm);
    }
    return AmplitudeProfile(std::move(amps));
}

/// Eigenvalues of a Hermitian matrix by cyclic Jacobi rotations; plenty for
/// the small density matrices the tests touch.
inline std::vector<double> hermitian_eigenvalues(Matrix m) {
    const long n = m.n;
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (long p = 0; p < n; ++p)
            for (long q = p + 1; q < n; ++q) off += std::norm(m(p, q));
        if (off < 1e-26) break;
        for (long p = 0; p < n; ++p)
            for (long q = p + 1; q < n; ++q) {
                cplx apq = m(p, q);
                if (std::abs(apq) < 1e-18) continue;
                // phase out the off-diagonal element, then rotate
                double app = std::real(m(p, p));
                double aqq = std::real(m(q, q));
                cplx phase = apq / std::abs(apq);
                double theta = 0.5 * std::atan2(2.0 * std::abs(apq), aqq - app);
                double c = std::cos(theta), s = std::sin(theta);
                cplx sp = s * phase;
                for (long k = 0; k < n; ++k) {
                    cplx mkp = m(k, p), mkq = m(k, q);
                    m(k, p) = c * mkp - std::conj(sp) * mkq;
                    m(k, q) = sp * mkp + c * mkq;
                }
                for (long k = 0; k < n; ++k) {
                    cplx mpk = m(p, k), mqk = m(q, k);
                    m(p, k) = c * mpk - sp * mqk;
                    m(q, k) = std::conj(sp) * mpk + c * mqk;
                }
            }
    }
    std::vector<double> ev;
    for (long i = 0; i < n; ++i) ev.push_back(std::real(m(i, i)));
    std::sort(ev.begin(), ev.end());
    return ev;
}

/// Reference multi-controlled action on a basis state: target flipped by
/// target_op iff every control site is at |1>; ancillas untouched.
inline BasisString reference_mct_image(const SiteDims& dims, const std::vector<int>& control_sites,
                                       int target_site, const GateSpec& target_op,
                                       const BasisString& in) {
    BasisString out = in;
    for (int c : control_sites)
        if (in[c] != 1) return out;
    // move target_op (defined on site 0) onto the target site
    std::visit(
        [&](const auto& op) {
            using T = std::decay_t<decltype(op)>;
            if constexpr (std::is_same_v<T, SubspaceFlip>) {
                if (out[target_site] == op.a) out[target_site] = static_cast<uint8_t>(op.b);
                else if (out[target_site] == op.b) out[target_site] = static_cast<uint8_t>(op.a);
            } else if constexpr (std::is_same_v<T, CyclicShift>) {
                int d = dims[target_site];
                out[target_site] = static_cast<uint8_t>(((out[target_site] + op.step) % d + d) % d);
            } else {
                throw validation_error("reference_mct_image: unsupported target op in tests");
            }
        },
        target_op.op());
    return out;
}

} // namespace test_helpers
