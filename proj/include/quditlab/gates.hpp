#pragma once

#include <cmath>
#include <memory>
#include <utility>
#include <variant>
#include <vector>

#include "quditlab/basis.hpp"

namespace quditlab {

class GateSpec;

/// X^{(ab)}: exchanges levels a and b on one site.
struct SubspaceFlip {
    int site;
    int a, b;
};

/// Z^{(a)}: multiplies level a by -1.
struct SubspacePhase {
    int site;
    int level;
};

/// X^{(+)} / X^{(-)}: |j> -> |j +- 1 mod d>.
struct CyclicShift {
    int site;
    int step; // +1 or -1
};

/// H^{(ab)}: Hadamard on the {a,b} subspace, identity elsewhere.
/// Columns follow (|a>+|b>)/sqrt 2 and (|a>-|b>)/sqrt 2.
struct SubspaceHadamard {
    int site;
    int a, b;
};

/// Two-site subspace swap: exchanges |a>_1|d>_2 <-> |b>_1|c>_2, fixes
/// |a>_1|c>_2 and |b>_1|d>_2 and everything outside both subspaces.
struct SubspaceSwap {
    int site1;
    int a, b;
    int site2;
    int c, d;
};

/// Applies `inner` iff every (site, level) control matches.
struct Controlled {
    std::vector<std::pair<int, int>> controls;
    std::shared_ptr<const GateSpec> inner;
};

class GateSpec {
public:
    using Op = std::variant<SubspaceFlip, SubspacePhase, CyclicShift, SubspaceHadamard,
                            SubspaceSwap, Controlled>;

    GateSpec(Op op) : op_(std::move(op)) {}

    const Op& op() const { return op_; }

    template <typename T>
    const T* get_if() const { return std::get_if<T>(&op_); }

private:
    Op op_;
};

inline GateSpec flip(int site, int a, int b) { return GateSpec(SubspaceFlip{site, a, b}); }
inline GateSpec phase(int site, int level) { return GateSpec(SubspacePhase{site, level}); }
inline GateSpec shift(int site, int step) { return GateSpec(CyclicShift{site, step}); }
inline GateSpec hadamard(int site, int a, int b) { return GateSpec(SubspaceHadamard{site, a, b}); }
inline GateSpec swap_gate(int s1, int a, int b, int s2, int c, int d) {
    return GateSpec(SubspaceSwap{s1, a, b, s2, c, d});
}
inline GateSpec controlled(std::vector<std::pair<int, int>> controls, GateSpec inner) {
    return GateSpec(Controlled{std::move(controls), std::make_shared<GateSpec>(std::move(inner))});
}

inline void collect_sites(const GateSpec& g, std::vector<int>& out) {
    std::visit(
        [&](const auto& op) {
            using T = std::decay_t<decltype(op)>;
            if constexpr (std::is_same_v<T, SubspaceSwap>) {
                out.push_back(op.site1);
                out.push_back(op.site2);
            } else if constexpr (std::is_same_v<T, Controlled>) {
                for (const auto& c : op.controls) out.push_back(c.first);
                collect_sites(*op.inner, out);
            } else {
                out.push_back(op.site);
            }
        },
        g.op());
}

inline std::vector<int> involved_sites(const GateSpec& g) {
    std::vector<int> s;
    collect_sites(g, s);
    return s;
}

inline void validate_gate(const GateSpec& g, const SiteDims& dims) {
    auto check_site = [&](int s) {
        if (s < 0 || s >= dims.size())
            throw validation_error("gate references site " + std::to_string(s) +
                                   " outside the register");
    };
    auto check_level = [&](int s, int l) {
        check_site(s);
        if (l < 0 || l >= dims[s])
            throw validation_error("gate references level " + std::to_string(l) +
                                   " beyond dimension of site " + std::to_string(s));
    };
    std::visit(
        [&](const auto& op) {
            using T = std::decay_t<decltype(op)>;
            if constexpr (std::is_same_v<T, SubspaceFlip> || std::is_same_v<T, SubspaceHadamard>) {
                check_level(op.site, op.a);
                check_level(op.site, op.b);
                if (op.a == op.b) throw validation_error("subspace gate needs two distinct levels");
            } else if constexpr (std::is_same_v<T, SubspacePhase>) {
                check_level(op.site, op.level);
            } else if constexpr (std::is_same_v<T, CyclicShift>) {
                check_site(op.site);
                if (op.step != 1 && op.step != -1)
                    throw validation_error("cyclic shift step must be +1 or -1");
            } else if constexpr (std::is_same_v<T, SubspaceSwap>) {
                check_level(op.site1, op.a);
                check_level(op.site1, op.b);
                check_level(op.site2, op.c);
                check_level(op.site2, op.d);
                if (op.site1 == op.site2) throw validation_error("swap sites must be distinct");
                if (op.a == op.b || op.c == op.d)
                    throw validation_error("swap needs two distinct levels per site");
            } else if constexpr (std::is_same_v<T, Controlled>) {
                if (op.controls.empty())
                    throw validation_error("controlled gate needs at least one control");
                for (const auto& [s, l] : op.controls) check_level(s, l);
                validate_gate(*op.inner, dims);
                auto inner_sites = involved_sites(*op.inner);
                for (const auto& [s, l] : op.controls)
                    for (int t : inner_sites)
                        if (s == t)
                            throw validation_error("control site coincides with target site " +
                                                   std::to_string(s));
            }
        },
        g.op());
}

inline GateSpec inverse(const GateSpec& g) {
    return std::visit(
        [&](const auto& op) -> GateSpec {
            using T = std::decay_t<decltype(op)>;
            if constexpr (std::is_same_v<T, CyclicShift>) {
                return shift(op.site, -op.step);
            } else if constexpr (std::is_same_v<T, Controlled>) {
                Controlled inv{op.controls, std::make_shared<GateSpec>(inverse(*op.inner))};
                return GateSpec(std::move(inv));
            } else {
                return GateSpec(op); // flips, phases, Hadamards and swaps are involutions
            }
        },
        g.op());
}

/// True when the gate permutes computational-basis states with phase +1.
inline bool is_classical(const GateSpec& g) {
    return std::visit(
        [&](const auto& op) {
            using T = std::decay_t<decltype(op)>;
            if constexpr (std::is_same_v<T, SubspaceFlip> || std::is_same_v<T, CyclicShift> ||
                          std::is_same_v<T, SubspaceSwap>)
                return true;
            else if constexpr (std::is_same_v<T, Controlled>)
                return is_classical(*op.inner);
            else
                return false;
        },
        g.op());
}

/// One output term of a gate acting on a basis state.
struct BasisTerm {
    BasisString basis;
    cplx amp;
};

/// Expands gate * |basis>. Classical gates yield one +1 term; a phase yields
/// one signed term; a Hadamard yields up to two.
inline void apply_to_basis(const GateSpec& g, const SiteDims& dims, const BasisString& in,
                           std::vector<BasisTerm>& out) {
    std::visit(
        [&](const auto& op) {
            using T = std::decay_t<decltype(op)>;
            if constexpr (std::is_same_v<T, SubspaceFlip>) {
                BasisString b = in;
                if (b[op.site] == op.a) b[op.site] = static_cast<uint8_t>(op.b);
                else if (b[op.site] == op.b) b[op.site] = static_cast<uint8_t>(op.a);
                out.push_back({std::move(b), cplx(1.0, 0.0)});
            } else if constexpr (std::is_same_v<T, SubspacePhase>) {
                out.push_back({in, in[op.site] == op.level ? cplx(-1.0, 0.0) : cplx(1.0, 0.0)});
            } else if constexpr (std::is_same_v<T, CyclicShift>) {
                BasisString b = in;
                int d = dims[op.site];
                b[op.site] = static_cast<uint8_t>(((b[op.site] + op.step) % d + d) % d);
                out.push_back({std::move(b), cplx(1.0, 0.0)});
            } else if constexpr (std::is_same_v<T, SubspaceHadamard>) {
                const double r = 1.0 / std::sqrt(2.0);
                int v = in[op.site];
                if (v == op.a) {
                    BasisString b0 = in, b1 = in;
                    b1[op.site] = static_cast<uint8_t>(op.b);
                    out.push_back({std::move(b0), cplx(r, 0.0)});
                    out.push_back({std::move(b1), cplx(r, 0.0)});
                } else if (v == op.b) {
                    BasisString b0 = in, b1 = in;
                    b0[op.site] = static_cast<uint8_t>(op.a);
                    out.push_back({std::move(b0), cplx(r, 0.0)});
                    out.push_back({std::move(b1), cplx(-r, 0.0)});
                } else {
                    out.push_back({in, cplx(1.0, 0.0)});
                }
            } else if constexpr (std::is_same_v<T, SubspaceSwap>) {
                BasisString b = in;
                int v1 = b[op.site1], v2 = b[op.site2];
                if (v1 == op.a && v2 == op.d) {
                    b[op.site1] = static_cast<uint8_t>(op.b);
                    b[op.site2] = static_cast<uint8_t>(op.c);
                } else if (v1 == op.b && v2 == op.c) {
                    b[op.site1] = static_cast<uint8_t>(op.a);
                    b[op.site2] = static_cast<uint8_t>(op.d);
                }
                out.push_back({std::move(b), cplx(1.0, 0.0)});
            } else if constexpr (std::is_same_v<T, Controlled>) {
                for (const auto& [s, l] : op.controls) {
                    if (in[s] != l) {
                        out.push_back({in, cplx(1.0, 0.0)});
                        return;
                    }
                }
                apply_to_basis(*op.inner, dims, in, out);
            }
        },
        g.op());
}

/// In-place digit transform for classical gates. Returns true when the gate
/// changed the string (the gate "fired").
inline bool apply_classical(const GateSpec& g, const SiteDims& dims, BasisString& s) {
    return std::visit(
        [&](const auto& op) -> bool {
            using T = std::decay_t<decltype(op)>;
            if constexpr (std::is_same_v<T, SubspaceFlip>) {
                if (s[op.site] == op.a) { s[op.site] = static_cast<uint8_t>(op.b); return true; }
                if (s[op.site] == op.b) { s[op.site] = static_cast<uint8_t>(op.a); return true; }
                return false;
            } else if constexpr (std::is_same_v<T, CyclicShift>) {
                int d = dims[op.site];
                s[op.site] = static_cast<uint8_t>(((s[op.site] + op.step) % d + d) % d);
                return true;
            } else if constexpr (std::is_same_v<T, SubspaceSwap>) {
                int v1 = s[op.site1], v2 = s[op.site2];
                if (v1 == op.a && v2 == op.d) {
                    s[op.site1] = static_cast<uint8_t>(op.b);
                    s[op.site2] = static_cast<uint8_t>(op.c);
                    return true;
                }
                if (v1 == op.b && v2 == op.c) {
                    s[op.site1] = static_cast<uint8_t>(op.a);
                    s[op.site2] = static_cast<uint8_t>(op.d);
                    return true;
                }
                return false;
            } else if constexpr (std::is_same_v<T, Controlled>) {
                for (const auto& [site, level] : op.controls)
                    if (s[site] != level) return false;
                return apply_classical(*op.inner, dims, s);
            } else {
                throw validation_error("apply_classical on a non-classical gate");
            }
        },
        g.op());
}

} // namespace quditlab
