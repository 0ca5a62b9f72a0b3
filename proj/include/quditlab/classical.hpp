#pragma once

#include <optional>

#include "quditlab/circuit.hpp"

namespace quditlab {

/// A circuit viewed as a permutation of the computational basis. Only
/// available when every gate maps basis states to basis states with phase +1
/// (flips, shifts, swaps and their controlled versions).
class BasisPermutation {
public:
    explicit BasisPermutation(Circuit c) : circuit_(std::move(c)) {}

    BasisString image(const BasisString& in) const {
        in.validate(circuit_.dims);
        BasisString s = in;
        for (const auto& g : circuit_.gates) apply_classical(g, circuit_.dims, s);
        return s;
    }

    /// Image plus the list of gates that changed the string on this input.
    BasisString image_tracking_fired(const BasisString& in, std::vector<int>& fired_gates) const {
        BasisString s = in;
        fired_gates.clear();
        for (size_t gi = 0; gi < circuit_.gates.size(); ++gi)
            if (apply_classical(circuit_.gates[gi], circuit_.dims, s))
                fired_gates.push_back(static_cast<int>(gi));
        return s;
    }

    const Circuit& circuit() const { return circuit_; }

private:
    Circuit circuit_;
};

/// Present iff the circuit is a sign-free basis permutation. An empty
/// circuit classifies as the identity permutation.
inline std::optional<BasisPermutation> classify_classical(const Circuit& c) {
    if (!c.is_classical()) return std::nullopt;
    return BasisPermutation(c);
}

} // namespace quditlab
