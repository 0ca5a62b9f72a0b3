#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "quditlab/common.hpp"

namespace quditlab {

/// Per-site Hilbert-space dimensions. Site 0 is the leftmost digit in all
/// printed strings and the most significant index in dense layouts.
struct SiteDims {
    std::vector<int> dims;

    SiteDims() = default;
    explicit SiteDims(std::vector<int> d) : dims(std::move(d)) { validate(); }
    static SiteDims uniform(int sites, int d) {
        return SiteDims(std::vector<int>(static_cast<size_t>(sites), d));
    }

    void validate() const {
        if (dims.empty()) throw validation_error("SiteDims: need at least one site");
        for (int d : dims)
            if (d < 2) throw validation_error("SiteDims: every dimension must be >= 2");
    }

    int size() const { return static_cast<int>(dims.size()); }
    int operator[](int i) const { return dims[static_cast<size_t>(i)]; }

    /// Product of all dimensions; throws capacity_error beyond `cap`.
    long total(long cap) const {
        long t = 1;
        for (int d : dims) {
            if (t > cap / d)
                throw capacity_error("total dimension exceeds cap " + std::to_string(cap));
            t *= d;
        }
        return t;
    }

    /// Strides for the site-major (site 0 most significant) dense layout.
    std::vector<long> strides() const {
        std::vector<long> s(dims.size());
        long acc = 1;
        for (int i = size() - 1; i >= 0; --i) {
            s[static_cast<size_t>(i)] = acc;
            acc *= dims[static_cast<size_t>(i)];
        }
        return s;
    }

    bool operator==(const SiteDims& o) const { return dims == o.dims; }
};

/// A computational-basis label: one level digit per site.
struct BasisString {
    std::vector<uint8_t> digits;

    BasisString() = default;
    explicit BasisString(std::vector<uint8_t> d) : digits(std::move(d)) {}

    static BasisString zeros(int sites) {
        return BasisString(std::vector<uint8_t>(static_cast<size_t>(sites), 0));
    }

    int size() const { return static_cast<int>(digits.size()); }
    uint8_t operator[](int i) const { return digits[static_cast<size_t>(i)]; }
    uint8_t& operator[](int i) { return digits[static_cast<size_t>(i)]; }

    void validate(const SiteDims& dims) const {
        if (size() != dims.size())
            throw validation_error("BasisString: site count mismatch");
        for (int i = 0; i < size(); ++i)
            if (digits[static_cast<size_t>(i)] >= dims[i])
                throw validation_error("BasisString: digit exceeds site dimension at site " +
                                       std::to_string(i));
    }

    long index(const SiteDims& dims) const {
        auto st = dims.strides();
        long idx = 0;
        for (int i = 0; i < size(); ++i) idx += digits[static_cast<size_t>(i)] * st[static_cast<size_t>(i)];
        return idx;
    }

    static BasisString from_index(long idx, const SiteDims& dims) {
        auto st = dims.strides();
        BasisString b = zeros(dims.size());
        for (int i = 0; i < dims.size(); ++i) {
            b[i] = static_cast<uint8_t>((idx / st[static_cast<size_t>(i)]) % dims[i]);
        }
        return b;
    }

    /// MSB-left string; digits above 9 print as lowercase letters.
    std::string str() const {
        std::string s;
        s.reserve(digits.size());
        for (uint8_t d : digits) s.push_back(d < 10 ? char('0' + d) : char('a' + d - 10));
        return s;
    }

    static BasisString parse(const std::string& s) {
        BasisString b;
        b.digits.reserve(s.size());
        for (char c : s) {
            if (c >= '0' && c <= '9') b.digits.push_back(static_cast<uint8_t>(c - '0'));
            else if (c >= 'a' && c <= 'z') b.digits.push_back(static_cast<uint8_t>(c - 'a' + 10));
            else throw validation_error(std::string("BasisString: bad digit character '") + c + "'");
        }
        if (b.digits.empty()) throw validation_error("BasisString: empty string");
        return b;
    }

    bool operator==(const BasisString& o) const { return digits == o.digits; }
    bool operator<(const BasisString& o) const {
        return std::lexicographical_compare(digits.begin(), digits.end(),
                                            o.digits.begin(), o.digits.end());
    }
};

} // namespace quditlab
