#pragma once

#include <vector>

#include "quditlab/state.hpp"

namespace quditlab {

/// Minimal dense complex matrix, row-major. Big enough for the desk-scale
/// unitaries and density matrices this library deals in.
struct Matrix {
    long n = 0;
    std::vector<cplx> a;

    Matrix() = default;
    explicit Matrix(long size) : n(size), a(static_cast<size_t>(size) * static_cast<size_t>(size)) {}

    static Matrix identity(long size) {
        Matrix m(size);
        for (long i = 0; i < size; ++i) m(i, i) = 1.0;
        return m;
    }

    cplx& operator()(long r, long c) { return a[static_cast<size_t>(r) * static_cast<size_t>(n) + static_cast<size_t>(c)]; }
    const cplx& operator()(long r, long c) const { return a[static_cast<size_t>(r) * static_cast<size_t>(n) + static_cast<size_t>(c)]; }

    Matrix operator*(const Matrix& o) const {
        if (n != o.n) throw validation_error("Matrix multiply: size mismatch");
        Matrix r(n);
        for (long i = 0; i < n; ++i)
            for (long k = 0; k < n; ++k) {
                cplx v = (*this)(i, k);
                if (v == cplx(0.0, 0.0)) continue;
                for (long j = 0; j < n; ++j) r(i, j) += v * o(k, j);
            }
        return r;
    }

    std::vector<cplx> operator*(const std::vector<cplx>& v) const {
        if (static_cast<long>(v.size()) != n) throw validation_error("Matrix apply: size mismatch");
        std::vector<cplx> r(static_cast<size_t>(n));
        for (long i = 0; i < n; ++i) {
            cplx acc(0.0, 0.0);
            for (long j = 0; j < n; ++j) acc += (*this)(i, j) * v[static_cast<size_t>(j)];
            r[static_cast<size_t>(i)] = acc;
        }
        return r;
    }

    Matrix adjoint() const {
        Matrix r(n);
        for (long i = 0; i < n; ++i)
            for (long j = 0; j < n; ++j) r(j, i) = std::conj((*this)(i, j));
        return r;
    }

    Matrix scaled(cplx s) const {
        Matrix r = *this;
        for (auto& x : r.a) x *= s;
        return r;
    }

    double max_abs_diff(const Matrix& o) const {
        if (n != o.n) throw validation_error("Matrix compare: size mismatch");
        double m = 0.0;
        for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - o.a[i]));
        return m;
    }

    double unitarity_defect() const {
        Matrix p = adjoint() * (*this);
        return p.max_abs_diff(identity(n));
    }
};

/// Dense unitary of a gate over the full product space (capacity capped).
inline Matrix gate_unitary(const GateSpec& gate, const SiteDims& dims) {
    validate_gate(gate, dims);
    long total = dims.total(caps::dense_unitary());
    Matrix u(total);
    std::vector<BasisTerm> terms;
    for (long col = 0; col < total; ++col) {
        BasisString b = BasisString::from_index(col, dims);
        terms.clear();
        apply_to_basis(gate, dims, b, terms);
        for (const auto& t : terms) u(t.basis.index(dims), col) += t.amp;
    }
    return u;
}

inline Matrix circuit_unitary(const Circuit& c) {
    long total = c.dims.total(caps::dense_unitary());
    Matrix u = Matrix::identity(total);
    for (const auto& g : c.gates) u = gate_unitary(g, c.dims) * u;
    return u;
}

inline std::vector<cplx> to_dense(const StateVector& s, long cap = caps::dense_unitary()) {
    long total = s.dims.total(cap);
    std::vector<cplx> v(static_cast<size_t>(total));
    for (const auto& [b, a] : s.amplitudes) v[static_cast<size_t>(b.index(s.dims))] = a;
    return v;
}

} // namespace quditlab
