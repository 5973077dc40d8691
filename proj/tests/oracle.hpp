#pragma once

// Dense reference computations, deliberately independent of the library's
// index-layout code: full Kronecker products, explicit matrix products and
// projector expectation values.

#include <complex>
#include <cstddef>
#include <vector>

namespace oracle {

using C = std::complex<double>;

struct Dense {
    std::size_t n = 0;  // square n x n
    std::vector<C> a;

    explicit Dense(std::size_t dim = 0) : n(dim), a(dim * dim) {}
    C& operator()(std::size_t r, std::size_t c) { return a[r * n + c]; }
    C operator()(std::size_t r, std::size_t c) const { return a[r * n + c]; }

    static Dense identity(std::size_t dim) {
        Dense d(dim);
        for (std::size_t i = 0; i < dim; ++i) d(i, i) = 1.0;
        return d;
    }
};

inline Dense kron(const Dense& x, const Dense& y) {
    Dense out(x.n * y.n);
    for (std::size_t i = 0; i < x.n; ++i)
        for (std::size_t j = 0; j < x.n; ++j)
            for (std::size_t k = 0; k < y.n; ++k)
                for (std::size_t l = 0; l < y.n; ++l) out(i * y.n + k, j * y.n + l) = x(i, j) * y(k, l);
    return out;
}

inline Dense mul(const Dense& x, const Dense& y) {
    Dense out(x.n);
    for (std::size_t i = 0; i < x.n; ++i)
        for (std::size_t k = 0; k < x.n; ++k)
            for (std::size_t j = 0; j < x.n; ++j) out(i, j) += x(i, k) * y(k, j);
    return out;
}

inline std::vector<C> apply(const Dense& m, const std::vector<C>& v) {
    std::vector<C> out(m.n);
    for (std::size_t i = 0; i < m.n; ++i)
        for (std::size_t j = 0; j < m.n; ++j) out[i] += m(i, j) * v[j];
    return out;
}

inline Dense outer(const std::vector<C>& v) {
    Dense d(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j) d(i, j) = v[i] * std::conj(v[j]);
    return d;
}

inline Dense pauli_x() {
    Dense d(2);
    d(0, 1) = d(1, 0) = 1.0;
    return d;
}

// sum_k |b_k><b_k| (x) X^k
inline Dense friend_cnot(const std::vector<C>& b0, const std::vector<C>& b1) {
    Dense out = kron(outer(b0), Dense::identity(2));
    const Dense flip = kron(outer(b1), pauli_x());
    for (std::size_t i = 0; i < out.a.size(); ++i) out.a[i] += flip.a[i];
    return out;
}

inline Dense kron_all(const std::vector<Dense>& ms) {
    Dense out = Dense::identity(1);
    for (const auto& m : ms) out = kron(out, m);
    return out;
}

inline double expectation(const Dense& p, const std::vector<C>& psi) {
    const auto v = apply(p, psi);
    C s = 0.0;
    for (std::size_t i = 0; i < psi.size(); ++i) s += std::conj(psi[i]) * v[i];
    return s.real();
}

inline std::vector<C> kron_vec(const std::vector<C>& x, const std::vector<C>& y) {
    std::vector<C> out;
    for (auto a : x)
        for (auto b : y) out.push_back(a * b);
    return out;
}

inline std::vector<C> e(std::size_t dim, std::size_t k) {
    std::vector<C> v(dim);
    v[k] = 1.0;
    return v;
}

}  // namespace oracle
