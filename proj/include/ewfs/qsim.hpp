#pragma once

// Exact small-register statevector simulation.
//
// Amplitudes are indexed big-endian in register declaration order: the first
// declared register is the most significant bit of the index, so the ket
// |S_A L_A S_B L_B> = |1100> sits at index 0b1100.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ewfs/error.hpp"

namespace ewfs {

using Amp = std::complex<double>;
using AmpVector = std::vector<Amp>;

inline constexpr double kNormTolerance = 1e-12;
inline constexpr double kUnitaryTolerance = 1e-10;
inline constexpr double kOrthoTolerance = 1e-10;
inline constexpr double kZeroProbability = 1e-12;

namespace detail {

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline std::size_t log2_exact(std::size_t n) {
    std::size_t k = 0;
    while ((std::size_t{1} << k) < n) ++k;
    return k;
}

inline double norm_squared(std::span<const Amp> v) {
    double s = 0.0;
    for (const auto& a : v) s += std::norm(a);
    return s;
}

inline Amp inner(std::span<const Amp> a, std::span<const Amp> b) {
    Amp s{0.0, 0.0};
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

inline bool all_finite(std::span<const Amp> v) {
    return std::all_of(v.begin(), v.end(), [](const Amp& a) {
        return std::isfinite(a.real()) && std::isfinite(a.imag());
    });
}

}  // namespace detail

class StateVector {
public:
    // Takes amplitudes as given; see make_state for the normalizing factory.
    StateVector(std::vector<std::string> registers, AmpVector amps)
        : registers_(std::move(registers)), amps_(std::move(amps)) {
        if (registers_.size() > 24) throw error("StateVector: too many registers");
        if (amps_.size() != (std::size_t{1} << registers_.size())) {
            throw error("StateVector: expected " +
                        std::to_string(std::size_t{1} << registers_.size()) +
                        " amplitudes, got " + std::to_string(amps_.size()));
        }
        for (std::size_t i = 0; i < registers_.size(); ++i) {
            for (std::size_t j = i + 1; j < registers_.size(); ++j) {
                if (registers_[i] == registers_[j]) {
                    throw error("StateVector: duplicate register '" + registers_[i] + "'");
                }
            }
        }
        if (!detail::all_finite(amps_)) throw error("StateVector: non-finite amplitude");
    }

    const std::vector<std::string>& registers() const { return registers_; }
    std::span<const Amp> amplitudes() const { return amps_; }
    std::size_t num_qubits() const { return registers_.size(); }
    std::size_t dim() const { return amps_.size(); }
    const Amp& operator[](std::size_t i) const { return amps_[i]; }
    double norm_squared() const { return detail::norm_squared(amps_); }

    bool has_register(std::string_view name) const {
        return std::find(registers_.begin(), registers_.end(), name) != registers_.end();
    }

    std::size_t register_index(std::string_view name) const {
        auto it = std::find(registers_.begin(), registers_.end(), name);
        if (it == registers_.end()) {
            throw error("unknown register '" + std::string(name) + "'");
        }
        return static_cast<std::size_t>(it - registers_.begin());
    }

    // Bit position (0 = least significant) of a register inside an index.
    std::size_t bit_of(std::string_view name) const {
        return num_qubits() - 1 - register_index(name);
    }

private:
    std::vector<std::string> registers_;
    AmpVector amps_;
};

inline StateVector make_state(std::vector<std::string> registers, AmpVector amps) {
    if (amps.size() != (std::size_t{1} << registers.size())) {
        throw error("make_state: amplitude list length " + std::to_string(amps.size()) +
                    " does not match 2^" + std::to_string(registers.size()));
    }
    if (!detail::all_finite(amps)) throw error("make_state: non-finite amplitude");
    const double n2 = detail::norm_squared(amps);
    if (!(n2 > 0.0)) throw error("make_state: zero vector");
    const double inv = 1.0 / std::sqrt(n2);
    for (auto& a : amps) a *= inv;
    return StateVector(std::move(registers), std::move(amps));
}

inline StateVector basis_state(std::vector<std::string> registers, std::size_t index) {
    AmpVector amps(std::size_t{1} << registers.size());
    if (index >= amps.size()) throw error("basis_state: index out of range");
    amps[index] = 1.0;
    return StateVector(std::move(registers), std::move(amps));
}

inline double max_abs_diff(const StateVector& a, const StateVector& b) {
    if (a.registers() != b.registers()) throw error("max_abs_diff: register mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

// Dense square matrix over amplitudes, checked unitary on construction.
class Unitary {
public:
    static Unitary from_entries(std::size_t dim, AmpVector row_major) {
        Unitary u(dim, std::move(row_major));
        const double dev = u.unitarity_deviation();
        if (dev > kUnitaryTolerance) {
            throw error("Unitary: U^dagger U deviates from identity by " + std::to_string(dev));
        }
        return u;
    }

    static Unitary identity(std::size_t dim) {
        AmpVector e(dim * dim);
        for (std::size_t i = 0; i < dim; ++i) e[i * dim + i] = 1.0;
        return Unitary(dim, std::move(e));
    }

    std::size_t dim() const { return dim_; }
    std::size_t arity() const { return detail::log2_exact(dim_); }
    const Amp& operator()(std::size_t r, std::size_t c) const { return entries_[r * dim_ + c]; }

    Unitary adjoint() const {
        AmpVector e(dim_ * dim_);
        for (std::size_t r = 0; r < dim_; ++r)
            for (std::size_t c = 0; c < dim_; ++c) e[c * dim_ + r] = std::conj((*this)(r, c));
        return Unitary(dim_, std::move(e));
    }

    // Matrix product (*this) * rhs.
    Unitary compose(const Unitary& rhs) const {
        if (rhs.dim_ != dim_) throw error("Unitary::compose: dimension mismatch");
        AmpVector e(dim_ * dim_);
        for (std::size_t r = 0; r < dim_; ++r)
            for (std::size_t k = 0; k < dim_; ++k) {
                const Amp a = (*this)(r, k);
                if (a == Amp{}) continue;
                for (std::size_t c = 0; c < dim_; ++c) e[r * dim_ + c] += a * rhs(k, c);
            }
        return Unitary(dim_, std::move(e));
    }

    // Kronecker product; *this acts on the more significant registers.
    Unitary kron(const Unitary& rhs) const {
        const std::size_t d = dim_ * rhs.dim_;
        AmpVector e(d * d);
        for (std::size_t r1 = 0; r1 < dim_; ++r1)
            for (std::size_t c1 = 0; c1 < dim_; ++c1)
                for (std::size_t r2 = 0; r2 < rhs.dim_; ++r2)
                    for (std::size_t c2 = 0; c2 < rhs.dim_; ++c2)
                        e[(r1 * rhs.dim_ + r2) * d + (c1 * rhs.dim_ + c2)] =
                            (*this)(r1, c1) * rhs(r2, c2);
        return Unitary(d, std::move(e));
    }

    // Max entrywise |(U^dagger U - I)_{rc}|.
    double unitarity_deviation() const {
        double m = 0.0;
        for (std::size_t r = 0; r < dim_; ++r)
            for (std::size_t c = 0; c < dim_; ++c) {
                Amp s{};
                for (std::size_t k = 0; k < dim_; ++k) s += std::conj((*this)(k, r)) * (*this)(k, c);
                if (r == c) s -= 1.0;
                m = std::max(m, std::abs(s));
            }
        return m;
    }

    AmpVector apply(std::span<const Amp> v) const {
        AmpVector out(dim_);
        for (std::size_t r = 0; r < dim_; ++r)
            for (std::size_t c = 0; c < dim_; ++c) out[r] += (*this)(r, c) * v[c];
        return out;
    }

    const AmpVector& entries() const { return entries_; }

private:
    Unitary(std::size_t dim, AmpVector entries) : dim_(dim), entries_(std::move(entries)) {
        if (!detail::is_power_of_two(dim_)) throw error("Unitary: dimension must be a power of two");
        if (entries_.size() != dim_ * dim_) throw error("Unitary: entry count mismatch");
        if (!detail::all_finite(entries_)) throw error("Unitary: non-finite entry");
    }

    std::size_t dim_;
    AmpVector entries_;
};

// A complete orthonormal basis; outcome k is the index of vector k, and each
// vector carries a display label ("0", "ok", "yes", ...).
class OrthonormalBasis {
public:
    static OrthonormalBasis make(std::vector<AmpVector> vectors, std::vector<std::string> labels = {}) {
        if (vectors.empty()) throw error("OrthonormalBasis: no vectors");
        const std::size_t dim = vectors.front().size();
        if (!detail::is_power_of_two(dim)) throw error("OrthonormalBasis: dimension must be a power of two");
        if (vectors.size() != dim) {
            throw error("OrthonormalBasis: need " + std::to_string(dim) + " vectors, got " +
                        std::to_string(vectors.size()));
        }
        check_orthonormal(vectors);
        if (labels.empty()) {
            for (std::size_t k = 0; k < dim; ++k) labels.push_back(std::to_string(k));
        }
        if (labels.size() != dim) throw error("OrthonormalBasis: label count mismatch");
        return OrthonormalBasis(std::move(vectors), std::move(labels));
    }

    // Throws unless every vector has the same length, unit norm and the
    // family is pairwise orthogonal.
    static void check_orthonormal(const std::vector<AmpVector>& vectors) {
        if (vectors.empty()) return;
        const std::size_t dim = vectors.front().size();
        for (std::size_t i = 0; i < vectors.size(); ++i) {
            if (vectors[i].size() != dim) throw error("basis vectors differ in dimension");
            if (!detail::all_finite(vectors[i])) throw error("basis vector has non-finite entry");
            if (std::abs(detail::norm_squared(vectors[i]) - 1.0) > kOrthoTolerance) {
                throw error("basis vector " + std::to_string(i) + " is not unit norm");
            }
            for (std::size_t j = 0; j < i; ++j) {
                if (std::abs(detail::inner(vectors[j], vectors[i])) > kOrthoTolerance) {
                    throw error("basis vectors " + std::to_string(j) + " and " + std::to_string(i) +
                                " are not orthogonal");
                }
            }
        }
    }

    std::size_t dim() const { return vectors_.size(); }
    std::size_t arity() const { return detail::log2_exact(dim()); }
    std::span<const Amp> vector(std::size_t k) const { return vectors_[k]; }
    const std::vector<AmpVector>& vectors() const { return vectors_; }
    const std::string& label(std::size_t k) const { return labels_[k]; }
    const std::vector<std::string>& labels() const { return labels_; }

    std::optional<std::size_t> find_label(std::string_view l) const {
        for (std::size_t k = 0; k < labels_.size(); ++k)
            if (labels_[k] == l) return k;
        return std::nullopt;
    }

    bool operator==(const OrthonormalBasis&) const = default;

private:
    OrthonormalBasis(std::vector<AmpVector> v, std::vector<std::string> l)
        : vectors_(std::move(v)), labels_(std::move(l)) {}

    std::vector<AmpVector> vectors_;
    std::vector<std::string> labels_;
};

// Standard single-qubit bases. |0>,|+>,|+i> carry outcome 0.
inline OrthonormalBasis z_basis() {
    return OrthonormalBasis::make({{1.0, 0.0}, {0.0, 1.0}}, {"0", "1"});
}

inline OrthonormalBasis x_basis() {
    const double h = 1.0 / std::sqrt(2.0);
    return OrthonormalBasis::make({{h, h}, {h, -h}}, {"0", "1"});
}

inline OrthonormalBasis y_basis() {
    const double h = 1.0 / std::sqrt(2.0);
    return OrthonormalBasis::make({{h, Amp{0.0, h}}, {h, Amp{0.0, -h}}}, {"0", "1"});
}

namespace detail {

struct TargetLayout {
    std::size_t mask = 0;
    std::vector<std::size_t> offsets;  // offsets[s]: index bits for local sub-index s
};

inline TargetLayout layout_for(const StateVector& state, std::span<const std::string> targets) {
    TargetLayout t;
    std::vector<std::size_t> bits;
    for (const auto& name : targets) {
        const std::size_t b = state.bit_of(name);
        if (t.mask & (std::size_t{1} << b)) throw error("duplicate target register '" + name + "'");
        t.mask |= std::size_t{1} << b;
        bits.push_back(b);
    }
    const std::size_t k = bits.size();
    t.offsets.resize(std::size_t{1} << k);
    for (std::size_t s = 0; s < t.offsets.size(); ++s) {
        std::size_t off = 0;
        for (std::size_t i = 0; i < k; ++i)
            if (s & (std::size_t{1} << (k - 1 - i))) off |= std::size_t{1} << bits[i];
        t.offsets[s] = off;
    }
    return t;
}

// Unnormalized vector over the registers not in `targets`:
// out = (<v|_targets (x) I) psi.
inline std::pair<std::vector<std::string>, AmpVector> contract(const StateVector& state,
                                                              std::span<const Amp> v,
                                                              std::span<const std::string> targets) {
    const auto layout = layout_for(state, targets);
    if (v.size() != layout.offsets.size()) {
        throw error("measurement dimension " + std::to_string(v.size()) + " does not match " +
                    std::to_string(targets.size()) + " target register(s)");
    }
    std::vector<std::string> rest;
    for (const auto& r : state.registers())
        if (std::find(targets.begin(), targets.end(), r) == targets.end()) rest.push_back(r);
    AmpVector out;
    out.reserve(std::size_t{1} << rest.size());
    for (std::size_t base = 0; base < state.dim(); ++base) {
        if (base & layout.mask) continue;
        Amp s{};
        for (std::size_t j = 0; j < v.size(); ++j) s += std::conj(v[j]) * state[base | layout.offsets[j]];
        out.push_back(s);
    }
    return {std::move(rest), std::move(out)};
}

}  // namespace detail

inline StateVector apply_unitary(const StateVector& state, const Unitary& u,
                                 std::span<const std::string> targets) {
    if (u.dim() != (std::size_t{1} << targets.size())) {
        throw error("apply_unitary: unitary of arity " + std::to_string(u.arity()) + " applied to " +
                    std::to_string(targets.size()) + " register(s)");
    }
    const auto layout = detail::layout_for(state, targets);
    AmpVector out(state.dim());
    AmpVector local(u.dim());
    for (std::size_t base = 0; base < state.dim(); ++base) {
        if (base & layout.mask) continue;
        for (std::size_t s = 0; s < local.size(); ++s) local[s] = state[base | layout.offsets[s]];
        for (std::size_t r = 0; r < local.size(); ++r) {
            Amp acc{};
            for (std::size_t c = 0; c < local.size(); ++c) acc += u(r, c) * local[c];
            out[base | layout.offsets[r]] = acc;
        }
    }
    return StateVector(state.registers(), std::move(out));
}

inline StateVector apply_unitary(const StateVector& state, const Unitary& u,
                                 std::initializer_list<std::string> targets) {
    std::vector<std::string> t(targets);
    return apply_unitary(state, u, std::span<const std::string>(t));
}

// Unitary model of a friend measuring a qubit in `basis` and writing the
// outcome into a one-qubit memory: U(|b_k>|m>) = |b_k>|m xor k>.
// Register order is (system, memory).
inline Unitary friend_unitary(const OrthonormalBasis& basis) {
    if (basis.dim() != 2) throw error("friend_unitary: basis must be single-qubit");
    AmpVector e(16);
    for (std::size_t s_out = 0; s_out < 2; ++s_out)
        for (std::size_t m_out = 0; m_out < 2; ++m_out)
            for (std::size_t s_in = 0; s_in < 2; ++s_in)
                for (std::size_t m_in = 0; m_in < 2; ++m_in) {
                    Amp acc{};
                    for (std::size_t k = 0; k < 2; ++k) {
                        if (m_out != (m_in ^ k)) continue;
                        acc += basis.vector(k)[s_out] * std::conj(basis.vector(k)[s_in]);
                    }
                    e[(s_out * 2 + m_out) * 4 + (s_in * 2 + m_in)] = acc;
                }
    return Unitary::from_entries(4, std::move(e));
}

// Born probabilities of measuring `targets` in `basis`; entry k belongs to
// basis vector k.
inline std::vector<double> measure_distribution(const StateVector& state, const OrthonormalBasis& basis,
                                                std::span<const std::string> targets) {
    if (basis.dim() != (std::size_t{1} << targets.size())) {
        throw error("measure_distribution: basis dimension " + std::to_string(basis.dim()) +
                    " does not match " + std::to_string(targets.size()) + " target register(s)");
    }
    std::vector<double> p;
    p.reserve(basis.dim());
    for (std::size_t k = 0; k < basis.dim(); ++k) {
        p.push_back(detail::norm_squared(detail::contract(state, basis.vector(k), targets).second));
    }
    return p;
}

inline std::vector<double> measure_distribution(const StateVector& state, const OrthonormalBasis& basis,
                                                std::initializer_list<std::string> targets) {
    std::vector<std::string> t(targets);
    return measure_distribution(state, basis, std::span<const std::string>(t));
}

// One factor of a product measurement: a basis over some target registers.
struct LocalMeasurement {
    const OrthonormalBasis* basis;
    std::vector<std::string> targets;
};

// Joint Born distribution of a product measurement over disjoint targets.
// Index is mixed-radix with the first measurement most significant.
inline std::vector<double> joint_probabilities(const StateVector& state,
                                               std::span<const LocalMeasurement> ms) {
    std::size_t total = 1;
    for (const auto& m : ms) {
        if (m.basis->dim() != (std::size_t{1} << m.targets.size())) {
            throw error("joint_probabilities: basis/target dimension mismatch");
        }
        total *= m.basis->dim();
    }
    std::vector<double> out;
    out.reserve(total);
    // Depth-first over outcomes; each level contracts one more factor.
    struct Frame {
        std::vector<std::string> regs;
        AmpVector amps;
    };
    std::vector<Frame> stack;
    stack.push_back({state.registers(), AmpVector(state.amplitudes().begin(), state.amplitudes().end())});
    auto rec = [&](auto&& self, std::size_t level) -> void {
        if (level == ms.size()) {
            out.push_back(detail::norm_squared(stack.back().amps));
            return;
        }
        const auto& m = ms[level];
        const StateVector cur(stack.back().regs, stack.back().amps);
        for (std::size_t k = 0; k < m.basis->dim(); ++k) {
            auto [regs, amps] = detail::contract(cur, m.basis->vector(k), m.targets);
            stack.push_back({std::move(regs), std::move(amps)});
            self(self, level + 1);
            stack.pop_back();
        }
    };
    rec(rec, 0);
    return out;
}

struct Projection {
    double probability = 0.0;
    std::optional<StateVector> post_state;  // absent when probability <= kZeroProbability
};

inline Projection project(const StateVector& state, std::span<const Amp> vec,
                          std::span<const std::string> targets) {
    if (std::abs(detail::norm_squared(vec) - 1.0) > kOrthoTolerance) {
        throw error("project: vector is not unit norm");
    }
    auto [rest, reduced] = detail::contract(state, vec, targets);
    Projection p;
    p.probability = detail::norm_squared(reduced);
    if (p.probability <= kZeroProbability) return p;
    const auto layout = detail::layout_for(state, targets);
    AmpVector post(state.dim());
    const double inv = 1.0 / std::sqrt(p.probability);
    std::size_t r = 0;
    for (std::size_t base = 0; base < state.dim(); ++base) {
        if (base & layout.mask) continue;
        for (std::size_t s = 0; s < vec.size(); ++s) post[base | layout.offsets[s]] = vec[s] * reduced[r] * inv;
        ++r;
    }
    p.post_state = StateVector(state.registers(), std::move(post));
    return p;
}

inline Projection project(const StateVector& state, std::span<const Amp> vec,
                          std::initializer_list<std::string> targets) {
    std::vector<std::string> t(targets);
    return project(state, vec, std::span<const std::string>(t));
}

// Extends an orthonormal family to a full basis by Gram-Schmidt over the
// canonical vectors e_0, e_1, ... in order. Added vectors get the labels of
// their positions ("2", "3", ...), which are fresh when the given labels are
// not integers below the dimension.
inline OrthonormalBasis complete_basis(std::vector<AmpVector> vectors, std::vector<std::string> labels = {}) {
    if (vectors.empty()) throw error("complete_basis: no input vectors");
    OrthonormalBasis::check_orthonormal(vectors);
    const std::size_t dim = vectors.front().size();
    if (!detail::is_power_of_two(dim)) throw error("complete_basis: dimension must be a power of two");
    if (vectors.size() > dim) throw error("complete_basis: more vectors than dimensions");
    if (labels.empty()) {
        for (std::size_t k = 0; k < vectors.size(); ++k) labels.push_back(std::to_string(k));
    }
    if (labels.size() != vectors.size()) throw error("complete_basis: label count mismatch");
    for (std::size_t j = 0; j < dim && vectors.size() < dim; ++j) {
        AmpVector r(dim);
        r[j] = 1.0;
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& b : vectors) {
                const Amp c = detail::inner(b, r);
                for (std::size_t i = 0; i < dim; ++i) r[i] -= c * b[i];
            }
        }
        const double n = std::sqrt(detail::norm_squared(r));
        if (n < 1e-6) continue;
        for (auto& a : r) a /= n;
        for (auto& a : r) {
            if (std::abs(a.real()) < 1e-15) a.real(0.0);
            if (std::abs(a.imag()) < 1e-15) a.imag(0.0);
        }
        labels.push_back(std::to_string(vectors.size()));
        vectors.push_back(std::move(r));
    }
    return OrthonormalBasis::make(std::move(vectors), std::move(labels));
}

inline StateVector tensor(const StateVector& a, const StateVector& b) {
    std::vector<std::string> regs = a.registers();
    regs.insert(regs.end(), b.registers().begin(), b.registers().end());
    AmpVector amps(a.dim() * b.dim());
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < b.dim(); ++j) amps[i * b.dim() + j] = a[i] * b[j];
    return StateVector(std::move(regs), std::move(amps));
}

// Same state with registers listed in `order` (a permutation of the current ones).
inline StateVector reorder(const StateVector& s, const std::vector<std::string>& order) {
    if (order.size() != s.num_qubits()) throw error("reorder: register count mismatch");
    const std::size_t n = order.size();
    std::vector<std::size_t> src_bit(n);
    for (std::size_t i = 0; i < n; ++i) src_bit[i] = s.bit_of(order[i]);
    AmpVector out(s.dim());
    for (std::size_t idx = 0; idx < s.dim(); ++idx) {
        std::size_t src = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (idx & (std::size_t{1} << (n - 1 - i))) src |= std::size_t{1} << src_bit[i];
        out[idx] = s[src];
    }
    return StateVector(order, std::move(out));
}

}  // namespace ewfs
