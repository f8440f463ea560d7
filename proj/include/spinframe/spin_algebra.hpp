#pragma once

// Spin-s operator algebra: spin matrices, coherent states, projectors and
// Q-symbols.  Conventions: hbar = 1; the standard basis is |s,m> with m
// descending from +s to -s, so index i corresponds to m = s - i.

#include "random.hpp"
#include "spin.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <stdexcept>

namespace spinframe {

using Complex = std::complex<double>;
using StateVector = Eigen::VectorXcd;
/// Dense complex matrix; Hermiticity (within 1e-12) is a documented invariant
/// of the operators produced here, checked by `is_hermitian`.
using HermitianOperator = Eigen::MatrixXcd;

/// Binomial coefficient C(n, k); exact integer arithmetic for n <= 30,
/// lgamma-based otherwise (relative accuracy ~1e-14, ample for amplitudes).
inline double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    if (n <= 30) {
        // Pascal recurrence keeps everything exactly representable here.
        long long r = 1;
        if (k > n - k) k = n - k;
        for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
        return static_cast<double>(r);
    }
    return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
}

/// The three spin matrices S_x, S_y, S_z for one spin label.
struct SpinMatrices {
    HermitianOperator sx, sy, sz;
};

/// Build S_x, S_y, S_z in the |s,m> basis (m descending).
///
/// S_z = diag(s, s-1, ..., -s); S_x, S_y come from the ladder operators
/// S± with matrix elements sqrt(s(s+1) - m(m±1)).  The commutator
/// [S_x, S_y] = i S_z and the Casimir sum S^2 = s(s+1) I follow.
inline SpinMatrices spin_matrices(SpinLabel s) {
    const int d = s.dimension();
    const int D = s.doubled();
    HermitianOperator sp = HermitianOperator::Zero(d, d);  // raising operator S+
    HermitianOperator sz = HermitianOperator::Zero(d, d);
    for (int i = 0; i < d; ++i)
        sz(i, i) = Complex(0.5 * (D - 2 * i), 0.0);
    for (int i = 1; i < d; ++i) {
        // S+ |s, m_i> = c |s, m_i + 1>, with m_i = (D - 2i)/2:
        // c^2 = s(s+1) - m_i(m_i+1) = [D(D+2) - (D-2i)(D-2i+2)] / 4.
        const double c2 = 0.25 * (static_cast<double>(D) * (D + 2) -
                                  static_cast<double>(D - 2 * i) * (D - 2 * i + 2));
        sp(i - 1, i) = Complex(std::sqrt(c2), 0.0);
    }
    const HermitianOperator sm = sp.adjoint();
    SpinMatrices out;
    out.sx = 0.5 * (sp + sm);
    out.sy = Complex(0.0, -0.5) * (sp - sm);
    out.sz = sz;
    return out;
}

/// The spin component n . S along an axis.
inline HermitianOperator spin_matrix_along(SpinLabel s, const UnitVector& n) {
    const SpinMatrices S = spin_matrices(s);
    return n.x() * S.sx + n.y() * S.sy + n.z() * S.sz;
}

/// Spin coherent state |n>: the normalized eigenvector of n . S with maximal
/// eigenvalue +s.
///
/// In the |s,m> basis (index i = s - m) the amplitudes are
///   amp_i = sqrt(C(2s, i)) cos^{2s-i}(theta/2) sin^i(theta/2) e^{+i i phi},
/// which satisfies (n.S)|n> = s|n> to machine precision.  The overall phase is
/// fixed by a real, positive m = s amplitude away from the south pole and by
/// azimuth 0 at the poles; no downstream quantity depends on it.
inline StateVector coherent_state(SpinLabel s, const UnitVector& n) {
    const int d = s.dimension();
    const int D = s.doubled();
    const double theta = n.polar();
    const double phi = n.azimuth();
    const double c = std::cos(0.5 * theta);
    const double sn = std::sin(0.5 * theta);
    StateVector v(d);
    for (int i = 0; i < d; ++i) {
        const double mag = std::sqrt(binomial(D, i)) * std::pow(c, D - i) * std::pow(sn, i);
        v(i) = mag * std::exp(Complex(0.0, i * phi));
    }
    v /= v.norm();  // already unit up to rounding; enforce the invariant
    return v;
}

/// Rank-one projector |v><v| from a normalized state.
inline HermitianOperator projector(const StateVector& v) {
    return v * v.adjoint();
}

/// True when A is Hermitian within `tol` (max elementwise deviation).
inline bool is_hermitian(const HermitianOperator& A, double tol = 1e-12) {
    if (A.rows() != A.cols()) return false;
    return (A - A.adjoint().eval()).cwiseAbs().maxCoeff() <= tol;
}

/// Q-symbol (coherent-state expectation) Q_A(n) = <n| A |n>.
///
/// A must be (2s+1)x(2s+1) and Hermitian: the value is real up to a tiny
/// imaginary residue, which is checked against 1e-12 (scaled by the operator
/// norm) and then discarded.
inline double q_symbol(const HermitianOperator& A, SpinLabel s, const UnitVector& n) {
    const int d = s.dimension();
    if (A.rows() != d || A.cols() != d)
        throw std::invalid_argument("q_symbol: operator dimension does not match spin");
    const StateVector v = coherent_state(s, n);
    const Complex q = (v.adjoint() * A * v)(0, 0);
    const double scale = std::max(1.0, A.norm());
    if (std::abs(q.imag()) > 1e-12 * scale)
        throw std::invalid_argument("q_symbol: non-real expectation (operator not Hermitian?)");
    return q.real();
}

/// Transition probability |<a|b>|^2 computed from the state amplitudes.
inline double overlap_probability(SpinLabel s, const UnitVector& a, const UnitVector& b) {
    const StateVector va = coherent_state(s, a);
    const StateVector vb = coherent_state(s, b);
    return std::norm(va.dot(vb));  // dot conjugates the first argument
}

/// The same probability in closed form: ((1 + a.b)/2)^{2s}.
inline double overlap_closed_form(SpinLabel s, double axis_dot) {
    return std::pow(0.5 * (1.0 + axis_dot), s.doubled());
}

/// Random Hermitian matrix from the Gaussian unitary ensemble convention:
/// independent standard-normal real diagonal, off-diagonal entries
/// (x + iy)/sqrt(2) with x, y standard normal, symmetrized by conjugation.
inline HermitianOperator random_hermitian(int dim, RandomStream& rng) {
    if (dim <= 0)
        throw std::invalid_argument("random_hermitian: dimension must be positive");
    HermitianOperator A(dim, dim);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (int i = 0; i < dim; ++i) {
        A(i, i) = Complex(rng.normal(), 0.0);
        for (int j = i + 1; j < dim; ++j) {
            const Complex z(rng.normal() * inv_sqrt2, rng.normal() * inv_sqrt2);
            A(i, j) = z;
            A(j, i) = std::conj(z);
        }
    }
    return A;
}

}  // namespace spinframe
