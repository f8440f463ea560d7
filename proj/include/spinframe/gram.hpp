#pragma once

// The Gram matrix of a coherent-state projector family and its spectral
// diagnostics.  G[n][n'] = Tr[Q_n Q_n'] = |<m_n|m_n'>|^2 = ((1 + m_n.m_n')/2)^{2s};
// the constellation is an operator basis exactly when G is invertible.

#include "constellation.hpp"
#include "spin_algebra.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace spinframe {

/// Symmetric positive-semidefinite N_s x N_s matrix of projector overlaps.
struct GramMatrix {
    SpinLabel s;
    Eigen::MatrixXd entries;
};

/// Spectral diagnostics of a Gram matrix.
///
/// `tau` is the relative threshold that was applied: the constellation
/// counts as a basis when lambda_min > tau * lambda_max.  `det` is the
/// product of eigenvalues (may underflow to 0 for large N_s);
/// `log_abs_det` stays informative in that regime.  The finiteness flags
/// record when the corresponding value is a genuine real number.
struct FrameDiagnostics {
    double det = 0.0;
    double log_abs_det = -std::numeric_limits<double>::infinity();
    bool log_abs_det_finite = false;
    Eigen::VectorXd eigenvalues;  // ascending
    double condition_number = std::numeric_limits<double>::infinity();
    bool condition_number_finite = false;
    bool is_basis = false;
    double tau = 0.0;
};

/// Thrown when an operation requires an invertible Gram matrix but the
/// spectral gate fails; carries the diagnostics that triggered it.
class SingularGramError : public std::runtime_error {
public:
    SingularGramError(const std::string& msg, FrameDiagnostics diag)
        : std::runtime_error(msg), diag_(std::move(diag)) {}
    const FrameDiagnostics& diagnostics() const { return diag_; }

private:
    FrameDiagnostics diag_;
};

/// Default relative spectral threshold: N_s * machine epsilon.
inline double default_basis_tau(SpinLabel s) {
    return s.n_points() * std::numeric_limits<double>::epsilon();
}

/// Gram matrix via the closed-form overlap ((1 + m_n.m_n')/2)^{2s}.
inline GramMatrix gram(const Constellation& M) {
    const int n = static_cast<int>(M.size());
    Eigen::MatrixXd g(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            const double v = overlap_closed_form(M.spin(), M[i].dot(M[j]));
            g(i, j) = v;
            g(j, i) = v;
        }
    }
    return GramMatrix{M.spin(), std::move(g)};
}

/// Gram matrix via explicit projectors: entries are Frobenius inner products
/// Tr[Q_n Q_n'].  Slower than `gram`, kept as an independent cross-check of
/// the closed form.
inline GramMatrix gram_via_traces(const Constellation& M) {
    const int n = static_cast<int>(M.size());
    std::vector<HermitianOperator> proj;
    proj.reserve(M.size());
    for (int i = 0; i < n; ++i) proj.push_back(projector(coherent_state(M.spin(), M[i])));
    Eigen::MatrixXd g(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            // Tr[A B] with B Hermitian equals sum_ij A_ij conj(B_ij).
            const double v = (proj[i].array() * proj[j].array().conjugate()).sum().real();
            g(i, j) = v;
            g(j, i) = v;
        }
    }
    return GramMatrix{M.spin(), std::move(g)};
}

namespace detail {

/// Eigenvalues of a symmetric matrix, ascending.
inline Eigen::VectorXd symmetric_eigenvalues(const Eigen::MatrixXd& A) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

/// Determinant of a symmetric matrix as the product of its eigenvalues.
inline double symmetric_determinant(const Eigen::MatrixXd& A) {
    const Eigen::VectorXd ev = symmetric_eigenvalues(A);
    double det = 1.0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) det *= ev(i);
    return det;
}

}  // namespace detail

/// Spectral diagnostics with an explicit relative threshold `tau`.
inline FrameDiagnostics diagnostics(const GramMatrix& G, double tau) {
    if (G.entries.rows() != G.entries.cols())
        throw std::invalid_argument("diagnostics: Gram matrix must be square");
    if (!(tau > 0.0))
        throw std::invalid_argument("diagnostics: tau must be positive");

    FrameDiagnostics d;
    d.tau = tau;
    d.eigenvalues = detail::symmetric_eigenvalues(G.entries);
    const Eigen::Index n = d.eigenvalues.size();

    double det = 1.0;
    double log_abs = 0.0;
    bool log_finite = true;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double ev = d.eigenvalues(i);
        det *= ev;
        if (ev == 0.0)
            log_finite = false;
        else
            log_abs += std::log(std::abs(ev));
    }
    d.det = det;
    d.log_abs_det_finite = log_finite;
    d.log_abs_det = log_finite ? log_abs : -std::numeric_limits<double>::infinity();

    const double lo = d.eigenvalues(0);
    const double hi = d.eigenvalues(n - 1);
    if (lo > 0.0) {
        d.condition_number = hi / lo;
        d.condition_number_finite = true;
    }
    d.is_basis = (hi > 0.0) && (lo > tau * hi);
    return d;
}

/// Diagnostics with the default threshold N_s * eps.
inline FrameDiagnostics diagnostics(const GramMatrix& G) {
    return diagnostics(G, default_basis_tau(G.s));
}

/// Solve G c = p for the expansion coefficients.
///
/// The spectral gate runs first: if lambda_min <= tau * lambda_max a
/// SingularGramError (carrying the diagnostics) is thrown and no solve is
/// attempted.  Otherwise an LDLT factorization plus one iterative-refinement
/// step produces c; for well-conditioned G the residual
/// ||G c - p|| / max(||p||, 1) lands far below 1e-10.
inline Eigen::VectorXd solve(const GramMatrix& G, const Eigen::VectorXd& p, double tau) {
    if (p.size() != G.entries.rows())
        throw std::invalid_argument("solve: right-hand side length does not match Gram matrix");
    FrameDiagnostics d = diagnostics(G, tau);
    if (!d.is_basis)
        throw SingularGramError("solve: Gram matrix fails the spectral gate (lambda_min <= tau * lambda_max)",
                                std::move(d));
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(G.entries);
    Eigen::VectorXd c = ldlt.solve(p);
    c += ldlt.solve(p - G.entries * c);  // one refinement step
    return c;
}

/// Solve with the default threshold.
inline Eigen::VectorXd solve(const GramMatrix& G, const Eigen::VectorXd& p) {
    return solve(G, p, default_basis_tau(G.s));
}

}  // namespace spinframe
