#pragma once

// Operator tomography on a constellation: sample the Q-symbol of a Hermitian
// operator on the N_s directions, then reconstruct the operator as a real
// combination of coherent-state projectors by solving against the Gram matrix.

#include "gram.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace spinframe {

/// Q-symbol values of one operator on one constellation, kept together with
/// the constellation so each value stays attached to its direction.
struct QSample {
    Constellation constellation;
    Eigen::VectorXd values;
};

/// Evaluate p_n = <m_n| A |m_n> on every constellation direction.
inline QSample sample_q(const HermitianOperator& A, const Constellation& M) {
    const int n = static_cast<int>(M.size());
    Eigen::VectorXd p(n);
    for (int i = 0; i < n; ++i) p(i) = q_symbol(A, M.spin(), M[i]);
    return QSample{M, std::move(p)};
}

namespace detail {

inline void require_matching_geometry(const QSample& p, const Constellation& M) {
    if (p.constellation.spin() != M.spin() || p.constellation.size() != M.size())
        throw std::invalid_argument("reconstruct: sample and constellation disagree on spin");
    for (std::size_t i = 0; i < M.size(); ++i)
        if ((p.constellation[i].vec() - M[i].vec()).norm() > 1e-9)
            throw std::invalid_argument("reconstruct: sample directions do not match constellation");
    if (p.values.size() != static_cast<Eigen::Index>(M.size()))
        throw std::invalid_argument("reconstruct: sample value count does not match constellation");
}

}  // namespace detail

/// Reconstruct A = sum_n c_n Q_n from its Q-symbol samples by solving
/// G c = p.  Throws SingularGramError (via solve) when the constellation
/// fails the spectral gate.  The result is Hermitian by construction: the
/// coefficients are real and the projectors Hermitian.
inline HermitianOperator reconstruct(const QSample& p, const Constellation& M, double tau) {
    detail::require_matching_geometry(p, M);
    const Eigen::VectorXd c = solve(gram(M), p.values, tau);
    const int d = M.spin().dimension();
    HermitianOperator A = HermitianOperator::Zero(d, d);
    for (std::size_t n = 0; n < M.size(); ++n)
        A += c(static_cast<Eigen::Index>(n)) * projector(coherent_state(M.spin(), M[n]));
    return A;
}

inline HermitianOperator reconstruct(const QSample& p, const Constellation& M) {
    return reconstruct(p, M, default_basis_tau(M.spin()));
}

/// Relative Frobenius round-trip error ||reconstruct(sample(A)) - A||_F / max(||A||_F, 1).
inline double round_trip_error(const HermitianOperator& A, const Constellation& M, double tau) {
    const HermitianOperator R = reconstruct(sample_q(A, M), M, tau);
    return (R - A).norm() / std::max(A.norm(), 1.0);
}

inline double round_trip_error(const HermitianOperator& A, const Constellation& M) {
    return round_trip_error(A, M, default_basis_tau(M.spin()));
}

/// Dual frame {Q~_n}: the unique operators with Tr[Q~_n Q_m] = delta_nm,
/// given by Q~_n = sum_m (G^{-1})_nm Q_m.  Reconstruction is then the plain
/// sum A = sum_n p_n Q~_n.  When the projectors form a basis the duals
/// resolve the identity, sum_n Q~_n = I: the difference is trace-orthogonal
/// to every Q_m (each unit trace) and the Q_m span the operator space.
inline std::vector<HermitianOperator> dual_frame(const Constellation& M, double tau) {
    const GramMatrix G = gram(M);
    FrameDiagnostics d = diagnostics(G, tau);
    if (!d.is_basis)
        throw SingularGramError("dual_frame: Gram matrix fails the spectral gate", std::move(d));
    const int n = static_cast<int>(M.size());
    const Eigen::MatrixXd inv = G.entries.ldlt().solve(Eigen::MatrixXd::Identity(n, n));

    std::vector<HermitianOperator> proj;
    proj.reserve(M.size());
    for (int i = 0; i < n; ++i) proj.push_back(projector(coherent_state(M.spin(), M[i])));

    const int dim = M.spin().dimension();
    std::vector<HermitianOperator> dual;
    dual.reserve(M.size());
    for (int i = 0; i < n; ++i) {
        HermitianOperator Qd = HermitianOperator::Zero(dim, dim);
        for (int j = 0; j < n; ++j) Qd += inv(i, j) * proj[j];
        dual.push_back(std::move(Qd));
    }
    return dual;
}

inline std::vector<HermitianOperator> dual_frame(const Constellation& M) {
    return dual_frame(M, default_basis_tau(M.spin()));
}

/// Flags reconstructions that are not physical density-like operators
/// (an eigenvalue below -tol).  Purely advisory: nothing is altered.
inline bool has_negative_eigenvalue(const HermitianOperator& A, double tol = 1e-10) {
    Eigen::SelfAdjointEigenSolver<HermitianOperator> es(A, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0) < -tol;
}

}  // namespace spinframe
