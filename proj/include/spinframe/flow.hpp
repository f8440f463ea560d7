#pragma once

// Classical spin flow for one "active" spike.  The Hamiltonian is the Gram
// determinant with the active row extended polynomially off the unit sphere,
// the equation of motion is dv/dt = v x grad H, and the integrator is RK4
// with per-step renormalization.  H is conserved along exact trajectories
// (the velocity is orthogonal to grad H), and |v| = 1 is conserved too, so
// both serve as integration-quality meters.

#include "gram.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace spinframe {

/// H(v) = det of the Gram matrix with spike k replaced by the raw vector v.
///
/// The formula ((1 + v.m_j)/2)^{2s} is evaluated on v as-is — no
/// normalization — so H extends to a polynomial on all of R^3 and ambient
/// finite differences of it are well defined.  On the sphere it agrees with
/// diagnostics(gram(replace_vector(M, k, v))).det.
inline double hamiltonian(const Constellation& M, int k, const Eigen::Vector3d& v) {
    const int n = static_cast<int>(M.size());
    if (k < 0 || k >= n) throw std::out_of_range("hamiltonian: spike index out of range");
    Eigen::MatrixXd g(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            double entry;
            if (i == k && j == k)
                entry = overlap_closed_form(M.spin(), v.dot(v));
            else if (i == k)
                entry = overlap_closed_form(M.spin(), v.dot(M[j].vec()));
            else if (j == k)
                entry = overlap_closed_form(M.spin(), M[i].vec().dot(v));
            else
                entry = overlap_closed_form(M.spin(), M[i].dot(M[j]));
            g(i, j) = entry;
            g(j, i) = entry;
        }
    }
    return detail::symmetric_determinant(g);
}

/// Ambient gradient of H at v by central finite differences,
/// step h = `step` * max(1, |H(v)|) per coordinate.
inline Eigen::Vector3d grad_hamiltonian(const Constellation& M, int k,
                                        const Eigen::Vector3d& v, double step = 1e-5) {
    if (!(step > 0.0)) throw std::invalid_argument("grad_hamiltonian: step must be positive");
    const double h = step * std::max(1.0, std::abs(hamiltonian(M, k, v)));
    Eigen::Vector3d g;
    for (int c = 0; c < 3; ++c) {
        Eigen::Vector3d vp = v, vm = v;
        vp(c) += h;
        vm(c) -= h;
        g(c) = (hamiltonian(M, k, vp) - hamiltonian(M, k, vm)) / (2.0 * h);
    }
    return g;
}

/// One recorded trajectory point.  `norm_drift` is |1 - |v_raw|| of the raw
/// RK4 update that produced this sample, before renormalization (0 for the
/// initial sample).
struct FlowSample {
    double t;
    UnitVector v;
    double energy;
    double norm_drift;
};

/// A full integration run: the background constellation, which spike moved,
/// and the samples (steps + 1 of them, initial state included).
struct FlowTrajectory {
    Constellation base;
    int active_index;
    std::vector<FlowSample> samples;
};

/// Integrate dv/dt = v x grad H from v0 with classic RK4, renormalizing v
/// after each step.  Requires dt > 0 and steps >= 1.
inline FlowTrajectory integrate_flow(const Constellation& M, int k, const UnitVector& v0,
                                     double dt, int steps) {
    const int n = static_cast<int>(M.size());
    if (k < 0 || k >= n) throw std::out_of_range("integrate_flow: spike index out of range");
    if (!(dt > 0.0)) throw std::invalid_argument("integrate_flow: dt must be positive");
    if (steps < 1) throw std::invalid_argument("integrate_flow: steps must be >= 1");

    const auto rhs = [&](const Eigen::Vector3d& u) -> Eigen::Vector3d {
        return u.cross(grad_hamiltonian(M, k, u));
    };

    FlowTrajectory out{M, k, {}};
    out.samples.reserve(static_cast<std::size_t>(steps) + 1);

    Eigen::Vector3d v = v0.vec();
    out.samples.push_back({0.0, UnitVector(v), hamiltonian(M, k, v), 0.0});
    for (int i = 1; i <= steps; ++i) {
        const Eigen::Vector3d k1 = rhs(v);
        const Eigen::Vector3d k2 = rhs(v + 0.5 * dt * k1);
        const Eigen::Vector3d k3 = rhs(v + 0.5 * dt * k2);
        const Eigen::Vector3d k4 = rhs(v + dt * k3);
        const Eigen::Vector3d raw = v + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        const double drift = std::abs(1.0 - raw.norm());
        v = raw / raw.norm();
        out.samples.push_back({i * dt, UnitVector(v), hamiltonian(M, k, v), drift});
    }
    return out;
}

}  // namespace spinframe
