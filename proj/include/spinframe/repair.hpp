#pragma once

// Repair of singular (or near-singular) constellations by small random
// perturbations, backing the claim that degeneracy is non-generic: almost
// any nearby constellation is a basis again.
//
// Strategy `RandomProbe` (default): visit spikes in index order and probe
// each with fresh random tangent moves of magnitude epsilon/(2 N_s) drawn at
// the spike's ORIGINAL position, keeping a candidate only when it strictly
// raises lambda_min/lambda_max (so later spikes never undo earlier gains).
// Because every accepted position lies within epsilon/(2 N_s) of the
// original, the per-spike bound < epsilon/N_s and the total constellation
// distance < epsilon hold by construction, over any number of passes.
//
// Strategy `GradientAscent`: per spike, hill-climb log|det G| along the
// sphere with tangential finite differences, displacement clamped to the
// same per-spike budget.

#include "gram.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace spinframe {

enum class RepairStrategy { RandomProbe, GradientAscent };

struct RepairOptions {
    RepairStrategy strategy = RepairStrategy::RandomProbe;
    int max_tries_per_spike = 64;  // candidate moves per spike per pass
    int max_passes = 4;            // full sweeps over the spikes
};

/// What a repair run did: which spikes moved, how far in total (index-wise
/// constellation distance to the input), the repaired log|det|, and how many
/// candidate evaluations were spent.
struct RepairReport {
    std::vector<int> moved_indices;
    double total_displacement = 0.0;
    double final_log_abs_det = 0.0;
    int attempts = 0;
};

/// Thrown when the candidate budget is exhausted without reaching the
/// spectral gate; carries the partial report (attempt count included).
class RepairFailedError : public std::runtime_error {
public:
    RepairFailedError(const std::string& msg, RepairReport report)
        : std::runtime_error(msg), report_(std::move(report)) {}
    const RepairReport& report() const { return report_; }

private:
    RepairReport report_;
};

namespace detail {

/// lambda_min / lambda_max of the Gram matrix for a working vector set.
inline double spectral_ratio(SpinLabel s, const std::vector<UnitVector>& v) {
    const Eigen::VectorXd ev = symmetric_eigenvalues(gram(Constellation(s, v)).entries);
    const double hi = ev(ev.size() - 1);
    if (!(hi > 0.0)) return -1.0;
    return ev(0) / hi;
}

/// Candidate position: unit vector at distance `delta` from `origin` along
/// the tangent direction `dir` (up to the chord-vs-arc rounding, which only
/// shrinks the displacement).
inline UnitVector budgeted_move(const UnitVector& origin, const Eigen::Vector3d& dir, double delta) {
    return UnitVector(origin.vec() + delta * dir);
}

inline RepairReport finish_report(const Constellation& M, const std::vector<UnitVector>& cur,
                                  double tau, int attempts) {
    RepairReport r;
    r.attempts = attempts;
    for (std::size_t i = 0; i < cur.size(); ++i) {
        const double d = (cur[i].vec() - M[i].vec()).norm();
        if (d > 0.0) {
            r.moved_indices.push_back(static_cast<int>(i));
            r.total_displacement += d;
        }
    }
    r.final_log_abs_det = diagnostics(gram(Constellation(M.spin(), cur)), tau).log_abs_det;
    return r;
}

/// Smoothed log|det| objective for the ascent strategy; finite even at
/// numerically singular configurations.
inline double log_abs_det_objective(SpinLabel s, const std::vector<UnitVector>& v) {
    const Eigen::VectorXd ev = symmetric_eigenvalues(gram(Constellation(s, v)).entries);
    double acc = 0.0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) acc += std::log(std::abs(ev(i)) + 1e-300);
    return acc;
}

}  // namespace detail

/// Perturb M within total budget `epsilon` until lambda_min > tau * lambda_max.
///
/// Deterministic for a given seed: every (pass, spike) pair draws from its
/// own splitmix64-derived substream, so results do not depend on evaluation
/// order.  Returns the repaired constellation and a report; throws
/// RepairFailedError when the budget of
/// max_passes * N_s * max_tries_per_spike candidates is exhausted.
inline std::pair<Constellation, RepairReport> repair(const Constellation& M, double epsilon,
                                                     double tau, std::uint64_t seed,
                                                     const RepairOptions& opts = {}) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("repair: epsilon must be positive");
    if (!(tau > 0.0)) throw std::invalid_argument("repair: tau must be positive");
    if (opts.max_tries_per_spike < 1 || opts.max_passes < 1)
        throw std::invalid_argument("repair: options must allow at least one attempt");

    const SpinLabel s = M.spin();
    const std::size_t n = M.size();
    const double delta = epsilon / (2.0 * static_cast<double>(n));

    std::vector<UnitVector> cur = M.vectors();
    double ratio = detail::spectral_ratio(s, cur);
    int attempts = 0;

    if (ratio > tau) {
        RepairReport r = detail::finish_report(M, cur, tau, attempts);
        return {Constellation(s, std::move(cur), M.label()), std::move(r)};
    }

    for (int pass = 0; pass < opts.max_passes && ratio <= tau; ++pass) {
        for (std::size_t spike = 0; spike < n && ratio <= tau; ++spike) {
            RandomStream rng(mix_seed(seed, static_cast<std::uint64_t>(pass), spike));
            if (opts.strategy == RepairStrategy::RandomProbe) {
                std::optional<UnitVector> best;
                double best_ratio = ratio;
                const UnitVector saved = cur[spike];
                for (int t = 0; t < opts.max_tries_per_spike; ++t) {
                    ++attempts;
                    const UnitVector cand =
                        detail::budgeted_move(M[spike], rng.tangent_direction(M[spike]), delta);
                    cur[spike] = cand;
                    const double r = detail::spectral_ratio(s, cur);
                    if (r > best_ratio) {
                        best_ratio = r;
                        best = cand;
                        if (best_ratio > tau) break;
                    }
                }
                cur[spike] = best ? *best : saved;
                if (best) ratio = best_ratio;
            } else {
                // Gradient ascent on log|det| along the sphere, same budget.
                double obj = detail::log_abs_det_objective(s, cur);
                for (int t = 0; t < opts.max_tries_per_spike && ratio <= tau; ++t) {
                    ++attempts;
                    // Tangential finite-difference gradient at the current position.
                    const UnitVector at = cur[spike];
                    const Eigen::Vector3d e1 = rng.tangent_direction(at);
                    const Eigen::Vector3d e2 = at.vec().cross(e1);
                    const double h = 1e-6;
                    const UnitVector saved = cur[spike];
                    double g1, g2;
                    cur[spike] = UnitVector(at.vec() + h * e1);
                    g1 = detail::log_abs_det_objective(s, cur);
                    cur[spike] = UnitVector(at.vec() - h * e1);
                    g1 = (g1 - detail::log_abs_det_objective(s, cur)) / (2.0 * h);
                    cur[spike] = UnitVector(at.vec() + h * e2);
                    g2 = detail::log_abs_det_objective(s, cur);
                    cur[spike] = UnitVector(at.vec() - h * e2);
                    g2 = (g2 - detail::log_abs_det_objective(s, cur)) / (2.0 * h);
                    cur[spike] = saved;

                    Eigen::Vector3d dir = g1 * e1 + g2 * e2;
                    const double gn = dir.norm();
                    if (!(gn > 0.0) || !std::isfinite(gn)) break;
                    dir /= gn;

                    // Step uphill by a fixed fraction of the budget, then clamp
                    // the displacement from the ORIGINAL position to delta.
                    Eigen::Vector3d cand = at.vec() + (delta / 4.0) * dir;
                    Eigen::Vector3d off = cand - M[spike].vec();
                    if (off.norm() > delta) cand = M[spike].vec() + delta * off.normalized();
                    const UnitVector cand_u{cand};

                    cur[spike] = cand_u;
                    const double new_obj = detail::log_abs_det_objective(s, cur);
                    if (new_obj > obj) {
                        obj = new_obj;
                        ratio = detail::spectral_ratio(s, cur);
                    } else {
                        cur[spike] = saved;
                        break;  // no uphill progress at this budget; next spike
                    }
                }
            }
        }
    }

    RepairReport report = detail::finish_report(M, cur, tau, attempts);
    if (ratio <= tau)
        throw RepairFailedError("repair: budget exhausted after " + std::to_string(attempts) +
                                    " candidate moves without reaching the spectral gate",
                                std::move(report));
    return {Constellation(s, std::move(cur), M.label()), std::move(report)};
}

}  // namespace spinframe
