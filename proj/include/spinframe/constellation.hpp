#pragma once

// Constellations: ordered N_s-tuples of sphere directions labeling a
// candidate operator basis, plus the standard generators (regular hedgehog,
// area-uniform random, Fibonacci lattice).

#include "random.hpp"
#include "spin.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace spinframe {

/// An ordered tuple of N_s = (2s+1)^2 unit vectors ("spikes").  Order matters:
/// the tuple indexes the rows of the Gram matrix and the distance below is
/// index-wise, not set-wise.
class Constellation {
public:
    Constellation(SpinLabel s, std::vector<UnitVector> vectors, std::string label = "")
        : s_(s), vectors_(std::move(vectors)), label_(std::move(label)) {
        if (static_cast<int>(vectors_.size()) != s_.n_points())
            throw std::invalid_argument("Constellation: expected (2s+1)^2 = " +
                                        std::to_string(s_.n_points()) + " vectors, got " +
                                        std::to_string(vectors_.size()));
    }

    SpinLabel spin() const { return s_; }
    std::size_t size() const { return vectors_.size(); }
    const std::vector<UnitVector>& vectors() const { return vectors_; }
    const UnitVector& operator[](std::size_t i) const { return vectors_[i]; }
    const std::string& label() const { return label_; }

private:
    SpinLabel s_;
    std::vector<UnitVector> vectors_;
    std::string label_;
};

/// Regular hedgehog: 2s+1 cones of 2s+1 spikes each.
///
/// Cone a (a = 0..2s) sits at polar angle theta_a, default pi(a+1)/(2s+2);
/// its spikes sit at azimuths offset_a + 2 pi b/(2s+1) (b = 0..2s), default
/// offset_a = a pi / N_s.  Index order is cone-major: n = a(2s+1) + b.
/// The default constellation maps onto itself under rotation by 2 pi/(2s+1)
/// about z.  Cone angles must lie strictly inside (0, pi) and be pairwise
/// distinct; both lists, when given, must have length 2s+1.
inline Constellation regular_hedgehog(SpinLabel s,
                                      std::optional<std::vector<double>> cone_angles = std::nullopt,
                                      std::optional<std::vector<double>> azimuth_offsets = std::nullopt) {
    const int rings = s.dimension();  // 2s+1 cones
    const int per_ring = s.dimension();
    const double pi = std::numbers::pi;

    std::vector<double> angles;
    if (cone_angles) {
        angles = *cone_angles;
        if (static_cast<int>(angles.size()) != rings)
            throw std::invalid_argument("regular_hedgehog: need 2s+1 cone angles");
    } else {
        for (int a = 0; a < rings; ++a)
            angles.push_back(pi * (a + 1) / (s.doubled() + 2));
    }
    for (int a = 0; a < rings; ++a) {
        if (!(angles[a] > 0.0 && angles[a] < pi))
            throw std::invalid_argument("regular_hedgehog: cone angles must lie in (0, pi)");
        for (int b = 0; b < a; ++b)
            if (angles[a] == angles[b])
                throw std::invalid_argument("regular_hedgehog: cone angles must be distinct");
    }

    std::vector<double> offsets;
    if (azimuth_offsets) {
        offsets = *azimuth_offsets;
        if (static_cast<int>(offsets.size()) != rings)
            throw std::invalid_argument("regular_hedgehog: need 2s+1 azimuth offsets");
    } else {
        for (int a = 0; a < rings; ++a)
            offsets.push_back(a * pi / s.n_points());
    }

    std::vector<UnitVector> v;
    v.reserve(s.n_points());
    for (int a = 0; a < rings; ++a)
        for (int b = 0; b < per_ring; ++b)
            v.push_back(UnitVector::from_spherical(angles[a], offsets[a] + 2.0 * pi * b / per_ring));
    return Constellation(s, std::move(v), "regular");
}

/// N_s independent area-uniform sphere points from a seeded stream.
inline Constellation random_constellation(SpinLabel s, std::uint64_t seed) {
    RandomStream rng(seed);
    std::vector<UnitVector> v;
    v.reserve(s.n_points());
    for (int i = 0; i < s.n_points(); ++i) v.push_back(rng.sphere_point());
    return Constellation(s, std::move(v), "random");
}

/// Deterministic well-spread constellation: the Fibonacci (golden-angle)
/// spherical lattice with N_s nodes.
inline Constellation fibonacci_constellation(SpinLabel s) {
    const int n = s.n_points();
    const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
    std::vector<UnitVector> v;
    v.reserve(n);
    for (int i = 0; i < n; ++i) {
        const double z = 1.0 - (2.0 * i + 1.0) / n;
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = golden_angle * i;
        v.push_back(UnitVector(r * std::cos(phi), r * std::sin(phi), z));
    }
    return Constellation(s, std::move(v), "fibonacci");
}

/// Index-wise distance sum_n |a_n - b_n| between two constellations of the
/// same spin.  A metric on ordered tuples: zero iff equal index-by-index.
inline double distance(const Constellation& a, const Constellation& b) {
    if (a.spin() != b.spin())
        throw std::invalid_argument("distance: constellations have different spin");
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        d += (a[i].vec() - b[i].vec()).norm();
    return d;
}

/// Copy of M with vector `index` replaced (label preserved).
inline Constellation replace_vector(const Constellation& M, int index, const UnitVector& v) {
    if (index < 0 || index >= static_cast<int>(M.size()))
        throw std::out_of_range("replace_vector: index out of range");
    std::vector<UnitVector> vecs = M.vectors();
    vecs[static_cast<std::size_t>(index)] = v;
    return Constellation(M.spin(), std::move(vecs), M.label());
}

}  // namespace spinframe
