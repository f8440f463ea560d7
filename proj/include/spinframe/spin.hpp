#pragma once

// Basic value types: the spin quantum number and points on the unit sphere.

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>

namespace spinframe {

/// Spin quantum number s, stored exactly as the integer 2s.
///
/// s may be any non-negative integer or half-integer.  The associated
/// Hilbert space has dimension 2s+1 and the operator space has real
/// dimension N_s = (2s+1)^2.
class SpinLabel {
public:
    explicit SpinLabel(int doubled_spin) : doubled_(doubled_spin) {
        if (doubled_spin < 0)
            throw std::invalid_argument("SpinLabel: doubled spin must be non-negative");
    }

    /// Parse "1/2", "3/2", "2", ... (an integer, or an integer over 2).
    static SpinLabel parse(std::string_view text) {
        const std::string str(text);
        std::size_t pos = 0;
        long num = 0;
        try {
            num = std::stol(str, &pos);
        } catch (const std::exception&) {
            throw std::invalid_argument("SpinLabel: cannot parse spin '" + str + "'");
        }
        if (pos == str.size())
            return SpinLabel(static_cast<int>(2 * num));
        if (str[pos] == '/') {
            std::size_t pos2 = 0;
            long den = 0;
            const std::string rest = str.substr(pos + 1);
            try {
                den = std::stol(rest, &pos2);
            } catch (const std::exception&) {
                throw std::invalid_argument("SpinLabel: cannot parse spin '" + str + "'");
            }
            if (pos2 == rest.size() && den == 2)
                return SpinLabel(static_cast<int>(num));
            if (pos2 == rest.size() && den == 1)
                return SpinLabel(static_cast<int>(2 * num));
        }
        throw std::invalid_argument("SpinLabel: cannot parse spin '" + str + "'");
    }

    /// The integer 2s.
    int doubled() const { return doubled_; }
    /// Hilbert-space dimension 2s+1.
    int dimension() const { return doubled_ + 1; }
    /// Number of sphere directions N_s = (2s+1)^2 needed for an operator basis.
    int n_points() const { return dimension() * dimension(); }
    /// s as a floating-point value.
    double value() const { return 0.5 * doubled_; }

    /// Render as "1/2", "1", "3/2", ...
    std::string str() const {
        if (doubled_ % 2 == 0) return std::to_string(doubled_ / 2);
        return std::to_string(doubled_) + "/2";
    }

    friend bool operator==(SpinLabel a, SpinLabel b) { return a.doubled_ == b.doubled_; }
    friend bool operator!=(SpinLabel a, SpinLabel b) { return !(a == b); }

private:
    int doubled_;
};

/// A point on the unit sphere S^2.  Construction normalizes, so the unit-norm
/// invariant holds by type; zero or non-finite input is rejected.
class UnitVector {
public:
    /// Default: the north pole +z.
    UnitVector() : v_(0.0, 0.0, 1.0) {}

    UnitVector(double x, double y, double z) : v_(x, y, z) { normalize_(); }

    explicit UnitVector(const Eigen::Vector3d& v) : v_(v) { normalize_(); }

    /// Build from spherical angles (polar theta from +z, azimuth phi from +x).
    static UnitVector from_spherical(double theta, double phi) {
        const double st = std::sin(theta);
        return UnitVector(st * std::cos(phi), st * std::sin(phi), std::cos(theta));
    }

    double x() const { return v_.x(); }
    double y() const { return v_.y(); }
    double z() const { return v_.z(); }
    const Eigen::Vector3d& vec() const { return v_; }

    double dot(const UnitVector& o) const { return v_.dot(o.v_); }

    /// Polar angle in [0, pi], computed as atan2(hypot(x,y), z).
    double polar() const { return std::atan2(std::hypot(v_.x(), v_.y()), v_.z()); }

    /// Azimuth in (-pi, pi]; exactly 0 at the poles (canonical choice).
    double azimuth() const {
        if (v_.x() == 0.0 && v_.y() == 0.0) return 0.0;
        return std::atan2(v_.y(), v_.x());
    }

    friend bool operator==(const UnitVector& a, const UnitVector& b) {
        return a.v_ == b.v_;
    }
    friend bool operator!=(const UnitVector& a, const UnitVector& b) { return !(a == b); }

private:
    void normalize_() {
        const double n = v_.norm();
        if (!(n > 0.0) || !std::isfinite(n))
            throw std::invalid_argument("UnitVector: zero or non-finite vector");
        v_ /= n;
    }

    Eigen::Vector3d v_;
};

}  // namespace spinframe
