#pragma once

#include "fskde/kernel.hpp"

#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

namespace fskde {

/// A weighted multiset of angles. Angles are wrapped to [-pi, pi) on
/// construction; weights must be finite and nonnegative.
struct AngleWeightSet {
    std::vector<double> angles;
    std::vector<double> weights;

    static AngleWeightSet make(std::vector<double> angles,
                               std::vector<double> weights);

    std::size_t size() const { return angles.size(); }

    /// All angles shifted by phi (wrapped).
    AngleWeightSet rotated(double phi) const;
};

/// Fourier coefficients F_0..F_K of an FS-KDE. F_{-k} = conj(F_k) is implied,
/// so only the one-sided half is stored: K+1 complex values, the storage of a
/// 2(K+1)-bin histogram.
class Descriptor {
public:
    Descriptor() = default;
    explicit Descriptor(std::vector<std::complex<double>> one_sided,
                        std::optional<TruncationMask> trunc = std::nullopt);

    int order() const { return static_cast<int>(coeffs_.size()) - 1; }
    const std::vector<std::complex<double>>& coeffs() const { return coeffs_; }

    /// Two-sided access: coeff(-k) = conj(coeff(k)); zero outside [-K, K].
    std::complex<double> coeff(int k) const;

    const std::optional<TruncationMask>& truncation() const { return trunc_; }

private:
    std::vector<std::complex<double>> coeffs_;  // k = 0..K
    std::optional<TruncationMask> trunc_;
};

/// F_k = H_k / N * sum_n w_n e^{-ik theta_n}, k = 0..K.
/// The division is by the sample count N, not the weight sum.
Descriptor estimate(const AngleWeightSet& samples, const Kernel& kernel);

/// Density synthesis f(theta) = F_0 + 2 sum_{k>=1} Re(F_k e^{ik theta}).
double evaluate(const Descriptor& d, double theta);

/// Rotation by phi: F'_k = e^{-ik phi} F_k, so that
/// evaluate(rotate(d, phi), theta) == evaluate(d, theta - phi).
Descriptor rotate(const Descriptor& d, double phi);

/// Parseval distance sqrt(2pi * sum_{k=-K..K} |F_k - G_k|^2) == the L2
/// distance of the synthesized densities. Descriptors of different order are
/// compared by zero-padding the shorter one.
double distance(const Descriptor& a, const Descriptor& b);

/// Two-sided coefficient-space distance sqrt(sum_{k=-K..K} |F_k - G_k|^2),
/// i.e. distance() without the 2pi factor.
double coeff_distance(const Descriptor& a, const Descriptor& b);

/// Plain coefficient-space norm sqrt(sum_{k=-K..K} |F_k|^2).
double coeff_norm(const Descriptor& d);

/// Zeroes every F_k with |k| > mask.cutoff and records the mask.
/// mask.order must equal d.order().
Descriptor truncate(const Descriptor& d, const TruncationMask& mask);

}  // namespace fskde
