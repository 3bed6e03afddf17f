#pragma once

#include <complex>
#include <vector>

namespace fskde {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Reduce an angle to [-pi, pi). Throws std::invalid_argument on non-finite input.
double wrap_angle(double theta);

enum class KernelMode { Exact, NormalApprox };

/// Coefficient-retention rule: k is kept iff exp(-k^2/K) >= epsilon.
struct TruncationMask {
    int order = 0;      // K of the kernel this mask was built for
    int cutoff = 0;     // largest |k| retained, <= order
    double epsilon = 0.0;

    bool keeps(int k) const { return k >= -cutoff && k <= cutoff; }
    /// Number of one-sided complex coefficients retained (k = 0..cutoff).
    int retained() const { return cutoff + 1; }
};

TruncationMask truncation_mask(int order, double epsilon);

/// The cos^2K angular kernel h(theta) = C_K cos^2K(theta/2).
///
/// Bandlimited: h(theta) = sum_{k=-K..K} H_k e^{ik theta} with
/// H_k = C_K * binom(2K, K+k) / 2^2K and C_K = 2^(2K-1) / (binom(2K,K) * pi).
/// Coefficients are stored one-sided (H_k = H_{-k}); all are computed through
/// the ratio recurrence H_{k+1} = H_k * (K-k)/(K+k+1) so no binomial is ever
/// formed explicitly. NormalApprox replaces H_k with exp(-k^2/K)/(2pi).
class Kernel {
public:
    static Kernel make(int order, KernelMode mode);
    /// Mode picked by the 2K >= 80 rule: NormalApprox for large orders.
    static Kernel make(int order);

    int order() const { return order_; }
    KernelMode mode() const { return mode_; }
    double norm_const() const { return norm_const_; }

    /// H_k for any k; zero outside [-K, K].
    double coeff(int k) const;
    /// One-sided coefficients H_0..H_K.
    const std::vector<double>& coeffs() const { return coeffs_; }

    /// Kernel density at theta. Exact mode evaluates C_K cos^2K(theta/2)
    /// directly; NormalApprox synthesizes the Fourier series.
    double eval(double theta) const;

    /// Fourier coefficients (ik)^n H_k of the n-th derivative, k = -K..K
    /// (index i maps to k = i - K).
    std::vector<std::complex<double>> derivative_coeffs(int n) const;

private:
    Kernel() = default;

    int order_ = 0;
    KernelMode mode_ = KernelMode::Exact;
    double norm_const_ = 0.0;
    std::vector<double> coeffs_;  // H_0..H_K
};

}  // namespace fskde
