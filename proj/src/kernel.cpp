#include "fskde/kernel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fskde {

double wrap_angle(double theta) {
    if (!std::isfinite(theta)) {
        throw std::invalid_argument("wrap_angle: angle must be finite");
    }
    double t = theta - kTwoPi * std::floor((theta + kPi) / kTwoPi);
    // floor rounding can land exactly on +pi; fold it back
    if (t >= kPi) t -= kTwoPi;
    if (t < -kPi) t += kTwoPi;
    return t;
}

TruncationMask truncation_mask(int order, double epsilon) {
    if (order < 0) {
        throw std::invalid_argument("truncation_mask: order must be >= 0");
    }
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw std::invalid_argument("truncation_mask: epsilon must lie in (0, 1)");
    }
    TruncationMask mask;
    mask.order = order;
    mask.epsilon = epsilon;
    if (order == 0) {
        mask.cutoff = 0;
        return mask;
    }
    const double k_real = std::sqrt(static_cast<double>(order) * std::log(1.0 / epsilon));
    int cutoff = static_cast<int>(std::floor(k_real));
    // make the closed form consistent with the retention predicate at ties
    auto kept = [&](int k) {
        return std::exp(-static_cast<double>(k) * k / order) >= epsilon;
    };
    while (cutoff + 1 <= order && kept(cutoff + 1)) ++cutoff;
    while (cutoff > 0 && !kept(cutoff)) --cutoff;
    if (cutoff > order) cutoff = order;
    mask.cutoff = cutoff;
    return mask;
}

Kernel Kernel::make(int order, KernelMode mode) {
    if (order < 0) {
        throw std::invalid_argument("Kernel::make: order must be >= 0, got " +
                                    std::to_string(order));
    }
    Kernel k;
    k.order_ = order;
    k.mode_ = mode;

    // C_K = 2^(2K-1) / (binom(2K, K) * pi), via log-gamma to avoid overflow
    const double log_binom_central =
        std::lgamma(2.0 * order + 1.0) - 2.0 * std::lgamma(order + 1.0);
    k.norm_const_ =
        std::exp((2.0 * order - 1.0) * std::log(2.0) - log_binom_central) / kPi;

    k.coeffs_.resize(order + 1);
    k.coeffs_[0] = 1.0 / kTwoPi;  // H_0 in both modes
    if (mode == KernelMode::Exact) {
        // H_{j+1} = H_j * (K-j)/(K+j+1)
        for (int j = 0; j < order; ++j) {
            k.coeffs_[j + 1] =
                k.coeffs_[j] * static_cast<double>(order - j) / (order + j + 1);
        }
    } else {
        for (int j = 1; j <= order; ++j) {
            k.coeffs_[j] =
                std::exp(-static_cast<double>(j) * j / order) / kTwoPi;
        }
    }
    return k;
}

Kernel Kernel::make(int order) {
    return make(order, 2 * order >= 80 ? KernelMode::NormalApprox
                                       : KernelMode::Exact);
}

double Kernel::coeff(int k) const {
    int a = k < 0 ? -k : k;
    if (a > order_) return 0.0;
    return coeffs_[a];
}

double Kernel::eval(double theta) const {
    const double t = wrap_angle(theta);
    if (mode_ == KernelMode::Exact) {
        const double c = std::cos(0.5 * t);
        return norm_const_ * std::pow(c * c, static_cast<double>(order_));
    }
    // real synthesis: H_0 + 2 sum_k H_k cos(k theta)
    double acc = coeffs_[0];
    for (int k = 1; k <= order_; ++k) {
        acc += 2.0 * coeffs_[k] * std::cos(k * t);
    }
    return acc;
}

std::vector<std::complex<double>> Kernel::derivative_coeffs(int n) const {
    if (n < 0) {
        throw std::invalid_argument("derivative_coeffs: n must be >= 0");
    }
    // (ik)^n = i^n * k^n; i^n cycles through {1, i, -1, -i}
    static const std::complex<double> i_pow[4] = {
        {1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};
    const std::complex<double> in = i_pow[n % 4];

    std::vector<std::complex<double>> out(2 * order_ + 1);
    for (int k = -order_; k <= order_; ++k) {
        const double kn = std::pow(static_cast<double>(k), static_cast<double>(n));
        out[k + order_] = in * kn * coeff(k);
    }
    return out;
}

}  // namespace fskde
