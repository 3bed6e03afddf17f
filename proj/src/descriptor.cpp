#include "fskde/descriptor.hpp"

#include <cmath>
#include <stdexcept>

namespace fskde {

AngleWeightSet AngleWeightSet::make(std::vector<double> angles,
                                    std::vector<double> weights) {
    if (angles.size() != weights.size()) {
        throw std::invalid_argument(
            "AngleWeightSet: angles and weights must have equal length");
    }
    if (angles.empty()) {
        throw std::invalid_argument("AngleWeightSet: set must be non-empty");
    }
    for (double& a : angles) a = wrap_angle(a);
    for (double w : weights) {
        if (!(w >= 0.0) || !std::isfinite(w)) {
            throw std::invalid_argument(
                "AngleWeightSet: weights must be finite and >= 0");
        }
    }
    AngleWeightSet s;
    s.angles = std::move(angles);
    s.weights = std::move(weights);
    return s;
}

AngleWeightSet AngleWeightSet::rotated(double phi) const {
    AngleWeightSet out = *this;
    for (double& a : out.angles) a = wrap_angle(a + phi);
    return out;
}

Descriptor::Descriptor(std::vector<std::complex<double>> one_sided,
                       std::optional<TruncationMask> trunc)
    : coeffs_(std::move(one_sided)), trunc_(std::move(trunc)) {
    if (coeffs_.empty()) {
        throw std::invalid_argument("Descriptor: needs at least F_0");
    }
}

std::complex<double> Descriptor::coeff(int k) const {
    int a = k < 0 ? -k : k;
    if (a >= static_cast<int>(coeffs_.size())) return {0.0, 0.0};
    return k < 0 ? std::conj(coeffs_[a]) : coeffs_[a];
}

Descriptor estimate(const AngleWeightSet& samples, const Kernel& kernel) {
    const std::size_t n = samples.size();
    if (n == 0) {
        throw std::invalid_argument("estimate: empty sample set");
    }
    const int order = kernel.order();
    std::vector<std::complex<double>> sums(order + 1, {0.0, 0.0});
    for (std::size_t i = 0; i < n; ++i) {
        // accumulate w e^{-ik theta} by repeated multiplication; one exp per
        // sample instead of one per (sample, k)
        const std::complex<double> z = std::polar(1.0, -samples.angles[i]);
        std::complex<double> cur(samples.weights[i], 0.0);
        for (int k = 0; k <= order; ++k) {
            sums[k] += cur;
            cur *= z;
        }
    }
    std::vector<std::complex<double>> coeffs(order + 1);
    for (int k = 0; k <= order; ++k) {
        coeffs[k] = kernel.coeff(k) / static_cast<double>(n) * sums[k];
    }
    return Descriptor(std::move(coeffs));
}

double evaluate(const Descriptor& d, double theta) {
    const double t = wrap_angle(theta);
    const auto& f = d.coeffs();
    double acc = f[0].real();
    for (int k = 1; k <= d.order(); ++k) {
        acc += 2.0 * (f[k] * std::polar(1.0, k * t)).real();
    }
    return acc;
}

Descriptor rotate(const Descriptor& d, double phi) {
    std::vector<std::complex<double>> out(d.coeffs());
    for (int k = 1; k < static_cast<int>(out.size()); ++k) {
        out[k] *= std::polar(1.0, -k * phi);
    }
    return Descriptor(std::move(out), d.truncation());
}

static double coeff_sq_distance(const Descriptor& a, const Descriptor& b) {
    const int order = std::max(a.order(), b.order());
    double acc = std::norm(a.coeff(0) - b.coeff(0));
    for (int k = 1; k <= order; ++k) {
        acc += 2.0 * std::norm(a.coeff(k) - b.coeff(k));
    }
    return acc;
}

double distance(const Descriptor& a, const Descriptor& b) {
    return std::sqrt(kTwoPi * coeff_sq_distance(a, b));
}

double coeff_distance(const Descriptor& a, const Descriptor& b) {
    return std::sqrt(coeff_sq_distance(a, b));
}

double coeff_norm(const Descriptor& d) {
    double acc = std::norm(d.coeff(0));
    for (int k = 1; k <= d.order(); ++k) acc += 2.0 * std::norm(d.coeff(k));
    return std::sqrt(acc);
}

Descriptor truncate(const Descriptor& d, const TruncationMask& mask) {
    if (mask.order != d.order()) {
        throw std::invalid_argument(
            "truncate: mask order does not match descriptor order");
    }
    std::vector<std::complex<double>> out(d.coeffs());
    for (int k = mask.cutoff + 1; k < static_cast<int>(out.size()); ++k) {
        out[k] = {0.0, 0.0};
    }
    return Descriptor(std::move(out), mask);
}

}  // namespace fskde
