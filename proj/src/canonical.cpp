#include "fskde/canonical.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace fskde {

namespace {

// arg with the imaginary part normalized so that -0.0 does not flip a real
// negative value from +pi to -pi; keeps the tie at the positive endpoint
double principal_arg(std::complex<double> z) {
    return std::atan2(z.imag() + 0.0, z.real());
}

// applies F_k *= e^{-ik phi} in place over one-sided storage
void apply_rotation(std::vector<std::complex<double>>& coeffs, double phi) {
    for (int k = 1; k < static_cast<int>(coeffs.size()); ++k) {
        coeffs[k] *= std::polar(1.0, -k * phi);
    }
}

}  // namespace

double degeneracy_threshold(const Descriptor& d) {
    return 1e-12 * (std::abs(d.coeff(0)) + std::numeric_limits<double>::min());
}

CanonicalDescriptor canonicalize_f1(const Descriptor& d) {
    return canonicalize_fk(d, 1);
}

CanonicalDescriptor canonicalize_fk(const Descriptor& d, int level) {
    if (level < 1 || level > d.order()) {
        throw std::invalid_argument(
            "canonicalize_fk: level must lie in [1, order]");
    }
    const double eps_zero = degeneracy_threshold(d);
    std::vector<std::complex<double>> coeffs(d.coeffs());

    CanonicalDescriptor out;
    out.level = level;
    for (int j = 1; j <= level; ++j) {
        const std::complex<double> fj = coeffs[j];
        if (std::abs(fj) < eps_zero) {
            out.degenerate = true;
            continue;
        }
        // j = 1 makes F_1 itself real; deeper levels take the principal
        // value arg/j in (-pi/j, pi/j], the smallest rotation making F_j real
        const double phi = principal_arg(fj) / j;
        apply_rotation(coeffs, phi);
        out.applied_rotation += phi;
    }
    out.base = Descriptor(std::move(coeffs), d.truncation());
    return out;
}

double canonical_distance_fk(const Descriptor& a, const Descriptor& b) {
    if (a.order() != b.order()) {
        throw std::invalid_argument(
            "canonical_distance_fk: descriptors must have equal order");
    }
    const int order = a.order();
    const double eps_a = degeneracy_threshold(a);
    const double eps_b = degeneracy_threshold(b);

    // run both recursions once, taking the distance at each usable level
    std::vector<std::complex<double>> ca(a.coeffs());
    std::vector<std::complex<double>> cb(b.coeffs());
    bool any_level = false;
    double best = 0.0;
    for (int j = 1; j <= order; ++j) {
        const bool deg_a = std::abs(ca[j]) < eps_a;
        const bool deg_b = std::abs(cb[j]) < eps_b;
        if (!deg_a) apply_rotation(ca, principal_arg(ca[j]) / j);
        if (!deg_b) apply_rotation(cb, principal_arg(cb[j]) / j);
        if (deg_a || deg_b) continue;

        double acc = std::norm(ca[0] - cb[0]);
        for (int k = 1; k <= order; ++k) acc += 2.0 * std::norm(ca[k] - cb[k]);
        const double dist = std::sqrt(kTwoPi * acc);
        if (!any_level || dist < best) best = dist;
        any_level = true;
    }
    return any_level ? best : distance(a, b);
}

std::pair<double, double> min_distance_search(const Descriptor& a,
                                              const Descriptor& b,
                                              int grid_size) {
    if (grid_size < 8) {
        throw std::invalid_argument("min_distance_search: grid_size must be >= 8");
    }
    auto dist_at = [&](double phi) { return distance(a, rotate(b, phi)); };

    // phi = 0 is always a candidate so the result never exceeds distance(a, b)
    double best_phi = 0.0;
    double best = dist_at(0.0);
    for (int i = 0; i < grid_size; ++i) {
        const double phi = -kPi + kTwoPi * i / grid_size;
        const double v = dist_at(phi);
        if (v < best) {
            best = v;
            best_phi = phi;
        }
    }

    // golden-section refinement inside the bracketing cells
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = best_phi - kTwoPi / grid_size;
    double hi = best_phi + kTwoPi / grid_size;
    double x1 = hi - gr * (hi - lo);
    double x2 = lo + gr * (hi - lo);
    double f1 = dist_at(x1);
    double f2 = dist_at(x2);
    while (hi - lo > 1e-10) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = dist_at(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = dist_at(x2);
        }
    }
    const double phi_min = 0.5 * (lo + hi);
    const double refined = dist_at(phi_min);
    if (refined <= best) return {refined, wrap_angle(phi_min)};
    return {best, wrap_angle(best_phi)};
}

}  // namespace fskde
