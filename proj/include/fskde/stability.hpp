#pragma once

#include "fskde/canonical.hpp"
#include "fskde/descriptor.hpp"
#include "fskde/rng.hpp"

#include <cstdint>
#include <vector>

namespace fskde {

/// Additive complex-normal perturbation of an angle-weight set: each sample's
/// real and imaginary parts receive i.i.d. N(0, sigma^2/n) noise.
struct NoiseModel {
    double sigma = 0.0;    // noise scale
    std::size_t n = 0;     // sample count N of the target set
    std::uint64_t rng_seed = 0;
};

/// B_k = C_K binom(2K, K+k) / (2^2K N), i.e. B_k * N == H_k.
struct BoundCoefficients {
    int order = 0;
    std::size_t n = 0;
    std::vector<double> b;  // k = 0..K

    double at(int k) const {
        int a = k < 0 ? -k : k;
        return a <= order ? b[a] : 0.0;
    }
};

BoundCoefficients bound_coefficients(const Kernel& kernel, std::size_t n);

/// Rescale weights so they sum to N and rotate angles so the circular mean
/// arg(sum w e^{i theta}) is zero. Identity on already-normalized sets.
AngleWeightSet normalize_for_stability(const AngleWeightSet& set);

/// Normalizes, converts each sample to w e^{i theta}, adds complex normal
/// noise with per-component variance sigma^2/N, converts back, then rescales
/// weights so they again sum exactly to N.
AngleWeightSet perturb(const AngleWeightSet& set, const NoiseModel& model);

/// The canonicalization-error bound evaluated at a given noise draw:
/// sqrt(sum_k (2 B_k N sin((k/2) atan(B_1 eps / (|F_1| + B_1 ups))))^2).
/// With quadrant_corrected the ratio's argument is taken by atan2, which
/// differs from the plain arctan by pi when the denominator is negative.
double bound_value(double f1_mag, const Kernel& kernel, double eps, double ups,
                   bool quadrant_corrected = false);

/// One Monte-Carlo draw of the bound: eps, ups ~ N(0, sigma^2).
double bound_sample(double f1_mag, double sigma, const Kernel& kernel,
                    std::size_t n, Rng& rng);

struct TrialRecord {
    double sigma = 0.0;
    int trial = 0;
    double noise_dist = 0.0;       // ||F - Fnoisy||
    double canon_dist = 0.0;       // ||Fnoisy - canonicalize_f1(Fnoisy)||
    double bound = 0.0;            // principal-arctan bound draw
    double bound_quadrant = 0.0;   // atan2 variant of the same draw
};

struct SigmaSummary {
    double sigma = 0.0;
    double mean_noise = 0.0, se_noise = 0.0;
    double mean_canon = 0.0, se_canon = 0.0;
    double mean_bound = 0.0, se_bound = 0.0;
    double mean_bound_quadrant = 0.0, se_bound_quadrant = 0.0;
};

struct RotationPoint {
    double phi = 0.0;
    double dist = 0.0;  // ||F - rotate(F, phi)||
};

/// All distances in the report are plain two-sided coefficient norms
/// (coeff_distance), the norm in which the canonicalization bound is stated.
struct SimulationReport {
    int order = 0;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    double f1_mag = 0.0;  // |F_1| of the normalized base set
    std::vector<TrialRecord> trials;
    std::vector<SigmaSummary> summaries;
    std::vector<RotationPoint> rotation_curve;  // 720 uniform phi points
};

/// Monte-Carlo stability run: for each sigma, `trials` independent noisy
/// copies with per-trial derived RNG streams (results do not depend on
/// evaluation order). sigma = 0 entries short-circuit to exact zeros.
SimulationReport simulate_stability(const AngleWeightSet& base,
                                    const Kernel& kernel,
                                    const std::vector<double>& sigmas,
                                    int trials, std::uint64_t seed);

}  // namespace fskde
