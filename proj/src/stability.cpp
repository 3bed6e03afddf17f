#include "fskde/stability.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace fskde {

BoundCoefficients bound_coefficients(const Kernel& kernel, std::size_t n) {
    if (n == 0) throw std::invalid_argument("bound_coefficients: n must be > 0");
    BoundCoefficients bc;
    bc.order = kernel.order();
    bc.n = n;
    bc.b.resize(kernel.order() + 1);
    for (int k = 0; k <= kernel.order(); ++k) {
        bc.b[k] = kernel.coeff(k) / static_cast<double>(n);
    }
    return bc;
}

AngleWeightSet normalize_for_stability(const AngleWeightSet& set) {
    const std::size_t n = set.size();
    double wsum = 0.0;
    std::complex<double> mean(0.0, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        wsum += set.weights[i];
        mean += set.weights[i] * std::polar(1.0, set.angles[i]);
    }
    if (!(wsum > 0.0)) {
        throw std::invalid_argument(
            "normalize_for_stability: weights must not all be zero");
    }
    const double scale = static_cast<double>(n) / wsum;
    // arg(0) = 0: a fully symmetric set keeps its angles
    const double mean_angle = std::atan2(mean.imag(), mean.real());

    AngleWeightSet out = set;
    for (std::size_t i = 0; i < n; ++i) {
        out.weights[i] *= scale;
        out.angles[i] = wrap_angle(out.angles[i] - mean_angle);
    }
    return out;
}

AngleWeightSet perturb(const AngleWeightSet& set, const NoiseModel& model) {
    if (!(model.sigma > 0.0)) {
        throw std::invalid_argument("perturb: sigma must be > 0");
    }
    if (model.n != set.size()) {
        throw std::invalid_argument("perturb: model.n must match the set size");
    }
    const std::size_t n = set.size();
    AngleWeightSet base = normalize_for_stability(set);

    Rng rng(model.rng_seed);
    const double comp_std = model.sigma / std::sqrt(static_cast<double>(n));
    std::vector<double> angles(n), weights(n);
    double wsum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::complex<double> z =
            base.weights[i] * std::polar(1.0, base.angles[i]) +
            std::complex<double>(rng.normal(0.0, comp_std),
                                 rng.normal(0.0, comp_std));
        weights[i] = std::abs(z);
        angles[i] = weights[i] > 0.0 ? std::atan2(z.imag(), z.real()) : 0.0;
        wsum += weights[i];
    }
    if (wsum > 0.0) {
        const double alpha = static_cast<double>(n) / wsum;
        for (double& w : weights) w *= alpha;
    }
    return AngleWeightSet::make(std::move(angles), std::move(weights));
}

double bound_value(double f1_mag, const Kernel& kernel, double eps, double ups,
                   bool quadrant_corrected) {
    if (f1_mag < 0.0) {
        throw std::invalid_argument("bound_value: f1_mag must be >= 0");
    }
    const double b1_num = kernel.coeff(1);  // B_1 N == H_1
    const double num = b1_num * eps;
    const double den = f1_mag + b1_num * ups;
    const double t = quadrant_corrected
                         ? std::atan2(num, den)
                         : (den == 0.0 ? (num == 0.0 ? 0.0 : kPi / 2 * (num > 0 ? 1 : -1))
                                       : std::atan(num / den));
    double acc = 0.0;
    for (int k = 1; k <= kernel.order(); ++k) {
        const double term = 2.0 * kernel.coeff(k) * std::sin(0.5 * k * t);
        acc += 2.0 * term * term;  // k and -k contribute equally; k = 0 is zero
    }
    return std::sqrt(acc);
}

double bound_sample(double f1_mag, double sigma, const Kernel& kernel,
                    std::size_t n, Rng& rng) {
    if (!(sigma > 0.0)) throw std::invalid_argument("bound_sample: sigma must be > 0");
    if (n == 0) throw std::invalid_argument("bound_sample: n must be > 0");
    const double eps = rng.normal(0.0, sigma);
    const double ups = rng.normal(0.0, sigma);
    return bound_value(f1_mag, kernel, eps, ups, false);
}

namespace {

struct RunningStats {
    double sum = 0.0;
    double sum_sq = 0.0;
    long count = 0;
    void add(double v) {
        sum += v;
        sum_sq += v * v;
        ++count;
    }
    double mean() const { return count ? sum / count : 0.0; }
    double stderror() const {
        if (count < 2) return 0.0;
        const double m = mean();
        const double var = (sum_sq - count * m * m) / (count - 1);
        return std::sqrt(std::max(var, 0.0) / count);
    }
};

}  // namespace

SimulationReport simulate_stability(const AngleWeightSet& base,
                                    const Kernel& kernel,
                                    const std::vector<double>& sigmas,
                                    int trials, std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("simulate_stability: trials >= 1");
    const AngleWeightSet clean = normalize_for_stability(base);
    const std::size_t n = clean.size();
    const Descriptor f = estimate(clean, kernel);
    const double f1_mag = std::abs(f.coeff(1));

    SimulationReport report;
    report.order = kernel.order();
    report.n = n;
    report.seed = seed;
    report.f1_mag = f1_mag;

    for (std::size_t si = 0; si < sigmas.size(); ++si) {
        const double sigma = sigmas[si];
        if (sigma < 0.0) {
            throw std::invalid_argument("simulate_stability: sigma must be >= 0");
        }
        RunningStats s_noise, s_canon, s_bound, s_bound_q;
        const std::uint64_t sigma_key = Rng::derive(seed, si);
        for (int t = 0; t < trials; ++t) {
            TrialRecord rec;
            rec.sigma = sigma;
            rec.trial = t;
            if (sigma == 0.0) {
                // exact copy; canonicalization is the identity on a set whose
                // mean angle is already zero
                rec.noise_dist = 0.0;
                rec.canon_dist = 0.0;
                rec.bound = 0.0;
                rec.bound_quadrant = 0.0;
            } else {
                NoiseModel model{sigma, n, Rng::derive(sigma_key, 2 * t)};
                const AngleWeightSet noisy_set = perturb(clean, model);
                const Descriptor fn = estimate(noisy_set, kernel);
                rec.noise_dist = coeff_distance(f, fn);
                rec.canon_dist = coeff_distance(fn, canonicalize_f1(fn).base);

                Rng brng(Rng::derive(sigma_key, 2 * t + 1));
                const double eps = brng.normal(0.0, sigma);
                const double ups = brng.normal(0.0, sigma);
                rec.bound = bound_value(f1_mag, kernel, eps, ups, false);
                rec.bound_quadrant = bound_value(f1_mag, kernel, eps, ups, true);
            }
            s_noise.add(rec.noise_dist);
            s_canon.add(rec.canon_dist);
            s_bound.add(rec.bound);
            s_bound_q.add(rec.bound_quadrant);
            report.trials.push_back(rec);
        }
        SigmaSummary sum;
        sum.sigma = sigma;
        sum.mean_noise = s_noise.mean();
        sum.se_noise = s_noise.stderror();
        sum.mean_canon = s_canon.mean();
        sum.se_canon = s_canon.stderror();
        sum.mean_bound = s_bound.mean();
        sum.se_bound = s_bound.stderror();
        sum.mean_bound_quadrant = s_bound_q.mean();
        sum.se_bound_quadrant = s_bound_q.stderror();
        report.summaries.push_back(sum);
    }

    const int curve_points = 720;
    report.rotation_curve.reserve(curve_points);
    for (int i = 0; i < curve_points; ++i) {
        const double phi = -kPi + kTwoPi * i / curve_points;
        report.rotation_curve.push_back({phi, coeff_distance(f, rotate(f, phi))});
    }
    return report;
}

}  // namespace fskde
