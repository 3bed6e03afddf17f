#include "fskde/bench.hpp"

#include "fskde/canonical.hpp"
#include "fskde/io.hpp"
#include "fskde/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fskde {

namespace fs = std::filesystem;

PatchDataset load_dataset(const std::string& manifest_path) {
    std::ifstream mf(manifest_path);
    if (!mf) throw IoError("cannot open manifest: " + manifest_path);
    nlohmann::json j;
    try {
        mf >> j;
    } catch (const nlohmann::json::exception& e) {
        throw IoError("bad manifest JSON: " + std::string(e.what()));
    }
    if (!j.contains("patch_dir") || !j.contains("pairs_file")) {
        throw IoError("manifest must name patch_dir and pairs_file");
    }
    const fs::path base = fs::path(manifest_path).parent_path();
    auto resolve = [&](const std::string& p) {
        fs::path q(p);
        return q.is_absolute() ? q : base / q;
    };
    const fs::path patch_dir = resolve(j["patch_dir"].get<std::string>());
    const fs::path pairs_file = resolve(j["pairs_file"].get<std::string>());
    const int patch_size = j.value("patch_size", 0);

    if (!fs::is_directory(patch_dir)) {
        throw IoError("patch_dir does not exist: " + patch_dir.string());
    }

    PatchDataset ds;
    ds.patch_size = patch_size;
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(patch_dir)) {
        if (!entry.is_regular_file()) continue;
        const auto ext = entry.path().extension().string();
        if (ext == ".pgm" || ext == ".png") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& file : files) {
        Image img = read_image(file.string());
        if (img.width != img.height) {
            throw IoError("patch is not square: " + file.string());
        }
        if (ds.patch_size == 0) ds.patch_size = img.width;
        if (img.width != ds.patch_size) {
            throw IoError("patch size mismatch (" + std::to_string(img.width) +
                          " vs " + std::to_string(ds.patch_size) +
                          "): " + file.string());
        }
        const std::string id = file.stem().string();
        ds.index.emplace(id, static_cast<int>(ds.patches.size()));
        ds.ids.push_back(id);
        ds.patches.push_back(std::move(img));
    }

    std::ifstream pf(pairs_file);
    if (!pf) throw IoError("cannot open pairs file: " + pairs_file.string());
    std::string line;
    int lineno = 0;
    while (std::getline(pf, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string ida, idb;
        int label = -1;
        if (!(ss >> ida >> idb >> label) || (label != 0 && label != 1)) {
            throw IoError("pairs file line " + std::to_string(lineno) +
                          ": expected 'idA idB 0|1'");
        }
        const auto ita = ds.index.find(ida);
        const auto itb = ds.index.find(idb);
        if (ita == ds.index.end() || itb == ds.index.end()) {
            throw IoError("pairs file line " + std::to_string(lineno) +
                          ": unknown patch id");
        }
        ds.pairs.push_back({ita->second, itb->second, label == 1});
    }
    return ds;
}

HistogramDescriptor hist_descriptor(const Image& patch, int bins,
                                    int mask_diameter) {
    if (bins < 2) throw std::invalid_argument("hist_descriptor: need >= 2 bins");
    const AngleWeightSet set = masked_gradient_set(patch, mask_diameter);
    HistogramDescriptor h;
    h.bins.assign(bins, 0.0);
    for (std::size_t i = 0; i < set.size(); ++i) {
        // angles are wrapped to [-pi, pi); hard assignment, no interpolation
        int b = static_cast<int>((set.angles[i] + kPi) * bins / kTwoPi);
        if (b >= bins) b = bins - 1;
        if (b < 0) b = 0;
        h.bins[b] += set.weights[i];
    }
    return h;
}

HistogramDescriptor canonical_hist(const HistogramDescriptor& h) {
    const int n = static_cast<int>(h.bins.size());
    int shift = 0;
    for (int s = 1; s < n; ++s) {
        if (h.bins[s] > h.bins[shift]) shift = s;
    }
    HistogramDescriptor out;
    out.bins.resize(n);
    for (int i = 0; i < n; ++i) out.bins[i] = h.bins[(i + shift) % n];
    return out;
}

double euclidean_distance(const std::vector<double>& a,
                          const std::vector<double>& b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("euclidean_distance: length mismatch");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return std::sqrt(acc);
}

double roc_auc(const std::vector<double>& pos_distances,
               const std::vector<double>& neg_distances) {
    if (pos_distances.empty() || neg_distances.empty()) {
        throw std::invalid_argument("roc_auc: both classes must be non-empty");
    }
    std::vector<double> pos = pos_distances;
    std::vector<double> neg = neg_distances;
    std::sort(pos.begin(), pos.end());
    std::sort(neg.begin(), neg.end());

    // merge over distinct values; a positive scores when its distance is
    // below a negative's, half when equal
    double score = 0.0;
    std::size_t ip = 0, in = 0;
    std::size_t pos_below = 0;
    while (ip < pos.size() && in < neg.size()) {
        if (pos[ip] < neg[in]) {
            ++pos_below;
            ++ip;
        } else if (neg[in] < pos[ip]) {
            score += static_cast<double>(pos_below);
            ++in;
        } else {
            const double v = pos[ip];
            std::size_t tp = 0, tn = 0;
            while (ip < pos.size() && pos[ip] == v) ++ip, ++tp;
            while (in < neg.size() && neg[in] == v) ++in, ++tn;
            score += static_cast<double>(tn) *
                     (static_cast<double>(pos_below) + 0.5 * static_cast<double>(tp));
            pos_below += tp;
        }
    }
    score += static_cast<double>(neg.size() - in) * static_cast<double>(pos.size());
    return score / (static_cast<double>(pos.size()) * static_cast<double>(neg.size()));
}

BenchMethod parse_method(const std::string& name) {
    if (name == "intensity") return BenchMethod::Intensity;
    if (name == "hist") return BenchMethod::Hist;
    if (name == "hist_canon") return BenchMethod::HistCanon;
    if (name == "fskde") return BenchMethod::Fskde;
    if (name == "fskde_f1") return BenchMethod::FskdeF1;
    if (name == "fskde_fk") return BenchMethod::FskdeFk;
    throw std::invalid_argument("unknown benchmark method: " + name);
}

std::string method_name(BenchMethod m) {
    switch (m) {
        case BenchMethod::Intensity: return "intensity";
        case BenchMethod::Hist: return "hist";
        case BenchMethod::HistCanon: return "hist_canon";
        case BenchMethod::Fskde: return "fskde";
        case BenchMethod::FskdeF1: return "fskde_f1";
        case BenchMethod::FskdeFk: return "fskde_fk";
    }
    throw std::invalid_argument("unknown benchmark method enum");
}

int order_for_length(int target_real_length, double epsilon) {
    if (target_real_length < 2 || target_real_length % 2 != 0) {
        throw std::invalid_argument(
            "order_for_length: length must be a positive even number of reals");
    }
    const int cutoff = target_real_length / 2 - 1;
    if (cutoff == 0) return 1;
    // cutoff c is reached at K = max(c, ceil(c^2 / ln(1/eps))); scan a few
    // neighbors to absorb floor rounding at the boundary
    const double lg = std::log(1.0 / epsilon);
    const int guess = std::max(
        cutoff, static_cast<int>(std::ceil(cutoff * cutoff / lg)));
    for (int k = std::max(1, guess - 2); k <= guess + 2; ++k) {
        if (truncation_mask(k, epsilon).cutoff == cutoff) return k;
    }
    throw std::invalid_argument("order_for_length: no order reaches the target");
}

BenchReport run_benchmark(const PatchDataset& dataset, BenchMethod method,
                          int size_param, const BenchOptions& options) {
    if (dataset.patches.empty() || dataset.pairs.empty()) {
        throw std::invalid_argument("run_benchmark: dataset has no patches or pairs");
    }

    // patch rotations are per-patch deterministic so every method sees the
    // same rotated dataset for a given seed
    std::vector<Image> working;
    working.reserve(dataset.patches.size());
    for (std::size_t i = 0; i < dataset.patches.size(); ++i) {
        if (options.rotate) {
            Rng rng(Rng::derive(options.seed, i));
            working.push_back(
                rotate_bilinear(dataset.patches[i], rng.uniform(-kPi, kPi)));
        } else {
            working.push_back(dataset.patches[i]);
        }
    }

    BenchReport report;
    report.method = method_name(method);
    report.size_param = size_param;

    std::vector<double> pair_dist(dataset.pairs.size(), 0.0);

    if (method == BenchMethod::Intensity) {
        const auto mask = circular_mask_indices(
            dataset.patch_size, dataset.patch_size, options.mask_diameter);
        std::vector<std::vector<double>> desc(working.size());
        for (std::size_t i = 0; i < working.size(); ++i) {
            desc[i].reserve(mask.size());
            for (const auto& [x, y] : mask) desc[i].push_back(working[i].at(x, y));
        }
        report.real_length = static_cast<int>(mask.size());
        for (std::size_t p = 0; p < dataset.pairs.size(); ++p) {
            pair_dist[p] = euclidean_distance(desc[dataset.pairs[p].a],
                                              desc[dataset.pairs[p].b]);
        }
    } else if (method == BenchMethod::Hist || method == BenchMethod::HistCanon) {
        std::vector<std::vector<double>> desc(working.size());
        for (std::size_t i = 0; i < working.size(); ++i) {
            HistogramDescriptor h =
                hist_descriptor(working[i], size_param, options.mask_diameter);
            if (method == BenchMethod::HistCanon) h = canonical_hist(h);
            desc[i] = std::move(h.bins);
        }
        report.real_length = size_param;
        for (std::size_t p = 0; p < dataset.pairs.size(); ++p) {
            pair_dist[p] = euclidean_distance(desc[dataset.pairs[p].a],
                                              desc[dataset.pairs[p].b]);
        }
    } else {
        const int order = order_for_length(size_param, options.epsilon);
        const Kernel kernel = Kernel::make(order);
        const TruncationMask mask = truncation_mask(order, options.epsilon);
        report.real_length = 2 * mask.retained();

        std::vector<Descriptor> desc;
        desc.reserve(working.size());
        for (const auto& img : working) {
            Descriptor d =
                truncate(patch_descriptor(img, kernel, options.mask_diameter), mask);
            if (method == BenchMethod::FskdeF1) d = canonicalize_f1(d).base;
            desc.push_back(std::move(d));
        }
        for (std::size_t p = 0; p < dataset.pairs.size(); ++p) {
            const Descriptor& a = desc[dataset.pairs[p].a];
            const Descriptor& b = desc[dataset.pairs[p].b];
            pair_dist[p] = method == BenchMethod::FskdeFk
                               ? canonical_distance_fk(a, b)
                               : distance(a, b);
        }
    }

    std::vector<double> pos, neg;
    for (std::size_t p = 0; p < dataset.pairs.size(); ++p) {
        (dataset.pairs[p].corresponding ? pos : neg).push_back(pair_dist[p]);
    }
    report.n_pos = pos.size();
    report.n_neg = neg.size();
    report.auc = roc_auc(pos, neg);
    if (options.dump_distances) report.pair_distances = std::move(pair_dist);
    return report;
}

namespace {

// oriented band-limited texture: a few cosine gratings with directions
// concentrated around a dominant orientation, plus a weak ramp that breaks
// the antipodal symmetry of pure stripes
struct TextureParams {
    static constexpr int kGratings = 6;
    double dir[kGratings];
    double wavelength[kGratings];
    double phase[kGratings];
    double amp[kGratings];
    double ramp_amp = 0.0;
    double ramp_dir = 0.0;

    static TextureParams random(Rng& rng) {
        TextureParams t;
        const double alpha = rng.uniform(-kPi, kPi);
        for (int j = 0; j < kGratings; ++j) {
            t.dir[j] = alpha + rng.normal(0.0, 0.10);
            t.wavelength[j] = rng.uniform(5.0, 9.0);
            t.phase[j] = rng.uniform(0.0, kTwoPi);
            t.amp[j] = rng.uniform(0.4, 1.0);
        }
        t.ramp_amp = rng.uniform(0.05, 0.12);
        t.ramp_dir = alpha + rng.uniform(-0.3, 0.3);
        return t;
    }

    // value at canvas coordinates, normalized to roughly [-1, 1]
    double eval(double x, double y, double canvas_center) const {
        double acc = 0.0;
        double amp_sum = 0.0;
        for (int j = 0; j < kGratings; ++j) {
            const double u = x * std::cos(dir[j]) + y * std::sin(dir[j]);
            acc += amp[j] * std::cos(kTwoPi * u / wavelength[j] + phase[j]);
            amp_sum += amp[j];
        }
        acc /= amp_sum;
        const double rx = (x - canvas_center) * std::cos(ramp_dir) +
                          (y - canvas_center) * std::sin(ramp_dir);
        return acc + ramp_amp * rx / canvas_center;
    }
};

// renders one patch instance: sub-pixel shift and small rotation jitter of
// the shared texture plus i.i.d. pixel noise
Image render_instance(const TextureParams& tex, int patch_size, Rng& rng) {
    const double shift_x = rng.uniform(-1.5, 1.5);
    const double shift_y = rng.uniform(-1.5, 1.5);
    const double rot = rng.normal(0.0, 0.035);  // ~2 degrees
    const double noise_sigma = 9.0;             // gray levels

    const double c = 0.5 * (patch_size - 1);
    const double cr = std::cos(rot);
    const double sr = std::sin(rot);
    Image img = Image::zeros(patch_size, patch_size);
    for (int y = 0; y < patch_size; ++y) {
        for (int x = 0; x < patch_size; ++x) {
            const double dx = x - c;
            const double dy = y - c;
            const double sx = c + cr * dx + sr * dy + shift_x;
            const double sy = c - sr * dx + cr * dy + shift_y;
            const double v = tex.eval(sx, sy, c);
            img.at(x, y) = 127.5 + 90.0 * v + rng.normal(0.0, noise_sigma);
        }
    }
    return img;
}

}  // namespace

std::string generate_synthetic_dataset(const std::string& out_dir,
                                       const SyntheticOptions& options) {
    if (options.n_pairs < 1) {
        throw std::invalid_argument("generate_synthetic_dataset: n_pairs >= 1");
    }
    if (options.patch_size < 8) {
        throw std::invalid_argument("generate_synthetic_dataset: patch_size >= 8");
    }
    fs::create_directories(out_dir);
    const fs::path dir(out_dir);
    const fs::path patch_dir = dir / "patches";
    fs::create_directories(patch_dir);

    auto id_of = [](int idx) {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "%06d", idx);
        return std::string(buf);
    };

    std::ofstream pairs(dir / "pairs.txt");
    if (!pairs) throw IoError("cannot create pairs file in " + out_dir);

    const int n = options.n_pairs;
    for (int i = 0; i < n; ++i) {
        Rng tex_rng(Rng::derive(options.seed, 3 * static_cast<std::uint64_t>(i)));
        const TextureParams tex = TextureParams::random(tex_rng);
        Rng rng_a(Rng::derive(options.seed, 3 * static_cast<std::uint64_t>(i) + 1));
        Rng rng_b(Rng::derive(options.seed, 3 * static_cast<std::uint64_t>(i) + 2));
        const Image a = render_instance(tex, options.patch_size, rng_a);
        const Image b = render_instance(tex, options.patch_size, rng_b);
        const std::string id_a = id_of(2 * i);
        const std::string id_b = id_of(2 * i + 1);
        write_pgm(a, (patch_dir / (id_a + ".pgm")).string());
        write_pgm(b, (patch_dir / (id_b + ".pgm")).string());
        pairs << id_a << " " << id_b << " 1\n";
    }
    // non-corresponding: the A side of pair i against the B side of pair i+1
    for (int i = 0; i < n; ++i) {
        pairs << id_of(2 * i) << " " << id_of(2 * ((i + 1) % n) + 1) << " 0\n";
    }
    pairs.close();

    nlohmann::ordered_json manifest;
    manifest["patch_dir"] = "patches";
    manifest["pairs_file"] = "pairs.txt";
    manifest["patch_size"] = options.patch_size;
    const fs::path mpath = dir / "manifest.json";
    std::ofstream mf(mpath);
    if (!mf) throw IoError("cannot create manifest in " + out_dir);
    mf << manifest.dump(2) << "\n";
    return mpath.string();
}

}  // namespace fskde
