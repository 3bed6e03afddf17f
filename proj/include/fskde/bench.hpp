#pragma once

#include "fskde/descriptor.hpp"
#include "fskde/image.hpp"

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace fskde {

/// A loaded patch-matching dataset: square grayscale patches keyed by id and
/// labeled pairs referring to them by index.
struct PatchDataset {
    struct Pair {
        int a = 0;
        int b = 0;
        bool corresponding = false;
    };

    int patch_size = 0;
    std::vector<std::string> ids;
    std::vector<Image> patches;
    std::unordered_map<std::string, int> index;
    std::vector<Pair> pairs;
};

/// Manifest JSON: {"patch_dir": "...", "pairs_file": "...", "patch_size": N}.
/// The patch dir holds one PGM/PNG per patch (id = filename stem); the pairs
/// file holds lines "idA idB 0|1". Malformed lines are reported with their
/// line number; non-square or wrongly sized patches are rejected.
PatchDataset load_dataset(const std::string& manifest_path);

/// Weighted angular histogram with B hard-assignment bins; bin b covers
/// [-pi + 2pi b/B, -pi + 2pi (b+1)/B).
struct HistogramDescriptor {
    std::vector<double> bins;
};

HistogramDescriptor hist_descriptor(const Image& patch, int bins,
                                    int mask_diameter);

/// Circular shift putting the largest bin first; ties take the smallest shift.
HistogramDescriptor canonical_hist(const HistogramDescriptor& h);

double euclidean_distance(const std::vector<double>& a,
                          const std::vector<double>& b);

/// Rank-statistic AUC: probability that a random corresponding-pair distance
/// is smaller than a random non-corresponding one, ties counted 1/2.
double roc_auc(const std::vector<double>& pos_distances,
               const std::vector<double>& neg_distances);

enum class BenchMethod { Intensity, Hist, HistCanon, Fskde, FskdeF1, FskdeFk };

BenchMethod parse_method(const std::string& name);
std::string method_name(BenchMethod m);

struct BenchOptions {
    bool rotate = false;         // uniform-random patch rotation before description
    std::uint64_t seed = 0;      // drives the rotations
    double epsilon = 1e-5;       // truncation threshold for FS-KDE methods
    int mask_diameter = 60;
    bool dump_distances = false;
};

struct BenchReport {
    std::string method;
    int size_param = 0;
    int real_length = 0;  // descriptor length in real numbers
    double auc = 0.0;
    std::size_t n_pos = 0;
    std::size_t n_neg = 0;
    // filled when dump_distances is set; pair order matches dataset.pairs
    std::vector<double> pair_distances;
};

/// size_param is the descriptor budget in real numbers: histogram bins for
/// hist methods, 2(cutoff+1) for FS-KDE methods (the kernel order is derived
/// from the budget and epsilon), ignored for intensity.
BenchReport run_benchmark(const PatchDataset& dataset, BenchMethod method,
                          int size_param, const BenchOptions& options);

/// Smallest kernel order K whose epsilon-truncation keeps exactly
/// target_real_length/2 one-sided coefficients.
int order_for_length(int target_real_length, double epsilon);

struct SyntheticOptions {
    int n_pairs = 2000;  // corresponding pairs; as many non-corresponding
    int patch_size = 64;
    std::uint64_t seed = 1;
};

/// Writes a synthetic oriented-texture dataset (PGM patches, pairs file,
/// manifest.json) under out_dir and returns the manifest path. Corresponding
/// pairs share texture and orientation with small shift/rotation jitter and
/// independent pixel noise; non-corresponding pairs use independent textures.
std::string generate_synthetic_dataset(const std::string& out_dir,
                                       const SyntheticOptions& options);

}  // namespace fskde
