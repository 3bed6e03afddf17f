#pragma once

#include "fskde/descriptor.hpp"

#include <complex>
#include <vector>

namespace fskde {

/// Grayscale raster, row-major doubles. Indexing is (x, y) with x the column
/// and y the row; gradients use x increasing rightward and y increasing
/// downward.
struct Image {
    int width = 0;
    int height = 0;
    std::vector<double> pixels;

    static Image zeros(int width, int height);

    double& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
    double at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
    bool same_size(const Image& o) const { return width == o.width && height == o.height; }
};

/// Per-pixel gradient angle Theta(x) in [-pi, pi) and magnitude W(x) >= 0.
struct AngularImage {
    Image angles;
    Image weights;
};

enum class WindowShape { Box, TruncatedGaussian };

/// Nonnegative window with unit L1 norm. Both built-in shapes are separable;
/// the 1-D factors are kept so filtering can run as two passes.
struct Window {
    WindowShape shape = WindowShape::Box;
    Image taps;
    std::vector<double> col_factor;  // horizontal 1-D factor, L1 = 1
    std::vector<double> row_factor;  // vertical 1-D factor, L1 = 1

    static Window box(int size);
    static Window truncated_gaussian(int radius, double sigma);

    bool separable() const { return !col_factor.empty() && !row_factor.empty(); }
};

/// Per-pixel FS-KDE coefficients: planes[k] holds F_k(x) row-major.
struct DescriptorField {
    int order = 0;
    int width = 0;
    int height = 0;
    std::vector<std::vector<std::complex<double>>> planes;

    std::complex<double> at(int k, int x, int y) const {
        return planes[k][static_cast<std::size_t>(y) * width + x];
    }
};

enum class GradientOperator { CentralDiff, Sobel };

/// Gradient angle-weight image: Theta = atan2(dI/dy, dI/dx), W = |grad I|;
/// zero-gradient pixels get Theta = 0. CentralDiff uses central differences
/// in the interior and one-sided differences on the borders; Sobel uses the
/// 3x3 kernels (scaled so a unit ramp has unit gradient) with the
/// central-difference fallback on the border ring.
AngularImage gradient_field(const Image& image,
                            GradientOperator op = GradientOperator::CentralDiff);

/// F_k(x) = H_k * (W(.) e^{-ik Theta(.)} conv window)(x) for k = 0..K, with
/// zero padding at the borders. K+1 complex filtering passes.
DescriptorField local_fskde(const AngularImage& field, const Window& window,
                            const Kernel& kernel);

/// Gradient samples of `patch` inside the centered circular mask of the given
/// diameter, flattened to one angle-weight set (row-major pixel order).
AngleWeightSet masked_gradient_set(const Image& patch, int mask_diameter);

/// Indices (x, y) of pixels inside the centered circular mask, row-major.
/// The mask is centered at ((w-1)/2, (h-1)/2) with radius diameter/2,
/// boundary included.
std::vector<std::pair<int, int>> circular_mask_indices(int width, int height,
                                                       int mask_diameter);

/// Single FS-KDE descriptor of a patch: gradient field, circular crop, one
/// global estimate over the surviving pixels.
Descriptor patch_descriptor(const Image& patch, const Kernel& kernel,
                            int mask_diameter);

/// Lossless quarter-turn on the lattice: out(x, y) = in(y, S-1-x) for a
/// square S x S image. Interior gradient angles shift by +pi/2.
Image rotate90(const Image& image);

/// Rotate about the image center by `angle` radians (same screen sense as
/// rotate90 at angle pi/2), bilinear sampling, clamp-to-edge.
Image rotate_bilinear(const Image& image, double angle);

}  // namespace fskde
