#include "fskde/image.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fskde {

namespace {

using ComplexPlane = std::vector<std::complex<double>>;

// full 2-D convolution with zero padding, anchor at (tw/2, th/2)
ComplexPlane conv2_direct(const ComplexPlane& in, int w, int h,
                          const Image& taps) {
    const int ax = taps.width / 2;
    const int ay = taps.height / 2;
    ComplexPlane out(static_cast<std::size_t>(w) * h, {0.0, 0.0});
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            std::complex<double> acc(0.0, 0.0);
            for (int ty = 0; ty < taps.height; ++ty) {
                const int sy = y - (ty - ay);
                if (sy < 0 || sy >= h) continue;
                for (int tx = 0; tx < taps.width; ++tx) {
                    const int sx = x - (tx - ax);
                    if (sx < 0 || sx >= w) continue;
                    acc += in[static_cast<std::size_t>(sy) * w + sx] *
                           taps.at(tx, ty);
                }
            }
            out[static_cast<std::size_t>(y) * w + x] = acc;
        }
    }
    return out;
}

ComplexPlane conv2_separable(const ComplexPlane& in, int w, int h,
                             const std::vector<double>& col_factor,
                             const std::vector<double>& row_factor) {
    const int tw = static_cast<int>(col_factor.size());
    const int th = static_cast<int>(row_factor.size());
    const int ax = tw / 2;
    const int ay = th / 2;

    ComplexPlane tmp(static_cast<std::size_t>(w) * h, {0.0, 0.0});
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            std::complex<double> acc(0.0, 0.0);
            for (int t = 0; t < tw; ++t) {
                const int sx = x - (t - ax);
                if (sx < 0 || sx >= w) continue;
                acc += in[static_cast<std::size_t>(y) * w + sx] * col_factor[t];
            }
            tmp[static_cast<std::size_t>(y) * w + x] = acc;
        }
    }
    ComplexPlane out(static_cast<std::size_t>(w) * h, {0.0, 0.0});
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            std::complex<double> acc(0.0, 0.0);
            for (int t = 0; t < th; ++t) {
                const int sy = y - (t - ay);
                if (sy < 0 || sy >= h) continue;
                acc += tmp[static_cast<std::size_t>(sy) * w + x] * row_factor[t];
            }
            out[static_cast<std::size_t>(y) * w + x] = acc;
        }
    }
    return out;
}

}  // namespace

Image Image::zeros(int width, int height) {
    if (width <= 0 || height <= 0) {
        throw std::invalid_argument("Image: dimensions must be positive");
    }
    Image img;
    img.width = width;
    img.height = height;
    img.pixels.assign(static_cast<std::size_t>(width) * height, 0.0);
    return img;
}

Window Window::box(int size) {
    if (size < 1) throw std::invalid_argument("Window::box: size must be >= 1");
    Window win;
    win.shape = WindowShape::Box;
    win.taps = Image::zeros(size, size);
    const double v = 1.0 / (static_cast<double>(size) * size);
    std::fill(win.taps.pixels.begin(), win.taps.pixels.end(), v);
    win.col_factor.assign(size, 1.0 / size);
    win.row_factor.assign(size, 1.0 / size);
    return win;
}

Window Window::truncated_gaussian(int radius, double sigma) {
    if (radius < 0 || !(sigma > 0.0)) {
        throw std::invalid_argument(
            "Window::truncated_gaussian: need radius >= 0 and sigma > 0");
    }
    const int size = 2 * radius + 1;
    std::vector<double> f(size);
    double sum = 0.0;
    for (int i = 0; i < size; ++i) {
        const double d = i - radius;
        f[i] = std::exp(-0.5 * d * d / (sigma * sigma));
        sum += f[i];
    }
    for (double& v : f) v /= sum;

    Window win;
    win.shape = WindowShape::TruncatedGaussian;
    win.taps = Image::zeros(size, size);
    for (int y = 0; y < size; ++y) {
        for (int x = 0; x < size; ++x) {
            win.taps.at(x, y) = f[x] * f[y];
        }
    }
    win.col_factor = f;
    win.row_factor = std::move(f);
    return win;
}

AngularImage gradient_field(const Image& image, GradientOperator op) {
    const int w = image.width;
    const int h = image.height;
    if (w < 3 || h < 3) {
        throw std::invalid_argument("gradient_field: image must be at least 3x3");
    }
    AngularImage out;
    out.angles = Image::zeros(w, h);
    out.weights = Image::zeros(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double gx, gy;
            const bool interior = x > 0 && x < w - 1 && y > 0 && y < h - 1;
            if (op == GradientOperator::Sobel && interior) {
                gx = (image.at(x + 1, y - 1) - image.at(x - 1, y - 1) +
                      2.0 * (image.at(x + 1, y) - image.at(x - 1, y)) +
                      image.at(x + 1, y + 1) - image.at(x - 1, y + 1)) /
                     8.0;
                gy = (image.at(x - 1, y + 1) - image.at(x - 1, y - 1) +
                      2.0 * (image.at(x, y + 1) - image.at(x, y - 1)) +
                      image.at(x + 1, y + 1) - image.at(x + 1, y - 1)) /
                     8.0;
            } else {
                if (x == 0) {
                    gx = image.at(1, y) - image.at(0, y);
                } else if (x == w - 1) {
                    gx = image.at(w - 1, y) - image.at(w - 2, y);
                } else {
                    gx = 0.5 * (image.at(x + 1, y) - image.at(x - 1, y));
                }
                if (y == 0) {
                    gy = image.at(x, 1) - image.at(x, 0);
                } else if (y == h - 1) {
                    gy = image.at(x, h - 1) - image.at(x, h - 2);
                } else {
                    gy = 0.5 * (image.at(x, y + 1) - image.at(x, y - 1));
                }
            }
            const double mag = std::hypot(gx, gy);
            out.weights.at(x, y) = mag;
            out.angles.at(x, y) = mag > 0.0 ? std::atan2(gy, gx) : 0.0;
        }
    }
    return out;
}

DescriptorField local_fskde(const AngularImage& field, const Window& window,
                            const Kernel& kernel) {
    if (!field.angles.same_size(field.weights)) {
        throw std::invalid_argument("local_fskde: angle/weight size mismatch");
    }
    const int w = field.angles.width;
    const int h = field.angles.height;
    if (window.taps.width > w || window.taps.height > h) {
        throw std::invalid_argument("local_fskde: window larger than image");
    }

    const std::size_t npix = static_cast<std::size_t>(w) * h;
    // e^{-i Theta} once per pixel; plane k multiplies in one more factor
    ComplexPlane phase(npix);
    ComplexPlane cur(npix);
    for (std::size_t i = 0; i < npix; ++i) {
        phase[i] = std::polar(1.0, -field.angles.pixels[i]);
        cur[i] = {field.weights.pixels[i], 0.0};
    }

    DescriptorField out;
    out.order = kernel.order();
    out.width = w;
    out.height = h;
    out.planes.reserve(kernel.order() + 1);
    for (int k = 0; k <= kernel.order(); ++k) {
        ComplexPlane filtered =
            window.separable()
                ? conv2_separable(cur, w, h, window.col_factor, window.row_factor)
                : conv2_direct(cur, w, h, window.taps);
        const double hk = kernel.coeff(k);
        for (auto& v : filtered) v *= hk;
        out.planes.push_back(std::move(filtered));
        if (k < kernel.order()) {
            for (std::size_t i = 0; i < npix; ++i) cur[i] *= phase[i];
        }
    }
    return out;
}

std::vector<std::pair<int, int>> circular_mask_indices(int width, int height,
                                                       int mask_diameter) {
    if (mask_diameter < 1 || mask_diameter > std::min(width, height)) {
        throw std::invalid_argument(
            "circular_mask_indices: mask diameter must fit inside the image");
    }
    const double cx = 0.5 * (width - 1);
    const double cy = 0.5 * (height - 1);
    const double r2 = 0.25 * mask_diameter * mask_diameter;
    std::vector<std::pair<int, int>> idx;
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const double dx = x - cx;
            const double dy = y - cy;
            if (dx * dx + dy * dy <= r2) idx.emplace_back(x, y);
        }
    }
    return idx;
}

AngleWeightSet masked_gradient_set(const Image& patch, int mask_diameter) {
    const AngularImage grad = gradient_field(patch);
    const auto idx = circular_mask_indices(patch.width, patch.height, mask_diameter);
    std::vector<double> angles, weights;
    angles.reserve(idx.size());
    weights.reserve(idx.size());
    for (const auto& [x, y] : idx) {
        angles.push_back(grad.angles.at(x, y));
        weights.push_back(grad.weights.at(x, y));
    }
    return AngleWeightSet::make(std::move(angles), std::move(weights));
}

Descriptor patch_descriptor(const Image& patch, const Kernel& kernel,
                            int mask_diameter) {
    return estimate(masked_gradient_set(patch, mask_diameter), kernel);
}

Image rotate90(const Image& image) {
    if (image.width != image.height) {
        throw std::invalid_argument("rotate90: image must be square");
    }
    const int s = image.width;
    Image out = Image::zeros(s, s);
    for (int y = 0; y < s; ++y) {
        for (int x = 0; x < s; ++x) {
            out.at(x, y) = image.at(y, s - 1 - x);
        }
    }
    return out;
}

Image rotate_bilinear(const Image& image, double angle) {
    const int w = image.width;
    const int h = image.height;
    const double cx = 0.5 * (w - 1);
    const double cy = 0.5 * (h - 1);
    const double c = std::cos(angle);
    const double s = std::sin(angle);

    auto sample = [&](double x, double y) {
        // clamp-to-edge bilinear
        x = std::clamp(x, 0.0, static_cast<double>(w - 1));
        y = std::clamp(y, 0.0, static_cast<double>(h - 1));
        const int x0 = std::min(static_cast<int>(x), w - 2 >= 0 ? w - 2 : 0);
        const int y0 = std::min(static_cast<int>(y), h - 2 >= 0 ? h - 2 : 0);
        const double fx = x - x0;
        const double fy = y - y0;
        const int x1 = std::min(x0 + 1, w - 1);
        const int y1 = std::min(y0 + 1, h - 1);
        return (1 - fx) * (1 - fy) * image.at(x0, y0) +
               fx * (1 - fy) * image.at(x1, y0) +
               (1 - fx) * fy * image.at(x0, y1) +
               fx * fy * image.at(x1, y1);
    };

    Image out = Image::zeros(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double dx = x - cx;
            const double dy = y - cy;
            // inverse map: rotate the output coordinate by -angle
            const double sx = cx + c * dx + s * dy;
            const double sy = cy - s * dx + c * dy;
            out.at(x, y) = sample(sx, sy);
        }
    }
    return out;
}

}  // namespace fskde
