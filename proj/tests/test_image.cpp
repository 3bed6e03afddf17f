#include "fskde/image.hpp"

#include "fskde/canonical.hpp"
#include "fskde/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

using namespace fskde;

namespace {

Image random_image(Rng& rng, int w, int h, double lo = 0.0, double hi = 255.0) {
    Image img = Image::zeros(w, h);
    for (double& p : img.pixels) p = rng.uniform(lo, hi);
    return img;
}

AngularImage random_field(Rng& rng, int w, int h) {
    AngularImage f;
    f.angles = Image::zeros(w, h);
    f.weights = Image::zeros(w, h);
    for (double& a : f.angles.pixels) a = rng.uniform(-kPi, kPi);
    for (double& v : f.weights.pixels) v = rng.uniform(0.0, 3.0);
    return f;
}

// direct evaluation of the windowed coefficient sum at one pixel, routed
// through estimate() so it stays independent of the convolution code
std::complex<double> direct_coeff(const AngularImage& field, const Window& win,
                                  const Kernel& kernel, int k, int px, int py) {
    const int ax = win.taps.width / 2;
    const int ay = win.taps.height / 2;
    std::vector<double> angles, weights;
    for (int ty = 0; ty < win.taps.height; ++ty) {
        for (int tx = 0; tx < win.taps.width; ++tx) {
            const int sx = px - (tx - ax);
            const int sy = py - (ty - ay);
            if (sx < 0 || sx >= field.angles.width || sy < 0 ||
                sy >= field.angles.height) {
                continue;
            }
            angles.push_back(field.angles.at(sx, sy));
            weights.push_back(field.weights.at(sx, sy) * win.taps.at(tx, ty));
        }
    }
    const std::size_t n = angles.size();
    for (double& w : weights) w *= static_cast<double>(n);  // cancel the 1/N
    const auto d = estimate(AngleWeightSet::make(angles, weights), kernel);
    return d.coeff(k);
}

}  // namespace

TEST_CASE("window construction") {
    const Window box = Window::box(5);
    double sum = 0.0;
    for (double t : box.taps.pixels) sum += t;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(box.separable());

    const Window g = Window::truncated_gaussian(3, 1.5);
    CHECK(g.taps.width == 7);
    sum = 0.0;
    for (double t : g.taps.pixels) sum += t;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    for (double t : g.taps.pixels) CHECK(t >= 0.0);

    CHECK_THROWS_AS(Window::box(0), std::invalid_argument);
    CHECK_THROWS_AS(Window::truncated_gaussian(2, 0.0), std::invalid_argument);
}

TEST_CASE("gradient of a constant image is zero") {
    Image img = Image::zeros(8, 8);
    for (double& p : img.pixels) p = 42.0;
    const AngularImage g = gradient_field(img);
    for (double w : g.weights.pixels) CHECK(w == 0.0);
    for (double a : g.angles.pixels) CHECK(a == 0.0);  // convention
}

TEST_CASE("gradient of a horizontal ramp") {
    Image img = Image::zeros(9, 7);
    for (int y = 0; y < 7; ++y) {
        for (int x = 0; x < 9; ++x) img.at(x, y) = x;
    }
    const AngularImage g = gradient_field(img);
    for (int y = 0; y < 7; ++y) {
        for (int x = 0; x < 9; ++x) {
            CHECK(g.weights.at(x, y) == doctest::Approx(1.0));
            CHECK(g.angles.at(x, y) == doctest::Approx(0.0));
        }
    }
}

TEST_CASE("gradient rejects tiny images") {
    CHECK_THROWS_AS(gradient_field(Image::zeros(2, 5)), std::invalid_argument);
}

TEST_CASE("sobel gradient option") {
    // unit ramp: both operators report unit gradient along x in the interior
    Image ramp = Image::zeros(9, 9);
    for (int y = 0; y < 9; ++y) {
        for (int x = 0; x < 9; ++x) ramp.at(x, y) = x;
    }
    const AngularImage s = gradient_field(ramp, GradientOperator::Sobel);
    for (int y = 1; y < 8; ++y) {
        for (int x = 1; x < 8; ++x) {
            CHECK(s.weights.at(x, y) == doctest::Approx(1.0));
            CHECK(s.angles.at(x, y) == doctest::Approx(0.0));
        }
    }
    // on non-trivial images the two operators genuinely differ
    Rng rng(281);
    const Image img = random_image(rng, 10, 10);
    const AngularImage a = gradient_field(img, GradientOperator::CentralDiff);
    const AngularImage b = gradient_field(img, GradientOperator::Sobel);
    double diff = 0.0;
    for (int y = 1; y < 9; ++y) {
        for (int x = 1; x < 9; ++x) {
            diff = std::max(diff, std::abs(a.weights.at(x, y) - b.weights.at(x, y)));
        }
    }
    CHECK(diff > 1e-3);
    // the quarter-turn covariance carries over to sobel
    const AngularImage r = gradient_field(rotate90(img), GradientOperator::Sobel);
    for (int y = 2; y < 8; ++y) {
        for (int x = 2; x < 8; ++x) {
            const int sx = y;
            const int sy = 10 - 1 - x;
            CHECK(r.weights.at(x, y) == doctest::Approx(b.weights.at(sx, sy)));
            if (b.weights.at(sx, sy) > 1e-12) {
                CHECK(wrap_angle(r.angles.at(x, y) -
                                 wrap_angle(b.angles.at(sx, sy) + kPi / 2)) ==
                      doctest::Approx(0.0).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("rotating the image by 90 degrees shifts interior angles by pi/2") {
    Rng rng(211);
    const Image img = random_image(rng, 12, 12);
    const Image rot = rotate90(img);
    const AngularImage g0 = gradient_field(img);
    const AngularImage g1 = gradient_field(rot);
    // out(x, y) = in(y, S-1-x); interior maps to interior
    const int s = 12;
    for (int y = 1; y < s - 1; ++y) {
        for (int x = 1; x < s - 1; ++x) {
            const int sx = y;
            const int sy = s - 1 - x;
            CHECK(g1.weights.at(x, y) == doctest::Approx(g0.weights.at(sx, sy)));
            if (g0.weights.at(sx, sy) > 1e-12) {
                const double expected = wrap_angle(g0.angles.at(sx, sy) + kPi / 2);
                CHECK(wrap_angle(g1.angles.at(x, y) - expected) ==
                      doctest::Approx(0.0).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("local_fskde of a zero-weight field is zero") {
    Rng rng(223);
    AngularImage f = random_field(rng, 10, 10);
    std::fill(f.weights.pixels.begin(), f.weights.pixels.end(), 0.0);
    const DescriptorField out = local_fskde(f, Window::box(3), Kernel::make(4, KernelMode::Exact));
    for (const auto& plane : out.planes) {
        for (const auto& v : plane) CHECK(std::abs(v) == 0.0);
    }
}

TEST_CASE("1x1 box window is the per-pixel identity") {
    Rng rng(227);
    const AngularImage f = random_field(rng, 6, 5);
    const Kernel kernel = Kernel::make(3, KernelMode::Exact);
    const DescriptorField out = local_fskde(f, Window::box(1), kernel);
    for (int y = 0; y < 5; ++y) {
        for (int x = 0; x < 6; ++x) {
            for (int k = 0; k <= 3; ++k) {
                const auto expect = kernel.coeff(k) * f.weights.at(x, y) *
                                    std::polar(1.0, -k * f.angles.at(x, y));
                CHECK(std::abs(out.at(k, x, y) - expect) < 1e-14);
            }
        }
    }
}

TEST_CASE("filtering equals the direct windowed sum") {
    Rng rng(229);
    const AngularImage f = random_field(rng, 16, 16);
    const Kernel kernel = Kernel::make(5, KernelMode::Exact);

    for (const Window& win : {Window::box(5), Window::truncated_gaussian(2, 1.0)}) {
        const DescriptorField out = local_fskde(f, win, kernel);
        for (int rep = 0; rep < 50; ++rep) {
            const int x = 2 + static_cast<int>(rng.uniform(0.0, 12.0));
            const int y = 2 + static_cast<int>(rng.uniform(0.0, 12.0));
            const int k = static_cast<int>(rng.uniform(0.0, 6.0));
            const auto expect = direct_coeff(f, win, kernel, k, x, y);
            CHECK(std::abs(out.at(k, x, y) - expect) < 1e-10);
        }
    }
}

TEST_CASE("direct and separable convolution agree") {
    Rng rng(233);
    const AngularImage f = random_field(rng, 14, 11);
    const Kernel kernel = Kernel::make(4, KernelMode::Exact);
    Window win = Window::truncated_gaussian(2, 0.9);
    const DescriptorField sep = local_fskde(f, win, kernel);
    win.col_factor.clear();  // force the direct path
    win.row_factor.clear();
    const DescriptorField dir = local_fskde(f, win, kernel);
    for (int k = 0; k <= 4; ++k) {
        for (std::size_t i = 0; i < sep.planes[k].size(); ++i) {
            CHECK(std::abs(sep.planes[k][i] - dir.planes[k][i]) < 1e-10);
        }
    }
}

TEST_CASE("plane zero is real") {
    Rng rng(239);
    const AngularImage f = random_field(rng, 9, 9);
    const DescriptorField out =
        local_fskde(f, Window::box(3), Kernel::make(4, KernelMode::Exact));
    for (const auto& v : out.planes[0]) CHECK(std::abs(v.imag()) < 1e-10);
}

TEST_CASE("field is linear in the weights") {
    Rng rng(241);
    AngularImage f = random_field(rng, 8, 8);
    const Kernel kernel = Kernel::make(3, KernelMode::Exact);
    const Window win = Window::box(3);
    const DescriptorField once = local_fskde(f, win, kernel);
    for (double& w : f.weights.pixels) w *= 2.0;
    const DescriptorField twice = local_fskde(f, win, kernel);
    for (int k = 0; k <= 3; ++k) {
        for (std::size_t i = 0; i < once.planes[k].size(); ++i) {
            CHECK(twice.planes[k][i] == 2.0 * once.planes[k][i]);
        }
    }
}

TEST_CASE("oversized window is rejected") {
    Rng rng(251);
    const AngularImage f = random_field(rng, 4, 4);
    CHECK_THROWS_AS(local_fskde(f, Window::box(5), Kernel::make(2, KernelMode::Exact)),
                    std::invalid_argument);
}

TEST_CASE("circular mask of diameter 60 in a 64x64 patch holds 2828 pixels") {
    CHECK(circular_mask_indices(64, 64, 60).size() == 2828);
}

TEST_CASE("masked gradient set size matches the mask") {
    Rng rng(257);
    const Image img = random_image(rng, 64, 64);
    CHECK(masked_gradient_set(img, 60).size() == 2828);
}

TEST_CASE("mask larger than the patch is rejected") {
    Rng rng(263);
    const Image img = random_image(rng, 32, 32);
    CHECK_THROWS_AS(masked_gradient_set(img, 33), std::invalid_argument);
    CHECK_THROWS_AS(patch_descriptor(img, Kernel::make(4, KernelMode::Exact), 40),
                    std::invalid_argument);
}

TEST_CASE("constant patch gives the zero descriptor") {
    Image img = Image::zeros(32, 32);
    for (double& p : img.pixels) p = 7.0;
    const auto d = patch_descriptor(img, Kernel::make(6, KernelMode::Exact), 28);
    for (int k = 0; k <= 6; ++k) CHECK(std::abs(d.coeff(k)) == 0.0);
}

TEST_CASE("vertical stripes concentrate density at horizontal gradients") {
    Image img = Image::zeros(32, 32);
    for (int y = 0; y < 32; ++y) {
        for (int x = 0; x < 32; ++x) {
            img.at(x, y) = 100.0 * std::sin(kTwoPi * x / 8.0);
        }
    }
    const Kernel kernel = Kernel::make(8, KernelMode::Exact);
    const auto d = patch_descriptor(img, kernel, 28);
    // gradients point along +-x; the two-lobed density peaks at 0 and pi
    const double at_peak = evaluate(d, 0.0) + evaluate(d, kPi);
    const double off_peak = evaluate(d, kPi / 2) + evaluate(d, -kPi / 2);
    CHECK(at_peak > 4.0 * std::abs(off_peak));

    // against the angular-domain brute force on the same masked set
    const auto set = masked_gradient_set(img, 28);
    for (double theta : {0.0, 0.5, kPi / 2, -2.0}) {
        double direct = 0.0;
        for (std::size_t i = 0; i < set.size(); ++i) {
            direct += set.weights[i] * kernel.eval(theta - set.angles[i]);
        }
        direct /= static_cast<double>(set.size());
        CHECK(evaluate(d, theta) == doctest::Approx(direct).epsilon(1e-9));
    }
}

TEST_CASE("patch descriptors are rotation covariant under quarter turns") {
    Rng rng(269);
    const Image img = random_image(rng, 64, 64);
    const Kernel kernel = Kernel::make(8, KernelMode::Exact);
    const auto d0 = patch_descriptor(img, kernel, 60);
    const auto d90 = patch_descriptor(rotate90(img), kernel, 60);
    const auto expected = rotate(d0, kPi / 2);
    double worst = 0.0;
    for (int k = 0; k <= 8; ++k) {
        worst = std::max(worst, std::abs(d90.coeff(k) - expected.coeff(k)));
    }
    // lattice quarter turns are lossless; the documented tolerance of 1e-3
    // relative leaves room for the mask discretization, measured far smaller
    CHECK(worst < 1e-3 * coeff_norm(d0));
    CHECK(worst < 1e-12);
}

TEST_CASE("bilinear rotation matches the lattice quarter turn") {
    Rng rng(271);
    const Image img = random_image(rng, 16, 16);
    const Image a = rotate90(img);
    const Image b = rotate_bilinear(img, kPi / 2);
    for (int y = 0; y < 16; ++y) {
        for (int x = 0; x < 16; ++x) {
            CHECK(a.at(x, y) == doctest::Approx(b.at(x, y)).epsilon(1e-12));
        }
    }
}

TEST_CASE("bilinear rotation by zero is the identity") {
    Rng rng(277);
    const Image img = random_image(rng, 9, 9);
    const Image r = rotate_bilinear(img, 0.0);
    for (std::size_t i = 0; i < img.pixels.size(); ++i) {
        CHECK(r.pixels[i] == doctest::Approx(img.pixels[i]));
    }
}
