#include "fskde/io.hpp"

#include <json.hpp>
#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

namespace fskde {

namespace {

void write_u32_le(std::ostream& out, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                          static_cast<unsigned char>((v >> 8) & 0xff),
                          static_cast<unsigned char>((v >> 16) & 0xff),
                          static_cast<unsigned char>((v >> 24) & 0xff)};
    out.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t read_u32_le(std::istream& in) {
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    if (!in) throw IoError("unexpected end of binary descriptor");
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) |
           (static_cast<std::uint32_t>(b[3]) << 24);
}

void write_f64_le(std::ostream& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((bits >> (8 * i)) & 0xff);
    out.write(reinterpret_cast<const char*>(b), 8);
}

double read_f64_le(std::istream& in) {
    unsigned char b[8];
    in.read(reinterpret_cast<char*>(b), 8);
    if (!in) throw IoError("unexpected end of binary descriptor");
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
}

struct PngReadCloser {
    png_structp png = nullptr;
    png_infop info = nullptr;
    std::FILE* fp = nullptr;
    ~PngReadCloser() {
        if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
        if (fp) std::fclose(fp);
    }
};

struct PngWriteCloser {
    png_structp png = nullptr;
    png_infop info = nullptr;
    std::FILE* fp = nullptr;
    ~PngWriteCloser() {
        if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
        if (fp) std::fclose(fp);
    }
};

}  // namespace

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

Image read_image(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open image file: " + path);
    char magic[2] = {0, 0};
    f.read(magic, 2);
    f.close();
    if (magic[0] == 'P' && magic[1] == '5') return read_pgm(path);
    if (static_cast<unsigned char>(magic[0]) == 0x89 && magic[1] == 'P')
        return read_png(path);
    throw IoError("unsupported image format (expect binary PGM or PNG): " + path);
}

Image read_pgm(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open PGM file: " + path);

    auto next_token = [&]() -> std::string {
        std::string tok;
        int c;
        while ((c = f.get()) != EOF) {
            if (c == '#') {  // comment to end of line
                while ((c = f.get()) != EOF && c != '\n') {}
                continue;
            }
            if (std::isspace(c)) {
                if (!tok.empty()) break;
                continue;
            }
            tok.push_back(static_cast<char>(c));
        }
        if (tok.empty()) throw IoError("truncated PGM header: " + path);
        return tok;
    };

    if (next_token() != "P5") throw IoError("not a binary PGM (P5) file: " + path);
    const int w = std::stoi(next_token());
    const int h = std::stoi(next_token());
    const int maxval = std::stoi(next_token());
    if (w <= 0 || h <= 0) throw IoError("bad PGM dimensions: " + path);
    if (maxval <= 0 || maxval > 255) {
        throw IoError("only 8-bit PGM supported: " + path);
    }
    // the single whitespace after maxval was already consumed by next_token
    std::vector<unsigned char> raw(static_cast<std::size_t>(w) * h);
    f.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (!f) throw IoError("truncated PGM pixel data: " + path);

    Image img = Image::zeros(w, h);
    for (std::size_t i = 0; i < raw.size(); ++i) img.pixels[i] = raw[i];
    return img;
}

void write_pgm(const Image& image, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot create PGM file: " + path);
    f << "P5\n" << image.width << " " << image.height << "\n255\n";
    std::vector<unsigned char> raw(image.pixels.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const double v = std::round(image.pixels[i]);
        raw[i] = static_cast<unsigned char>(std::clamp(v, 0.0, 255.0));
    }
    f.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (!f) throw IoError("failed writing PGM pixel data: " + path);
}

Image read_png(const std::string& path) {
    PngReadCloser ctx;
    ctx.fp = std::fopen(path.c_str(), "rb");
    if (!ctx.fp) throw IoError("cannot open PNG file: " + path);

    unsigned char header[8];
    if (std::fread(header, 1, 8, ctx.fp) != 8 || png_sig_cmp(header, 0, 8) != 0) {
        throw IoError("not a PNG file: " + path);
    }
    ctx.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!ctx.png) throw IoError("png_create_read_struct failed");
    ctx.info = png_create_info_struct(ctx.png);
    if (!ctx.info) throw IoError("png_create_info_struct failed");
    if (setjmp(png_jmpbuf(ctx.png))) {
        throw IoError("libpng failed reading: " + path);
    }
    png_init_io(ctx.png, ctx.fp);
    png_set_sig_bytes(ctx.png, 8);
    png_read_info(ctx.png, ctx.info);

    const png_uint_32 w = png_get_image_width(ctx.png, ctx.info);
    const png_uint_32 h = png_get_image_height(ctx.png, ctx.info);
    const int color = png_get_color_type(ctx.png, ctx.info);
    const int depth = png_get_bit_depth(ctx.png, ctx.info);

    if (depth == 16) png_set_strip_16(ctx.png);
    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(ctx.png);
    if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(ctx.png);
    if (color & PNG_COLOR_MASK_COLOR) {
        png_set_rgb_to_gray(ctx.png, PNG_ERROR_ACTION_NONE, -1.0, -1.0);
    }
    if (color & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(ctx.png);
    png_read_update_info(ctx.png, ctx.info);

    std::vector<unsigned char> row(png_get_rowbytes(ctx.png, ctx.info));
    Image img = Image::zeros(static_cast<int>(w), static_cast<int>(h));
    for (png_uint_32 y = 0; y < h; ++y) {
        png_read_row(ctx.png, row.data(), nullptr);
        for (png_uint_32 x = 0; x < w; ++x) {
            img.at(static_cast<int>(x), static_cast<int>(y)) = row[x];
        }
    }
    png_read_end(ctx.png, nullptr);
    return img;
}

void write_png(const Image& image, const std::string& path) {
    PngWriteCloser ctx;
    ctx.fp = std::fopen(path.c_str(), "wb");
    if (!ctx.fp) throw IoError("cannot create PNG file: " + path);
    ctx.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!ctx.png) throw IoError("png_create_write_struct failed");
    ctx.info = png_create_info_struct(ctx.png);
    if (!ctx.info) throw IoError("png_create_info_struct failed");
    if (setjmp(png_jmpbuf(ctx.png))) {
        throw IoError("libpng failed writing: " + path);
    }
    png_init_io(ctx.png, ctx.fp);
    png_set_IHDR(ctx.png, ctx.info, image.width, image.height, 8,
                 PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(ctx.png, ctx.info);

    std::vector<unsigned char> row(image.width);
    for (int y = 0; y < image.height; ++y) {
        for (int x = 0; x < image.width; ++x) {
            const double v = std::round(image.at(x, y));
            row[x] = static_cast<unsigned char>(std::clamp(v, 0.0, 255.0));
        }
        png_write_row(ctx.png, row.data());
    }
    png_write_end(ctx.png, nullptr);
}

std::string descriptor_to_json(const Descriptor& d) {
    nlohmann::ordered_json j;
    j["K"] = d.order();
    j["cutoff"] = d.truncation() ? d.truncation()->cutoff : d.order();
    auto& re = j["re"] = nlohmann::json::array();
    auto& im = j["im"] = nlohmann::json::array();
    for (const auto& c : d.coeffs()) {
        re.push_back(c.real());
        im.push_back(c.imag());
    }
    return j.dump();
}

Descriptor descriptor_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("bad descriptor JSON: ") + e.what());
    }
    if (!j.contains("K") || !j.contains("re") || !j.contains("im")) {
        throw IoError("descriptor JSON must contain K, re, im");
    }
    const int order = j["K"].get<int>();
    const auto re = j["re"].get<std::vector<double>>();
    const auto im = j["im"].get<std::vector<double>>();
    if (order < 0 || re.size() != im.size() ||
        re.size() != static_cast<std::size_t>(order) + 1) {
        throw IoError("descriptor JSON has inconsistent lengths");
    }
    std::vector<std::complex<double>> coeffs(re.size());
    for (std::size_t i = 0; i < re.size(); ++i) coeffs[i] = {re[i], im[i]};

    const int cutoff = j.value("cutoff", order);
    std::optional<TruncationMask> mask;
    if (cutoff < order) {
        mask = TruncationMask{order, cutoff, 0.0};
    }
    return Descriptor(std::move(coeffs), mask);
}

void write_descriptor_binary(const Descriptor& d, std::ostream& out) {
    write_u32_le(out, static_cast<std::uint32_t>(d.order()));
    write_u32_le(out, static_cast<std::uint32_t>(
                          d.truncation() ? d.truncation()->cutoff : d.order()));
    for (const auto& c : d.coeffs()) {
        write_f64_le(out, c.real());
        write_f64_le(out, c.imag());
    }
    if (!out) throw IoError("failed writing binary descriptor");
}

Descriptor read_descriptor_binary(std::istream& in) {
    const std::uint32_t order = read_u32_le(in);
    const std::uint32_t cutoff = read_u32_le(in);
    if (order > 1u << 20) throw IoError("binary descriptor order is implausible");
    std::vector<std::complex<double>> coeffs(order + 1);
    for (auto& c : coeffs) {
        const double re = read_f64_le(in);
        const double im = read_f64_le(in);
        c = {re, im};
    }
    std::optional<TruncationMask> mask;
    if (cutoff < order) {
        mask = TruncationMask{static_cast<int>(order), static_cast<int>(cutoff), 0.0};
    }
    return Descriptor(std::move(coeffs), mask);
}

void export_field(const DescriptorField& field, const std::string& prefix) {
    nlohmann::ordered_json manifest;
    manifest["K"] = field.order;
    manifest["width"] = field.width;
    manifest["height"] = field.height;
    manifest["layout"] = "row-major float64 (re,im) pairs, little-endian";
    auto& planes = manifest["planes"] = nlohmann::json::array();

    for (int k = 0; k <= field.order; ++k) {
        const std::string name = prefix + "_plane_" + std::to_string(k) + ".bin";
        std::ofstream f(name, std::ios::binary);
        if (!f) throw IoError("cannot create plane file: " + name);
        for (const auto& c : field.planes[k]) {
            write_f64_le(f, c.real());
            write_f64_le(f, c.imag());
        }
        if (!f) throw IoError("failed writing plane file: " + name);
        planes.push_back(name);
    }
    const std::string mpath = prefix + "_manifest.json";
    std::ofstream mf(mpath);
    if (!mf) throw IoError("cannot create manifest: " + mpath);
    mf << manifest.dump(2) << "\n";
}

AngleWeightSet read_angle_csv(std::istream& in, bool degrees) {
    std::string line;
    if (!std::getline(in, line)) throw IoError("empty angle CSV");
    // tolerate UTF-8 BOM and CR
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "theta,weight") {
        throw IoError("angle CSV must start with header 'theta,weight'");
    }
    std::vector<double> angles, weights;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw IoError("angle CSV line " + std::to_string(lineno) +
                          ": expected 'theta,weight'");
        }
        try {
            std::size_t used = 0;
            double theta = std::stod(line.substr(0, comma), &used);
            double weight = std::stod(line.substr(comma + 1), &used);
            if (degrees) theta *= kPi / 180.0;
            angles.push_back(theta);
            weights.push_back(weight);
        } catch (const std::exception&) {
            throw IoError("angle CSV line " + std::to_string(lineno) +
                          ": malformed number");
        }
    }
    if (angles.empty()) throw IoError("angle CSV contains no samples");
    return AngleWeightSet::make(std::move(angles), std::move(weights));
}

}  // namespace fskde
