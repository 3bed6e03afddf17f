#pragma once

#include "fskde/descriptor.hpp"
#include "fskde/image.hpp"

#include <iosfwd>
#include <stdexcept>
#include <string>

namespace fskde {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Full-precision decimal (17 significant digits), round-trips exactly.
std::string format_double(double v);

/// Dispatches on the file's magic bytes: P5 -> PGM, \x89PNG -> PNG.
Image read_image(const std::string& path);

Image read_pgm(const std::string& path);
void write_pgm(const Image& image, const std::string& path);  // clamps to [0,255]

Image read_png(const std::string& path);  // any color type, converted to 8-bit gray
void write_png(const Image& image, const std::string& path);

/// JSON form {"K":..,"cutoff":..,"re":[..],"im":[..]} with k = 0..K.
/// cutoff == K means no truncation was applied.
std::string descriptor_to_json(const Descriptor& d);
Descriptor descriptor_from_json(const std::string& text);

/// Binary form: little-endian u32 K, u32 cutoff, then K+1 (re, im) f64 pairs.
void write_descriptor_binary(const Descriptor& d, std::ostream& out);
Descriptor read_descriptor_binary(std::istream& in);

/// One binary file per plane ("<prefix>_plane_<k>.bin", row-major (re, im)
/// f64 pairs) plus a JSON manifest at "<prefix>_manifest.json".
void export_field(const DescriptorField& field, const std::string& prefix);

/// CSV with header "theta,weight"; angles in radians unless degrees is set.
AngleWeightSet read_angle_csv(std::istream& in, bool degrees = false);

}  // namespace fskde
