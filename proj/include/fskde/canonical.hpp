#pragma once

#include "fskde/descriptor.hpp"

#include <utility>

namespace fskde {

/// A descriptor rotated to a standard orientation. `applied_rotation` is the
/// total phi such that base == rotate(original, phi). `degenerate` is set when
/// one or more canonicalization levels had a coefficient magnitude below the
/// degeneracy threshold and were skipped.
struct CanonicalDescriptor {
    Descriptor base;
    int level = 1;
    double applied_rotation = 0.0;
    bool degenerate = false;
};

/// Below this, arg(F_k) carries no information and the level is skipped.
double degeneracy_threshold(const Descriptor& d);

/// F1 canonicalization: F~_k = e^{-ik arg(F_1)} F_k, the rotation that makes
/// F_1 real (and nonnegative). All rotations of an angle-weight set share the
/// same F1-canonical descriptor.
CanonicalDescriptor canonicalize_f1(const Descriptor& d);

/// Recursive Fk canonicalization up to `level`: F1-canonicalize, then for
/// j = 2..level apply the smallest rotation that makes F_j real, i.e. the
/// phase step e^{-ik arg(F~_j)/j} with arg taken as the principal value.
CanonicalDescriptor canonicalize_fk(const Descriptor& d, int level);

/// min over l = 1..K of distance(canonicalize_fk(a, l), canonicalize_fk(b, l)).
/// Levels whose own coefficient is degenerate in either descriptor are
/// skipped; if every level is degenerate the plain distance is returned.
double canonical_distance_fk(const Descriptor& a, const Descriptor& b);

/// Reference rotation search: minimizes distance(a, rotate(b, phi)) over a
/// uniform phi grid of `grid_size` cells, then refines the best cell by
/// golden-section search to 1e-10 in phi. Returns (min distance, argmin phi).
std::pair<double, double> min_distance_search(const Descriptor& a,
                                              const Descriptor& b,
                                              int grid_size);

}  // namespace fskde
