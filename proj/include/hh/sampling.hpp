#pragma once

#include <vector>

#include "hh/geometry.hpp"

namespace hh {

// Radical-inverse (van der Corput) value of index i in the given base.
double radical_inverse(unsigned long long i, unsigned base);

// Deterministic low-discrepancy sample of admissible points: Halton sequence
// (bases 2,3,5,7) mapped into the box, skipping points where any singular
// locus has magnitude <= margin. The sequence start is fixed so repeated
// calls reproduce the same points bit for bit.
std::vector<Point> sample_points(const Chart& chart, const Box& box, const Params& params,
                                 int count, double margin = 0.1);

}  // namespace hh
