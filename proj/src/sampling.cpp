#include "hh/sampling.hpp"

#include <cmath>

#include "hh/errors.hpp"

namespace hh {

double radical_inverse(unsigned long long i, unsigned base) {
  double inv = 1.0 / base;
  double f = inv;
  double r = 0.0;
  while (i) {
    r += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return r;
}

std::vector<Point> sample_points(const Chart& chart, const Box& box, const Params& params,
                                 int count, double margin) {
  static constexpr unsigned kBases[4] = {2, 3, 5, 7};
  std::vector<Point> pts;
  pts.reserve(static_cast<size_t>(count));
  const unsigned long long budget = 1000ull * static_cast<unsigned long long>(count) + 1000ull;
  for (unsigned long long i = 1; i <= budget && pts.size() < static_cast<size_t>(count); ++i) {
    Point p;
    for (int d = 0; d < 4; ++d) {
      const auto& r = box[static_cast<size_t>(d)];
      p[static_cast<size_t>(d)] = cplx(r[0] + (r[1] - r[0]) * radical_inverse(i, kBases[d]));
    }
    bool ok = true;
    for (const Expr& locus : chart.singular_loci) {
      double v;
      try {
        v = std::abs(eval_value(locus, p, params));
      } catch (const Error&) {
        ok = false;
        break;
      }
      if (v <= margin) {
        ok = false;
        break;
      }
    }
    if (ok) pts.push_back(p);
  }
  if (pts.size() < static_cast<size_t>(count))
    throw SingularPoint("sample box too close to singular loci: found " +
                        std::to_string(pts.size()) + " of " + std::to_string(count) +
                        " admissible points");
  return pts;
}

}  // namespace hh
