#include <cstddef>

#include "ugir/kernels/kernels.hpp"

#ifdef UGIR_HAVE_OPENMP
#include <omp.h>
#endif

namespace ugir::kernels {
namespace {

inline void fuse_range(std::span<const std::span<const float>> members, double threshold, FuseOutputs out,
                       std::ptrdiff_t begin, std::ptrdiff_t end) {
  const double n = static_cast<double>(members.size());
  for (std::ptrdiff_t i = begin; i < end; ++i) {
    double sum = 0.0;
    for (const auto& m : members) sum += m[static_cast<std::size_t>(i)];
    const double mean = sum / n;
    double sq = 0.0;
    for (const auto& m : members) {
      const double d = m[static_cast<std::size_t>(i)] - mean;
      sq += d * d;
    }
    out.mean[static_cast<std::size_t>(i)] = mean;
    out.variance[static_cast<std::size_t>(i)] = sq / n;
    out.mask[static_cast<std::size_t>(i)] = mean >= threshold ? 1 : 0;
  }
}

constexpr std::ptrdiff_t kChunk = 4096;

}  // namespace

void fuse_serial(std::span<const std::span<const float>> members, double threshold, FuseOutputs out) {
  fuse_range(members, threshold, out, 0, static_cast<std::ptrdiff_t>(out.mean.size()));
}

void fuse_parallel(std::span<const std::span<const float>> members, double threshold, FuseOutputs out) {
  const auto total = static_cast<std::ptrdiff_t>(out.mean.size());
  const std::ptrdiff_t chunks = (total + kChunk - 1) / kChunk;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < chunks; ++c) {
    const std::ptrdiff_t begin = c * kChunk;
    const std::ptrdiff_t end = begin + kChunk < total ? begin + kChunk : total;
    fuse_range(members, threshold, out, begin, end);
  }
}

bool openmp_enabled() {
#ifdef UGIR_HAVE_OPENMP
  return true;
#else
  return false;
#endif
}

int max_threads() {
#ifdef UGIR_HAVE_OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace ugir::kernels
