#pragma once

#include <cstddef>
#include <vector>

namespace sailfit {

// Every parallel kernel in this library has a serial twin that performs the
// identical arithmetic in the identical association order, so Serial and
// Parallel runs produce bit-identical results and the serial path doubles as
// the test reference. tools/bench.cpp times the two side by side.
enum class ExecMode { Serial, Parallel };

namespace detail {

inline constexpr std::size_t kPairwiseBlock = 4096;
inline constexpr std::size_t kPairwiseLeaf = 64;

// Recursive pairwise (cascade) summation over elem(lo..hi).
template <typename F>
double pairwise_block(std::size_t lo, std::size_t hi, const F& elem) {
    if (hi - lo <= kPairwiseLeaf) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += elem(i);
        return s;
    }
    std::size_t mid = lo + (hi - lo) / 2;
    return pairwise_block(lo, mid, elem) + pairwise_block(mid, hi, elem);
}

} // namespace detail

// Pairwise summation of elem(0..n). The block partition is fixed (4096-wide
// blocks, pairwise within and across), so the association order never depends
// on the thread count; only the schedule differs between modes. Pairwise
// association keeps the rounding error O(log n) on the 1e6-row, 1e12-magnitude
// sums the price metrics produce.
template <typename F>
double pairwise_reduce(std::size_t n, const F& elem, ExecMode mode) {
    if (n == 0) return 0.0;
    const std::size_t nblocks = (n + detail::kPairwiseBlock - 1) / detail::kPairwiseBlock;
    if (nblocks == 1) return detail::pairwise_block(0, n, elem);

    std::vector<double> partial(nblocks);
    if (mode == ExecMode::Parallel) {
#pragma omp parallel for schedule(static)
        for (long b = 0; b < static_cast<long>(nblocks); ++b) {
            std::size_t lo = static_cast<std::size_t>(b) * detail::kPairwiseBlock;
            std::size_t hi = lo + detail::kPairwiseBlock < n ? lo + detail::kPairwiseBlock : n;
            partial[static_cast<std::size_t>(b)] = detail::pairwise_block(lo, hi, elem);
        }
    } else {
        for (std::size_t b = 0; b < nblocks; ++b) {
            std::size_t lo = b * detail::kPairwiseBlock;
            std::size_t hi = lo + detail::kPairwiseBlock < n ? lo + detail::kPairwiseBlock : n;
            partial[b] = detail::pairwise_block(lo, hi, elem);
        }
    }
    return detail::pairwise_block(0, nblocks, [&](std::size_t b) { return partial[b]; });
}

inline double pairwise_sum(const std::vector<double>& v, ExecMode mode = ExecMode::Parallel) {
    return pairwise_reduce(v.size(), [&](std::size_t i) { return v[i]; }, mode);
}

} // namespace sailfit
