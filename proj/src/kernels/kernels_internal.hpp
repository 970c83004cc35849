#pragma once

#include "banditnav/kernels/kernels.hpp"

namespace banditnav::kernels {

std::uint8_t classify_one(double lo, double occupied_threshold, double free_threshold);

/// Scalar frontier test over the sub-rectangle [row_begin,row_end) x [col_begin,col_end).
void frontier_rows_scalar(const std::uint8_t* state, int width, int height, int row_begin,
                          int row_end, int col_begin, int col_end, std::uint8_t* out);

#if defined(BANDITNAV_HAVE_AVX2)
const KernelTable& avx2_table_impl();
#endif

}  // namespace banditnav::kernels
