#ifndef LPFIELD_FFT_HPP
#define LPFIELD_FFT_HPP

#include "lpfield/grid.hpp"

namespace lpfield::detail {

/// Unnormalized DFT of the full d-dimensional array.
/// sign < 0: sum f e^{-2 pi i ...}; sign > 0: sum f e^{+2 pi i ...}.
void dft_unnormalized(const GridSpec& g, const cplx* src, cplx* dst, int sign);

/// In-place unnormalized 1d DFT of `rows` contiguous rows of length n.
void dft_rows_unnormalized(int n, int rows, cplx* data, int sign);

}  // namespace lpfield::detail

#endif
