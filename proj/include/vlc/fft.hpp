#pragma once

#include <complex>
#include <vector>

namespace vlc {

using cplx = std::complex<double>;

// In-place radix-2 DIT transform. Size must be a power of two.
// No normalization is applied in either direction; callers that need the
// 1/N inverse convention (see idft_frame) scale themselves.
void fft_inplace(std::vector<cplx>& data, bool inverse);

std::vector<cplx> fft(std::vector<cplx> data);
std::vector<cplx> ifft_unnormalized(std::vector<cplx> data);

bool is_power_of_two(std::size_t n);

} // namespace vlc
