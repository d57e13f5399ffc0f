#include "vlc/fft.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace vlc {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void fft_inplace(std::vector<cplx>& data, bool inverse)
{
    const std::size_t n = data.size();
    if (!is_power_of_two(n))
        throw std::invalid_argument("fft: size must be a power of two, got " + std::to_string(n));
    if (n < 2) return;

    // bit reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(data[i], data[j]);
    }

    const double sign = inverse ? 1.0 : -1.0;
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = sign * 2.0 * std::numbers::pi / static_cast<double>(len);
        const cplx wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cplx w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const cplx u = data[i + k];
                const cplx v = data[i + k + len / 2] * w;
                data[i + k] = u + v;
                data[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

std::vector<cplx> fft(std::vector<cplx> data)
{
    fft_inplace(data, false);
    return data;
}

std::vector<cplx> ifft_unnormalized(std::vector<cplx> data)
{
    fft_inplace(data, true);
    return data;
}

} // namespace vlc
