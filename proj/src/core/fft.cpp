#include "fft.hpp"

#include "common.hpp"

#include <cmath>

namespace jumpwave {

bool is_power_of_two(std::size_t n) {
    return n > 0 && (n & (n - 1)) == 0;
}

void fft_inplace(std::vector<cplx>& a, bool inverse) {
    const std::size_t n = a.size();
    require(is_power_of_two(n), "fft size must be a power of two");

    // Bit-reversal permutation.
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }

    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = (inverse ? 2.0 : -2.0) * M_PI / static_cast<double>(len);
        const cplx wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cplx w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                cplx even = a[i + k];
                cplx odd = a[i + k + len / 2] * w;
                a[i + k] = even + odd;
                a[i + k + len / 2] = even - odd;
                w *= wlen;
            }
        }
    }

    if (inverse) {
        const double scale = 1.0 / static_cast<double>(n);
        for (auto& v : a) v *= scale;
    }
}

std::vector<cplx> fft(const std::vector<cplx>& a) {
    std::vector<cplx> out = a;
    fft_inplace(out, false);
    return out;
}

std::vector<cplx> ifft(const std::vector<cplx>& a) {
    std::vector<cplx> out = a;
    fft_inplace(out, true);
    return out;
}

} // namespace jumpwave
