#pragma once

#include <complex>
#include <vector>

namespace jumpwave {

using cplx = std::complex<double>;

// In-place radix-2 Cooley-Tukey transform; size must be a power of two.
void fft_inplace(std::vector<cplx>& a, bool inverse);

std::vector<cplx> fft(const std::vector<cplx>& a);
std::vector<cplx> ifft(const std::vector<cplx>& a);

bool is_power_of_two(std::size_t n);

} // namespace jumpwave
