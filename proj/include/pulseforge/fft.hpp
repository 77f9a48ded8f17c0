#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace pulseforge::fft {

using cplx = std::complex<double>;

// Unnormalized transforms: forward uses exp(-j2pi kn/M), inverse exp(+j2pi kn/M).
// Plans are cached per thread; planning is serialized internally.
void forward(std::span<cplx> data);
void inverse(std::span<cplx> data);

// Smallest m >= n whose prime factors are all in {2, 3, 5, 7}.
std::size_t next_fast_size(std::size_t n);

}  // namespace pulseforge::fft
