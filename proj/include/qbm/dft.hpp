// dft.hpp — thin FFTW wrapper: unnormalized in-place complex DFTs with a plan cache.

#pragma once

#include <complex>
#include <cstddef>
#include <string>

namespace qbm::dft {

// out_k = sum_m in_m exp(-2 pi i k m / n)
void forward(std::complex<double>* data, std::size_t n);
// out_m = sum_k in_k exp(+2 pi i k m / n)   (no 1/n)
void backward(std::complex<double>* data, std::size_t n);

std::string backend_version();

} // namespace qbm::dft
