#pragma once

#include <complex>
#include <vector>

namespace aerodet::detail {

enum class FftDirection { Forward, Inverse };

// Unnormalised 2D DFT of an n x n row-major array with the origin at
// index 0. The inverse carries no 1/n^2 factor.
std::vector<std::complex<double>> dft2d(const std::vector<std::complex<double>>& data, int n,
                                        FftDirection direction);

}  // namespace aerodet::detail
