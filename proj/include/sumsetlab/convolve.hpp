#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace sumsetlab {

// Exact linear convolution of nonnegative integer sequences.
//
// Dispatch: schoolbook for small inputs; double-precision FFT with a rounding
// guard when the result provably fits the 53-bit mantissa; exact NTT modulo
// 29*2^57+1 otherwise or when the guard trips. Result values must stay below
// that prime (~4.18e18); larger results raise std::overflow_error.
std::vector<std::int64_t> convolve(std::span<const std::int64_t> a,
                                   std::span<const std::int64_t> b);

namespace conv_detail {

inline constexpr double kFftResidualLimit = 0.25;

std::vector<std::int64_t> schoolbook(std::span<const std::int64_t> a,
                                     std::span<const std::int64_t> b);

// Rounded FFT convolution plus the largest |rounding residual| observed.
std::pair<std::vector<std::int64_t>, double> fft_convolve(std::span<const std::int64_t> a,
                                                          std::span<const std::int64_t> b);

std::vector<std::int64_t> ntt_convolve(std::span<const std::int64_t> a,
                                       std::span<const std::int64_t> b);

}  // namespace conv_detail

}  // namespace sumsetlab
