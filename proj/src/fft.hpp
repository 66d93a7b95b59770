#pragma once

#include <cstddef>
#include <span>

#include "cwss/types.hpp"

namespace cwss::detail {

// Unitary DFT (1/sqrt(N) in both directions) backed by FFTW. Plans are cached
// per length; execution is thread-safe.
void dft_forward(std::span<const Complex> in, std::span<Complex> out);
void dft_inverse(std::span<const Complex> in, std::span<Complex> out);

}  // namespace cwss::detail
