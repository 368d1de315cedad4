#ifndef QBM_FFT_HPP
#define QBM_FFT_HPP

#include <complex>
#include <cstddef>
#include <vector>

namespace qbm::fft {

// Thin FFTW3 front end. Plans are cached per thread and created under a
// global lock (FFTW planning is not thread-safe, execution is). Data is
// staged through FFTW-aligned scratch so cached plans stay valid.

// In-place complex DFT, sign = -1 forward (e^{-iwt}), +1 backward. Unnormalized.
void transform(std::vector<std::complex<double>>& data, int sign);

// DCT-I: out_j = in_0 + (-1)^j in_{n-1} + 2 sum_{k=1}^{n-2} in_k cos(pi j k / (n-1)).
// Twice the trapezoid cosine sum, which is why all cosine transforms here use it.
std::vector<double> dct1(const std::vector<double>& data);

// DCT-II: out_j = 2 sum_{k=0}^{n-1} in_k cos(pi (k+1/2) j / n).
// Twice the midpoint cosine sum; avoids evaluating integrands at the origin.
std::vector<double> dct2(const std::vector<double>& data);

std::size_t next_pow2(std::size_t n);

} // namespace qbm::fft

#endif
