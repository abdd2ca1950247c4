#pragma once
// Thin FFTW wrapper: cached plans and aligned buffers.

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <memory>

namespace specknot::detail {

struct FftwFree {
  void operator()(void* p) const noexcept { fftw_free(p); }
};

template <class T>
using FftwBuffer = std::unique_ptr<T[], FftwFree>;

FftwBuffer<double> alloc_real(std::size_t n);
FftwBuffer<fftw_complex> alloc_complex(std::size_t n);

// Plans are created once per shape and reused through the new-array execute
// interface, which is safe to call concurrently.
fftw_plan plan_r2c_1d(std::size_t n);
fftw_plan plan_c2c_1d(std::size_t n, int sign);
fftw_plan plan_c2c_2d(std::size_t n1, std::size_t n2, int sign);

}  // namespace specknot::detail
