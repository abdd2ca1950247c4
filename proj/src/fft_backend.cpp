#include "fft_backend.hpp"

#include <map>
#include <mutex>
#include <new>
#include <tuple>

namespace specknot::detail {
namespace {

enum class PlanKind { R2C1, C2C1, C2C2 };
using PlanKey = std::tuple<PlanKind, std::size_t, std::size_t, int>;

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  template <class Make>
  fftw_plan get(const PlanKey& key, Make&& make) {
    std::lock_guard lock(mutex_);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    fftw_plan plan = make();
    if (plan == nullptr) throw std::bad_alloc();
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<PlanKey, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

}  // namespace

FftwBuffer<double> alloc_real(std::size_t n) {
  auto* p = static_cast<double*>(fftw_malloc(sizeof(double) * (n == 0 ? 1 : n)));
  if (p == nullptr) throw std::bad_alloc();
  return FftwBuffer<double>(p);
}

FftwBuffer<fftw_complex> alloc_complex(std::size_t n) {
  auto* p = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * (n == 0 ? 1 : n)));
  if (p == nullptr) throw std::bad_alloc();
  return FftwBuffer<fftw_complex>(p);
}

fftw_plan plan_r2c_1d(std::size_t n) {
  return cache().get({PlanKind::R2C1, n, 0, 0}, [n] {
    auto in = alloc_real(n);
    auto out = alloc_complex(n / 2 + 1);
    return fftw_plan_dft_r2c_1d(static_cast<int>(n), in.get(), out.get(), FFTW_ESTIMATE);
  });
}

fftw_plan plan_c2c_1d(std::size_t n, int sign) {
  return cache().get({PlanKind::C2C1, n, 0, sign}, [n, sign] {
    auto in = alloc_complex(n);
    auto out = alloc_complex(n);
    return fftw_plan_dft_1d(static_cast<int>(n), in.get(), out.get(), sign, FFTW_ESTIMATE);
  });
}

fftw_plan plan_c2c_2d(std::size_t n1, std::size_t n2, int sign) {
  return cache().get({PlanKind::C2C2, n1, n2, sign}, [n1, n2, sign] {
    auto in = alloc_complex(n1 * n2);
    auto out = alloc_complex(n1 * n2);
    return fftw_plan_dft_2d(static_cast<int>(n1), static_cast<int>(n2), in.get(), out.get(), sign,
                            FFTW_ESTIMATE);
  });
}

}  // namespace specknot::detail
