#include "lpfield/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

namespace lpfield::detail {

namespace {

struct Plan {
  fftw_plan plan = nullptr;
  fftw_complex* in = nullptr;
  fftw_complex* out = nullptr;
  std::size_t total = 0;
  std::mutex mtx;

  ~Plan() {
    if (plan) fftw_destroy_plan(plan);
    if (in) fftw_free(in);
    if (out) fftw_free(out);
  }
};

// Plans own their buffers and every execution copies through them, so FFTW
// sees one fixed alignment per (d, n, sign) and results are bit-stable.
std::mutex cache_mtx;
std::map<std::tuple<int, int, int>, std::unique_ptr<Plan>> cache;

Plan& get_plan(int d, int n, int sign) {
  std::lock_guard lk(cache_mtx);
  auto& slot = cache[{d, n, sign}];
  if (!slot) {
    auto p = std::make_unique<Plan>();
    p->total = static_cast<std::size_t>(n);
    if (d == 2) p->total *= static_cast<std::size_t>(n);
    p->in = fftw_alloc_complex(p->total);
    p->out = fftw_alloc_complex(p->total);
    p->plan = (d == 1)
                  ? fftw_plan_dft_1d(n, p->in, p->out, sign, FFTW_ESTIMATE)
                  : fftw_plan_dft_2d(n, n, p->in, p->out, sign, FFTW_ESTIMATE);
    slot = std::move(p);
  }
  return *slot;
}

void run(int d, int n, int sign, const cplx* src, cplx* dst) {
  Plan& p = get_plan(d, n, sign);
  std::lock_guard lk(p.mtx);
  std::memcpy(static_cast<void*>(p.in), static_cast<const void*>(src),
              p.total * sizeof(cplx));
  fftw_execute(p.plan);
  std::memcpy(static_cast<void*>(dst), static_cast<const void*>(p.out),
              p.total * sizeof(cplx));
}

}  // namespace

void dft_unnormalized(const GridSpec& g, const cplx* src, cplx* dst,
                      int sign) {
  run(g.d, g.n(), sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, src, dst);
}

void dft_rows_unnormalized(int n, int rows, cplx* data, int sign) {
  for (int r = 0; r < rows; ++r) {
    cplx* row = data + static_cast<std::size_t>(r) * n;
    run(1, n, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, row, row);
  }
}

}  // namespace lpfield::detail
