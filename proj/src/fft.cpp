#include "pulseforge/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <utility>

namespace pulseforge::fft {
namespace {

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct Plan {
    fftw_plan plan = nullptr;
    fftw_complex* buffer = nullptr;
    std::size_t size = 0;

    Plan(std::size_t n, int sign) : size(n) {
        std::lock_guard lock(planner_mutex());
        buffer = fftw_alloc_complex(n);
        plan = fftw_plan_dft_1d(static_cast<int>(n), buffer, buffer, sign, FFTW_ESTIMATE);
    }
    ~Plan() {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan);
        fftw_free(buffer);
    }
    Plan(const Plan&) = delete;
    Plan& operator=(const Plan&) = delete;
};

Plan& plan_for(std::size_t n, int sign) {
    thread_local std::map<std::pair<std::size_t, int>, std::unique_ptr<Plan>> cache;
    auto& slot = cache[{n, sign}];
    if (!slot) slot = std::make_unique<Plan>(n, sign);
    return *slot;
}

void run(std::span<cplx> data, int sign) {
    if (data.empty()) return;
    Plan& p = plan_for(data.size(), sign);
    auto* buf = reinterpret_cast<cplx*>(p.buffer);
    std::copy(data.begin(), data.end(), buf);
    fftw_execute(p.plan);
    std::copy(buf, buf + data.size(), data.begin());
}

}  // namespace

void forward(std::span<cplx> data) { run(data, FFTW_FORWARD); }
void inverse(std::span<cplx> data) { run(data, FFTW_BACKWARD); }

std::size_t next_fast_size(std::size_t n) {
    if (n <= 1) return 1;
    for (std::size_t m = n;; ++m) {
        std::size_t r = m;
        for (std::size_t p : {2, 3, 5, 7})
            while (r % p == 0) r /= p;
        if (r == 1) return m;
    }
}

}  // namespace pulseforge::fft
