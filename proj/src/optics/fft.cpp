#include "nlos/optics/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>

namespace nlos::optics {
namespace {

// FFTW's planner is not thread-safe; execution with fftw_execute_dft is.
// Plans are created once per (shape, direction) with FFTW_UNALIGNED so they
// can be executed on any std::vector storage.
class PlanCache {
public:
    ~PlanCache() {
        for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
    }

    fftw_plan get(int nx, int ny, int sign) {
        std::lock_guard lock(mutex_);
        const auto key = std::make_tuple(nx, ny, sign);
        if (auto it = plans_.find(key); it != plans_.end()) return it->second;
        auto* scratch = fftw_alloc_complex(static_cast<std::size_t>(nx) * ny);
        fftw_plan plan = fftw_plan_dft_2d(ny, nx, scratch, scratch, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
        fftw_free(scratch);
        plans_.emplace(key, plan);
        return plan;
    }

private:
    std::mutex mutex_;
    std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

PlanCache& plan_cache() {
    static PlanCache cache;
    return cache;
}

void execute(std::span<complex> data, int nx, int ny, int sign) {
    auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(plan_cache().get(nx, ny, sign), ptr, ptr);
}

}  // namespace

void fft2_forward(std::span<complex> data, int nx, int ny) { execute(data, nx, ny, FFTW_FORWARD); }

void fft2_inverse(std::span<complex> data, int nx, int ny) {
    execute(data, nx, ny, FFTW_BACKWARD);
    const double scale = 1.0 / (static_cast<double>(nx) * ny);
    for (auto& v : data) v *= scale;
}

}  // namespace nlos::optics
