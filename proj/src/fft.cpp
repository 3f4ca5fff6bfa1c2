#include "pks/fft.hpp"

#include <fftw3.h>

#include <cassert>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace pks {

namespace {

enum class PlanKind { forward_2d, backward_2d, forward_y, backward_y };

class PlanCache {
public:
    static PlanCache& instance() {
        static PlanCache cache;
        return cache;
    }

    fftw_plan get(const Grid& grid, PlanKind kind) {
        std::lock_guard lock(mutex_);
        auto key = std::make_tuple(grid.nx, grid.ny, kind);
        if (auto it = plans_.find(key); it != plans_.end()) return it->second;

        std::vector<Complex> in(grid.size()), out(grid.size());
        auto* pin = reinterpret_cast<fftw_complex*>(in.data());
        auto* pout = reinterpret_cast<fftw_complex*>(out.data());
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        fftw_plan plan = nullptr;
        int n_y = grid.ny;
        switch (kind) {
        case PlanKind::forward_2d:
            plan = fftw_plan_dft_2d(grid.nx, grid.ny, pin, pout, FFTW_FORWARD, flags);
            break;
        case PlanKind::backward_2d:
            plan = fftw_plan_dft_2d(grid.nx, grid.ny, pin, pout, FFTW_BACKWARD, flags);
            break;
        case PlanKind::forward_y:
            plan = fftw_plan_many_dft(1, &n_y, grid.nx, pin, nullptr, 1, grid.ny, pout, nullptr, 1, grid.ny,
                                      FFTW_FORWARD, flags);
            break;
        case PlanKind::backward_y:
            plan = fftw_plan_many_dft(1, &n_y, grid.nx, pin, nullptr, 1, grid.ny, pout, nullptr, 1, grid.ny,
                                      FFTW_BACKWARD, flags);
            break;
        }
        if (plan == nullptr) throw std::runtime_error("FFTW plan creation failed");
        plans_.emplace(key, plan);
        return plan;
    }

    ~PlanCache() {
        for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
    }

private:
    PlanCache() = default;
    std::mutex mutex_;
    std::map<std::tuple<int, int, PlanKind>, fftw_plan> plans_;
};

void execute(const Grid& grid, PlanKind kind, const Complex* in, Complex* out) {
    fftw_plan plan = PlanCache::instance().get(grid, kind);
    // new-array execute never writes `in` for out-of-place c2c plans
    fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(const_cast<Complex*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
}

void check_sizes(const Grid& grid, std::size_t a, std::size_t b) {
    if (a != grid.size() || b != grid.size()) throw std::invalid_argument("transform buffer size mismatch");
}

}  // namespace

void forward_transform(const Grid& grid, std::span<const Complex> physical, std::span<Complex> coeffs) {
    check_sizes(grid, physical.size(), coeffs.size());
    execute(grid, PlanKind::forward_2d, physical.data(), coeffs.data());
    const double scale = 1.0 / static_cast<double>(grid.size());
    for (auto& c : coeffs) c *= scale;
}

void forward_transform(const Grid& grid, std::span<const double> physical, std::span<Complex> coeffs) {
    std::vector<Complex> buffer(physical.begin(), physical.end());
    forward_transform(grid, std::span<const Complex>(buffer), coeffs);
}

void inverse_transform(const Grid& grid, std::span<const Complex> coeffs, std::span<Complex> physical) {
    check_sizes(grid, coeffs.size(), physical.size());
    execute(grid, PlanKind::backward_2d, coeffs.data(), physical.data());
}

void inverse_transform(const Grid& grid, std::span<const Complex> coeffs, std::span<double> physical,
                       std::span<Complex> scratch) {
    check_sizes(grid, coeffs.size(), physical.size());
    check_sizes(grid, scratch.size(), scratch.size());
    execute(grid, PlanKind::backward_2d, coeffs.data(), scratch.data());
    for (std::size_t p = 0; p < physical.size(); ++p) physical[p] = scratch[p].real();
}

std::vector<Complex> forward_transform(const Grid& grid, std::span<const double> physical) {
    std::vector<Complex> coeffs(grid.size());
    forward_transform(grid, physical, std::span<Complex>(coeffs));
    return coeffs;
}

std::vector<double> inverse_transform(const Grid& grid, std::span<const Complex> coeffs) {
    std::vector<double> physical(grid.size());
    std::vector<Complex> scratch(grid.size());
    inverse_transform(grid, coeffs, std::span<double>(physical), std::span<Complex>(scratch));
    return physical;
}

void forward_transform_y(const Grid& grid, std::span<const Complex> mixed, std::span<Complex> coeffs) {
    check_sizes(grid, mixed.size(), coeffs.size());
    execute(grid, PlanKind::forward_y, mixed.data(), coeffs.data());
    const double scale = 1.0 / grid.ny;
    for (auto& c : coeffs) c *= scale;
}

void inverse_transform_y(const Grid& grid, std::span<const Complex> coeffs, std::span<Complex> mixed) {
    check_sizes(grid, coeffs.size(), mixed.size());
    execute(grid, PlanKind::backward_y, coeffs.data(), mixed.data());
}

}  // namespace pks
