#include "qbm/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

namespace qbm::fft {

namespace {

std::mutex plan_mutex; // FFTW planner is a global resource

struct ComplexPlan {
    fftw_plan plan = nullptr;
    fftw_complex* buf = nullptr;
    std::size_t n = 0;

    ComplexPlan(std::size_t size, int sign) : n(size) {
        buf = fftw_alloc_complex(size);
        std::lock_guard<std::mutex> lock(plan_mutex);
        plan = fftw_plan_dft_1d(static_cast<int>(size), buf, buf,
                                sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    ComplexPlan(const ComplexPlan&) = delete;
    ~ComplexPlan() {
        std::lock_guard<std::mutex> lock(plan_mutex);
        if (plan) fftw_destroy_plan(plan);
        fftw_free(buf);
    }
};

struct RealEvenPlan {
    fftw_plan plan = nullptr;
    double* buf = nullptr;
    std::size_t n = 0;

    RealEvenPlan(std::size_t size, fftw_r2r_kind kind) : n(size) {
        buf = fftw_alloc_real(size);
        std::lock_guard<std::mutex> lock(plan_mutex);
        plan = fftw_plan_r2r_1d(static_cast<int>(size), buf, buf, kind, FFTW_ESTIMATE);
    }
    RealEvenPlan(const RealEvenPlan&) = delete;
    ~RealEvenPlan() {
        std::lock_guard<std::mutex> lock(plan_mutex);
        if (plan) fftw_destroy_plan(plan);
        fftw_free(buf);
    }
};

std::vector<double> run_r2r(const std::vector<double>& data, fftw_r2r_kind kind,
                            std::unordered_map<std::size_t, std::unique_ptr<RealEvenPlan>>& cache) {
    auto it = cache.find(data.size());
    if (it == cache.end())
        it = cache.emplace(data.size(), std::make_unique<RealEvenPlan>(data.size(), kind)).first;
    RealEvenPlan& p = *it->second;
    std::memcpy(p.buf, data.data(), data.size() * sizeof(double));
    fftw_execute(p.plan);
    return std::vector<double>(p.buf, p.buf + data.size());
}

} // namespace

void transform(std::vector<std::complex<double>>& data, int sign) {
    if (data.empty()) return;
    thread_local std::unordered_map<std::size_t, std::unique_ptr<ComplexPlan>> fwd, bwd;
    auto& cache = sign < 0 ? fwd : bwd;
    auto it = cache.find(data.size());
    if (it == cache.end())
        it = cache.emplace(data.size(), std::make_unique<ComplexPlan>(data.size(), sign)).first;
    ComplexPlan& p = *it->second;
    // std::complex<double> is layout-compatible with fftw_complex
    auto* raw = reinterpret_cast<double*>(data.data());
    std::memcpy(p.buf, raw, data.size() * sizeof(fftw_complex));
    fftw_execute(p.plan);
    std::memcpy(raw, p.buf, data.size() * sizeof(fftw_complex));
}

std::vector<double> dct1(const std::vector<double>& data) {
    if (data.size() < 2) throw std::invalid_argument("dct1 needs at least two points");
    thread_local std::unordered_map<std::size_t, std::unique_ptr<RealEvenPlan>> cache;
    return run_r2r(data, FFTW_REDFT00, cache);
}

std::vector<double> dct2(const std::vector<double>& data) {
    if (data.empty()) throw std::invalid_argument("dct2 needs at least one point");
    thread_local std::unordered_map<std::size_t, std::unique_ptr<RealEvenPlan>> cache;
    return run_r2r(data, FFTW_REDFT10, cache);
}

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

} // namespace qbm::fft
