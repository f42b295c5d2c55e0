#pragma once

#include <complex>
#include <mutex>
#include <stdexcept>
#include <vector>

#include <fftw3.h>

namespace bcs::detail {

// FFTW's planner is not thread-safe; execution of a created plan is.
inline std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

/// In-place d-dimensional complex DFT, row-major layout (last index fastest).
/// sign = FFTW_FORWARD (-1) or FFTW_BACKWARD (+1); unnormalized in both
/// directions, matching the usual convention
///   forward:  X(j) = sum_k x(k) exp(-2 pi i j.k / n)
///   backward: X(j) = sum_k x(k) exp(+2 pi i j.k / n).
inline void dft_inplace(std::vector<std::complex<double>>& data,
                        const std::vector<int>& dims, int sign) {
    std::size_t total = 1;
    for (int n : dims) total *= static_cast<std::size_t>(n);
    if (data.size() != total)
        throw std::invalid_argument("dft: data size does not match dims");

    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex());
        plan = fftw_plan_dft(static_cast<int>(dims.size()),
                             dims.data(), buf, buf, sign, FFTW_ESTIMATE);
    }
    if (!plan) throw std::runtime_error("dft: fftw plan creation failed");
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex());
        fftw_destroy_plan(plan);
    }
}

inline std::vector<std::complex<double>> dft(
    std::vector<std::complex<double>> data,
    const std::vector<int>& dims, int sign) {
    dft_inplace(data, dims, sign);
    return data;
}

}  // namespace bcs::detail
