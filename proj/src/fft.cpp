#include "dwell/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <vector>

#include "dwell/error.hpp"

namespace dwell {

namespace {
std::mutex& planner_mutex()
{
    static std::mutex m;
    return m;
}

fftw_complex* as_fftw(const std::complex<double>* p)
{
    // fftw_execute_dft takes non-const input even for out-of-place transforms
    // and does not modify it.
    return reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(p));
}
} // namespace

Fft::Fft(std::size_t n)
    : n_(n)
{
    require(n > 0, ErrorCode::InvalidArgument, "FFT length must be positive");
    std::vector<std::complex<double>> a(n), b(n);
    std::lock_guard lock(planner_mutex());
    const int len = static_cast<int>(n);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    forward_plan_ = fftw_plan_dft_1d(len, as_fftw(a.data()), as_fftw(b.data()), FFTW_FORWARD, flags);
    backward_plan_ = fftw_plan_dft_1d(len, as_fftw(a.data()), as_fftw(b.data()), FFTW_BACKWARD, flags);
    forward_inplace_ = fftw_plan_dft_1d(len, as_fftw(a.data()), as_fftw(a.data()), FFTW_FORWARD, flags);
    backward_inplace_ = fftw_plan_dft_1d(len, as_fftw(a.data()), as_fftw(a.data()), FFTW_BACKWARD, flags);
}

Fft::~Fft()
{
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
    fftw_destroy_plan(static_cast<fftw_plan>(backward_plan_));
    fftw_destroy_plan(static_cast<fftw_plan>(forward_inplace_));
    fftw_destroy_plan(static_cast<fftw_plan>(backward_inplace_));
}

void Fft::forward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) const
{
    require(in.size() == n_ && out.size() == n_, ErrorCode::InvalidArgument, "FFT length mismatch");
    auto plan = in.data() == out.data() ? forward_inplace_ : forward_plan_;
    fftw_execute_dft(static_cast<fftw_plan>(plan), as_fftw(in.data()), as_fftw(out.data()));
}

void Fft::backward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) const
{
    require(in.size() == n_ && out.size() == n_, ErrorCode::InvalidArgument, "FFT length mismatch");
    auto plan = in.data() == out.data() ? backward_inplace_ : backward_plan_;
    fftw_execute_dft(static_cast<fftw_plan>(plan), as_fftw(in.data()), as_fftw(out.data()));
}

} // namespace dwell
