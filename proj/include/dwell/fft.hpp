#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace dwell {

/// In-place-capable 1D complex FFT of fixed length backed by FFTW. Plans are
/// created under a global lock; execution is thread safe, so one instance may
/// be shared by concurrent propagators. Both directions are unnormalized.
class Fft {
public:
    explicit Fft(std::size_t n);
    ~Fft();
    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;

    std::size_t size() const { return n_; }

    void forward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) const;
    void backward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) const;

private:
    std::size_t n_;
    void* forward_plan_;
    void* backward_plan_;
    void* forward_inplace_;
    void* backward_inplace_;
};

} // namespace dwell
