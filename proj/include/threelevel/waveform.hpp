#pragma once

#include <complex>

namespace threelevel {

// Scalar drive waveforms.
//   constant: A
//   cosine:   A cos(frequency t + phase)
//   sech:     A sech((t - center) / width)
//   gaussian: (A / 2) exp(-((t - center) / width)^2)
struct Waveform {
    enum class Kind { constant, cosine, sech, gaussian };

    Kind kind = Kind::constant;
    std::complex<double> amplitude{};
    double frequency = 0.0;
    double phase = 0.0;
    double width = 1.0;
    double center = 0.0;

    std::complex<double> operator()(double t) const;

    static Waveform constant(std::complex<double> a) { return {Kind::constant, a}; }
    static Waveform cosine(std::complex<double> a, double omega, double phi = 0.0) {
        return {Kind::cosine, a, omega, phi};
    }
    static Waveform sech(std::complex<double> a, double width, double center = 0.0) {
        return {Kind::sech, a, 0.0, 0.0, width, center};
    }
    static Waveform gaussian(std::complex<double> a, double width, double center) {
        return {Kind::gaussian, a, 0.0, 0.0, width, center};
    }

    bool operator==(const Waveform&) const = default;
};

}  // namespace threelevel
