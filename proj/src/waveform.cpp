#include "threelevel/waveform.hpp"

#include <cmath>

namespace threelevel {

std::complex<double> Waveform::operator()(double t) const {
    switch (kind) {
        case Kind::constant: return amplitude;
        case Kind::cosine: return amplitude * std::cos(frequency * t + phase);
        case Kind::sech: return amplitude / std::cosh((t - center) / width);
        case Kind::gaussian: {
            const double x = (t - center) / width;
            return 0.5 * amplitude * std::exp(-x * x);
        }
    }
    return {};
}

}  // namespace threelevel
