#include "lqg/path.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace lqg {

void SampledPath::write_csv(std::ostream& os) const {
    char buf[96];
    if (dim_tag == PathDim::scalar) {
        os << "t,x\n";
        for (std::size_t i = 0; i < times.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", times[i], values[i]);
            os << buf;
        }
    } else {
        os << "t,x,y\n";
        for (std::size_t i = 0; i < times.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", times[i],
                          values[2 * i], values[2 * i + 1]);
            os << buf;
        }
    }
}

void SampledPath::validate() const {
    if (times.size() < 2) throw std::invalid_argument("SampledPath: need n >= 2");
    const std::size_t expect =
        dim_tag == PathDim::planar ? 2 * times.size() : times.size();
    if (values.size() != expect)
        throw std::invalid_argument("SampledPath: values/times size mismatch");
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (!(times[i] > times[i - 1]))
            throw std::invalid_argument("SampledPath: times not increasing");
    }
    for (double v : values) {
        if (!std::isfinite(v))
            throw std::invalid_argument("SampledPath: non-finite value");
    }
}

}  // namespace lqg
