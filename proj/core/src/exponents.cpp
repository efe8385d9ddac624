#include "ellipsec/exponents.hpp"

#include <cmath>
#include <stdexcept>

namespace ellipsec {

ExponentP::ExponentP(double p) : p_(p) {
    if (std::isnan(p) || p <= 0.0) {
        throw std::invalid_argument("ExponentP: p must be positive or infinite");
    }
}

ExponentP ExponentP::dual() const {
    if (is_quasi()) {
        throw std::domain_error("ExponentP::dual: undefined for p < 1");
    }
    if (p_ == 1.0) return ExponentP::infinite();
    if (is_infinite()) return ExponentP(1.0);
    return ExponentP(p_ / (p_ - 1.0));
}

double ExponentP::dual_inv() const {
    if (is_quasi()) {
        throw std::domain_error("ExponentP::dual_inv: undefined for p < 1");
    }
    return 1.0 - inv();
}

double ExponentP::tail_exponent() const {
    const double gap = 0.5 - inv();
    if (gap <= 0.0) return std::numeric_limits<double>::infinity();
    return 1.0 / gap;
}

}  // namespace ellipsec
