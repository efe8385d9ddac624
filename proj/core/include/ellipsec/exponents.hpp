#pragma once

#include <limits>

namespace ellipsec {

/// Integrability exponent p in (0, inf].  Values below 1 select the
/// quasi-norm regime; dual() is only defined for p >= 1.
class ExponentP {
  public:
    explicit ExponentP(double p);

    static ExponentP infinite() { return ExponentP(std::numeric_limits<double>::infinity()); }

    double value() const { return p_; }
    bool is_infinite() const { return p_ == std::numeric_limits<double>::infinity(); }
    bool is_quasi() const { return p_ < 1.0; }

    /// 1/p, with 1/inf = 0.
    double inv() const { return is_infinite() ? 0.0 : 1.0 / p_; }

    /// Conjugate exponent p* with 1/p + 1/p* = 1.  Requires p >= 1.
    ExponentP dual() const;

    /// 1/p*, i.e. 1 - 1/p.  Requires p >= 1.
    double dual_inv() const;

    /// Exponent s of the weak-type tail comparison, 1/s = (1/2 - 1/p)_+.
    /// Infinite for p <= 2.
    double tail_exponent() const;

    friend bool operator==(const ExponentP& a, const ExponentP& b) { return a.p_ == b.p_; }

  private:
    double p_;
};

}  // namespace ellipsec
