#pragma once

#include <string>
#include <vector>

namespace ellipsec {

/// Non-increasing positive semiaxis profile sigma_1 >= sigma_2 >= ... > 0.
class Semiaxes {
  public:
    explicit Semiaxes(std::vector<double> values);

    /// sigma_j = j^{-lambda}, lambda > 0, for j = 1..m.
    static Semiaxes polynomial(int m, double lambda);

    /// sigma_j = value for all j.
    static Semiaxes constant(int m, double value = 1.0);

    /// Single-column CSV with a header row, one semiaxis per line.
    static Semiaxes load_csv(const std::string& path);
    void save_csv(const std::string& path) const;

    int size() const { return static_cast<int>(values_.size()); }

    /// 1-based access matching the index convention sigma_1 >= ... >= sigma_m.
    double at(int j) const { return values_.at(static_cast<size_t>(j - 1)); }

    /// 0-based access.
    double operator[](int i) const { return values_[static_cast<size_t>(i)]; }

    const std::vector<double>& values() const { return values_; }

  private:
    std::vector<double> values_;
};

/// (sum_{j=from}^{to} sigma_j^r)^{1/r} with 1-based indices, overflow-safe.
/// r = inf returns sigma_from.
double tail_power_sum(const Semiaxes& sigma, int from, int to, double r);

}  // namespace ellipsec
