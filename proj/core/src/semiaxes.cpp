#include "ellipsec/semiaxes.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace ellipsec {

Semiaxes::Semiaxes(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) {
        throw std::invalid_argument("Semiaxes: empty profile");
    }
    double prev = std::numeric_limits<double>::infinity();
    for (double v : values_) {
        if (!std::isfinite(v) || v <= 0.0) {
            throw std::invalid_argument("Semiaxes: entries must be finite and positive");
        }
        if (v > prev) {
            throw std::invalid_argument("Semiaxes: entries must be non-increasing");
        }
        prev = v;
    }
}

Semiaxes Semiaxes::polynomial(int m, double lambda) {
    if (m < 1) throw std::invalid_argument("Semiaxes::polynomial: m must be >= 1");
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw std::invalid_argument("Semiaxes::polynomial: lambda must be positive");
    }
    std::vector<double> v(static_cast<size_t>(m));
    for (int j = 1; j <= m; ++j) {
        v[static_cast<size_t>(j - 1)] = std::pow(static_cast<double>(j), -lambda);
    }
    return Semiaxes(std::move(v));
}

Semiaxes Semiaxes::constant(int m, double value) {
    if (m < 1) throw std::invalid_argument("Semiaxes::constant: m must be >= 1");
    return Semiaxes(std::vector<double>(static_cast<size_t>(m), value));
}

Semiaxes Semiaxes::load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("Semiaxes::load_csv: cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) {
        throw std::runtime_error("Semiaxes::load_csv: empty file " + path);
    }
    std::vector<double> v;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
        if (line.empty()) continue;
        size_t pos = 0;
        double x = std::stod(line, &pos);
        if (pos != line.size()) {
            throw std::runtime_error("Semiaxes::load_csv: malformed row '" + line + "'");
        }
        v.push_back(x);
    }
    return Semiaxes(std::move(v));
}

void Semiaxes::save_csv(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("Semiaxes::save_csv: cannot open " + path);
    out << "sigma\r\n";
    out.precision(17);
    for (double v : values_) {
        out << v << "\r\n";
    }
}

double tail_power_sum(const Semiaxes& sigma, int from, int to, double r) {
    if (from < 1 || to > sigma.size() || from > to) {
        throw std::invalid_argument("tail_power_sum: bad index range");
    }
    if (!(r > 0.0)) throw std::invalid_argument("tail_power_sum: r must be positive");
    const double head = sigma.at(from);
    if (r == std::numeric_limits<double>::infinity()) return head;
    double acc = 0.0;
    for (int j = from; j <= to; ++j) {
        acc += std::pow(sigma.at(j) / head, r);
    }
    return head * std::pow(acc, 1.0 / r);
}

}  // namespace ellipsec
