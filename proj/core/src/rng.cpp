#include "ellipsec/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace ellipsec {

uint64_t splitmix64_next(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

uint64_t derive_stream(uint64_t seed, std::initializer_list<uint64_t> parts) {
    uint64_t state = seed ^ 0xd1b54a32d192ed03ULL;
    uint64_t h = splitmix64_next(state);
    for (uint64_t part : parts) {
        state ^= part + 0x2545f4914f6cdd1dULL + (h << 6) + (h >> 2);
        h = splitmix64_next(state);
    }
    return h;
}

namespace {

// Wichura (1988), algorithm AS 241, PPND16 coefficient sets.
constexpr double kA[8] = {3.3871328727963666080e0,  1.3314166789178437745e2,
                          1.9715909503065514427e3,  1.3731693765509461125e4,
                          4.5921953931549871457e4,  6.7265770927008700853e4,
                          3.3430575583588128105e4,  2.5090809287301226727e3};
constexpr double kB[8] = {1.0,
                          4.2313330701600911252e1,
                          6.8718700749205790830e2,
                          5.3941960214247511077e3,
                          2.1213794301586595867e4,
                          3.9307895800092710610e4,
                          2.8729085735721942674e4,
                          5.2264952788528545610e3};
constexpr double kC[8] = {1.42343711074968357734e0,  4.63033784615654529590e0,
                          5.76949722146069140550e0,  3.64784832476320460504e0,
                          1.27045825245236838258e0,  2.41780725177450611770e-1,
                          2.27238449892691845833e-2, 7.74545014278341407640e-4};
constexpr double kD[8] = {1.0,
                          2.05319162663775882187e0,
                          1.67638483018380384940e0,
                          6.89767334985100004550e-1,
                          1.48103976427480074590e-1,
                          1.51986665636164571966e-2,
                          5.47593808499534494600e-4,
                          1.05075007164441684324e-9};
constexpr double kE[8] = {6.65790464350110377720e0,  5.46378491116411436990e0,
                          1.78482653991729133580e0,  2.96560571828504891230e-1,
                          2.65321895265761230930e-2, 1.24266094738807843860e-3,
                          2.71155556874348757815e-5, 2.01033439929228813265e-7};
constexpr double kF[8] = {1.0,
                          5.99832206555887937690e-1,
                          1.36929880922735805310e-1,
                          1.48753612908506148525e-2,
                          7.86869131145613259100e-4,
                          1.84631831751005468180e-5,
                          1.42151175831644588870e-7,
                          2.04426310338993978564e-15};

double poly7(const double (&c)[8], double r) {
    double acc = c[7];
    for (int i = 6; i >= 0; --i) acc = acc * r + c[i];
    return acc;
}

}  // namespace

double normal_quantile(double u) {
    if (!(u > 0.0) || !(u < 1.0)) {
        throw std::invalid_argument("normal_quantile: u must lie in (0, 1)");
    }
    const double q = u - 0.5;
    if (std::abs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        return q * poly7(kA, r) / poly7(kB, r);
    }
    double r = q < 0.0 ? u : 1.0 - u;
    r = std::sqrt(-std::log(r));
    double value;
    if (r <= 5.0) {
        r -= 1.6;
        value = poly7(kC, r) / poly7(kD, r);
    } else {
        r -= 5.0;
        value = poly7(kE, r) / poly7(kF, r);
    }
    return q < 0.0 ? -value : value;
}

double RandomStream::uniform01() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

int RandomStream::uniform_int(int n) {
    if (n <= 0) throw std::invalid_argument("RandomStream::uniform_int: n must be positive");
    const uint64_t bound = static_cast<uint64_t>(n);
    const uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    uint64_t x;
    do {
        x = next_u64();
    } while (x >= limit);
    return static_cast<int>(x % bound);
}

Eigen::VectorXd RandomStream::normal_vector(int k) {
    Eigen::VectorXd v(k);
    for (int i = 0; i < k; ++i) v[i] = normal();
    return v;
}

Eigen::MatrixXd RandomStream::normal_matrix(int rows, int cols) {
    Eigen::MatrixXd a(rows, cols);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) a(i, j) = normal();
    }
    return a;
}

Eigen::VectorXd RandomStream::sphere_vector(int k) {
    while (true) {
        Eigen::VectorXd v = normal_vector(k);
        const double norm = v.norm();
        if (norm > 1e-8) return v / norm;
    }
}

}  // namespace ellipsec
