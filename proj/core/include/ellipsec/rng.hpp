#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <initializer_list>

namespace ellipsec {

/// One SplitMix64 step: advances the state and returns a mixed 64-bit word.
uint64_t splitmix64_next(uint64_t& state);

/// Hash-combines a seed with stream indices so that (seed, i, j, ...) yields
/// statistically independent streams.  Used to key per-trial and per-sample
/// generators; the derivation is pure, so draws never depend on scheduling.
uint64_t derive_stream(uint64_t seed, std::initializer_list<uint64_t> parts);

/// Inverse of the standard normal CDF (Wichura's PPND16 approximation,
/// relative error below 1e-15 on (0, 1)).
double normal_quantile(double u);

/// Deterministic random stream: SplitMix64 word sequence, uniforms by
/// 53-bit mantissa fill, normals by inverse CDF.  The draw sequence is part
/// of the reproducibility contract; changing it invalidates stored seeds.
class RandomStream {
  public:
    explicit RandomStream(uint64_t seed) : state_(seed) {}
    RandomStream(uint64_t seed, std::initializer_list<uint64_t> parts)
        : state_(derive_stream(seed, parts)) {}

    uint64_t next_u64() { return splitmix64_next(state_); }

    /// Uniform on the open interval (0, 1).
    double uniform01();

    /// Uniform integer in [0, n).
    int uniform_int(int n);

    double normal() { return normal_quantile(uniform01()); }

    Eigen::VectorXd normal_vector(int k);
    Eigen::MatrixXd normal_matrix(int rows, int cols);

    /// Uniform direction on the unit sphere of R^k.
    Eigen::VectorXd sphere_vector(int k);

  private:
    uint64_t state_;
};

}  // namespace ellipsec
