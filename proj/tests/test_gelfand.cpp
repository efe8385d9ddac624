#include <doctest.h>

#include <cmath>
#include <limits>

#include "ellipsec/gelfand.hpp"

using namespace ellipsec;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
const ExponentP kTwo(2.0);
}  // namespace

TEST_CASE("exact tail reduces to known closed forms") {
    const Semiaxes s({4.0, 2.0, 1.0, 0.5});

    // q = p: no gap, the tail collapses to a single semiaxis.
    for (int n = 1; n <= 4; ++n) {
        CHECK(gelfand_exact_tail({s, kTwo, kTwo, n, 4}) == s.at(n));
        CHECK(gelfand_exact_tail({s, ExponentP(1.0), ExponentP(1.0), n, 4}) == s.at(n));
    }

    // q = 2, p = inf: 1/r = 1/2, Euclidean tail.
    double acc = 0.0;
    for (int j = 2; j <= 4; ++j) acc += s.at(j) * s.at(j);
    CHECK(gelfand_exact_tail({s, ExponentP::infinite(), kTwo, 2, 4}) ==
          doctest::Approx(std::sqrt(acc)));

    // q = 1, p = 2: also 1/r = 1/2.
    CHECK(gelfand_exact_tail({s, kTwo, ExponentP(1.0), 2, 4}) == doctest::Approx(std::sqrt(acc)));

    // q = 1, p = inf: 1/r = 1, plain tail sum.
    CHECK(gelfand_exact_tail({s, ExponentP::infinite(), ExponentP(1.0), 3, 4}) ==
          doctest::Approx(1.5));

    CHECK_THROWS_AS(gelfand_exact_tail({s, kTwo, ExponentP(4.0), 1, 4}), std::domain_error);
    CHECK_THROWS_AS(gelfand_exact_tail({s, kTwo, kTwo, 0, 4}), std::invalid_argument);
    CHECK_THROWS_AS(gelfand_exact_tail({s, kTwo, kTwo, 5, 4}), std::invalid_argument);
}

TEST_CASE("operator norm across exponent orderings") {
    const Semiaxes s({3.0, 2.0, 1.0});
    CHECK(operator_norm(s, kTwo, kTwo) == 3.0);
    CHECK(operator_norm(s, ExponentP(1.0), kTwo) == 3.0);
    // q < p: lr norm of the profile with 1/r = 1/q - 1/p.
    CHECK(operator_norm(s, ExponentP::infinite(), ExponentP(1.0)) == doctest::Approx(6.0));
    CHECK(operator_norm(s, kTwo, ExponentP(1.0)) ==
          doctest::Approx(std::sqrt(9.0 + 4.0 + 1.0)));
    CHECK(operator_norm(s, ExponentP(0.5), ExponentP(0.25)) ==
          doctest::Approx(std::pow(std::sqrt(3.0) + std::sqrt(2.0) + 1.0, 2.0)));
}

TEST_CASE("mean width tail bound formulas") {
    const int m = 40, n = 8;
    const Semiaxes s = Semiaxes::polynomial(m, 1.0);

    const TailBound one = gelfand_upper_mstar(s, ExponentP(1.0), n, m);
    const int k1 = one.k_used;
    CHECK(k1 == 2);  // ceil(0.25 * 8)
    double sup = 0.0;
    for (int j = k1; j <= m; ++j) {
        sup = std::max(sup, s.at(j) * std::sqrt(std::log(static_cast<double>(j)) + 1.0));
    }
    CHECK(one.value == doctest::Approx(sup / std::sqrt(8.0)));

    const TailBound two = gelfand_upper_mstar(s, ExponentP(1.5), n, m);
    const int k2 = two.k_used;
    CHECK(k2 == 1);  // ceil(0.25 * 8 / 3)
    double tail = 0.0;
    for (int j = k2; j <= m; ++j) tail += std::pow(s.at(j), 3.0);
    CHECK(two.value ==
          doctest::Approx(std::sqrt(3.0) * std::pow(tail, 1.0 / 3.0) / std::sqrt(8.0)));

    // Scaling the constant scales the bound.
    CHECK(gelfand_upper_mstar(s, ExponentP(1.5), n, m, 2.0).value ==
          doctest::Approx(2.0 * two.value));
    CHECK_THROWS_AS(gelfand_upper_mstar(s, ExponentP(0.5), n, m), std::domain_error);
}

TEST_CASE("mean width bound decreases along the information grid") {
    const int m = 256;
    const Semiaxes s = Semiaxes::polynomial(m, 1.0);
    for (double pv : {1.0, 1.5, 2.0, kInf}) {
        double prev = kInf;
        for (int n : {4, 8, 16, 32, 64}) {
            const double value = gelfand_upper_mstar(s, ExponentP(pv), n, m).value;
            CHECK(value < prev);
            prev = value;
        }
    }
}

TEST_CASE("sparse regime bound and its sample-size condition") {
    const int m = 4096;
    const double lambda = 1.0;
    const ExponentP p(0.5);

    const QuasiBound good = gelfand_upper_quasi(lambda, p, kTwo, 512, m);
    CHECK(good.condition_ok);
    const double ratio = std::log(std::exp(1.0) * m / 512.0) / 512.0;
    CHECK(good.value == doctest::Approx(std::pow(ratio, lambda + 2.0 - 0.5)));

    const QuasiBound bad = gelfand_upper_quasi(lambda, p, kTwo, 1, m, 1.0, 4.0);
    CHECK_FALSE(bad.condition_ok);
    CHECK(bad.value == 1.0);

    CHECK_THROWS_AS(gelfand_upper_quasi(lambda, ExponentP(1.5), kTwo, 16, m),
                    std::domain_error);
    CHECK_THROWS_AS(gelfand_upper_quasi(lambda, p, ExponentP(0.4), 16, m), std::domain_error);
}

TEST_CASE("minimal radius dispatch by exponent") {
    const int m = 32;
    const Semiaxes s = Semiaxes::polynomial(m, 1.0);

    // Codimension zero: the whole body, any exponent.
    for (double pv : {0.5, 1.0, 2.0, 4.0}) {
        const MinRadiusResult r0 = min_radius(Ellipsoid(ExponentP(pv), s), 0);
        REQUIRE(r0.exact.has_value());
        CHECK(*r0.exact == operator_norm(s, ExponentP(pv), kTwo));
        CHECK(r0.lower == *r0.exact);
        CHECK(r0.upper == *r0.exact);
        CHECK(r0.lower_tag == "operator_norm");
    }

    // p >= 2: exact Euclidean tail.
    const MinRadiusResult euclid = min_radius(Ellipsoid(ExponentP(4.0), s), 5);
    REQUIRE(euclid.exact.has_value());
    CHECK(*euclid.exact ==
          doctest::Approx(gelfand_exact_tail({s, ExponentP(4.0), kTwo, 6, m})));
    CHECK(euclid.upper_tag == "euclidean_tail");

    const MinRadiusResult p2 = min_radius(Ellipsoid(kTwo, s), 5);
    CHECK(*p2.exact == doctest::Approx(s.at(6)));

    // 1 <= p < 2: one-sided bounds only.
    const MinRadiusResult conv = min_radius(Ellipsoid(ExponentP(1.5), s), 5);
    CHECK_FALSE(conv.exact.has_value());
    CHECK(conv.lower == 0.0);
    CHECK(conv.upper == doctest::Approx(gelfand_upper_mstar(s, ExponentP(1.5), 5, m).value));
    CHECK(conv.upper_tag == "mean_width");

    // p < 1 with a recognized polynomial profile: sparse-regime bound.
    const MinRadiusResult quasi = min_radius(Ellipsoid(ExponentP(0.5), s), 5);
    CHECK_FALSE(quasi.exact.has_value());
    CHECK(quasi.upper_tag == "sparse_regime");

    // p < 1 with an unstructured profile: trivial bounds.
    const Semiaxes flat = Semiaxes::constant(m, 0.7);
    const MinRadiusResult trivial = min_radius(Ellipsoid(ExponentP(0.5), flat), 5);
    CHECK(trivial.upper_tag == "trivial_norm");
    CHECK(trivial.upper == doctest::Approx(0.7));
}

TEST_CASE("decay classification over the phase plane") {
    // p = 2 column: threshold at 1/2.
    const DecayReport fast2 = decay_exponents(kTwo, 1.5);
    CHECK(fast2.region == DecayRegion::above_threshold);
    CHECK(*fast2.minimal_decay == doctest::Approx(1.5));
    CHECK(*fast2.random_decay == doctest::Approx(1.5));
    CHECK(fast2.random_flag == RandomDecayFlag::value);
    CHECK_FALSE(fast2.log_factor_caveat);

    const DecayReport edge2 = decay_exponents(kTwo, 0.5);
    CHECK(edge2.region == DecayRegion::boundary);
    CHECK(*edge2.random_decay == 0.0);

    const DecayReport slow2 = decay_exponents(kTwo, 0.25);
    CHECK(slow2.region == DecayRegion::below_threshold);
    CHECK(*slow2.random_decay == 0.0);
    CHECK(*slow2.minimal_decay == doctest::Approx(0.25));

    // 1 < p < 2: threshold at 1/p*, open exactly on it.  p = 4/3 makes the
    // threshold 1/4 exactly representable, so lambda can sit right on it.
    const DecayReport mid = decay_exponents(ExponentP(4.0 / 3.0), 0.25);
    CHECK(mid.region == DecayRegion::open_case);
    CHECK(mid.random_flag == RandomDecayFlag::open);
    CHECK_FALSE(mid.random_decay.has_value());
    CHECK(*mid.minimal_decay == doctest::Approx(0.5));

    const DecayReport midlow = decay_exponents(ExponentP(1.5), 0.2);
    CHECK(midlow.region == DecayRegion::below_threshold);
    CHECK(*midlow.minimal_decay == doctest::Approx(0.2 * 3.0 / 2.0));

    const DecayReport midhigh = decay_exponents(ExponentP(1.5), 0.5);
    CHECK(midhigh.region == DecayRegion::above_threshold);
    CHECK(*midhigh.random_decay == doctest::Approx(0.5 + 2.0 / 3.0 - 0.5));

    // p = 1: every positive order decays, with the log caveat.
    const DecayReport one = decay_exponents(ExponentP(1.0), 0.2);
    CHECK(one.region == DecayRegion::above_threshold);
    CHECK(*one.random_decay == doctest::Approx(0.7));
    CHECK(one.log_factor_caveat);

    // p > 2: useless band, then no-decay, then the open strip, then decay.
    const DecayReport useless = decay_exponents(ExponentP(3.0), 0.1);
    CHECK(useless.region == DecayRegion::useless);
    CHECK(*useless.minimal_decay == 0.0);

    const DecayReport below3 = decay_exponents(ExponentP(3.0), 0.4);
    CHECK(below3.region == DecayRegion::below_threshold);
    CHECK(*below3.random_decay == 0.0);
    CHECK(*below3.minimal_decay == doctest::Approx(0.4 + 1.0 / 3.0 - 0.5));

    const DecayReport open3 = decay_exponents(ExponentP(3.0), 0.6);
    CHECK(open3.region == DecayRegion::open_case);
    CHECK(open3.random_flag == RandomDecayFlag::open);

    const DecayReport above3 = decay_exponents(ExponentP(3.0), 0.7);
    CHECK(above3.region == DecayRegion::above_threshold);
    CHECK(*above3.random_decay == doctest::Approx(0.7 + 1.0 / 3.0 - 0.5));

    // p = inf: the open strip is (1/2, 1].
    CHECK(decay_exponents(ExponentP::infinite(), 0.8).region == DecayRegion::open_case);
    CHECK(decay_exponents(ExponentP::infinite(), 1.2).region == DecayRegion::above_threshold);
    CHECK(decay_exponents(ExponentP::infinite(), 0.4).region == DecayRegion::useless);

    // Quasi bodies always give the full order; no minimal-order claim there.
    const DecayReport quasi = decay_exponents(ExponentP(0.5), 1.0);
    CHECK(quasi.region == DecayRegion::above_threshold);
    CHECK(*quasi.random_decay == doctest::Approx(1.0 + 2.0 - 0.5));
    CHECK_FALSE(quasi.minimal_decay.has_value());

    CHECK_THROWS_AS(decay_exponents(kTwo, 0.0), std::invalid_argument);

    // Minimal order is continuous across the 1 < p < 2 threshold.
    const double at = *decay_exponents(ExponentP(1.5), 1.0 / 3.0).minimal_decay;
    const double lo = *decay_exponents(ExponentP(1.5), 1.0 / 3.0 - 1e-9).minimal_decay;
    const double hi = *decay_exponents(ExponentP(1.5), 1.0 / 3.0 + 1e-9).minimal_decay;
    CHECK(lo == doctest::Approx(at).epsilon(1e-6));
    CHECK(hi == doctest::Approx(at).epsilon(1e-6));
}

TEST_CASE("lorentz diagonal decay orders") {
    // q <= p: always the shifted order.
    CHECK(*lorentz_decay_exponent(kTwo, kTwo, 1.0).inv_u == doctest::Approx(1.0));
    CHECK(*lorentz_decay_exponent(ExponentP::infinite(), ExponentP(1.0), 0.5).inv_u ==
          doctest::Approx(2.0 + 0.0 - 1.0));  // 1/r + 1/p - 1/q

    // 2 <= p < q: flat 1/r.
    CHECK(*lorentz_decay_exponent(kTwo, ExponentP(4.0), 0.5).inv_u == doctest::Approx(2.0));
    CHECK(*lorentz_decay_exponent(ExponentP(3.0), ExponentP::infinite(), 1.0).inv_u ==
          doctest::Approx(1.0));

    // 1 < p < 2, q = 2: sparse branch below the threshold, full order above,
    // a declared gap exactly on it.  p = 4/3 keeps every quantity dyadic, so
    // the threshold comparison is exact: threshold = (1 - 3/4) = 1/4.
    const ExponentP p43(4.0 / 3.0);
    const LorentzDecay sparse = lorentz_decay_exponent(p43, kTwo, 8.0);  // 1/r = 1/8 < 1/4
    CHECK(*sparse.inv_u == doctest::Approx(4.0 / 16.0));  // p*/(2r)
    CHECK_FALSE(sparse.gap);
    const LorentzDecay full = lorentz_decay_exponent(p43, kTwo, 2.0);  // 1/r = 1/2 > 1/4
    CHECK(*full.inv_u == doctest::Approx(0.5 + 0.75 - 0.5));
    const LorentzDecay edge = lorentz_decay_exponent(p43, kTwo, 4.0);  // 1/r = 1/4 exactly
    CHECK(edge.gap);
    CHECK_FALSE(edge.inv_u.has_value());

    // q > 2 flips the threshold to 1/p* = 1/4; the branch values agree in form.
    CHECK(*lorentz_decay_exponent(p43, ExponentP(4.0), 8.0).inv_u ==
          doctest::Approx(4.0 / 16.0));
    CHECK(*lorentz_decay_exponent(p43, ExponentP(4.0), 2.0).inv_u ==
          doctest::Approx(0.5 + 0.75 - 0.25));
    CHECK(lorentz_decay_exponent(p43, ExponentP(4.0), 4.0).gap);

    // p = 1 collapses the threshold: always the full order.
    CHECK(*lorentz_decay_exponent(ExponentP(1.0), kTwo, 10.0).inv_u ==
          doctest::Approx(0.1 + 1.0 - 0.5));

    CHECK_THROWS_AS(lorentz_decay_exponent(ExponentP(0.5), kTwo, 2.0), std::domain_error);
    CHECK_THROWS_AS(lorentz_decay_exponent(kTwo, ExponentP(0.5), 2.0), std::domain_error);
    // 1/r must exceed (1/q - 1/p)_+ = 1 here, so r = 2 is out of range.
    CHECK_THROWS_AS(lorentz_decay_exponent(ExponentP::infinite(), ExponentP(1.0), 2.0),
                    std::domain_error);
    CHECK_THROWS_AS(lorentz_decay_exponent(kTwo, kTwo, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(lorentz_decay_exponent(kTwo, kTwo, kInf), std::invalid_argument);
}
