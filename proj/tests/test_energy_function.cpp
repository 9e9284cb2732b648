#include <gtest/gtest.h>

#include <thread>

#include "entbound/energy_function.hpp"
#include "oracles.hpp"

using namespace entbound;

namespace {

const EnergyFunction& ef75() {
    static const EnergyFunction ef = EnergyFunction::build(0.75);
    return ef;
}

}  // namespace

TEST(EnergyFunction, RejectsBadExponent) {
    EXPECT_THROW(EnergyFunction::build(0.0), DomainError);
    EXPECT_THROW(EnergyFunction::build(1.0), DomainError);
    EXPECT_THROW(ef75().eval(std::nan("")), DomainError);
}

TEST(EnergyFunction, ValueAtZeroIsHalf) {
    const auto& ef = ef75();
    EXPECT_NEAR(ef.eval(0.0).value, 0.5, 1e-8);
    EXPECT_NEAR(ef.sup_f(), 0.5, 1e-6);
    EXPECT_NEAR(ef.sup_eta(), 0.25 * std::log(4.0), 1e-5);
    EXPECT_NEAR(ef.sup_f_log_f(), std::exp(-1.0), 1e-12);
}

TEST(EnergyFunction, BumpIsNormalized) {
    const auto& ef = ef75();
    const double total = oracle::integrate([&](double t) { return ef.bump(t); }, 0.0, 1.0, 100);
    EXPECT_NEAR(total, 1.0, 1e-12);
    EXPECT_EQ(ef.bump(0.0), 0.0);
    EXPECT_EQ(ef.bump(1.2), 0.0);
}

TEST(EnergyFunction, MatchesBesselRoute) {
    const oracle::BesselEnergy ref(0.75);
    const auto& ef = ef75();
    for (double t : {0.0, 0.5, 2.0, 5.0, 10.0, 20.0, 37.5, 50.0}) EXPECT_NEAR(ef.eval(t).value, ref(t), 1e-9) << t;
}

TEST(EnergyFunction, FrozenValues) {
    const auto& ef = ef75();
    EXPECT_NEAR(ef.eval(0.5).value, 0.3757145290260374, 1e-10);
    EXPECT_NEAR(ef.eval(5.0).value, -0.2085901540518598, 1e-10);
    EXPECT_NEAR(ef.eval(20.0).value, -0.007059158789079107, 1e-10);
}

TEST(EnergyFunction, EvenAndBounded) {
    const auto& ef = ef75();
    const double tol = ef.config().tolerance;
    for (double t = 0.0; t <= 200.0; t += 0.7) {
        EXPECT_LE(std::abs(ef.eval(t).value - ef.eval(-t).value), 2 * tol);
        EXPECT_LE(std::abs(ef.eval(t).value), 0.5 + tol);
    }
    for (double f : ef.grid_f()) EXPECT_LE(std::abs(f), 0.5 + tol);
}

TEST(EnergyFunction, DecayWeightedByAlpha) {
    const auto& ef = ef75();
    const double w50 = std::abs(ef.eval(50.0).value) * std::exp(std::pow(50.0, 0.75));
    EXPECT_TRUE(std::isfinite(w50));
    EXPECT_LE(w50, ef.weighted_sup());
    const double refined = ef.weighted_sup_on_grid(ef.config().grid_step / 2);
    EXPECT_GE(refined, ef.weighted_sup());
    EXPECT_LE(refined, ef.weighted_sup() * 1.01);
}

TEST(EnergyFunction, EnvelopeBeyondRange) {
    const auto& ef = ef75();
    for (std::size_t j = 0; j < ef.grid_t().size(); ++j)
        EXPECT_LE(std::abs(ef.grid_f()[j]), ef.envelope()(ef.grid_t()[j]) * (1 + 1e-12));
    const auto far = ef.eval(250.0);
    EXPECT_TRUE(far.is_envelope);
    EXPECT_DOUBLE_EQ(far.value, ef.envelope()(250.0));
    EXPECT_FALSE(ef.eval(199.0).is_envelope);
    EXPECT_NEAR(ef.envelope().beta, 0.875, 1e-15);
}

TEST(EnergyFunction, DeltaScaling) {
    const auto& ef = ef75();
    EXPECT_NEAR(ef.eval_delta(0.1, 0.0).value, 0.5, 1e-8);
    EXPECT_EQ(ef.eval_delta(2.0, 3.0).value, ef.eval(6.0).value);
    EXPECT_NEAR(ef.at(0.5, 40).value, ef.eval(20.0).value, 1e-15);
    EXPECT_THROW(ef.eval_delta(0.0, 1.0), DomainError);
    EXPECT_THROW(ef.at(-1.0, 3), DomainError);
}

TEST(EnergyFunction, CacheIsSafeUnderConcurrentReads) {
    const auto& ef = ef75();
    std::vector<double> a(64), b(64);
    std::thread t1([&] { for (int n = 0; n < 64; ++n) a[n] = ef.at(0.37, n).value; });
    std::thread t2([&] { for (int n = 63; n >= 0; --n) b[n] = ef.at(0.37, n).value; });
    t1.join();
    t2.join();
    for (int n = 0; n < 64; ++n) {
        EXPECT_EQ(a[n], b[n]);
        EXPECT_EQ(a[n], ef.eval(0.37 * n).value);
    }
}

TEST(EnergyFunction, AlphaSweep) {
    for (double alpha : {0.55, 0.65, 0.85}) {
        const auto ef = EnergyFunction::build(alpha);
        EXPECT_NEAR(ef.eval(0.0).value, 0.5, ef.config().tolerance);
        EXPECT_TRUE(std::isfinite(ef.weighted_sup()));
        EXPECT_NEAR(ef.rho(), (1 + alpha) / (1 - alpha), 1e-15);
    }
}

TEST(SyntheticPair, ConstantCase) {
    const auto pair = SyntheticPair::from_sequences({1.0}, {1.0}, 0.3);
    EXPECT_EQ(pair.gap_certificate, 0.0);
    EXPECT_LE(verify_spectral_identity(ef75(), pair), 2 * ef75().config().tolerance);
}

TEST(SyntheticPair, GapAndBoundaryValue) {
    const auto pair = make_synthetic_pair(0.3, 128, 7);
    EXPECT_LE(pair.gap_certificate, 1e-8);
    std::complex<double> sa = 0.0, sb = 0.0;
    for (std::size_t n = 0; n < pair.a.size(); ++n) {
        sa += pair.a[n];
        sb += pair.b[n];
    }
    EXPECT_LE(std::abs(sa - sb), 1e-8);
}

TEST(SyntheticPair, IdentityResidualIsSmall) {
    const auto& ef = ef75();
    for (double delta : {0.1, 0.3, 1.0})
        for (std::uint64_t seed = 0; seed < 4; ++seed) {
            const auto pair = make_synthetic_pair(delta, 128, seed);
            EXPECT_LE(verify_spectral_identity(ef, pair), 1e-5 * pair.l1_mass()) << delta << " " << seed;
        }
}

TEST(SyntheticPair, ResidualIsLinear) {
    const auto& ef = ef75();
    auto pair = make_synthetic_pair(0.3, 128, 11);
    const double r = verify_spectral_identity(ef, pair);
    const std::complex<double> lambda(2.0, -3.0);
    for (auto& x : pair.a) x *= lambda;
    for (auto& x : pair.b) x *= lambda;
    EXPECT_NEAR(verify_spectral_identity(ef, pair), std::abs(lambda) * r, 1e-9 * std::abs(lambda) * pair.l1_mass());
}

TEST(SyntheticPair, Errors) {
    EXPECT_THROW(make_synthetic_pair(0.0, 128, 1), DomainError);
    EXPECT_THROW(make_synthetic_pair(4.0, 128, 1), DomainError);
    try {
        make_synthetic_pair(1.0, 8, 1);
        FAIL() << "expected a construction error";
    } catch (const ConstructionError& e) {
        EXPECT_GT(e.residual(), 1e-7);
    }
    // delta * N past the quadrature range would silently use the envelope
    std::vector<std::complex<double>> long_a(300, 0.0), long_b(300, 0.0);
    long_a[0] = long_b[0] = 1.0;
    EXPECT_THROW(verify_spectral_identity(ef75(), SyntheticPair::from_sequences(long_a, long_b, 1.0)), DomainError);
}
