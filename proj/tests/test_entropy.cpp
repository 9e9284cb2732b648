#include <gtest/gtest.h>

#include "entbound/entropy.hpp"
#include "oracles.hpp"

using namespace entbound;

TEST(Jacobi, AgreesWithEigenSolver) {
    std::mt19937_64 rng(42);
    for (int n : {1, 2, 3, 6, 12, 40}) {
        const CMatrix g = random_gaussian(n, n, rng);
        const CMatrix h = g + g.adjoint();
        const auto je = jacobi_eigen(h);
        const auto ref = oracle::eigenvalues(h);
        for (int i = 0; i < n; ++i) EXPECT_NEAR(je.values(i), ref(i), 1e-11 * h.norm()) << n;
        const CMatrix recon = je.vectors * je.values.cast<cplx>().asDiagonal() * je.vectors.adjoint();
        EXPECT_LT((recon - h).norm(), 1e-12 * h.norm());
        EXPECT_LT((je.vectors.adjoint() * je.vectors - CMatrix::Identity(n, n)).norm(), 1e-12);
        EXPECT_LE(je.off_norm, 1e-13 * h.norm());
    }
}

TEST(Jacobi, DiagonalAndDegenerateInput) {
    CMatrix d = CMatrix::Zero(4, 4);
    d.diagonal() << 3.0, 1.0, 1.0, -2.0;
    const auto je = jacobi_eigen(d);
    EXPECT_EQ(je.sweeps, 0);
    EXPECT_DOUBLE_EQ(je.values(0), -2.0);
    EXPECT_DOUBLE_EQ(je.values(3), 3.0);
    EXPECT_THROW(jacobi_eigen(CMatrix::Zero(2, 3)), DomainError);
}

TEST(EtaBound, ConstantAndContactPoint) {
    const auto b = eta_bound_constant(0.5);
    EXPECT_NEAR(b.c_p, 2.0 / std::exp(1.0), 1e-15);
    EXPECT_NEAR(b.c_p, 0.73576, 1e-5);
    EXPECT_NEAR(b.t0, std::exp(-2.0), 1e-15);
    EXPECT_EQ(eta(0.0), 0.0);
    EXPECT_THROW(eta_bound_constant(0.0), DomainError);
    EXPECT_THROW(eta_bound_constant(1.0), DomainError);
}

TEST(EtaBound, GridScan) {
    for (double p : {0.3, 0.5, 0.9}) {
        const auto b = eta_bound_constant(p);
        double worst = -1.0;
        for (int j = 1; j <= 200000; ++j) {
            const double t = 10.0 * j / 200000.0;
            worst = std::max(worst, eta(t) - b.c_p * std::pow(t, p));
        }
        EXPECT_LE(worst, 1e-12) << p;
        EXPECT_LE(std::abs(eta(b.t0) - b.c_p * std::pow(b.t0, p)), 1e-12) << p;
    }
}

TEST(DensityMatrix, Validation) {
    CMatrix m = CMatrix::Identity(2, 2) * 0.5;
    m(0, 1) = cplx(0.1, 0.0);
    EXPECT_THROW(DensityMatrix{m}, DomainError);
    CMatrix neg = CMatrix::Zero(2, 2);
    neg.diagonal() << 1.5, -0.5;
    EXPECT_THROW(von_neumann_entropy(DensityMatrix(neg)), PositivityError);
    CMatrix slack = CMatrix::Zero(2, 2);
    slack.diagonal() << 1.0 + 5e-11, -5e-11;
    EXPECT_NEAR(von_neumann_entropy(DensityMatrix(slack)), 0.0, 1e-9);
    EXPECT_THROW(von_neumann_entropy(DensityMatrix(CMatrix::Identity(3, 3))), DomainError);
}

TEST(VonNeumann, PureAndMaximallyMixed) {
    std::mt19937_64 rng(3);
    const CVector v = random_unit_vector(5, rng);
    EXPECT_NEAR(von_neumann_entropy(DensityMatrix(v * v.adjoint())), 0.0, 1e-10);
    EXPECT_NEAR(von_neumann_entropy(DensityMatrix(CMatrix::Identity(4, 4) / 4.0)), std::log(4.0), 1e-10);
}

TEST(VonNeumann, MatchesIndependentDiagonalization) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        std::mt19937_64 rng(seed);
        const CMatrix rho = random_density(6, rng);
        EXPECT_NEAR(von_neumann_entropy(DensityMatrix(rho)), oracle::entropy(rho), 1e-8);
    }
}

TEST(VonNeumann, UnitaryInvarianceAndRange) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        std::mt19937_64 rng(100 + seed);
        const int n = 2 + static_cast<int>(seed % 9);
        const CMatrix rho = random_density(n, rng, 1 + seed % n);
        const CMatrix U = random_unitary(n, rng);
        const double s = von_neumann_entropy(DensityMatrix(rho));
        EXPECT_NEAR(von_neumann_entropy(DensityMatrix(U * rho * U.adjoint())), s, 1e-9);
        EXPECT_GE(s, -1e-12);
        EXPECT_LE(s, std::log(double(n)) + 1e-12);
    }
}

TEST(Ensemble, OrthogonalPairIsTight) {
    WeightedPureEnsemble ens(2);
    ens.add(0.5, CVector::Unit(2, 0));
    ens.add(0.5, CVector::Unit(2, 1));
    EXPECT_NEAR(ensemble_entropy_bound(ens), std::log(2.0), 1e-15);
    EXPECT_NEAR(von_neumann_entropy(assemble_density(ens)), std::log(2.0), 1e-12);

    WeightedPureEnsemble pair(2);
    pair.add(1.0, CVector::Unit(2, 0));
    pair.add(1.0, CVector::Unit(2, 1));
    EXPECT_LT((assemble_density(pair).matrix() - 0.5 * CMatrix::Identity(2, 2)).norm(), 1e-15);
}

TEST(Ensemble, SinglePureState) {
    WeightedPureEnsemble ens(3);
    ens.add(1.0, CVector::Unit(3, 1));
    EXPECT_EQ(ensemble_entropy_bound(ens), 0.0);
    EXPECT_NEAR(von_neumann_entropy(assemble_density(ens)), 0.0, 1e-12);
    const auto rho = assemble_density(ens).matrix();
    EXPECT_LT((rho * rho - rho).norm(), 1e-15);
}

TEST(Ensemble, Errors) {
    WeightedPureEnsemble ens(2);
    EXPECT_THROW(ens.add(-1.0, CVector::Unit(2, 0)), DomainError);
    EXPECT_THROW(ens.add(1.0, CVector::Ones(2)), InvariantError);
    EXPECT_THROW(ens.add(1.0, CVector::Unit(3, 0)), DomainError);
    EXPECT_THROW(ensemble_entropy_bound(ens), DomainError);
    ens.add(0.0, CVector::Unit(2, 0));
    EXPECT_THROW(assemble_density(ens), DomainError);
}

TEST(Ensemble, BoundDominatesExactEntropy) {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        std::mt19937_64 rng(seed);
        WeightedPureEnsemble ens(6);
        for (int k = 0; k < 10; ++k) ens.add(uni(rng), random_unit_vector(6, rng));
        const double gap = ensemble_entropy_bound(ens) - von_neumann_entropy(assemble_density(ens));
        EXPECT_GE(gap, 0.0) << seed;
    }
}

TEST(Ensemble, AssembledIsUnitTracePositive) {
    std::mt19937_64 rng(5);
    WeightedPureEnsemble ens(4);
    std::uniform_real_distribution<double> uni(0.0, 3.0);
    for (int k = 0; k < 5; ++k) ens.add(uni(rng), random_unit_vector(4, rng));
    const auto rho = assemble_density(ens);
    EXPECT_NEAR(rho.trace(), 1.0, 1e-12);
    EXPECT_GE(oracle::eigenvalues(rho.matrix()).minCoeff(), -1e-12);
}

TEST(Concavity, SandwichOnMixedStates) {
    std::uniform_real_distribution<double> uni(0.05, 1.0);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        std::mt19937_64 rng(1000 + seed);
        const int n = 2 + static_cast<int>(seed % 11);
        const int count = 2 + static_cast<int>(seed % 4);
        std::vector<double> lambda(count);
        double total = 0.0;
        for (auto& l : lambda) total += (l = uni(rng));
        CMatrix mix = CMatrix::Zero(n, n);
        double avg = 0.0, mixing = 0.0;
        for (int k = 0; k < count; ++k) {
            lambda[k] /= total;
            const CMatrix rho = random_density(n, rng, 1 + (seed + k) % n);
            mix += lambda[k] * rho;
            avg += lambda[k] * von_neumann_entropy(DensityMatrix(rho));
            mixing += eta(lambda[k]);
        }
        const double s = von_neumann_entropy(DensityMatrix(0.5 * (mix + mix.adjoint())));
        EXPECT_GE(s - avg, -1e-9) << seed;
        EXPECT_GE(avg + mixing - s, -1e-9) << seed;
    }
}
