#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "entbound/spectral_models.hpp"
#include "oracles.hpp"

using namespace entbound;

namespace {

std::vector<long> as_longs(const std::vector<BigInt>& v) {
    std::vector<long> out;
    for (const auto& x : v) out.push_back(x.convert_to<long>());
    return out;
}

std::string write_temp(const std::string& name, const std::string& body) {
    const std::string path = ::testing::TempDir() + name;
    std::ofstream(path) << body;
    return path;
}

}  // namespace

TEST(Partitions, ZeroIsEmptyPartition) {
    const auto p = partition_numbers(0);
    ASSERT_EQ(p.size(), 1u);
    EXPECT_EQ(p[0], 1);
}

TEST(Partitions, MatchesEnumerationUpTo60) {
    const auto p = partition_numbers(60);
    for (int n = 0; n <= 60; ++n) EXPECT_EQ(p[n], BigInt(oracle::partitions(n))) << "n = " << n;
    EXPECT_EQ(p[5], 7);
    EXPECT_EQ(p[60], BigInt(966467));
}

TEST(Partitions, LogAgreesWithLeadingAsymptoticAt1000) {
    const auto p = partition_numbers(1000);
    const double exact = log_bigint(p[1000]);
    const double approx = log_partition_asymptotic(1000.0);
    EXPECT_LT(std::abs(exact - approx) / exact, 0.02);
    EXPECT_GT(p[1000], BigInt(1) << 100);  // far past 64-bit range
}

TEST(ModelDims, U1AndVirasoroMatchEnumeration) {
    EXPECT_EQ(as_longs(model_dims(SpectrumModel::u1_current(), 3)), (std::vector<long>{1, 1, 2, 3}));
    EXPECT_EQ(as_longs(model_dims(SpectrumModel::virasoro_vacuum(), 4)), (std::vector<long>{1, 0, 1, 1, 2}));
    const auto vir = model_dims(SpectrumModel::virasoro_vacuum(), 40);
    for (int n = 0; n <= 40; ++n) EXPECT_EQ(vir[n], BigInt(oracle::partitions_without_ones(n)));
    EXPECT_EQ(as_longs(model_dims(SpectrumModel::virasoro_vacuum(), 6)), (std::vector<long>{1, 0, 1, 1, 2, 2, 4}));
}

TEST(ModelDims, TensorSquareIsConvolution) {
    const auto sq = SpectrumModel::tensor_power(SpectrumModel::u1_current(), 2);
    EXPECT_EQ(sq.id(), "u1_current^2");
    EXPECT_EQ(as_longs(sq.dims(2)), (std::vector<long>{1, 2, 5}));
    const auto d = sq.dims(100);
    const auto p = partition_numbers(100);
    for (std::size_t n = 0; n <= 100; ++n) {
        BigInt s = 0;
        for (std::size_t i = 0; i <= n; ++i) s += p[i] * p[n - i];
        EXPECT_EQ(d[n], s) << "n = " << n;
    }
}

TEST(ModelDims, VacuumIsUniqueForBuiltins) {
    for (const auto& m : {SpectrumModel::u1_current(), SpectrumModel::virasoro_vacuum(),
                          SpectrumModel::tensor_power(SpectrumModel::virasoro_vacuum(), 3)})
        EXPECT_EQ(m.dims(10)[0], 1) << m.id();
}

TEST(CustomSpectrum, SparseFileFillsZeros) {
    const auto path = write_temp("sparse.txt", "# toy\n0 1\n\n3 4\n7 10\n");
    const auto m = SpectrumModel::custom(path);
    EXPECT_EQ(as_longs(m.dims(8)), (std::vector<long>{1, 0, 0, 4, 0, 0, 0, 10, 0}));
    EXPECT_EQ(m.support_end(), std::optional<std::size_t>(7));
}

TEST(CustomSpectrum, ParseErrorsNameTheLine) {
    auto parse = [](const std::string& body) {
        std::istringstream in(body);
        return parse_spectrum(in);
    };
    try {
        parse("0 1\n2 3\n2 5\n");
        FAIL() << "expected a parse error";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
    }
    try {
        parse("0 1\n1 x\n");
        FAIL() << "expected a parse error";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 2u);
    }
    EXPECT_THROW(parse("0 1 2\n"), ParseError);
    EXPECT_THROW(parse("0 2\n1 1\n"), InvariantError);
    EXPECT_THROW(parse("1 1\n"), InvariantError);
    EXPECT_THROW(SpectrumModel::custom("/nonexistent/spectrum.txt"), ParseError);
}

TEST(GrowthFit, TrivialModelHasUnitConstant) {
    const auto m = SpectrumModel::from_dims("trivial", {BigInt(1)});
    const auto fit = fit_growth_constants(m, 0.5, 50);
    EXPECT_NEAR(fit.C, 1.0, 1e-10);
    EXPECT_EQ(fit.argmax, 0u);
}

TEST(GrowthFit, CertifiesEveryN) {
    for (double kappa : {0.3, 0.5, 0.6, 0.9}) {
        const auto dims = SpectrumModel::u1_current().dims(600);
        const auto fit = fit_growth_envelope(dims, kappa);
        for (std::size_t n = 0; n < dims.size(); ++n)
            EXPECT_LE(log_bigint(dims[n]), fit.log_C + std::pow(double(n), kappa)) << "kappa " << kappa << " n " << n;
    }
}

TEST(GrowthFit, PlateauFlags) {
    // kappa = 0.3 sits below the sqrt growth: the ratio keeps rising to the end of any range
    const auto low = fit_growth_constants(SpectrumModel::u1_current(), 0.3, 500);
    EXPECT_FALSE(low.plateau);
    EXPECT_EQ(low.argmax, 500u);
    EXPECT_TRUE(std::isfinite(low.C));
    // kappa = 0.6 eventually wins, but the ratio peaks near N = 1600
    const auto mid = fit_growth_constants(SpectrumModel::u1_current(), 0.6, 4000);
    EXPECT_TRUE(mid.plateau);
    EXPECT_GT(mid.argmax, 1000u);
    EXPECT_LT(mid.argmax, 2500u);
    EXPECT_THROW(fit_growth_constants(SpectrumModel::u1_current(), 1.0, 10), DomainError);
    EXPECT_THROW(fit_growth_constants(SpectrumModel::u1_current(), 0.0, 10), DomainError);
}
