#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "gmlab/analytic.hpp"
#include "gmlab/errors.hpp"
#include "gmlab/spectrum.hpp"

using namespace gmlab;
using std::numbers::pi;

namespace {

ExponentSet gm2120() { return ExponentSet::make(2, 1, 2, 0); }

// eigenvalues of the rectangle by enumerating index pairs, as (i^2/lx^2 + j^2/ly^2) keys
std::vector<std::pair<double, int>> brute_rectangle(double lx, double ly, int nmax) {
    std::vector<double> all;
    for (int i = 0; i < nmax; ++i)
        for (int j = 0; j < nmax; ++j) all.push_back(pi * pi * (i * i / (lx * lx) + j * j / (ly * ly)));
    std::sort(all.begin(), all.end());
    std::vector<std::pair<double, int>> merged;
    for (double x : all) {
        if (!merged.empty() && std::abs(x - merged.back().first) <= 1e-12 * std::max(1.0, x))
            ++merged.back().second;
        else
            merged.push_back({x, 1});
    }
    return merged;
}

}  // namespace

TEST(Geometry, Validation) {
    EXPECT_THROW(DomainGeometry::interval(0.0), Error);
    EXPECT_THROW(DomainGeometry::rectangle(1.0, -1.0), Error);
    EXPECT_EQ(DomainGeometry::rectangle(2.0, 3.0).measure(), 6.0);
    EXPECT_EQ(DomainGeometry::interval(2.0).dimension(), 1);
}

TEST(NeumannSpectrum, IntervalOfLengthPi) {
    const auto sp = neumann_eigenvalues(DomainGeometry::interval(pi), 4);
    ASSERT_EQ(sp.size(), 4u);
    for (int i = 0; i < 4; ++i) {
        EXPECT_EQ(sp[i].index, i);
        EXPECT_NEAR(sp[i].lambda, i * i, 1e-13 * std::max(1, i * i));
        EXPECT_EQ(sp[i].multiplicity, 1);
    }
}

TEST(NeumannSpectrum, IntervalIsExact) {
    const double L = 2.7;
    const auto sp = neumann_eigenvalues(DomainGeometry::interval(L), 200);
    for (int i = 0; i < 200; ++i) EXPECT_DOUBLE_EQ(sp[i].lambda, std::pow(i * pi / L, 2));
}

TEST(NeumannSpectrum, UnitSquareMultiplicityOfTwentyFive) {
    const auto sp = neumann_eigenvalues(DomainGeometry::rectangle(1.0, 1.0), 40);
    bool found = false;
    for (const auto& e : sp) {
        if (std::abs(e.lambda - 25 * pi * pi) < 1e-9) {
            EXPECT_EQ(e.multiplicity, 4);  // (0,5),(5,0),(3,4),(4,3)
            found = true;
        }
    }
    EXPECT_TRUE(found);
}

TEST(NeumannSpectrum, RectangleFirstMode) {
    const auto sp = neumann_eigenvalues(DomainGeometry::rectangle(pi, pi / 2), 3);
    EXPECT_EQ(sp[0].lambda, 0.0);
    EXPECT_NEAR(sp[1].lambda, 1.0, 1e-14);
    EXPECT_EQ(sp[1].multiplicity, 1);
    EXPECT_NEAR(sp[2].lambda, 4.0, 1e-13);
    EXPECT_EQ(sp[2].multiplicity, 2);  // (2,0) and (0,1)
}

TEST(NeumannSpectrum, RectangleMatchesEnumeration) {
    for (auto [lx, ly] : {std::pair{1.0, 1.0}, std::pair{1.0, 2.0}, std::pair{1.3, 0.7}}) {
        const auto ref = brute_rectangle(lx, ly, 100);
        const auto sp = neumann_eigenvalues(DomainGeometry::rectangle(lx, ly), 300);
        ASSERT_EQ(sp.size(), 300u);
        for (int k = 0; k < 300; ++k) {
            EXPECT_NEAR(sp[k].lambda, ref[k].first, 1e-11 * std::max(1.0, ref[k].first)) << k;
            EXPECT_EQ(sp[k].multiplicity, ref[k].second) << k;
        }
    }
}

TEST(NeumannSpectrum, StrictlyIncreasing) {
    const auto sp = neumann_eigenvalues(DomainGeometry::rectangle(1.0, 1.5), 500);
    for (size_t k = 1; k < sp.size(); ++k) EXPECT_GT(sp[k].lambda, sp[k - 1].lambda);
}

TEST(BifurcationValues, HandEvaluatedExample) {
    const auto d = bifurcation_values(gm2120(), 0.0, 10.0, DomainGeometry::interval(pi), 2);
    ASSERT_EQ(d.size(), 2u);
    EXPECT_NEAR(d[0], 9.0 / 11.0, 1e-14);
    EXPECT_NEAR(d[0], 0.81818181818181818182, 1e-14);
    EXPECT_NEAR(d[1], 0.2378048780487804878, 1e-14);
}

TEST(BifurcationValues, GeneralFormulaReducesAtZeroSource) {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> U(0, 1);
    for (int k = 0; k < 50; ++k) {
        const double p = 1.2 + 2 * U(rng), r = 0.5 + 2 * U(rng), s = 3 * U(rng);
        const double q = (p - 1) / r * (s + 1) * (1.1 + U(rng));
        const double d2 = 0.1 + 50 * U(rng), lam = 0.5 + 40 * U(rng);
        const double reduced = (p - 1 - q * r / (s + 1 + d2 * lam)) / lam;
        EXPECT_NEAR(bifurcation_value(ExponentSet::make(p, q, r, s), 0.0, d2, lam), reduced, 1e-14);
    }
}

TEST(BifurcationValues, LargeInhibitorDiffusionLimit) {
    const ExponentSet e = ExponentSet::make(2, 4, 2, 4);
    for (double lam : {1.0, 4.0, 9.0}) EXPECT_NEAR(bifurcation_value(e, 0.0, 1e12, lam), 1.0 / lam, 1e-10);
}

TEST(BifurcationValues, ResonanceMakesLinearizationSingular) {
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> U(0, 1);
    const ExponentSet e = ExponentSet::make(2, 4, 2, 4);
    for (int k = 0; k < 20; ++k) {
        const double sigma = 0.3 * U(rng), d2 = 1 + 30 * U(rng);
        const double lam = std::pow((1 + k % 3) * pi, 2);
        const double d1i = bifurcation_value(e, sigma, d2, lam);
        if (d1i <= 0) continue;
        // independent entries: f = -u + u^p/v^q + sigma, g = -v + u^r/v^s
        const ConstantState cs = constant_state(e, sigma);
        const double u = cs.u_star, v = cs.v_star;
        const double fu = -1 + 2 * u / std::pow(v, 4), fv = -4 * u * u / std::pow(v, 5);
        const double gu = 2 * u / std::pow(v, 4), gv = -1 - 4 * u * u / std::pow(v, 5);
        const double a = fu - d1i * lam, b = fv, c = gu, d = gv - d2 * lam;
        const double scale = std::max({std::abs(a * d), std::abs(b * c)});
        EXPECT_LT(std::abs(a * d - b * c), 1e-10 * scale);
        const auto m = linearization_matrix(ModelParams::make(e, d1i, d2, sigma), lam);
        EXPECT_NEAR(m[0], a, 1e-12 * std::abs(a) + 1e-14);
        EXPECT_NEAR(m[1], b, 1e-12 * std::abs(b));
        EXPECT_NEAR(m[2], c, 1e-12 * std::abs(c));
        EXPECT_NEAR(m[3], d, 1e-12 * std::abs(d));
    }
}

TEST(Parity, ExampleOnIntervalPi) {
    const auto bs = parity(gm2120(), 0.0, 0.5, 10.0, DomainGeometry::interval(pi), 50);
    EXPECT_EQ(bs.active, std::vector<int>{1});
    EXPECT_EQ(bs.parity_count, 1);
    EXPECT_FALSE(bs.is_resonant);
    EXPECT_EQ(bs.entries.size(), 50u);
    EXPECT_EQ(bs.entries[0].index, 1);
}

TEST(Parity, AboveAllValuesIsEmpty) {
    const auto bs = parity(gm2120(), 0.0, 5.0, 10.0, DomainGeometry::interval(pi), 50);
    EXPECT_TRUE(bs.active.empty());
    EXPECT_EQ(bs.parity_count, 0);
}

TEST(Parity, ResonanceFlag) {
    const auto bs = parity(gm2120(), 0.0, 9.0 / 11.0, 10.0, DomainGeometry::interval(pi), 50);
    EXPECT_TRUE(bs.is_resonant);
    EXPECT_LT(bs.nearest_gap, 1e-12);
}

TEST(Parity, TruncationIsChecked) {
    const auto geom = DomainGeometry::interval(pi);
    EXPECT_THROW(
        {
            try {
                parity(gm2120(), 0.0, 1e-4, 10.0, geom, 50);
            } catch (const Error& e) {
                EXPECT_EQ(e.kind(), ErrorKind::TruncationUnsafe);
                throw;
            }
        },
        Error);
    const auto bs = certified_parity(gm2120(), 0.0, 1e-4, 10.0, geom);
    EXPECT_GT(bs.parity_count, 1);
}

TEST(Parity, BruteForceCountAndMultiplicities) {
    const auto geom = DomainGeometry::rectangle(1.0, 1.0);
    const ExponentSet e = ExponentSet::make(2, 4, 2, 4);
    const auto sp = neumann_eigenvalues(geom, 2000);
    for (double d1 : {0.05, 0.01, 0.003}) {
        int ref = 0;
        for (size_t i = 1; i < sp.size(); ++i)
            if (d1 < bifurcation_value(e, 0.0, 5.0, sp[i].lambda)) ref += sp[i].multiplicity;
        EXPECT_EQ(certified_parity(e, 0.0, d1, 5.0, geom).parity_count, ref) << d1;
    }
}

TEST(Parity, MonotoneInD1WithJumpsAtBifurcationValues) {
    const auto geom = DomainGeometry::interval(1.0);
    const ExponentSet e = ExponentSet::make(2, 4, 2, 4);
    const auto vals = bifurcation_values(e, 0.0, 50.0, geom, 200);
    int prev = 1 << 30;
    for (int k = 0; k < 2000; ++k) {
        const double d1 = std::pow(10.0, -4 + 4.0 * k / 1999);
        const auto bs = certified_parity(e, 0.0, d1, 50.0, geom);
        EXPECT_LE(bs.parity_count, prev);
        int ref = 0;
        for (double v : vals) ref += d1 < v;
        EXPECT_EQ(bs.parity_count, ref) << d1;
        prev = bs.parity_count;
    }
}

TEST(DeltaCondition, DimensionTwoAlwaysFeasible) {
    std::mt19937_64 rng(47);
    std::uniform_real_distribution<double> U(0, 1);
    for (int k = 0; k < 20; ++k) {
        const double p = 1.2 + 2 * U(rng), r = 0.5 + 2 * U(rng), s = 3 * U(rng);
        const double q = (p - 1) / r * (s + 1) * (1.1 + U(rng));
        EXPECT_TRUE(delta_condition_feasible(ExponentSet::make(p, q, r, s), 2).feasible);
    }
}

TEST(DeltaCondition, ThreeDimensionalExample) {
    const auto df = delta_condition_feasible(gm2120(), 3);
    EXPECT_TRUE(df.feasible);
    ASSERT_TRUE(df.delta);
    EXPECT_GT(*df.delta, 0.0);
    EXPECT_LE(*df.delta, 1.0);
    // r = 4 >= n/(n-2) = 3
    EXPECT_FALSE(delta_condition_feasible(ExponentSet::make(2, 4, 4, 4), 3).feasible);
}

TEST(ExistencePrediction, SmallSourceExample) {
    const auto ep = existence_prediction(gm2120(), 0.01, 0.5, 10.0, DomainGeometry::interval(pi), 1);
    EXPECT_TRUE(ep.predicted);
    EXPECT_EQ(ep.parity_count, 1);
    EXPECT_TRUE(ep.parity_odd);
    EXPECT_TRUE(ep.sigma_positive);
    EXPECT_TRUE(ep.activator_ratio_below_one);
    EXPECT_FALSE(ep.resonant);
    EXPECT_FALSE(ep.reasons.empty());
}

TEST(ExistencePrediction, LargeSourceHasNoBifurcation) {
    const double sigma = sigma_no_bifurcation_threshold(gm2120()) * 1.01;
    const auto ep = existence_prediction(gm2120(), sigma, 1e-3, 10.0, DomainGeometry::interval(pi), 1);
    EXPECT_FALSE(ep.predicted);
    EXPECT_EQ(ep.parity_count, 0);
}

TEST(ExistencePrediction, UniquenessRegime) {
    const ExponentSet e = ExponentSet::make(2, 4, 2, 4);
    const auto ep = existence_prediction(e, 0.0, 1.0, 0.9, DomainGeometry::interval(1.0), 1);
    EXPECT_FALSE(ep.predicted);
    EXPECT_TRUE(ep.uniqueness_certified);
}
