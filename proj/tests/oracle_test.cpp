#include "qspectra/errors.hpp"
#include "qspectra/fourier.hpp"
#include "qspectra/oracle.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace qspectra;
using namespace qspectra::test;

TEST(Oracle, ThueMorseConverges)
{
    auto a = analyse(bundled("thue-morse"));
    CorrelationEngine e(a.prep.telescoped, a.weights.u);
    for (long k = 1; k <= 3; ++k) {
        ExactVector exact = e.coefficient(LatticePoint{k});
        Rational prev = 10;
        for (unsigned n = 6; n <= 12; n += 2) {
            auto c = compare(pair_frequency(a.prep.telescoped, 0, n, LatticePoint{k}), exact, 2, Expansion({2}));
            EXPECT_LT(c.l1, prev) << "k=" << k << " n=" << n;
            prev = c.l1;
        }
        EXPECT_LT(prev, Rational(1, 100));
    }
}

TEST(Oracle, AveragedDeviationIsCarryMass)
{
    for (const char* name : {"thue-morse", "queffelec-zeta", "rudin-shapiro", "table", "height-h3"}) {
        auto a = analyse(bundled(name));
        const Substitution& s = a.prep.telescoped;
        CorrelationEngine e(s, a.weights.u);
        for (const auto& k : window(s.q(), 1)) {
            if (k.is_zero()) continue;
            unsigned n = s.dim() == 1 ? 6 : 4;
            auto f = averaged_pair_frequency(s, a.weights.u, n, k);
            auto c = compare(f, e.coefficient(k), s.size(), s.q());
            EXPECT_EQ(c.l1, c.carry_bound) << name << " k=" << k.str();
        }
    }
}

TEST(Oracle, SlabsMatchExpansion)
{
    Substitution t = bundled("table");
    const unsigned n = 4;
    LatticePoint k{1, -1};
    auto f = pair_frequency(t, 2, n, k);
    Block b = expand(t, 2, n);
    std::vector<std::uint64_t> counts(16, 0);
    const std::int64_t side = 16;
    for (std::int64_t x = 0; x < side; ++x)
        for (std::int64_t y = 0; y < side; ++y) {
            std::int64_t x2 = x + 1, y2 = y - 1;
            if (x2 < 0 || x2 >= side || y2 < 0 || y2 >= side) continue;
            counts[b.at({x, y}) * 4 + b.at({x2, y2})]++;
        }
    EXPECT_EQ(f.counts, counts);
}

TEST(Oracle, TableConverges)
{
    auto a = analyse(bundled("table"));
    CorrelationEngine e(a.prep.telescoped, a.weights.u);
    auto c = compare(pair_frequency(a.prep.telescoped, 0, 8, LatticePoint{1, 0}), e.coefficient(LatticePoint{1, 0}), 4,
                     Expansion({2, 2}));
    EXPECT_LT(c.l1, Rational(1, 50));
}

TEST(Oracle, Preconditions)
{
    Substitution tm = bundled("thue-morse");
    EXPECT_THROW(pair_frequency(tm, 0, 2, LatticePoint{5}), InputError);
    ::setenv(kCellBudgetEnv, "256", 1);
    EXPECT_THROW(pair_frequency(tm, 0, 12, LatticePoint{1}), ResourceError);
    ::unsetenv(kCellBudgetEnv);
}

TEST(Oracle, CsvHeader)
{
    auto a = analyse(bundled("thue-morse"));
    CorrelationEngine e(a.prep.telescoped, a.weights.u);
    auto f = pair_frequency(a.prep.telescoped, 0, 4, LatticePoint{1});
    std::ostringstream out;
    write_frequency_csv(out, a.prep.telescoped.alphabet(), f, e.coefficient(LatticePoint{1}));
    std::string first = out.str().substr(0, out.str().find('\n'));
    EXPECT_EQ(first, "n,k,pair,frequency,exact,deviation");
    // Adjacent pairs of 0110100110010110.
    EXPECT_EQ(f.counts, (std::vector<std::uint64_t>{2, 5, 5, 3}));
    EXPECT_EQ(f.positions, Integer(15));
    EXPECT_EQ(f.normalized[1], Rational(5, 16));
}
