#include "qspectra/exact.hpp"
#include "qspectra/lattice.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace qspectra;

TEST(Lattice, PowerOf)
{
    Expansion q2({2});
    EXPECT_EQ(power_of(LatticePoint{0}, q2), 0u);
    EXPECT_EQ(power_of(LatticePoint{1}, q2), 1u);
    EXPECT_EQ(power_of(LatticePoint{-1}, q2), 1u);
    EXPECT_EQ(power_of(LatticePoint{5}, q2), 3u);
    EXPECT_EQ(power_of(LatticePoint{7}, q2), 3u);
    EXPECT_EQ(power_of(LatticePoint{8}, q2), 4u);
    Expansion q23({2, 3});
    EXPECT_EQ(power_of(LatticePoint{1, 8}, q23), 2u);
    EXPECT_EQ(power_of(LatticePoint{4, 0}, q23), 3u);
}

TEST(Lattice, DivModFloors)
{
    Expansion q({3});
    auto dm = divmod_qn(LatticePoint{-1}, q, 2);
    EXPECT_EQ(dm.quot, LatticePoint{-1});
    EXPECT_EQ(dm.rem, LatticePoint{8});
    dm = divmod_qn(LatticePoint{10}, q, 2);
    EXPECT_EQ(dm.quot, LatticePoint{1});
    EXPECT_EQ(dm.rem, LatticePoint{1});
}

TEST(Lattice, DivModRandom)
{
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<long> dist(-100000, 100000);
    Expansion q({2, 5});
    for (int t = 0; t < 500; ++t) {
        LatticePoint k{dist(rng), dist(rng)};
        for (unsigned n = 0; n < 6; ++n) {
            auto dm = divmod_qn(k, q, n);
            for (std::size_t i = 0; i < 2; ++i) {
                Integer m = q.power(i, n);
                EXPECT_EQ(dm.rem[i] + dm.quot[i] * m, k[i]);
                EXPECT_GE(dm.rem[i], 0);
                EXPECT_LT(dm.rem[i], m);
            }
        }
    }
}

TEST(Lattice, DigitsReassemble)
{
    Expansion q({3, 2});
    LatticePoint k{-7, 5};
    auto ds = digits(k, q, 4);
    ASSERT_EQ(ds.size(), 4u);
    auto rem = divmod_qn(k, q, 4).rem;
    for (std::size_t i = 0; i < 2; ++i) {
        Integer acc = 0, pw = 1;
        for (const auto& d : ds) {
            acc += pw * d[i];
            pw *= q[i];
        }
        EXPECT_EQ(acc, rem[i]);
    }
}

TEST(Lattice, CarrySetSizeMatchesEnumeration)
{
    Expansion q({2, 3});
    for (long a = -5; a <= 5; ++a)
        for (long b = -10; b <= 10; b += 3) {
            LatticePoint k{a, b};
            for (unsigned n = 1; n <= 3; ++n)
                EXPECT_EQ(Integer(static_cast<unsigned long>(carry_set(k, q, n).size())), carry_set_size(k, q, n))
                    << k.str() << " n=" << n;
        }
    // Example: q = 2, n = 3, k = 3 gives {5,6,7}.
    auto c = carry_set(LatticePoint{3}, Expansion({2}), 3);
    ASSERT_EQ(c.size(), 3u);
    EXPECT_EQ(c.front(), LatticePoint{5});
}

TEST(Lattice, CarrySetVanishesRelatively)
{
    Expansion q({2});
    LatticePoint k{3};
    Rational prev = 1;
    for (unsigned n = 2; n <= 20; ++n) {
        Rational f(carry_set_size(k, q, n), q.Q_power(n));
        EXPECT_LE(f, prev);
        prev = f;
    }
    EXPECT_LT(prev, Rational(1, 100000));
}

TEST(Lattice, HugeCoordinates)
{
    LatticePoint k(std::vector<Integer>{Integer("123456789012345678901234567890")});
    Expansion q({2});
    auto dm = divmod_qn(k, q, 90);
    EXPECT_EQ(dm.rem[0] + dm.quot[0] * q.power(0, 90), k[0]);
    EXPECT_EQ(power_of(k, q), 97u);
}

TEST(Lattice, WindowIsPowerBall)
{
    Expansion q({2});
    auto w = window(q, 3);
    EXPECT_EQ(w.size(), 15u);
    for (const auto& k : w) EXPECT_LE(power_of(k, q), 3u);
    EXPECT_EQ(window(Expansion({2, 2}), 1).size(), 9u);
}

TEST(Lattice, ParsePoint)
{
    EXPECT_EQ(parse_lattice_point("5", 1), LatticePoint{5});
    EXPECT_EQ(parse_lattice_point("(1,0)", 2), (LatticePoint{1, 0}));
    EXPECT_EQ(parse_lattice_point("-1;2", 2), (LatticePoint{-1, 2}));
    EXPECT_THROW(parse_lattice_point("1,2", 1), std::exception);
    EXPECT_THROW(parse_lattice_point("x", 1), std::exception);
}

TEST(Lattice, BoxRoundTrip)
{
    Box b({2, 3, 4});
    EXPECT_EQ(b.size(), 24u);
    for (std::uint64_t i = 0; i < b.size(); ++i) EXPECT_EQ(b.flatten(b.unflatten(i)), i);
    EXPECT_EQ(b.flatten({0, 0, 1}), 1u);
    EXPECT_EQ(b.flatten({1, 0, 0}), 12u);
}

TEST(Exact, RrefRankNullspace)
{
    ExactMatrix m(3, 3);
    long vals[] = {1, 2, 3, 2, 4, 6, 1, 0, 1};
    for (std::size_t i = 0; i < 9; ++i) m(i / 3, i % 3) = vals[i];
    EXPECT_EQ(rank(m), 2u);
    ExactMatrix n = nullspace(m);
    ASSERT_EQ(n.cols(), 1u);
    EXPECT_TRUE((m * n).is_zero());
    ExactMatrix l = left_nullspace(m);
    ASSERT_EQ(l.rows(), 1u);
    EXPECT_TRUE((l * m).is_zero());
}

TEST(Exact, SolveAndInverse)
{
    ExactMatrix a(2, 2);
    a(0, 0) = 2;
    a(0, 1) = 1;
    a(1, 0) = 1;
    a(1, 1) = 3;
    auto x = solve(a, ExactVector{Rational(1), Rational(2)});
    ASSERT_TRUE(x);
    EXPECT_EQ((*x)[0], Rational(1, 5));
    EXPECT_EQ((*x)[1], Rational(3, 5));
    auto inv = inverse(a);
    ASSERT_TRUE(inv);
    EXPECT_EQ(a * *inv, ExactMatrix::identity(2));
    EXPECT_EQ(determinant(a), Rational(5));
    ExactMatrix s(2, 2);
    s(0, 0) = s(0, 1) = s(1, 0) = s(1, 1) = 1;
    EXPECT_FALSE(inverse(s));
}

TEST(Exact, KroneckerMixedProduct)
{
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> d(-3, 3);
    auto rnd = [&](std::size_t r, std::size_t c) {
        ExactMatrix m(r, c);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j) m(i, j) = d(rng);
        return m;
    };
    ExactMatrix a = rnd(2, 3), b = rnd(3, 2), c = rnd(3, 2), e = rnd(2, 3);
    EXPECT_EQ(kronecker(a, b) * kronecker(c, e), kronecker(a * c, b * e));
}

TEST(Exact, CharpolyAndMinors)
{
    ExactMatrix a(2, 2);
    a(0, 0) = 1;
    a(0, 1) = 2;
    a(1, 0) = 3;
    a(1, 1) = 4;
    auto cp = charpoly(a);
    ASSERT_EQ(cp.size(), 3u);
    EXPECT_EQ(cp[0], Rational(-2));
    EXPECT_EQ(cp[1], Rational(-5));
    EXPECT_EQ(cp[2], Rational(1));
    auto e = principal_minor_sums(a);
    EXPECT_EQ(e[1], Rational(5));
    EXPECT_EQ(e[2], Rational(-2));
}

TEST(Exact, PsdCheck)
{
    ExactMatrix p(2, 2);
    p(0, 0) = p(1, 1) = 1;
    p(0, 1) = p(1, 0) = -1;
    EXPECT_TRUE(is_psd_symmetric(p));
    p(0, 1) = p(1, 0) = Rational(-11, 10);
    EXPECT_FALSE(is_psd_symmetric(p));
}

TEST(Exact, RationalApproximation)
{
    auto r = rational_approximation(-1.0 / 3.0, 1000, 1e-12);
    ASSERT_TRUE(r);
    EXPECT_EQ(*r, Rational(-1, 3));
    EXPECT_FALSE(rational_approximation(std::sqrt(2.0), 100, 1e-12));
    EXPECT_EQ(parse_rational("-3/13"), Rational(-3, 13));
    EXPECT_EQ(to_string(Rational(6, 4)), "3/2");
}
