#include <doctest.h>

#include <array>
#include <cmath>
#include <vector>

#include "regretlab/rng.hpp"

using regretlab::SplitMix64;

TEST_SUITE("rng")
{
    TEST_CASE("matches the reference SplitMix64 sequence")
    {
        SplitMix64 a(0);
        CHECK(a.next_u64() == 0xe220a8397b1dcdafULL);
        CHECK(a.next_u64() == 0x6e789e6aa1b965f4ULL);
        CHECK(a.next_u64() == 0x06c45d188009454fULL);

        SplitMix64 b(1234567);
        CHECK(b.next_u64() == 0x599ed017fb08fc85ULL);
        CHECK(b.next_u64() == 0x2c73f08458540fa5ULL);
    }

    TEST_CASE("keyed streams are reproducible and distinct")
    {
        auto a = SplitMix64::keyed(42, 7), b = SplitMix64::keyed(42, 7);
        auto c = SplitMix64::keyed(42, 8), d = SplitMix64::keyed(43, 7);
        for (int i = 0; i < 100; ++i) {
            const auto va = a.next_u64();
            CHECK(va == b.next_u64());
            CHECK(va != c.next_u64());
            CHECK(va != d.next_u64());
        }
    }

    TEST_CASE("split children differ from the parent and from each other")
    {
        SplitMix64 parent(5);
        SplitMix64 c1 = parent.split();
        SplitMix64 c2 = parent.split();
        CHECK(c1.increment() % 2 == 1);
        int same = 0;
        for (int i = 0; i < 64; ++i) same += c1.next_u64() == c2.next_u64();
        CHECK(same == 0);
    }

    TEST_CASE("uniform lies in [0,1) with the right mean")
    {
        SplitMix64 r(11);
        double sum = 0.0;
        const int n = 200000;
        for (int i = 0; i < n; ++i) {
            const double u = r.uniform();
            REQUIRE(u >= 0.0);
            REQUIRE(u < 1.0);
            sum += u;
        }
        CHECK(sum / n == doctest::Approx(0.5).epsilon(0.01));
    }

    TEST_CASE("categorical frequencies follow the weights")
    {
        SplitMix64 r(3);
        const std::array<double, 4> p{0.1, 0.0, 0.6, 0.3};
        std::array<int, 4> hits{};
        const int n = 100000;
        for (int i = 0; i < n; ++i) ++hits[r.categorical(p)];
        CHECK(hits[1] == 0);
        for (std::size_t k = 0; k < p.size(); ++k) CHECK(std::abs(hits[k] / double(n) - p[k]) < 0.01);
    }

    TEST_CASE("categorical never returns a zero-mass trailing index")
    {
        SplitMix64 r(9);
        const std::array<double, 3> p{0.3, 0.7, 0.0};
        for (int i = 0; i < 10000; ++i) CHECK(r.categorical(p) < 2);
    }

    TEST_CASE("gamma draws have mean equal to the shape")
    {
        SplitMix64 r(17);
        for (double shape : {0.3, 1.0, 4.5}) {
            double sum = 0.0;
            const int n = 100000;
            for (int i = 0; i < n; ++i) {
                const double g = r.gamma(shape);
                REQUIRE(g >= 0.0);
                sum += g;
            }
            CHECK(sum / n == doctest::Approx(shape).epsilon(0.03));
        }
    }

    TEST_CASE("normal draws are standardized")
    {
        SplitMix64 r(23);
        double s = 0.0, s2 = 0.0;
        const int n = 200000;
        for (int i = 0; i < n; ++i) {
            const double z = r.normal();
            s += z;
            s2 += z * z;
        }
        CHECK(std::abs(s / n) < 0.01);
        CHECK(s2 / n == doctest::Approx(1.0).epsilon(0.02));
    }
}
