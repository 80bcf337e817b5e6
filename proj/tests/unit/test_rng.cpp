#include <doctest.h>

#include <array>
#include <set>

#include "bleip/rng.hpp"

using bleip::Rng;

TEST_CASE("pcg32 golden sequence")
{
    // Frozen from an independent implementation of the PCG32 reference
    // algorithm; guards the generator against accidental drift.
    Rng r(42, 0);
    std::array<std::uint32_t, 6> want = {565663470u,  3244226384u, 2504567229u,
                                         903561869u,  4026996297u, 2722332799u};
    for (std::uint32_t w : want) CHECK(r.next_u32() == w);

    Rng r2(12345, 1000);
    std::array<std::uint32_t, 4> want2 = {1171339989u, 2435688270u, 1038911583u,
                                          3423334741u};
    for (std::uint32_t w : want2) CHECK(r2.next_u32() == w);
}

TEST_CASE("streams are independent")
{
    Rng a(42, 0);
    Rng b(42, 1);
    std::array<std::uint32_t, 6> want_b = {1307692281u, 3850602322u, 1491967504u,
                                           4091771729u, 3882238836u, 1795024040u};
    bool any_diff = false;
    for (std::uint32_t w : want_b) {
        std::uint32_t va = a.next_u32();
        std::uint32_t vb = b.next_u32();
        CHECK(vb == w);
        any_diff = any_diff || va != vb;
    }
    CHECK(any_diff);
}

TEST_CASE("uniform is inclusive on both ends and debiased")
{
    Rng r(7, 3);
    std::array<std::uint64_t, 10> want = {8, 3, 4, 7, 7, 0, 7, 9, 6, 8};
    for (std::uint64_t w : want) CHECK(r.uniform(0, 9) == w);

    Rng d(7, 3);
    for (int i = 0; i < 3; ++i) CHECK(d.uniform(5, 5) == 5);

    Rng e(1, 2);
    std::set<std::uint64_t> seen;
    for (int i = 0; i < 200; ++i) {
        std::uint64_t v = e.uniform(10, 12);
        CHECK(v >= 10);
        CHECK(v <= 12);
        seen.insert(v);
    }
    CHECK(seen.size() == 3);  // both endpoints reachable

    CHECK_THROWS_AS((void)e.uniform(2, 1), bleip::SimError);
}

TEST_CASE("same seed and stream reproduce exactly")
{
    Rng a(999, 17);
    Rng b(999, 17);
    for (int i = 0; i < 50; ++i) CHECK(a.next_u64() == b.next_u64());
}
