#include <doctest.h>

#include <numeric>
#include <vector>

#include "bleip/adv_codec.hpp"

using namespace bleip;
using namespace bleip::codec;

namespace {

std::vector<std::uint8_t> pattern(std::size_t n)
{
    std::vector<std::uint8_t> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<std::uint8_t>(i * 7 + 13);
    return v;
}

// Naive reference encoder: prepend seq, chop into 252-byte chunks, wrap each.
std::vector<std::uint8_t> reference_encode(const std::vector<std::uint8_t>& payload,
                                           std::uint8_t seq, std::uint16_t uuid)
{
    std::vector<std::uint8_t> stream;
    stream.push_back(seq);
    stream.insert(stream.end(), payload.begin(), payload.end());
    std::vector<std::uint8_t> out;
    for (std::size_t off = 0; off < stream.size(); off += 252) {
        std::size_t n = std::min<std::size_t>(252, stream.size() - off);
        out.push_back(static_cast<std::uint8_t>(n + 3));
        out.push_back(0x16);
        out.push_back(static_cast<std::uint8_t>(uuid & 0xff));
        out.push_back(static_cast<std::uint8_t>(uuid >> 8));
        out.insert(out.end(), stream.begin() + off, stream.begin() + off + n);
    }
    return out;
}

}  // namespace

TEST_CASE("encode matches the reference layout and round-trips")
{
    for (std::size_t n : {0u, 1u, 100u, 251u, 252u, 253u, 503u, 504u, 505u, 1280u}) {
        auto payload = pattern(n);
        AdBlock block = encode(payload, 0x42, 0xFEED);
        CHECK(block.bytes == reference_encode(payload, 0x42, 0xFEED));
        CHECK(block.ip_len == n);
        // seq byte counts toward the first segment's data budget
        std::size_t want_segs = (n + 1 + 251) / 252;
        CHECK(block.segments() == want_segs);
        CHECK(block.size() == n + 1 + 4 * want_segs);

        Decoded d = decode(block.bytes, 0xFEED);
        CHECK(d.seq == 0x42);
        CHECK(d.ip_payload == payload);
    }
}

TEST_CASE("size arithmetic for the reference payloads")
{
    // 110 byte datagram: fits one segment, 115 byte block.
    CHECK(encode(pattern(110), 0).size() == 115);
    // Full 1280 byte MTU: 6 segments, 1305 byte block.
    AdBlock big = encode(pattern(1280), 9);
    CHECK(big.segments() == 6);
    CHECK(big.size() == 1305);
}

TEST_CASE("payloads above the MTU are rejected")
{
    CHECK_THROWS_AS(encode(pattern(1281), 0), PayloadTooLarge);
    CHECK_THROWS_AS(encode(pattern(200), 0, 0xFEED, 100), PayloadTooLarge);
    CHECK_NOTHROW(encode(pattern(100), 0, 0xFEED, 100));
}

TEST_CASE("decode skips foreign segments")
{
    auto payload = pattern(50);
    AdBlock block = encode(payload, 7, 0xFEED);

    // Prepend a flags segment and a service-data segment for another UUID.
    std::vector<std::uint8_t> mixed = {0x02, 0x01, 0x06,
                                       0x05, 0x16, 0x0f, 0x18, 0xaa, 0xbb};
    mixed.insert(mixed.end(), block.bytes.begin(), block.bytes.end());

    Decoded d = decode(mixed, 0xFEED);
    CHECK(d.seq == 7);
    CHECK(d.ip_payload == payload);
}

TEST_CASE("decode rejects broken blocks")
{
    auto block = encode(pattern(20), 1).bytes;
    block.pop_back();  // truncated segment
    CHECK_THROWS_AS(decode(block), MalformedBlock);

    std::vector<std::uint8_t> zero = {0x00, 0x16};
    CHECK_THROWS_AS(decode(zero), MalformedBlock);

    // Valid AD structure but nothing for our UUID.
    std::vector<std::uint8_t> foreign = {0x02, 0x01, 0x06};
    CHECK_THROWS_AS(decode(foreign), NoIpSegments);
}

TEST_CASE("aux chain planning fills all but the last frame")
{
    AuxPlan p = plan_aux(115);
    CHECK(p.frame_sizes == std::vector<std::uint16_t>{115});

    // 1305 byte block over 245 byte aux frames: five full plus the tail.
    AuxPlan big = plan_aux(1305);
    CHECK(big.frame_sizes == std::vector<std::uint16_t>{245, 245, 245, 245, 245, 80});
    CHECK(big.total() == 1305);

    AuxPlan exact = plan_aux(490);
    CHECK(exact.frame_sizes == std::vector<std::uint16_t>{245, 245});

    CHECK(plan_aux(0).frame_sizes == std::vector<std::uint16_t>{0});
}

TEST_CASE("aux chain limit is enforced")
{
    CHECK(plan_aux(2450).frames() == 10);
    CHECK_THROWS_AS(plan_aux(2451), ChainOverflow);
    CHECK_THROWS_AS(plan_aux(2600, 245, 10), ChainOverflow);
    CHECK_NOTHROW(plan_aux(2600, 260, 10));
}

TEST_CASE("reassembly restores the block and flags gaps")
{
    AdBlock block = encode(pattern(600), 3);
    AuxPlan plan = plan_aux(block.size());

    std::vector<std::optional<std::vector<std::uint8_t>>> frames;
    std::size_t off = 0;
    for (auto sz : plan.frame_sizes) {
        frames.emplace_back(std::vector<std::uint8_t>(block.bytes.begin() + off,
                                                      block.bytes.begin() + off + sz));
        off += sz;
    }
    CHECK(reassemble(frames) == block.bytes);

    frames[1].reset();
    CHECK_THROWS_AS(reassemble(frames), ReassemblyIncomplete);
}
