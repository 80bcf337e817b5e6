#include "bleip/adv_codec.hpp"

#include <algorithm>

namespace bleip::codec {

AdBlock encode(std::span<const std::uint8_t> ip_payload, std::uint8_t seq,
               std::uint16_t service_uuid, std::size_t mtu)
{
    if (ip_payload.size() > mtu) {
        throw PayloadTooLarge("ip payload of " + std::to_string(ip_payload.size()) +
                              " bytes exceeds MTU " + std::to_string(mtu));
    }

    // Data stream carried across segments: sequence number first, then the
    // IP payload.
    std::vector<std::uint8_t> stream;
    stream.reserve(ip_payload.size() + 1);
    stream.push_back(seq);
    stream.insert(stream.end(), ip_payload.begin(), ip_payload.end());

    AdBlock block;
    block.seq = seq;
    block.ip_len = ip_payload.size();
    block.bytes.reserve(stream.size() + kSegmentOverhead * (stream.size() / kSegmentDataCapacity + 1));

    std::size_t off = 0;
    while (off < stream.size()) {
        std::size_t n = std::min(kSegmentDataCapacity, stream.size() - off);
        block.bytes.push_back(static_cast<std::uint8_t>(n + 3));  // type + uuid + data
        block.bytes.push_back(kAdTypeServiceData16);
        block.bytes.push_back(static_cast<std::uint8_t>(service_uuid & 0xff));
        block.bytes.push_back(static_cast<std::uint8_t>(service_uuid >> 8));
        block.bytes.insert(block.bytes.end(), stream.begin() + off, stream.begin() + off + n);
        off += n;
    }
    return block;
}

Decoded decode(std::span<const std::uint8_t> block, std::uint16_t expected_uuid)
{
    std::vector<std::uint8_t> stream;
    std::size_t off = 0;
    while (off < block.size()) {
        std::uint8_t len = block[off];
        if (len == 0) throw MalformedBlock("zero-length AD segment");
        if (off + 1 + len > block.size()) {
            throw MalformedBlock("AD segment length overruns buffer");
        }
        std::uint8_t type = block[off + 1];
        if (type == kAdTypeServiceData16 && len >= 3) {
            std::uint16_t uuid = static_cast<std::uint16_t>(block[off + 2]) |
                                 static_cast<std::uint16_t>(block[off + 3]) << 8;
            if (uuid == expected_uuid) {
                stream.insert(stream.end(), block.begin() + off + 4,
                              block.begin() + off + 1 + len);
            }
        }
        // Segments with a different AD type or UUID are skipped, not errors.
        off += 1 + static_cast<std::size_t>(len);
    }
    if (stream.empty()) throw NoIpSegments("no AD segment matched the service UUID");

    Decoded d;
    d.seq = stream.front();
    d.ip_payload.assign(stream.begin() + 1, stream.end());
    return d;
}

AuxPlan plan_aux(std::size_t block_size, std::size_t aux_capacity, std::size_t max_chain)
{
    if (aux_capacity < 1) throw SimError("aux capacity must be >= 1");

    AuxPlan plan;
    std::size_t remaining = block_size;
    while (remaining > 0) {
        std::size_t n = std::min(aux_capacity, remaining);
        plan.frame_sizes.push_back(static_cast<std::uint16_t>(n));
        remaining -= n;
    }
    if (plan.frame_sizes.empty()) plan.frame_sizes.push_back(0);
    if (plan.frames() > max_chain) {
        throw ChainOverflow("block of " + std::to_string(block_size) +
                            " bytes needs " + std::to_string(plan.frames()) +
                            " aux frames, controller limit is " + std::to_string(max_chain));
    }
    return plan;
}

std::vector<std::uint8_t> reassemble(
    const std::vector<std::optional<std::vector<std::uint8_t>>>& frames)
{
    std::vector<std::uint8_t> out;
    for (std::size_t i = 0; i < frames.size(); ++i) {
        if (!frames[i]) {
            throw ReassemblyIncomplete("aux frame " + std::to_string(i) + " of " +
                                       std::to_string(frames.size()) + " missing");
        }
        out.insert(out.end(), frames[i]->begin(), frames[i]->end());
    }
    return out;
}

}  // namespace bleip::codec
