#pragma once

#include <cstdint>
#include <vector>

#include "bleip/types.hpp"

namespace bleip {

enum class DedupVerdict { Fresh, Duplicate };

/// Per-receiver duplicate suppression: one (source address, last sequence
/// number) entry per neighbor. Equality-only comparison, as a reordered older
/// packet with a different seq is indistinguishable from fresh data in this
/// scheme. Least-recently-updated entry is evicted when capacity is exceeded.
class DedupTable {
public:
    explicit DedupTable(std::size_t capacity = 32) : capacity_(capacity) {}

    DedupVerdict check_and_update(const BleAddress& src, std::uint8_t seq)
    {
        ++tick_;
        for (auto& e : entries_) {
            if (e.src == src) {
                e.last_used = tick_;
                if (e.seq == seq) return DedupVerdict::Duplicate;
                e.seq = seq;
                return DedupVerdict::Fresh;
            }
        }
        if (entries_.size() >= capacity_) evict_lru();
        entries_.push_back({src, seq, tick_});
        return DedupVerdict::Fresh;
    }

    std::size_t size() const { return entries_.size(); }

private:
    struct Entry {
        BleAddress src;
        std::uint8_t seq;
        std::uint64_t last_used;
    };

    void evict_lru()
    {
        std::size_t victim = 0;
        for (std::size_t i = 1; i < entries_.size(); ++i) {
            if (entries_[i].last_used < entries_[victim].last_used) victim = i;
        }
        entries_.erase(entries_.begin() + static_cast<std::ptrdiff_t>(victim));
    }

    std::size_t capacity_;
    std::uint64_t tick_ = 0;
    std::vector<Entry> entries_;
};

}  // namespace bleip
