#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "lacuna/errors.hpp"

namespace lacuna {

// Finite sorted set of distinct positive integers.  The universal object of
// the library: sampled sets, blocks, extracted subsets are all IntegerSets.
class IntegerSet {
public:
    IntegerSet() = default;

    explicit IntegerSet(std::vector<std::int64_t> elems) : elems_(std::move(elems)) {
        std::sort(elems_.begin(), elems_.end());
        elems_.erase(std::unique(elems_.begin(), elems_.end()), elems_.end());
        if (!elems_.empty() && elems_.front() < 1)
            throw InvalidInput("IntegerSet elements must be >= 1");
    }

    IntegerSet(std::initializer_list<std::int64_t> elems)
        : IntegerSet(std::vector<std::int64_t>(elems)) {}

    std::size_t size() const { return elems_.size(); }
    bool empty() const { return elems_.empty(); }

    std::int64_t operator[](std::size_t i) const { return elems_[i]; }
    std::int64_t min() const { return elems_.front(); }
    std::int64_t max() const { return elems_.back(); }

    bool contains(std::int64_t x) const {
        return std::binary_search(elems_.begin(), elems_.end(), x);
    }

    // Elements in the half-open interval [lo, hi).
    IntegerSet slice(std::int64_t lo, std::int64_t hi) const {
        if (lo > hi) throw InvalidInput("slice: lo > hi");
        auto a = std::lower_bound(elems_.begin(), elems_.end(), lo);
        auto b = std::lower_bound(elems_.begin(), elems_.end(), hi);
        IntegerSet out;
        out.elems_.assign(a, b);
        return out;
    }

    std::size_t count_in(std::int64_t lo, std::int64_t hi) const {
        auto a = std::lower_bound(elems_.begin(), elems_.end(), lo);
        auto b = std::lower_bound(elems_.begin(), elems_.end(), hi);
        return static_cast<std::size_t>(b - a);
    }

    const std::vector<std::int64_t>& elements() const { return elems_; }

    auto begin() const { return elems_.begin(); }
    auto end() const { return elems_.end(); }

    friend bool operator==(const IntegerSet&, const IntegerSet&) = default;

private:
    std::vector<std::int64_t> elems_;
};

// Λ ∩ [lo, hi).
inline IntegerSet block_trace(const IntegerSet& set, std::int64_t lo, std::int64_t hi) {
    return set.slice(lo, hi);
}

}  // namespace lacuna
