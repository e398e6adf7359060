#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "lacuna/integer_set.hpp"
#include "lacuna/schedules.hpp"

namespace lacuna {

// Signed relation: Σ signs[i]·support[i] = 0 with signs in {−1,+1}.
// Canonical form fixes the sign of the largest element to −1.
struct Relation {
    std::vector<std::int64_t> support;  // strictly increasing
    std::vector<int> signs;             // aligned with support

    std::size_t length() const { return support.size(); }

    // Recomputes the signed sum in overflow-checked arithmetic.
    std::int64_t signed_sum() const;

    void canonicalize();
};

struct SearchBudget {
    std::size_t max_table_entries = std::size_t{1} << 22;
    std::uint64_t max_nodes = std::uint64_t{1} << 28;
};

enum class Ternary { False, True, Unknown };

// Some canonical relation of length exactly `length` with support in
// set ∩ [min_element, ∞), or nullopt if none exists.  Meet-in-the-middle over
// signed subset sums; throws ResourceExceeded when tables would outgrow the
// budget (the answer is then unknown, not "none").
std::optional<Relation> find_relation(const IntegerSet& set, int length,
                                      std::int64_t min_element,
                                      const SearchBudget& budget = {});

// True iff no relation of any length exists.  Exact up to `exact_cap`
// elements; beyond the cap throws ResourceExceeded.
bool is_quasi_independent(const IntegerSet& set, const SearchBudget& budget = {},
                          std::size_t exact_cap = 24);

// Heuristic form: never throws for size reasons, may answer Unknown.
Ternary is_quasi_independent_checked(const IntegerSet& set,
                                     const SearchBudget& budget = {},
                                     std::size_t exact_cap = 24);

// Number of size-s subsets admitting at least one zero signed sum.
// Brute-force scale (|set| <= 20, s <= 6 by default).
std::uint64_t count_relation_supports(const IntegerSet& set, int length,
                                      std::size_t max_set = 20, int max_length = 6);

// Maximum-cardinality quasi-independent subset; ties resolved toward the
// lexicographically smallest support.  Exact branch-and-bound, |A| <= cap.
IntegerSet max_quasi_independent(const IntegerSet& set, std::size_t exact_cap = 20,
                                 const SearchBudget& budget = {});

struct GreedyResult {
    IntegerSet kept;
    // true when a membership test ran out of budget and the element was
    // dropped conservatively
    bool skipped_unknown = false;
};

// Largest-to-smallest scan keeping an element iff it closes no relation with
// the elements already kept.  Scales past the exact cap by skipping
// conservatively.
GreedyResult greedy_quasi_independent(const IntegerSet& set, const SearchBudget& budget = {});

// Two-case √-extraction over a block schedule: either one block trace already
// holds √|A| elements, or representatives of every other nonempty block form
// a quasi-independent set of size >= (1/2)·√|A|.  Block traces are verified
// quasi-independent when they fit under `verify_cap`.
IntegerSet extract_sqrt_block(const IntegerSet& set,
                              const BlockSchedule& blocks = BlockSchedule::dyadic(),
                              std::size_t verify_cap = 20,
                              const SearchBudget& budget = {});

struct PruneResult {
    IntegerSet independent;        // E = block \ S
    IntegerSet relation_support;   // S, empty when the block is quasi-independent
    std::vector<int> signs;        // signs of the removed relation
    bool precondition_ok = true;   // no relation longer than l_max was found
    bool independent_verified = false;
};

// Removes the support of a maximum-cardinality relation from the block.
PruneResult prune_block_max_relation(const IntegerSet& block, int l_max,
                                     std::size_t verify_cap = 20,
                                     const SearchBudget& budget = {});

}  // namespace lacuna
