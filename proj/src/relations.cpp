#include "lacuna/relations.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lacuna/errors.hpp"

namespace lacuna {
namespace {

constexpr std::int64_t kInt64Max = std::numeric_limits<std::int64_t>::max();

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw OverflowError("signed sum overflows 64 bits");
    return r;
}

// One signed half-selection: sum of chosen elements with chosen signs.
struct HalfEntry {
    std::int64_t sum;
    std::uint64_t mask;   // which elements of the half
    std::uint64_t signs;  // bit set = +1
};

void enumerate_half(const std::vector<std::int64_t>& elems, int want,
                    std::size_t from, std::int64_t sum, std::uint64_t mask,
                    std::uint64_t signs, std::vector<HalfEntry>& out) {
    if (want == 0) {
        out.push_back({sum, mask, signs});
        return;
    }
    if (elems.size() - from < static_cast<std::size_t>(want)) return;
    for (std::size_t i = from; i + static_cast<std::size_t>(want) <= elems.size(); ++i) {
        std::uint64_t bit = std::uint64_t{1} << i;
        enumerate_half(elems, want - 1, i + 1, checked_add(sum, elems[i]), mask | bit,
                       signs | bit, out);
        enumerate_half(elems, want - 1, i + 1, checked_add(sum, -elems[i]), mask | bit, signs,
                       out);
    }
}

double binomial(std::size_t n, std::size_t k) {
    if (k > n) return 0;
    double r = 1;
    for (std::size_t i = 0; i < k; ++i) r *= static_cast<double>(n - i) / static_cast<double>(i + 1);
    return r;
}

// All 2^|K| subset sums of a quasi-independent set are distinct; `sums` is the
// sorted list.  Appending x stays quasi-independent iff no two existing sums
// differ by exactly x.
bool has_gap_equal(const std::vector<std::int64_t>& sums, std::int64_t x) {
    std::size_t i = 0, j = 0;
    while (j < sums.size()) {
        std::int64_t d = sums[j] - sums[i];
        if (d == x) return true;
        if (d < x) ++j; else ++i;
        if (i > j) j = i;
    }
    return false;
}

std::vector<std::int64_t> merge_shifted(const std::vector<std::int64_t>& sums, std::int64_t x) {
    std::vector<std::int64_t> out;
    out.reserve(sums.size() * 2);
    std::size_t i = 0, j = 0;
    while (i < sums.size() || j < sums.size()) {
        std::int64_t a = i < sums.size() ? sums[i] : kInt64Max;
        std::int64_t b = j < sums.size() ? checked_add(sums[j], x) : kInt64Max;
        if (a <= b) { out.push_back(a); ++i; } else { out.push_back(b); ++j; }
    }
    return out;
}

}  // namespace

std::int64_t Relation::signed_sum() const {
    std::int64_t s = 0;
    for (std::size_t i = 0; i < support.size(); ++i)
        s = checked_add(s, signs[i] > 0 ? support[i] : -support[i]);
    return s;
}

void Relation::canonicalize() {
    if (!signs.empty() && signs.back() > 0)
        for (int& s : signs) s = -s;
}

std::optional<Relation> find_relation(const IntegerSet& set, int length,
                                      std::int64_t min_element, const SearchBudget& budget) {
    if (length < 2) throw InvalidInput("find_relation: length must be >= 2");
    std::vector<std::int64_t> cands;
    for (std::int64_t x : set)
        if (x >= min_element) cands.push_back(x);
    auto m = cands.size();
    if (m < static_cast<std::size_t>(length)) return std::nullopt;
    if (!cands.empty() && cands.back() > kInt64Max / (length + 1))
        throw OverflowError("elements too large for relation search at this length");

    std::vector<std::int64_t> left(cands.begin(), cands.begin() + m / 2);
    std::vector<std::int64_t> right(cands.begin() + m / 2, cands.end());
    if (right.size() > 64)
        throw ResourceExceeded("find_relation: too many candidates for mask enumeration");

    for (int s1 = std::max(0, length - static_cast<int>(right.size()));
         s1 <= std::min<int>(length, static_cast<int>(left.size())); ++s1) {
        int s2 = length - s1;
        double table = binomial(left.size(), s1) * std::exp2(s1) +
                       binomial(right.size(), s2) * std::exp2(s2);
        if (table > static_cast<double>(budget.max_table_entries))
            throw ResourceExceeded("find_relation: meet-in-the-middle table over budget");

        std::vector<HalfEntry> lhs, rhs;
        enumerate_half(left, s1, 0, 0, 0, 0, lhs);
        enumerate_half(right, s2, 0, 0, 0, 0, rhs);
        std::stable_sort(rhs.begin(), rhs.end(),
                         [](const HalfEntry& a, const HalfEntry& b) { return a.sum < b.sum; });

        for (const HalfEntry& le : lhs) {
            auto it = std::lower_bound(rhs.begin(), rhs.end(), -le.sum,
                                       [](const HalfEntry& e, std::int64_t v) { return e.sum < v; });
            if (it == rhs.end() || it->sum != -le.sum) continue;
            Relation rel;
            for (std::size_t i = 0; i < left.size(); ++i)
                if (le.mask & (std::uint64_t{1} << i)) {
                    rel.support.push_back(left[i]);
                    rel.signs.push_back((le.signs >> i) & 1u ? +1 : -1);
                }
            for (std::size_t i = 0; i < right.size(); ++i)
                if (it->mask & (std::uint64_t{1} << i)) {
                    rel.support.push_back(right[i]);
                    rel.signs.push_back((it->signs >> i) & 1u ? +1 : -1);
                }
            rel.canonicalize();
            if (rel.signed_sum() != 0) throw VerificationFailed("relation fails checked re-sum");
            return rel;
        }
    }
    return std::nullopt;
}

bool is_quasi_independent(const IntegerSet& set, const SearchBudget& budget,
                          std::size_t exact_cap) {
    if (set.size() <= 1) return true;
    if (set.size() > exact_cap)
        throw ResourceExceeded("is_quasi_independent: set larger than exact cap");
    for (int s = 2; s <= static_cast<int>(set.size()); ++s)
        if (find_relation(set, s, 1, budget)) return false;
    return true;
}

Ternary is_quasi_independent_checked(const IntegerSet& set, const SearchBudget& budget,
                                     std::size_t exact_cap) {
    try {
        return is_quasi_independent(set, budget, exact_cap) ? Ternary::True : Ternary::False;
    } catch (const ResourceExceeded&) {
        return Ternary::Unknown;
    }
}

std::uint64_t count_relation_supports(const IntegerSet& set, int length, std::size_t max_set,
                                      int max_length) {
    if (length < 2) throw InvalidInput("count_relation_supports: length must be >= 2");
    if (set.size() > max_set || length > max_length)
        throw ResourceExceeded("count_relation_supports: beyond brute-force caps");
    const auto& v = set.elements();
    auto n = v.size();
    if (n < static_cast<std::size_t>(length)) return 0;

    std::uint64_t count = 0;
    std::vector<std::size_t> idx(static_cast<std::size_t>(length));
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    while (true) {
        std::int64_t total = 0;
        for (std::size_t i : idx) total = checked_add(total, v[i]);
        if (total % 2 == 0) {
            std::int64_t half = total / 2;
            // positive part of a zero signed sum carries half the total
            for (std::uint32_t u = 1; u + 1 < (std::uint32_t{1} << length); ++u) {
                std::int64_t s = 0;
                for (int b = 0; b < length; ++b)
                    if (u & (std::uint32_t{1} << b)) s += v[idx[static_cast<std::size_t>(b)]];
                if (s == half) { ++count; break; }
            }
        }
        // next combination
        int k = length - 1;
        while (k >= 0 && idx[static_cast<std::size_t>(k)] ==
                             n - static_cast<std::size_t>(length - k))
            --k;
        if (k < 0) break;
        ++idx[static_cast<std::size_t>(k)];
        for (int j = k + 1; j < length; ++j)
            idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
    return count;
}

namespace {

struct MaxQiState {
    const std::vector<std::int64_t>* elems;
    std::vector<std::int64_t> best;
    std::uint64_t nodes = 0;
    const SearchBudget* budget;

    void dfs(std::size_t idx, std::vector<std::int64_t>& chosen,
             std::vector<std::int64_t>& sums) {
        if (++nodes > budget->max_nodes)
            throw ResourceExceeded("max_quasi_independent: node budget exhausted");
        if (chosen.size() + (elems->size() - idx) <= best.size()) return;
        if (idx == elems->size()) {
            if (chosen.size() > best.size()) best = chosen;
            return;
        }
        std::int64_t x = (*elems)[idx];
        if (!has_gap_equal(sums, x) && sums.size() * 2 <= budget->max_table_entries) {
            auto merged = merge_shifted(sums, x);
            chosen.push_back(x);
            dfs(idx + 1, chosen, merged);
            chosen.pop_back();
        }
        dfs(idx + 1, chosen, sums);
    }
};

}  // namespace

IntegerSet max_quasi_independent(const IntegerSet& set, std::size_t exact_cap,
                                 const SearchBudget& budget) {
    if (set.size() > exact_cap)
        throw ResourceExceeded("max_quasi_independent: set larger than exact cap");
    if (set.size() <= 1) return set;
    MaxQiState st;
    st.elems = &set.elements();
    st.budget = &budget;
    std::vector<std::int64_t> chosen;
    std::vector<std::int64_t> sums{0};
    st.dfs(0, chosen, sums);
    return IntegerSet(std::move(st.best));
}

GreedyResult greedy_quasi_independent(const IntegerSet& set, const SearchBudget& budget) {
    GreedyResult res;
    std::vector<std::int64_t> kept;
    std::vector<std::int64_t> sums{0};
    const auto& v = set.elements();
    for (auto it = v.rbegin(); it != v.rend(); ++it) {
        if (sums.size() * 2 > budget.max_table_entries) {
            res.skipped_unknown = true;
            continue;
        }
        if (!has_gap_equal(sums, *it)) {
            sums = merge_shifted(sums, *it);
            kept.push_back(*it);
        }
    }
    res.kept = IntegerSet(std::move(kept));
    return res;
}

IntegerSet extract_sqrt_block(const IntegerSet& set, const BlockSchedule& blocks,
                              std::size_t verify_cap, const SearchBudget& budget) {
    if (set.empty()) return set;
    // boundaries covering the set; final block is open-ended when the rule
    // overflows before reaching max(A)
    std::vector<std::int64_t> bounds;
    for (std::int64_t n = blocks.first_index();; ++n) {
        std::int64_t M;
        try {
            M = blocks.boundary(n);
        } catch (const OverflowError&) {
            break;
        }
        bounds.push_back(M);
        if (M > set.max()) break;
    }

    std::vector<IntegerSet> traces;
    for (std::size_t i = 0; i + 1 <= bounds.size(); ++i) {
        std::int64_t lo = bounds[i];
        std::int64_t hi = (i + 1 < bounds.size()) ? bounds[i + 1] : kInt64Max;
        IntegerSet tr = set.slice(lo, hi);
        if (tr.empty()) continue;
        if (tr.size() <= verify_cap &&
            is_quasi_independent_checked(tr, budget, verify_cap) == Ternary::False)
            throw InvalidInput("extract_sqrt_block: a block trace is not quasi-independent");
        traces.push_back(std::move(tr));
    }

    double root = std::sqrt(static_cast<double>(set.size()));
    for (const IntegerSet& tr : traces)  // Case 1
        if (static_cast<double>(tr.size()) >= root - 1e-12) return tr;

    // Case 2: one representative from every other nonempty block
    std::vector<std::int64_t> reps;
    for (std::size_t i = 0; i < traces.size(); i += 2) reps.push_back(traces[i].min());
    IntegerSet out(std::move(reps));
    if (static_cast<double>(out.size()) < 0.5 * root - 1e-9)
        throw VerificationFailed("extract_sqrt_block: output below the sqrt/2 bound");
    return out;
}

PruneResult prune_block_max_relation(const IntegerSet& block, int l_max,
                                     std::size_t verify_cap, const SearchBudget& budget) {
    PruneResult res;
    if (block.empty()) {
        res.independent_verified = true;
        return res;
    }
    std::optional<Relation> longest;
    for (int s = static_cast<int>(block.size()); s >= 3 && !longest; --s)
        longest = find_relation(block, s, 1, budget);

    if (!longest) {
        res.independent = block;
        if (block.size() <= verify_cap) res.independent_verified = true;
        return res;
    }
    if (static_cast<int>(longest->length()) > l_max) res.precondition_ok = false;
    res.relation_support = IntegerSet(longest->support);
    res.signs = longest->signs;
    std::vector<std::int64_t> rest;
    for (std::int64_t x : block)
        if (!res.relation_support.contains(x)) rest.push_back(x);
    res.independent = IntegerSet(std::move(rest));
    if (res.independent.size() <= verify_cap)
        res.independent_verified =
            is_quasi_independent_checked(res.independent, budget, verify_cap) == Ternary::True;
    return res;
}

}  // namespace lacuna
