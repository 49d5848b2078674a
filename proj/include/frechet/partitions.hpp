#pragma once

#include <algorithm>
#include <vector>

#include "frechet/errors.hpp"

namespace frechet {

/// Partition of {0, ..., n-1} into disjoint nonempty parts, in canonical
/// order: indices increasing inside each part, parts sorted by maximum
/// element (max I_0 < max I_1 < ... < max I_{k-1}).
struct SetPartition {
    int ground_size = 0;
    std::vector<std::vector<int>> parts;

    friend bool operator==(const SetPartition&, const SetPartition&) = default;
};

inline bool is_canonical(const SetPartition& P) {
    std::vector<bool> seen(static_cast<std::size_t>(P.ground_size), false);
    int prev_max = -1;
    for (const auto& part : P.parts) {
        if (part.empty())
            return false;
        for (std::size_t i = 0; i < part.size(); ++i) {
            int x = part[i];
            if (x < 0 || x >= P.ground_size || seen[static_cast<std::size_t>(x)])
                return false;
            if (i > 0 && part[i - 1] >= x)
                return false;
            seen[static_cast<std::size_t>(x)] = true;
        }
        if (part.back() <= prev_max)
            return false;
        prev_max = part.back();
    }
    return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}

/// Restore canonical order from arbitrary part lists.
inline SetPartition canonicalized(int ground_size, std::vector<std::vector<int>> parts) {
    for (auto& part : parts)
        std::sort(part.begin(), part.end());
    std::sort(parts.begin(), parts.end(),
              [](const auto& a, const auto& b) { return a.back() < b.back(); });
    return SetPartition{ground_size, std::move(parts)};
}

/// All partitions of {0, ..., n-1}, each in canonical order, enumerated by
/// restricted-growth strings (deterministic lexicographic order).
inline std::vector<SetPartition> enumerate_partitions(int n) {
    if (n < 0)
        throw UsageError("partition ground size must be nonnegative");
    std::vector<SetPartition> out;
    if (n == 0) {
        out.push_back(SetPartition{0, {}});
        return out;
    }
    std::vector<int> rgs(static_cast<std::size_t>(n), 0);
    auto emit = [&] {
        int k = 1 + *std::max_element(rgs.begin(), rgs.end());
        std::vector<std::vector<int>> parts(static_cast<std::size_t>(k));
        for (int i = 0; i < n; ++i)
            parts[static_cast<std::size_t>(rgs[static_cast<std::size_t>(i)])].push_back(i);
        out.push_back(canonicalized(n, std::move(parts)));
    };
    // Recurse over positions; label at position i is bounded by 1 + running max.
    auto rec = [&](auto&& self, int i, int max_label) -> void {
        if (i == n) {
            emit();
            return;
        }
        for (int label = 0; label <= max_label + 1; ++label) {
            rgs[static_cast<std::size_t>(i)] = label;
            self(self, i + 1, std::max(max_label, label));
        }
    };
    rgs[0] = 0;
    rec(rec, 1, 0);
    return out;
}

/// The element-extension step: insert a new least element into P, either as
/// a fresh singleton or into each existing part, then relabel to the ground
/// set {0, ..., n}. Old index i becomes i+1 and the new element becomes 0,
/// so part maxima (hence canonical order) are preserved. Returns k+1
/// partitions; the union over all partitions of {0..n-1} hits every
/// partition of {0..n} exactly once.
inline std::vector<SetPartition> extend_partition(const SetPartition& P) {
    const int n = P.ground_size;
    std::vector<std::vector<int>> shifted = P.parts;
    for (auto& part : shifted)
        for (auto& x : part)
            ++x;

    std::vector<SetPartition> out;
    out.reserve(P.parts.size() + 1);
    {
        auto parts = shifted;
        parts.insert(parts.begin(), std::vector<int>{0});
        out.push_back(SetPartition{n + 1, std::move(parts)});
    }
    for (std::size_t m = 0; m < shifted.size(); ++m) {
        auto parts = shifted;
        parts[m].insert(parts[m].begin(), 0);
        out.push_back(SetPartition{n + 1, std::move(parts)});
    }
    return out;
}

} // namespace frechet
