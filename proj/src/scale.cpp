#include "sscor/scale.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "sscor/numeric.hpp"

namespace sscor {

namespace {

void require_finite(std::span<const double> x, const char* who) {
    for (double v : x)
        if (!std::isfinite(v)) throw InvalidInputError(std::string(who) + ": non-finite entry");
}

/// Weighted "high median" of (value, weight) pairs: the smallest value whose
/// cumulative weight reaches more than half of the total.
double weighted_high_median(std::vector<std::pair<double, std::int64_t>>& items) {
    std::sort(items.begin(), items.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::int64_t total = 0;
    for (const auto& it : items) total += it.second;
    std::int64_t run = 0;
    for (const auto& it : items) {
        run += it.second;
        if (2 * run > total) return it.first;
    }
    return items.back().first;
}

/// k-th smallest (1-based) of the multiset { y[i] - y[l] : 0 <= l < i < n }
/// for ascending y. Selection over the implicit matrix A[i][j] = y[i] -
/// y[n-1-j], which is nondecreasing in both indices; candidate pivots are
/// weighted medians of row medians and rows are narrowed by rank counting
/// (Johnson–Mizoguchi / Croux–Rousseeuw scheme).
double kth_pairwise_diff(const std::vector<double>& y, std::int64_t k) {
    const std::int64_t n = static_cast<std::int64_t>(y.size());
    // Active window per row i: columns [lo[i], hi[i]], 0-based, initially the
    // strictly-positive part l = n-1-j < i, i.e. j >= n-i.
    std::vector<std::int64_t> lo(n), hi(n);
    std::int64_t active = 0;
    for (std::int64_t i = 0; i < n; ++i) {
        lo[i] = n - i;
        hi[i] = n - 1;
        active += i;
    }

    // Rank of the target inside the full n x n matrix: the columns j < n-i
    // excluded above hold exactly n(n+1)/2 nonpositive differences.
    const std::int64_t knew = k + n * (n + 1) / 2;

    auto entry = [&](std::int64_t i, std::int64_t j) { return y[i] - y[n - 1 - j]; };

    std::vector<std::pair<double, std::int64_t>> meds;
    std::vector<std::int64_t> below(n), at_most(n);

    while (active > std::max<std::int64_t>(n, 64)) {
        meds.clear();
        for (std::int64_t i = 0; i < n; ++i) {
            if (lo[i] > hi[i]) continue;
            const std::int64_t mid = lo[i] + (hi[i] - lo[i]) / 2;
            meds.emplace_back(entry(i, mid), hi[i] - lo[i] + 1);
        }
        const double trial = weighted_high_median(meds);

        // Per-row ranks of `trial` over the *full* matrix, computed with the
        // exact same floating-point differences the selection returns, so the
        // counts can never disagree with the candidate values. Both boundary
        // indices are monotone across rows, so each sweep is O(n).
        {
            std::int64_t j = 0;  // below[i] = #{j : entry(i, j) < trial}
            for (std::int64_t i = n - 1; i >= 0; --i) {
                while (j < n && entry(i, j) < trial) ++j;
                below[i] = j;
            }
        }
        {
            std::int64_t j = n;  // at_most[i] = #{j : entry(i, j) <= trial}
            for (std::int64_t i = 0; i < n; ++i) {
                while (j > 0 && entry(i, j - 1) > trial) --j;
                at_most[i] = j;
            }
        }
        std::int64_t sum_below = 0, sum_at_most = 0;
        for (std::int64_t i = 0; i < n; ++i) {
            sum_below += below[i];
            sum_at_most += at_most[i];
        }

        if (knew <= sum_below) {
            // Answer < trial: per row, entries at j >= below[i] are >= trial.
            for (std::int64_t i = 0; i < n; ++i)
                hi[i] = std::min(hi[i], below[i] - 1);
        } else if (knew > sum_at_most) {
            // Answer > trial: per row, entries at j < at_most[i] are <= trial.
            for (std::int64_t i = 0; i < n; ++i)
                lo[i] = std::max(lo[i], at_most[i]);
        } else {
            return trial;  // rank knew falls inside the tie block at `trial`
        }
        active = 0;
        for (std::int64_t i = 0; i < n; ++i)
            if (lo[i] <= hi[i]) active += hi[i] - lo[i] + 1;
    }

    // Every entry left of a window is strictly below the answer, every entry
    // right of one strictly above, so the answer sits at rank knew - sum(lo)
    // among the remaining candidates.
    std::vector<double> rest;
    rest.reserve(static_cast<std::size_t>(active));
    std::int64_t kk = knew;
    for (std::int64_t i = 0; i < n; ++i) {
        kk -= lo[i];
        for (std::int64_t j = lo[i]; j <= hi[i]; ++j) rest.push_back(entry(i, j));
    }
    assert(kk >= 1 && kk <= static_cast<std::int64_t>(rest.size()));
    std::nth_element(rest.begin(), rest.begin() + (kk - 1), rest.end());
    return rest[kk - 1];
}

}  // namespace

double sd(std::span<const double> x) {
    if (x.size() < 2) throw InvalidInputError("sd: need at least two observations");
    require_finite(x, "sd");
    KahanSum sum;
    for (double v : x) sum.add(v);
    const double mean = sum.value() / static_cast<double>(x.size());
    KahanSum ss;
    for (double v : x) {
        const double d = v - mean;
        ss.add(d * d);
    }
    return std::sqrt(ss.value() / static_cast<double>(x.size() - 1));
}

double mad(std::span<const double> x, bool consistency) {
    if (x.empty()) throw InvalidInputError("mad: empty sample");
    require_finite(x, "mad");
    std::vector<double> v(x.begin(), x.end());
    const double med = median_inplace(v);
    for (double& e : v) e = std::fabs(e - med);
    const double raw = median_inplace(v);
    return consistency ? kMadConsistency * raw : raw;
}

double qn(std::span<const double> x, bool consistency) {
    const std::size_t n = x.size();
    if (n < 2) throw InvalidInputError("qn: need at least two observations");
    require_finite(x, "qn");
    std::vector<double> y(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    const std::int64_t h = static_cast<std::int64_t>(n) / 2 + 1;
    const std::int64_t k = h * (h - 1) / 2;
    const double raw = kth_pairwise_diff(y, k);
    return consistency ? kQnConsistency * raw : raw;
}

double qn_naive(std::span<const double> x, bool consistency) {
    const std::size_t n = x.size();
    if (n < 2) throw InvalidInputError("qn_naive: need at least two observations");
    require_finite(x, "qn_naive");
    std::vector<double> diffs;
    diffs.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) diffs.push_back(std::fabs(x[i] - x[j]));
    const std::size_t h = n / 2 + 1;
    const std::size_t k = h * (h - 1) / 2;
    std::nth_element(diffs.begin(), diffs.begin() + (k - 1), diffs.end());
    const double raw = diffs[k - 1];
    return consistency ? kQnConsistency * raw : raw;
}

double estimate_scale(std::span<const double> x, ScaleMethod method) {
    switch (method.kind) {
        case ScaleKind::sd: return sd(x);
        case ScaleKind::mad: return mad(x, method.consistency);
        case ScaleKind::qn: return qn(x, method.consistency);
        case ScaleKind::qn_naive: return qn_naive(x, method.consistency);
    }
    throw InvalidInputError("estimate_scale: unknown method");
}

}  // namespace sscor
