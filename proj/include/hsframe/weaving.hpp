#pragma once

// Weavings H_i = F_i (i in sigma), G_i (i not in sigma) of two compatible
// frames, plus exhaustive and sampled sweeps of their optimal bounds.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <iterator>
#include <optional>
#include <random>
#include <thread>
#include <utility>
#include <vector>

#include "hsframe/frame_analysis.hpp"

namespace hsframe {

inline constexpr std::size_t default_max_weaving_size = 20;

/// Index subset sigma of {0..size-1}, bit i set iff i is in sigma.
class WeavingSpec {
public:
    WeavingSpec(std::size_t size, std::uint64_t mask) : size_(size), mask_(mask)
    {
        if (size > 64) throw CapacityError("WeavingSpec: at most 64 indices are supported");
        if (size < 64 && (mask >> size) != 0)
            throw SpecError("WeavingSpec: mask has bits outside {0.." + std::to_string(size) +
                            "-1}");
    }

    static WeavingSpec from_indices(std::size_t size, const std::vector<std::size_t>& sigma)
    {
        std::uint64_t mask = 0;
        for (auto i : sigma) {
            if (i >= size)
                throw SpecError("WeavingSpec: index " + std::to_string(i) + " out of range for " +
                                std::to_string(size) + " elements");
            mask |= std::uint64_t{1} << i;
        }
        return {size, mask};
    }

    static WeavingSpec empty(std::size_t size) { return {size, 0}; }
    static WeavingSpec full(std::size_t size)
    {
        return {size, size == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << size) - 1};
    }

    std::size_t size() const noexcept { return size_; }
    std::uint64_t mask() const noexcept { return mask_; }
    bool contains(std::size_t i) const noexcept { return i < size_ && ((mask_ >> i) & 1U) != 0; }
    std::size_t cardinality() const noexcept { return static_cast<std::size_t>(std::popcount(mask_)); }

    WeavingSpec complement() const { return {size_, full(size_).mask() & ~mask_}; }

    std::vector<std::size_t> indices() const
    {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < size_; ++i)
            if (contains(i)) out.push_back(i);
        return out;
    }

    friend bool operator==(const WeavingSpec&, const WeavingSpec&) = default;

private:
    std::size_t size_;
    std::uint64_t mask_;
};

inline HSFrame weave(const HSFrame& f, const HSFrame& g, const WeavingSpec& spec)
{
    require_compatible(f, g, "weave");
    if (spec.size() != f.size())
        throw SpecError("weave: spec covers " + std::to_string(spec.size()) +
                        " indices, frames have " + std::to_string(f.size()));
    std::vector<HSMap> out;
    out.reserve(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) out.push_back(spec.contains(i) ? f[i] : g[i]);
    return HSFrame(std::move(out));
}

inline void require_enumerable(std::size_t size, std::size_t max_size)
{
    if (size > max_size || size >= 64)
        throw CapacityError("weaving enumeration of " + std::to_string(size) +
                            " indices exceeds the cap of " + std::to_string(max_size) +
                            " (2^" + std::to_string(max_size) +
                            " weavings); use sampling instead");
}

/// All 2^L weavings in increasing bitmask order, produced lazily.
class WeavingStream {
public:
    using value_type = std::pair<WeavingSpec, HSFrame>;

    class iterator {
    public:
        using iterator_category = std::input_iterator_tag;
        using value_type = WeavingStream::value_type;
        using difference_type = std::ptrdiff_t;

        iterator() = default;
        iterator(const WeavingStream* s, std::uint64_t mask) : stream_(s), mask_(mask) {}

        value_type operator*() const
        {
            WeavingSpec spec(stream_->f_->size(), mask_);
            return {spec, weave(*stream_->f_, *stream_->g_, spec)};
        }
        iterator& operator++()
        {
            ++mask_;
            return *this;
        }
        iterator operator++(int)
        {
            auto t = *this;
            ++mask_;
            return t;
        }
        bool operator==(const iterator& o) const { return mask_ == o.mask_; }

    private:
        const WeavingStream* stream_ = nullptr;
        std::uint64_t mask_ = 0;
    };

    WeavingStream(const HSFrame& f, const HSFrame& g, std::size_t max_size = default_max_weaving_size)
        : f_(&f), g_(&g)
    {
        require_compatible(f, g, "enumerate_weavings");
        require_enumerable(f.size(), max_size);
    }

    iterator begin() const { return {this, 0}; }
    iterator end() const { return {this, count()}; }
    std::uint64_t count() const { return std::uint64_t{1} << f_->size(); }

private:
    const HSFrame* f_;
    const HSFrame* g_;
};

inline WeavingStream enumerate_weavings(const HSFrame& f, const HSFrame& g,
                                        std::size_t max_size = default_max_weaving_size)
{
    return WeavingStream(f, g, max_size);
}

struct WeavingRecord {
    std::uint64_t mask;
    FrameBounds bounds;

    friend bool operator==(const WeavingRecord&, const WeavingRecord&) = default;
};

struct WeavingSweep {
    std::size_t size = 0;
    std::vector<WeavingRecord> records;  // ascending mask order
    double worst_lower = 0.0;
    double worst_upper = 0.0;
    bool exhaustive = true;
    std::optional<std::size_t> max_sigma;
};

struct SweepOptions {
    std::size_t max_size = default_max_weaving_size;
    /// Restrict to |sigma| <= max_sigma.
    std::optional<std::size_t> max_sigma;
    unsigned threads = 1;
};

namespace detail {

/// Precomputed per-index Gram matrices so the frame operator of any weaving
/// is a sum of L cached n x n blocks, accumulated in index order exactly as
/// frame_operator would.
class WeavingGrams {
public:
    WeavingGrams(const HSFrame& f, const HSFrame& g)
    {
        require_compatible(f, g, "weaving sweep");
        gf_.reserve(f.size());
        gg_.reserve(g.size());
        for (std::size_t i = 0; i < f.size(); ++i) {
            gf_.push_back(f[i].gram());
            gg_.push_back(g[i].gram());
        }
    }

    CMatrix frame_operator(std::uint64_t mask) const
    {
        const auto n = gf_.front().rows();
        CMatrix s = CMatrix::Zero(n, n);
        for (std::size_t i = 0; i < gf_.size(); ++i) s += ((mask >> i) & 1U) ? gf_[i] : gg_[i];
        return s;
    }

    FrameBounds bounds(std::uint64_t mask) const { return bounds_of_operator(frame_operator(mask)); }

private:
    std::vector<CMatrix> gf_;
    std::vector<CMatrix> gg_;
};

inline std::vector<WeavingRecord> evaluate_masks(const WeavingGrams& grams,
                                                 const std::vector<std::uint64_t>& masks,
                                                 unsigned threads)
{
    std::vector<WeavingRecord> records(masks.size());
    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k) records[k] = {masks[k], grams.bounds(masks[k])};
    };
    const std::size_t workers =
        std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(1, masks.size() / 64));
    if (workers <= 1) {
        work(0, masks.size());
        return records;
    }
    {
        std::vector<std::jthread> pool;
        const std::size_t chunk = (masks.size() + workers - 1) / workers;
        for (std::size_t w = 0; w < workers; ++w) {
            const std::size_t b = w * chunk;
            const std::size_t e = std::min(masks.size(), b + chunk);
            if (b < e) pool.emplace_back(work, b, e);
        }
    }
    return records;
}

inline WeavingSweep aggregate(std::size_t size, std::vector<WeavingRecord> records, bool exhaustive,
                              std::optional<std::size_t> max_sigma)
{
    WeavingSweep sweep;
    sweep.size = size;
    sweep.exhaustive = exhaustive;
    sweep.max_sigma = max_sigma;
    sweep.records = std::move(records);
    if (!sweep.records.empty()) {
        sweep.worst_lower = sweep.records.front().bounds.lower;
        sweep.worst_upper = sweep.records.front().bounds.upper;
        for (const auto& r : sweep.records) {
            sweep.worst_lower = std::min(sweep.worst_lower, r.bounds.lower);
            sweep.worst_upper = std::max(sweep.worst_upper, r.bounds.upper);
        }
    }
    return sweep;
}

}  // namespace detail

/// Masks of {0..size-1} in ascending order, optionally limited to popcount <= max_sigma.
inline std::vector<std::uint64_t> weaving_masks(std::size_t size, std::optional<std::size_t> max_sigma)
{
    std::vector<std::uint64_t> masks;
    const std::uint64_t count = std::uint64_t{1} << size;
    masks.reserve(static_cast<std::size_t>(count));
    for (std::uint64_t m = 0; m < count; ++m)
        if (!max_sigma || static_cast<std::size_t>(std::popcount(m)) <= *max_sigma) masks.push_back(m);
    return masks;
}

/// Exact worst-case bounds over every weaving (or every |sigma| <= max_sigma).
inline WeavingSweep worst_case_bounds(const HSFrame& f, const HSFrame& g, const SweepOptions& opts = {})
{
    require_compatible(f, g, "worst_case_bounds");
    require_enumerable(f.size(), opts.max_size);
    const detail::WeavingGrams grams(f, g);
    auto records = detail::evaluate_masks(grams, weaving_masks(f.size(), opts.max_sigma), opts.threads);
    return detail::aggregate(f.size(), std::move(records), true, opts.max_sigma);
}

/// Same as worst_case_bounds but over an explicit list of masks, evaluated
/// in the given order.
inline WeavingSweep sweep_masks(const HSFrame& f, const HSFrame& g, std::vector<std::uint64_t> masks,
                                unsigned threads = 1)
{
    const detail::WeavingGrams grams(f, g);
    for (auto m : masks) (void)WeavingSpec(f.size(), m);
    auto records = detail::evaluate_masks(grams, masks, threads);
    return detail::aggregate(f.size(), std::move(records), true, std::nullopt);
}

/// Non-exhaustive mode for large L: `count` uniformly drawn subsets from a
/// seeded generator. Records stay in draw order.
inline WeavingSweep sample_weavings(const HSFrame& f, const HSFrame& g, std::size_t count,
                                    std::uint64_t seed, unsigned threads = 1)
{
    require_compatible(f, g, "sample_weavings");
    if (f.size() > 64) throw CapacityError("sample_weavings: at most 64 indices");
    std::mt19937_64 rng(seed);
    const std::uint64_t keep = f.size() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << f.size()) - 1;
    std::vector<std::uint64_t> masks(count);
    for (auto& m : masks) m = rng() & keep;
    const detail::WeavingGrams grams(f, g);
    auto records = detail::evaluate_masks(grams, masks, threads);
    return detail::aggregate(f.size(), std::move(records), false, std::nullopt);
}

}  // namespace hsframe
