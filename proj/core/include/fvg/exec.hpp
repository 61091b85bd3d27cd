#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include <tbb/blocked_range.h>
#include <tbb/parallel_for.h>
#include <tbb/task_arena.h>

namespace fvg {

/// Sequential or multi-threaded evaluation of a kernel. Every kernel in the
/// library produces bitwise identical results under either kind and any
/// thread count.
class ExecPolicy {
public:
    enum class Kind { sequential, parallel };

    /// Sequential policy.
    ExecPolicy() = default;

    static ExecPolicy seq() { return {}; }
    /// Parallel policy with a private worker arena of `threads` workers.
    static ExecPolicy par(int threads);

    Kind kind() const noexcept { return kind_; }
    bool isParallel() const noexcept { return kind_ == Kind::parallel; }
    int threads() const noexcept { return threads_; }

    /// "seq" or "par"
    std::string name() const;

    /// Run `fn(begin, end)` over disjoint chunks covering [0, n).
    template <class F>
    void forRange(std::size_t n, F&& fn) const {
        if (n == 0) {
            return;
        }
        if (!isParallel() || threads_ == 1 || n < minParallelSize) {
            fn(std::size_t{0}, n);
            return;
        }
        arena_->execute([&] {
            tbb::parallel_for(tbb::blocked_range<std::size_t>(0, n, grainSize),
                              [&](const tbb::blocked_range<std::size_t>& r) { fn(r.begin(), r.end()); });
        });
    }

    /// Run `fn(i)` for every i in [0, n).
    template <class F>
    void forEach(std::size_t n, F&& fn) const {
        forRange(n, [&](std::size_t b, std::size_t e) {
            for (std::size_t i = b; i < e; ++i) {
                fn(i);
            }
        });
    }

    /// Run the tasks concurrently (or in order when sequential).
    template <class F>
    void forTasks(std::size_t nTasks, F&& fn) const {
        if (!isParallel() || threads_ == 1) {
            for (std::size_t t = 0; t < nTasks; ++t) {
                fn(t);
            }
            return;
        }
        arena_->execute([&] {
            tbb::parallel_for(std::size_t{0}, nTasks, [&](std::size_t t) { fn(t); });
        });
    }

    static constexpr std::size_t grainSize = 512;
    static constexpr std::size_t minParallelSize = 1024;

private:
    Kind kind_ = Kind::sequential;
    int threads_ = 1;
    std::shared_ptr<tbb::task_arena> arena_;
};

/// Parse "seq" / "par" with a thread count; throws std::invalid_argument.
ExecPolicy makePolicy(const std::string& kind, int threads);

/// Block length of the fixed-order reduction tree.
inline constexpr std::size_t kReductionBlock = 1024;

/// Sum of `term(i)` over [0, n) with a fixed evaluation order: contiguous
/// blocks of kReductionBlock terms are summed left to right, then block sums
/// are combined by a balanced pairwise tree. The order depends on n only, so
/// the result is identical for every policy and thread count.
template <class F>
double orderedSum(const ExecPolicy& policy, std::size_t n, F&& term) {
    const std::size_t nBlocks = (n + kReductionBlock - 1) / kReductionBlock;
    if (nBlocks == 0) {
        return 0.0;
    }
    std::vector<double> partial(nBlocks);
    auto leaf = [&](std::size_t b) {
        const std::size_t lo = b * kReductionBlock;
        const std::size_t hi = lo + kReductionBlock < n ? lo + kReductionBlock : n;
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) {
            s += term(i);
        }
        partial[b] = s;
    };
    if (nBlocks == 1) {
        leaf(0);
    } else {
        policy.forTasks(nBlocks, leaf);
    }
    // Pairwise combine: stride doubling keeps the tree shape fixed.
    for (std::size_t stride = 1; stride < nBlocks; stride *= 2) {
        for (std::size_t i = 0; i + stride < nBlocks; i += 2 * stride) {
            partial[i] += partial[i + stride];
        }
    }
    return partial[0];
}

} // namespace fvg
