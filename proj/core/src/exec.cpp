#include "fvg/exec.hpp"

#include <memory>
#include <mutex>
#include <stdexcept>

#include <tbb/global_control.h>

namespace fvg {

namespace {

// TBB caps worker threads at the hardware concurrency by default; raise the cap
// so a requested worker count is honoured even when it oversubscribes.
void ensureWorkerLimit(int threads) {
    static std::mutex mutex;
    static std::unique_ptr<tbb::global_control> control;
    std::lock_guard lock(mutex);
    const auto current = tbb::global_control::active_value(tbb::global_control::max_allowed_parallelism);
    if (static_cast<std::size_t>(threads) > current) {
        control.reset();
        control = std::make_unique<tbb::global_control>(tbb::global_control::max_allowed_parallelism,
                                                        static_cast<std::size_t>(threads));
    }
}

} // namespace

ExecPolicy ExecPolicy::par(int threads) {
    if (threads < 1) {
        throw std::invalid_argument("thread count must be >= 1, got " + std::to_string(threads));
    }
    ensureWorkerLimit(threads);
    ExecPolicy p;
    p.kind_ = Kind::parallel;
    p.threads_ = threads;
    p.arena_ = std::make_shared<tbb::task_arena>(threads);
    return p;
}

std::string ExecPolicy::name() const {
    return isParallel() ? "par" : "seq";
}

ExecPolicy makePolicy(const std::string& kind, int threads) {
    if (kind == "seq") {
        return ExecPolicy::seq();
    }
    if (kind == "par") {
        return ExecPolicy::par(threads);
    }
    throw std::invalid_argument("unknown execution policy '" + kind + "' (expected seq or par)");
}

} // namespace fvg
