#include "fvg/adjacency.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace fvg {

namespace {

std::size_t chunkCount(const ExecPolicy& policy, std::size_t n) {
    if (!policy.isParallel() || policy.threads() == 1 || n < ExecPolicy::minParallelSize) {
        return 1;
    }
    return std::min<std::size_t>(static_cast<std::size_t>(policy.threads()) * 2, n / ExecPolicy::grainSize + 1);
}

std::size_t chunkBegin(std::size_t c, std::size_t nChunks, std::size_t n) {
    return n * c / nChunks;
}

template <class T>
std::vector<T> gather(std::span<const T> values, std::span<const Label> perm, const ExecPolicy& policy) {
    std::vector<T> out(perm.size());
    policy.forEach(perm.size(), [&](std::size_t i) { out[i] = values[static_cast<std::size_t>(perm[i])]; });
    return out;
}

} // namespace

std::vector<Label> stableArgsort(std::span<const Label> keys, const ExecPolicy& policy) {
    const std::size_t n = keys.size();
    if (n > static_cast<std::size_t>(std::numeric_limits<Label>::max())) {
        throw std::length_error("too many keys for 32-bit labels");
    }
    std::vector<Label> perm(n);
    std::iota(perm.begin(), perm.end(), Label{0});
    const auto byKey = [&](Label a, Label b) { return keys[static_cast<std::size_t>(a)] < keys[static_cast<std::size_t>(b)]; };

    const std::size_t nChunks = chunkCount(policy, n);
    if (nChunks == 1) {
        std::stable_sort(perm.begin(), perm.end(), byKey);
        return perm;
    }

    // Sort chunks independently, then merge neighbouring runs pairwise. Ties
    // are taken from the left run, so the result equals a sequential stable sort.
    std::vector<std::size_t> bounds(nChunks + 1);
    for (std::size_t c = 0; c <= nChunks; ++c) {
        bounds[c] = chunkBegin(c, nChunks, n);
    }
    policy.forTasks(nChunks, [&](std::size_t c) {
        std::stable_sort(perm.begin() + static_cast<std::ptrdiff_t>(bounds[c]),
                         perm.begin() + static_cast<std::ptrdiff_t>(bounds[c + 1]), byKey);
    });

    std::vector<Label> buffer(n);
    for (std::size_t width = 1; width < nChunks; width *= 2) {
        const std::size_t nPairs = (nChunks + 2 * width - 1) / (2 * width);
        policy.forTasks(nPairs, [&](std::size_t pi) {
            const std::size_t lo = bounds[pi * 2 * width];
            const std::size_t mid = bounds[std::min(pi * 2 * width + width, nChunks)];
            const std::size_t hi = bounds[std::min(pi * 2 * width + 2 * width, nChunks)];
            const auto at = [&](std::size_t i) { return perm.begin() + static_cast<std::ptrdiff_t>(i); };
            std::merge(at(lo), at(mid), at(mid), at(hi), buffer.begin() + static_cast<std::ptrdiff_t>(lo), byKey);
        });
        perm.swap(buffer);
    }
    return perm;
}

std::vector<Label> exclusiveScan(std::span<const Label> values, const ExecPolicy& policy) {
    const std::size_t n = values.size();
    std::vector<Label> out(n + 1);
    constexpr auto lo = static_cast<std::int64_t>(std::numeric_limits<Label>::min());
    constexpr auto hi = static_cast<std::int64_t>(std::numeric_limits<Label>::max());
    const auto checked = [](std::int64_t v) {
        if (v < lo || v > hi) {
            throw std::overflow_error("prefix sum " + std::to_string(v) + " overflows the label type");
        }
        return static_cast<Label>(v);
    };

    // Two passes over fixed chunks: chunk totals, then local scans with offsets.
    const std::size_t nChunks = chunkCount(policy, n);
    std::vector<std::int64_t> offset(nChunks + 1, 0);
    policy.forTasks(nChunks, [&](std::size_t c) {
        std::int64_t s = 0;
        for (std::size_t i = chunkBegin(c, nChunks, n); i < chunkBegin(c + 1, nChunks, n); ++i) {
            s += values[i];
        }
        offset[c + 1] = s;
    });
    std::partial_sum(offset.begin(), offset.end(), offset.begin());
    policy.forTasks(nChunks, [&](std::size_t c) {
        std::int64_t s = offset[c];
        const std::size_t b = chunkBegin(c, nChunks, n);
        if (c == 0) {
            out[0] = 0;
        }
        for (std::size_t i = b; i < chunkBegin(c + 1, nChunks, n); ++i) {
            s += values[i];
            out[i + 1] = checked(s);
        }
    });
    return out;
}

std::vector<Label> inclusiveScan(std::span<const Label> values, const ExecPolicy& policy) {
    std::vector<Label> ex = exclusiveScan(values, policy);
    ex.erase(ex.begin());
    return ex;
}

KeyedSums reduceByKey(std::span<const Label> sortedKeys, std::span<const Label> values, const ExecPolicy& policy) {
    if (sortedKeys.size() != values.size()) {
        throw std::invalid_argument("reduceByKey: keys and values differ in length");
    }
    const std::size_t n = sortedKeys.size();
    std::vector<Label> isHead(n);
    policy.forEach(n, [&](std::size_t i) { isHead[i] = (i == 0 || sortedKeys[i] != sortedKeys[i - 1]) ? 1 : 0; });
    const std::vector<Label> segment = exclusiveScan(isHead, policy);
    const auto nSegments = static_cast<std::size_t>(segment[n]);

    std::vector<Label> head(nSegments + 1);
    head[nSegments] = static_cast<Label>(n);
    policy.forEach(n, [&](std::size_t i) {
        if (isHead[i]) {
            head[static_cast<std::size_t>(segment[i])] = static_cast<Label>(i);
        }
    });

    KeyedSums out;
    out.keys.resize(nSegments);
    out.sums.resize(nSegments);
    policy.forEach(nSegments, [&](std::size_t s) {
        std::int64_t sum = 0;
        for (auto i = static_cast<std::size_t>(head[s]); i < static_cast<std::size_t>(head[s + 1]); ++i) {
            sum += values[i];
        }
        if (sum > std::numeric_limits<Label>::max() || sum < std::numeric_limits<Label>::min()) {
            throw std::overflow_error("reduceByKey: segment sum overflows the label type");
        }
        out.keys[s] = sortedKeys[static_cast<std::size_t>(head[s])];
        out.sums[s] = static_cast<Label>(sum);
    });
    return out;
}

CompressedLists buildCellFaceLists(std::span<const Label> keys, Label nCells, const ExecPolicy& policy) {
    if (nCells < 0) {
        throw std::invalid_argument("buildCellFaceLists: negative cell count");
    }
    for (std::size_t i = 0; i < keys.size(); ++i) {
        if (keys[i] < 0 || keys[i] >= nCells) {
            throw std::invalid_argument("buildCellFaceLists: key " + std::to_string(keys[i]) + " at position " +
                                        std::to_string(i) + " outside [0, " + std::to_string(nCells) + ")");
        }
    }
    const std::size_t nKeys = keys.size();
    const auto nc = static_cast<std::size_t>(nCells);

    CompressedLists out;
    out.items = stableArgsort(keys, policy);

    // Sorted keys with weight 1, followed by sentinels 0..nCells-1 with weight 0.
    std::vector<Label> combinedKeys(nKeys + nc);
    std::vector<Label> combinedWeights(nKeys + nc);
    policy.forEach(nKeys, [&](std::size_t i) {
        combinedKeys[i] = keys[static_cast<std::size_t>(out.items[i])];
        combinedWeights[i] = 1;
    });
    policy.forEach(nc, [&](std::size_t c) {
        combinedKeys[nKeys + c] = static_cast<Label>(c);
        combinedWeights[nKeys + c] = 0;
    });

    const std::vector<Label> order = stableArgsort(combinedKeys, policy);
    const std::vector<Label> sortedKeys = gather<Label>(combinedKeys, order, policy);
    const std::vector<Label> sortedWeights = gather<Label>(combinedWeights, order, policy);

    const KeyedSums counts = reduceByKey(sortedKeys, sortedWeights, policy);
    out.starts = exclusiveScan(counts.sums, policy);
    return out;
}

PatchCompression buildPatchCompression(std::span<const Label> faceCells, const ExecPolicy& policy) {
    const std::size_t n = faceCells.size();
    PatchCompression out;
    out.faceIndex = stableArgsort(faceCells, policy);
    if (n == 0) {
        return out;
    }
    const std::vector<Label> sorted = gather<Label>(faceCells, out.faceIndex, policy);

    // 1 where a run of equal cells starts, 0 on repeats.
    std::vector<Label> flags(n);
    policy.forEach(n, [&](std::size_t i) { flags[i] = (i == 0 || sorted[i] != sorted[i - 1]) ? 1 : 0; });
    const std::vector<Label> groupId = inclusiveScan(flags, policy);
    const auto nGroups = static_cast<std::size_t>(groupId[n - 1]);

    std::vector<Label> runStart(nGroups + 1);
    runStart[nGroups] = static_cast<Label>(n);
    policy.forEach(n, [&](std::size_t i) {
        if (flags[i]) {
            runStart[static_cast<std::size_t>(groupId[i] - 1)] = static_cast<Label>(i);
        }
    });
    std::vector<Label> counts(nGroups);
    policy.forEach(nGroups, [&](std::size_t g) { counts[g] = runStart[g + 1] - runStart[g]; });
    out.faceStart = exclusiveScan(counts, policy);
    return out;
}

bool CellFaceAdjacency::matches(const Mesh& mesh) const {
    const auto nCells = static_cast<std::size_t>(mesh.nCells);
    if (owner.nGroups() != nCells || neighbour.nGroups() != nCells ||
        owner.items.size() != static_cast<std::size_t>(mesh.nFaces()) ||
        neighbour.items.size() != static_cast<std::size_t>(mesh.nInternalFaces()) ||
        patches.size() != mesh.patches.size()) {
        return false;
    }
    for (std::size_t p = 0; p < patches.size(); ++p) {
        if (patches[p].faceIndex.size() != static_cast<std::size_t>(mesh.patches[p].nFaces)) {
            return false;
        }
    }
    return true;
}

CellFaceAdjacency buildAdjacency(const Mesh& mesh, const ExecPolicy& policy) {
    CellFaceAdjacency adj;
    adj.owner = buildCellFaceLists(mesh.owner, mesh.nCells, policy);
    adj.neighbour = buildCellFaceLists(mesh.neighbour, mesh.nCells, policy);
    adj.patches.reserve(mesh.patches.size());
    for (std::size_t p = 0; p < mesh.patches.size(); ++p) {
        adj.patches.push_back(buildPatchCompression(mesh.faceCells(p), policy));
    }
    return adj;
}

} // namespace fvg
