#pragma once

#include <span>
#include <vector>

#include "fvg/exec.hpp"
#include "fvg/mesh.hpp"
#include "fvg/types.hpp"

namespace fvg {

/// A list of lists in compressed form: group g holds
/// items[starts[g] .. starts[g+1]). Built from a key per item, with items
/// inside a group in ascending order.
struct CompressedLists {
    std::vector<Label> items;
    std::vector<Label> starts{0};

    std::size_t nGroups() const noexcept { return starts.size() - 1; }

    std::span<const Label> group(std::size_t g) const {
        return {items.data() + starts[g], static_cast<std::size_t>(starts[g + 1] - starts[g])};
    }

    friend bool operator==(const CompressedLists&, const CompressedLists&) = default;
};

/// Boundary faces of one patch grouped by their adjacent cell. faceIndex
/// holds local patch-face indices; faceStart delimits runs that share a cell.
struct PatchCompression {
    std::vector<Label> faceIndex;
    std::vector<Label> faceStart{0};

    std::size_t nGroups() const noexcept { return faceStart.size() - 1; }

    friend bool operator==(const PatchCompression&, const PatchCompression&) = default;
};

/// Cell -> face lists for the gather kernels.
struct CellFaceAdjacency {
    CompressedLists owner;                 ///< all faces grouped by owner
    CompressedLists neighbour;             ///< internal faces grouped by neighbour
    std::vector<PatchCompression> patches; ///< one per mesh patch

    /// True when the sizes are consistent with `mesh`.
    bool matches(const Mesh& mesh) const;
};

/// Permutation p with keys[p[i]] <= keys[p[i+1]]; equal keys keep their
/// input order.
std::vector<Label> stableArgsort(std::span<const Label> keys, const ExecPolicy& policy = {});

/// out[0] = 0, out[i+1] = out[i] + values[i] (length n+1). Throws
/// std::overflow_error if a prefix does not fit in a Label.
std::vector<Label> exclusiveScan(std::span<const Label> values, const ExecPolicy& policy = {});

/// out[i] = values[0] + ... + values[i].
std::vector<Label> inclusiveScan(std::span<const Label> values, const ExecPolicy& policy = {});

struct KeyedSums {
    std::vector<Label> keys;
    std::vector<Label> sums;
};

/// Segmented sum of `values` over runs of equal `sortedKeys`.
KeyedSums reduceByKey(std::span<const Label> sortedKeys, std::span<const Label> values,
                      const ExecPolicy& policy = {});

/// Groups item indices 0..keys.size()-1 by key. Every group 0..nCells-1 is
/// present, empty groups included. Throws std::invalid_argument if a key is
/// outside [0, nCells).
///
/// items is the stable argsort of keys. The group sizes come from the sorted
/// keys extended with one zero-weight sentinel per cell: the combined
/// (key, weight) pairs are sorted by key and reduced by key, which yields a
/// count for every cell, and an exclusive scan of the counts gives starts.
CompressedLists buildCellFaceLists(std::span<const Label> keys, Label nCells, const ExecPolicy& policy = {});

/// Groups the faces of a patch by adjacent cell. faceIndex is the stable
/// argsort of faceCells; faceStart comes from flagging the first face of each
/// run, an inclusive scan of the flags (group ids), the run lengths, and an
/// exclusive scan of those.
PatchCompression buildPatchCompression(std::span<const Label> faceCells, const ExecPolicy& policy = {});

/// Owner lists over all faces, neighbour lists over internal faces and one
/// patch compression per patch.
CellFaceAdjacency buildAdjacency(const Mesh& mesh, const ExecPolicy& policy = {});

} // namespace fvg
