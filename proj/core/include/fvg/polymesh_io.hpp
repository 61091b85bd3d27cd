#pragma once

#include <filesystem>

#include "fvg/mesh.hpp"

namespace fvg {

/// Read the ASCII files points, faces, owner, neighbour and boundary from a
/// polyMesh directory. `//` and `/* */` comments and a leading FoamFile
/// dictionary are skipped. nCells is 1 + the largest owner/neighbour label.
/// Patch types "patch" and "wall" are accepted; both load as zeroGradient.
///
/// Throws ParseError (with line number) on malformed input, ValidationError
/// when the parsed mesh breaks a mesh invariant, IoError if a file is missing.
Mesh readPolyMesh(const std::filesystem::path& dir);

/// Write the five polyMesh files, creating `dir` if needed. Points are written
/// in shortest round-trip form so that reading back reproduces the mesh
/// exactly. Throws IoError.
void writePolyMesh(const Mesh& mesh, const std::filesystem::path& dir);

} // namespace fvg
