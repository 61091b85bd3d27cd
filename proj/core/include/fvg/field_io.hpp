#pragma once

#include <filesystem>
#include <span>
#include <string>

#include "fvg/types.hpp"

namespace fvg {

/// `cellIndex,value` per line, no header.
void writeFieldCsv(const std::filesystem::path& path, std::span<const double> values);

/// `cellIndex,x,y,z` per line, no header.
void writeFieldCsv(const std::filesystem::path& path, std::span<const Vec3> values);

/// Legacy VTK ASCII STRUCTURED_POINTS with cell data, for fields on a
/// generated nx*ny*nz block (cell index i + nx*(j + ny*k)).
void writeVtkStructuredPoints(const std::filesystem::path& path, const std::string& fieldName,
                              std::span<const double> values, Label nx, Label ny, Label nz, const Vec3& extent);

} // namespace fvg
