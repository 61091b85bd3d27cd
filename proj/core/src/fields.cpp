#include "fvg/fields.hpp"

#include <charconv>
#include <fstream>

#include "fvg/error.hpp"
#include "fvg/field_io.hpp"

namespace fvg {

void updateBoundaryValues(ScalarField& field, const Mesh& mesh, const ExecPolicy& policy) {
    for (std::size_t p = 0; p < mesh.patches.size(); ++p) {
        const BoundaryCondition& bc = mesh.patches[p].bc;
        auto& values = field.boundary[p];
        const auto cells = mesh.faceCells(p);
        if (bc.isFixedValue()) {
            policy.forEach(values.size(), [&](std::size_t i) { values[i] = bc.value; });
        } else {
            policy.forEach(values.size(),
                           [&](std::size_t i) { values[i] = field.internal[static_cast<std::size_t>(cells[i])]; });
        }
    }
}

namespace {

std::ofstream create(const std::filesystem::path& path) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    return out;
}

void put(std::ostream& os, double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    os.write(buf, res.ptr - buf);
}

void finish(std::ofstream& os, const std::filesystem::path& path) {
    os.flush();
    if (!os) {
        throw IoError("error writing " + path.string());
    }
}

} // namespace

void writeFieldCsv(const std::filesystem::path& path, std::span<const double> values) {
    auto os = create(path);
    for (std::size_t c = 0; c < values.size(); ++c) {
        os << c << ',';
        put(os, values[c]);
        os << '\n';
    }
    finish(os, path);
}

void writeFieldCsv(const std::filesystem::path& path, std::span<const Vec3> values) {
    auto os = create(path);
    for (std::size_t c = 0; c < values.size(); ++c) {
        os << c << ',';
        put(os, values[c].x);
        os << ',';
        put(os, values[c].y);
        os << ',';
        put(os, values[c].z);
        os << '\n';
    }
    finish(os, path);
}

void writeVtkStructuredPoints(const std::filesystem::path& path, const std::string& fieldName,
                              std::span<const double> values, Label nx, Label ny, Label nz, const Vec3& extent) {
    if (values.size() != static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny) * static_cast<std::size_t>(nz)) {
        throw std::invalid_argument("VTK writer: field length does not match the block dimensions");
    }
    auto os = create(path);
    os << "# vtk DataFile Version 3.0\n"
       << fieldName << "\nASCII\nDATASET STRUCTURED_POINTS\n"
       << "DIMENSIONS " << nx + 1 << ' ' << ny + 1 << ' ' << nz + 1 << '\n'
       << "ORIGIN 0 0 0\nSPACING ";
    put(os, extent.x / nx);
    os << ' ';
    put(os, extent.y / ny);
    os << ' ';
    put(os, extent.z / nz);
    os << "\nCELL_DATA " << values.size() << "\nSCALARS " << fieldName << " double 1\nLOOKUP_TABLE default\n";
    for (double v : values) {
        put(os, v);
        os << '\n';
    }
    finish(os, path);
}

} // namespace fvg
