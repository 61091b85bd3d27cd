#pragma once

#include <algorithm>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fvg/exec.hpp"
#include "fvg/mesh.hpp"
#include "fvg/types.hpp"

namespace fvg {

/// `len` copies of `value`.
template <class T>
std::vector<T> fillField(std::size_t len, const T& value, const ExecPolicy& policy = {}) {
    std::vector<T> out(len);
    policy.forRange(len, [&](std::size_t b, std::size_t e) { std::fill(out.begin() + b, out.begin() + e, value); });
    return out;
}

namespace detail {

inline void checkSameSize(std::size_t a, std::size_t b, const char* op) {
    if (a != b) {
        throw std::invalid_argument(std::string("Check fields have same size: ") + op + " on lengths " +
                                    std::to_string(a) + " and " + std::to_string(b));
    }
}

} // namespace detail

/// f1[i] /= f3[i]. Throws std::invalid_argument on a length mismatch and
/// std::domain_error naming the first zero divisor; f1 is untouched then.
template <class T>
void zipDivideInPlace(std::span<T> f1, std::span<const double> f3, const ExecPolicy& policy = {}) {
    detail::checkSameSize(f1.size(), f3.size(), "f1 /= f3");
    const auto zero = std::find(f3.begin(), f3.end(), 0.0);
    if (zero != f3.end()) {
        throw std::domain_error("division by zero at index " + std::to_string(zero - f3.begin()));
    }
    policy.forEach(f1.size(), [&](std::size_t i) { f1[i] /= f3[i]; });
}

template <class T>
void zipDivideInPlace(std::vector<T>& f1, const std::vector<double>& f3, const ExecPolicy& policy = {}) {
    zipDivideInPlace(std::span<T>(f1), std::span<const double>(f3), policy);
}

/// out[i] = op(f2[i], f3[i]).
template <class T, class Op>
std::vector<T> zipBinary(std::span<const T> f2, std::span<const T> f3, Op op, const ExecPolicy& policy = {}) {
    detail::checkSameSize(f2.size(), f3.size(), "f2 op f3");
    std::vector<T> out(f2.size());
    policy.forEach(out.size(), [&](std::size_t i) { out[i] = op(f2[i], f3[i]); });
    return out;
}

template <class T, class Op>
std::vector<T> zipBinary(const std::vector<T>& f2, const std::vector<T>& f3, Op op, const ExecPolicy& policy = {}) {
    return zipBinary(std::span<const T>(f2), std::span<const T>(f3), op, policy);
}

/// Cell-centred field with one value per boundary face, stored per patch.
template <class T>
struct CellField {
    std::vector<T> internal;
    std::vector<std::vector<T>> boundary;

    CellField() = default;

    CellField(const Mesh& mesh, const T& value, const ExecPolicy& policy = {})
        : internal(fillField(static_cast<std::size_t>(mesh.nCells), value, policy)) {
        boundary.reserve(mesh.patches.size());
        for (const Patch& p : mesh.patches) {
            boundary.push_back(fillField(static_cast<std::size_t>(p.nFaces), value, policy));
        }
    }

    bool matches(const Mesh& mesh) const {
        if (internal.size() != static_cast<std::size_t>(mesh.nCells) || boundary.size() != mesh.patches.size()) {
            return false;
        }
        for (std::size_t p = 0; p < boundary.size(); ++p) {
            if (boundary[p].size() != static_cast<std::size_t>(mesh.patches[p].nFaces)) {
                return false;
            }
        }
        return true;
    }

    friend bool operator==(const CellField&, const CellField&) = default;
};

/// Face-centred field: internal faces plus per-patch boundary faces.
template <class T>
struct SurfaceField {
    std::vector<T> internal;
    std::vector<std::vector<T>> boundary;

    SurfaceField() = default;

    SurfaceField(const Mesh& mesh, const T& value, const ExecPolicy& policy = {})
        : internal(fillField(static_cast<std::size_t>(mesh.nInternalFaces()), value, policy)) {
        boundary.reserve(mesh.patches.size());
        for (const Patch& p : mesh.patches) {
            boundary.push_back(fillField(static_cast<std::size_t>(p.nFaces), value, policy));
        }
    }

    /// Value on global face `f`.
    const T& at(const Mesh& mesh, Label f) const {
        if (f < mesh.nInternalFaces()) {
            return internal[static_cast<std::size_t>(f)];
        }
        for (std::size_t p = 0; p < mesh.patches.size(); ++p) {
            if (f < mesh.patches[p].endFace()) {
                return boundary[p][static_cast<std::size_t>(f - mesh.patches[p].startFace)];
            }
        }
        throw std::out_of_range("face label " + std::to_string(f) + " beyond the mesh");
    }

    friend bool operator==(const SurfaceField&, const SurfaceField&) = default;
};

using ScalarField = CellField<double>;
using VectorField = CellField<Vec3>;
using SurfaceScalarField = SurfaceField<double>;
using SurfaceVectorField = SurfaceField<Vec3>;

/// Boundary values implied by the patch conditions: the prescribed value on
/// fixedValue patches, the adjacent cell value on zeroGradient patches.
void updateBoundaryValues(ScalarField& field, const Mesh& mesh, const ExecPolicy& policy = {});

} // namespace fvg
