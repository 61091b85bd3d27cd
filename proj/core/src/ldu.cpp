#include "fvg/ldu.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fvg {

LduAddressing LduAddressing::of(const Mesh& mesh, const CellFaceAdjacency& adj) {
    if (!adj.matches(mesh)) {
        throw std::invalid_argument("adjacency was built for a different mesh");
    }
    LduAddressing a;
    a.nCells = mesh.nCells;
    a.lower = std::span<const Label>(mesh.owner.data(), mesh.neighbour.size());
    a.upper = mesh.neighbour;
    a.ownerLists = &adj.owner;
    a.neighbourLists = &adj.neighbour;
    return a;
}

LduPattern::LduPattern(Label nCells, std::vector<Label> lower, std::vector<Label> upper, const ExecPolicy& policy)
    : nCells_(nCells), lower_(std::move(lower)), upper_(std::move(upper)) {
    if (lower_.size() != upper_.size()) {
        throw std::invalid_argument("LduPattern: lower and upper differ in length");
    }
    for (std::size_t f = 0; f < lower_.size(); ++f) {
        if (lower_[f] == upper_[f]) {
            throw std::invalid_argument("LduPattern: face " + std::to_string(f) + " couples a cell to itself");
        }
    }
    ownerLists_ = buildCellFaceLists(lower_, nCells_, policy);
    neighbourLists_ = buildCellFaceLists(upper_, nCells_, policy);
}

LduAddressing LduPattern::view() const {
    LduAddressing a;
    a.nCells = nCells_;
    a.lower = lower_;
    a.upper = upper_;
    a.ownerLists = &ownerLists_;
    a.neighbourLists = &neighbourLists_;
    return a;
}

namespace {

void checkLength(const LduSystem& sys, std::size_t n) {
    if (n != sys.nCells()) {
        throw std::invalid_argument("vector length " + std::to_string(n) + " does not match " +
                                    std::to_string(sys.nCells()) + " cells");
    }
}

} // namespace

std::vector<double> spmv(const LduSystem& sys, std::span<const double> x, const ExecPolicy& policy) {
    checkLength(sys, x.size());
    const LduAddressing& a = sys.addr;
    const auto nInternal = static_cast<Label>(a.nFaces());
    const Label* ownItems = a.ownerLists->items.data();
    const Label* ownStarts = a.ownerLists->starts.data();
    const Label* neiItems = a.neighbourLists->items.data();
    const Label* neiStarts = a.neighbourLists->starts.data();
    const double* off = sys.offDiag.data();

    std::vector<double> y(x.size());
    policy.forEach(x.size(), [&](std::size_t c) {
        double acc = sys.diag[c] * x[c];
        // Owner groups also hold boundary faces; those sort after the internal ones.
        for (Label i = ownStarts[c]; i < ownStarts[c + 1]; ++i) {
            const Label f = ownItems[i];
            if (f >= nInternal) {
                break;
            }
            acc += off[f] * x[static_cast<std::size_t>(a.upper[static_cast<std::size_t>(f)])];
        }
        for (Label i = neiStarts[c]; i < neiStarts[c + 1]; ++i) {
            const Label f = neiItems[i];
            acc += off[f] * x[static_cast<std::size_t>(a.lower[static_cast<std::size_t>(f)])];
        }
        y[c] = acc;
    });
    return y;
}

std::vector<double> spmvFaceLoop(const LduSystem& sys, std::span<const double> x) {
    checkLength(sys, x.size());
    std::vector<double> y(x.size());
    for (std::size_t c = 0; c < x.size(); ++c) {
        y[c] = sys.diag[c] * x[c];
    }
    for (std::size_t f = 0; f < sys.addr.nFaces(); ++f) {
        const auto l = static_cast<std::size_t>(sys.addr.lower[f]);
        const auto u = static_cast<std::size_t>(sys.addr.upper[f]);
        y[l] += sys.offDiag[f] * x[u];
        y[u] += sys.offDiag[f] * x[l];
    }
    return y;
}

std::vector<double> residual(const LduSystem& sys, std::span<const double> x, const ExecPolicy& policy) {
    std::vector<double> r = spmv(sys, x, policy);
    policy.forEach(r.size(), [&](std::size_t c) { r[c] = sys.rhs[c] - r[c]; });
    return r;
}

double dotProduct(std::span<const double> a, std::span<const double> b, const ExecPolicy& policy) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("dotProduct: length mismatch");
    }
    return orderedSum(policy, a.size(), [&](std::size_t i) { return a[i] * b[i]; });
}

double norm2(std::span<const double> a, const ExecPolicy& policy) {
    return std::sqrt(dotProduct(a, a, policy));
}

} // namespace fvg
