#pragma once

// Finitely supported density matrices: Hermitian positive semidefinite
// Fourier kernels rho_{k,j}, their Heisenberg-von Neumann evolution and the
// space-time coefficients of the trace density t_rho(x) = sum rho_{k,j} e^{i(k-j).x}.

#include "torusflow/spectral_state.hpp"

#include <Eigen/Dense>

#include <map>
#include <set>
#include <utility>
#include <vector>

namespace torusflow {

inline constexpr std::size_t kMaxEigenSupport = 512;
inline constexpr double kPsdTolerance = 1e-10;

using KernelKey = std::pair<Frequency, Frequency>;

class DensityMatrix {
public:
    using Kernel = std::map<KernelKey, Complex>;

    DensityMatrix() = default;

    int dim() const noexcept { return dim_; }
    const Kernel& kernel() const& noexcept { return kernel_; }
    Kernel kernel() && { return std::move(kernel_); }
    double trace() const noexcept { return trace_; }

    Complex at(const Frequency& k, const Frequency& j) const {
        auto it = kernel_.find({k, j});
        return it == kernel_.end() ? Complex{} : it->second;
    }

    /// Sorted union of row and column frequencies with a nonzero entry.
    std::vector<Frequency> support() const {
        std::set<Frequency> s;
        for (const auto& [kj, v] : kernel_) {
            s.insert(kj.first);
            s.insert(kj.second);
        }
        return {s.begin(), s.end()};
    }

    /// Dense Hermitian matrix over support() (row/column order = support order).
    Eigen::MatrixXcd dense(const std::vector<Frequency>& basis) const {
        std::map<Frequency, Eigen::Index> pos;
        for (std::size_t i = 0; i < basis.size(); ++i) pos[basis[i]] = static_cast<Eigen::Index>(i);
        const auto n = static_cast<Eigen::Index>(basis.size());
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
        for (const auto& [kj, v] : kernel_) m(pos.at(kj.first), pos.at(kj.second)) = v;
        return m;
    }

    /// Smallest eigenvalue of the kernel restricted to its support.
    double min_eigenvalue() const {
        const auto basis = support();
        if (basis.empty()) return 0.0;
        if (basis.size() > kMaxEigenSupport) throw Error("support too large for dense eigensolve");
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dense(basis), Eigen::EigenvaluesOnly);
        return es.eigenvalues().minCoeff();
    }

    /// Builds from an explicit kernel; checks Hermitian symmetry and PSD.
    static DensityMatrix from_kernel(int d, Kernel kernel) {
        DensityMatrix rho = assemble(d, std::move(kernel));
        for (const auto& [kj, v] : rho.kernel_) {
            const auto w = rho.at(kj.second, kj.first);
            if (std::abs(w - std::conj(v)) > 1e-12 * std::max(1.0, std::abs(v))) {
                throw Error("kernel is not Hermitian");
            }
        }
        if (rho.trace_ < 0.0) throw Error("negative trace");
        if (rho.min_eigenvalue() < -kPsdTolerance * rho.trace_) throw Error("kernel is not positive semidefinite");
        return rho;
    }

    /// Builds without validation; the caller guarantees Hermitian PSD.
    static DensityMatrix assemble(int d, Kernel kernel) {
        if (d < 1 || d > kMaxDim) throw Error("density matrix dimension out of range");
        DensityMatrix rho;
        rho.dim_ = d;
        rho.kernel_ = std::move(kernel);
        std::erase_if(rho.kernel_, [](const auto& kv) { return kv.second == Complex{}; });
        for (const auto& [kj, v] : rho.kernel_) {
            if (kj.first.dim() != d || kj.second.dim() != d) throw Error("kernel dimension mismatch");
            if (kj.first == kj.second) rho.trace_ += v.real();
        }
        return rho;
    }

private:
    int dim_ = 0;
    Kernel kernel_;
    double trace_ = 0.0;
};

/// rho_{k,j} = a_k conj(a_j).
inline DensityMatrix dm_from_pure(const FourierState& u) {
    if (u.empty()) throw Error("density matrix of the zero state");
    DensityMatrix::Kernel kernel;
    for (const auto& [k, ak] : u.modes()) {
        for (const auto& [j, aj] : u.modes()) kernel.emplace(KernelKey{k, j}, ak * std::conj(aj));
    }
    return DensityMatrix::assemble(u.dim(), std::move(kernel));
}

/// sum_n w_n |u_n><u_n|, w_n > 0. The states need not be orthogonal.
inline DensityMatrix dm_from_mixture(const std::vector<std::pair<double, FourierState>>& terms) {
    if (terms.empty()) throw Error("empty mixture");
    const int d = terms.front().second.dim();
    DensityMatrix::Kernel kernel;
    for (const auto& [w, u] : terms) {
        if (!(w > 0.0)) throw Error("mixture weights must be positive");
        if (u.dim() != d) throw Error("mixture dimension mismatch");
        for (const auto& [k, ak] : u.modes()) {
            for (const auto& [j, aj] : u.modes()) kernel[KernelKey{k, j}] += w * ak * std::conj(aj);
        }
    }
    return DensityMatrix::assemble(d, std::move(kernel));
}

/// rho_{k,j} -> rho_{k,j} exp(-i (|k|^2 - |j|^2) t).
inline DensityMatrix dm_evolve(const DensityMatrix& rho, double t) {
    DensityMatrix::Kernel out;
    for (const auto& [kj, v] : rho.kernel()) {
        const double phase = -static_cast<double>(kj.first.norm2() - kj.second.norm2()) * t;
        out.emplace(kj, v * std::polar(1.0, phase));
    }
    return DensityMatrix::assemble(rho.dim(), std::move(out));
}

/// b_rho(l, s) = sum_{k - j = l, |j|^2 - |k|^2 = s} rho_{k,j}, read directly
/// off the kernel.
inline CoefficientTable trace_density_table(const DensityMatrix& rho) {
    CoefficientTable table(rho.dim());
    for (const auto& [kj, v] : rho.kernel()) {
        const auto& [k, j] = kj;
        table.add(k - j, j.norm2() - k.norm2(), v);
    }
    return table;
}

/// True iff every nonzero entry (k, j) has k and j in the submodule, which is
/// the Fourier form of invariance under translations along its orthogonal
/// complement.
inline bool submodule_support_check(const DensityMatrix& rho, const Submodule& lattice) {
    if (lattice.dim() != rho.dim()) throw Error("submodule dimension mismatch");
    std::map<Frequency, bool> memo;
    auto in = [&](const Frequency& f) {
        auto it = memo.find(f);
        if (it != memo.end()) return it->second;
        return memo[f] = lattice.contains(f);
    };
    for (const auto& [kj, v] : rho.kernel()) {
        if (!in(kj.first) || !in(kj.second)) return false;
    }
    return true;
}

struct EigenTerm {
    double weight = 0.0;
    FourierState state;
};

/// Orthonormal eigenbasis of the kernel over its support. Weights below
/// -1e-10 * trace are rejected; the remaining tiny negatives are clamped to 0.
inline std::vector<EigenTerm> dm_eigendecompose(const DensityMatrix& rho) {
    const auto basis = rho.support();
    if (basis.size() > kMaxEigenSupport) {
        throw Error("support of " + std::to_string(basis.size()) + " frequencies exceeds the eigensolver limit of " +
                    std::to_string(kMaxEigenSupport));
    }
    std::vector<EigenTerm> out;
    if (basis.empty()) return out;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.dense(basis));
    if (es.info() != Eigen::Success) throw Error("eigensolver did not converge");
    const auto& vals = es.eigenvalues();
    const auto& vecs = es.eigenvectors();
    // Descending weight order.
    for (Eigen::Index c = vals.size() - 1; c >= 0; --c) {
        double w = vals(c);
        if (w < -kPsdTolerance * rho.trace()) throw Error("kernel is not positive semidefinite");
        if (w < 0.0) w = 0.0;
        FourierState::Modes modes;
        for (Eigen::Index r = 0; r < vecs.rows(); ++r) modes.emplace(basis[static_cast<std::size_t>(r)], vecs(r, c));
        out.push_back({w, FourierState::from_modes(rho.dim(), std::move(modes))});
    }
    return out;
}

}  // namespace torusflow
