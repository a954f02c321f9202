// operators.hpp — Dense Hermitian operators, cached eigendecompositions, density states

#pragma once

#include <complex>
#include <memory>
#include <stdexcept>
#include <utility>

#include <Eigen/Dense>

#include "starkbat/fock_basis.hpp"

namespace starkbat {

// Eigendecomposition of a Hermitian operator: ascending eigenvalues and
// orthonormal eigenvectors (columns).
class Spectrum {
public:
    Spectrum(Eigen::VectorXd values, Eigen::MatrixXcd vectors)
        : values_(std::move(values)), vectors_(std::move(vectors)) {
        if (values_.size() != vectors_.cols() || vectors_.rows() != vectors_.cols())
            throw std::invalid_argument("Spectrum: inconsistent dimensions");
    }

    const Eigen::VectorXd& eigenvalues() const { return values_; }
    const Eigen::MatrixXcd& eigenvectors() const { return vectors_; }
    Eigen::Index dim() const { return values_.size(); }
    double e_min() const { return values_(0); }
    double e_max() const { return values_(values_.size() - 1); }
    double width() const { return e_max() - e_min(); }

    Eigen::MatrixXcd reconstruct() const {
        return vectors_ * values_.asDiagonal() * vectors_.adjoint();
    }

private:
    Eigen::VectorXd values_;
    Eigen::MatrixXcd vectors_;
};

// Dense complex Hermitian matrix, optionally tied to a FockBasis, with a
// lazily computed eigendecomposition cache. Immutable after construction;
// populate the cache before sharing across threads.
class HermitianOperator {
public:
    explicit HermitianOperator(Eigen::MatrixXcd m, FockBasis::Ptr basis = nullptr)
        : mat_(std::move(m)), basis_(std::move(basis)) {
        if (mat_.rows() != mat_.cols())
            throw std::invalid_argument("HermitianOperator: matrix must be square");
        if (basis_ && static_cast<std::size_t>(mat_.rows()) != basis_->dim())
            throw std::invalid_argument("HermitianOperator: dimension does not match basis");
        const double scale = std::max(1.0, mat_.cwiseAbs().maxCoeff());
        const double dev = (mat_ - mat_.adjoint()).cwiseAbs().maxCoeff();
        if (dev > 1e-12 * scale)
            throw std::invalid_argument("HermitianOperator: matrix is not Hermitian");
        mat_ = 0.5 * (mat_ + mat_.adjoint().eval());
    }

    const Eigen::MatrixXcd& matrix() const { return mat_; }
    const FockBasis::Ptr& basis() const { return basis_; }
    Eigen::Index dim() const { return mat_.rows(); }

    const Spectrum& spectrum() const {
        if (!spectrum_) {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(mat_);
            if (solver.info() != Eigen::Success)
                throw std::runtime_error("HermitianOperator: eigendecomposition failed");
            spectrum_ = std::make_shared<Spectrum>(solver.eigenvalues(), solver.eigenvectors());
        }
        return *spectrum_;
    }
    bool spectrum_cached() const { return spectrum_ != nullptr; }

private:
    Eigen::MatrixXcd mat_;
    FockBasis::Ptr basis_;
    mutable std::shared_ptr<const Spectrum> spectrum_;

    friend HermitianOperator normalize_spectrum(const HermitianOperator&);
};

inline const Spectrum& eigendecompose(const HermitianOperator& op) { return op.spectrum(); }

// Affine map H -> (2H - (E_max + E_min) I) / (E_max - E_min); the result has
// spectrum in [-1, 1] with both extremes attained and unchanged eigenvectors.
inline HermitianOperator normalize_spectrum(const HermitianOperator& op) {
    const Spectrum& s = op.spectrum();
    const double width = s.width();
    const double scale = std::max(1.0, std::max(std::abs(s.e_min()), std::abs(s.e_max())));
    if (width <= 1e-12 * scale)
        throw std::invalid_argument("normalize_spectrum: flat spectrum");
    const double shift = s.e_max() + s.e_min();
    Eigen::MatrixXcd m = (2.0 * op.matrix()
                          - shift * Eigen::MatrixXcd::Identity(op.dim(), op.dim())) / width;
    HermitianOperator out(std::move(m), op.basis());
    Eigen::VectorXd mapped = (2.0 * s.eigenvalues().array() - shift) / width;
    out.spectrum_ = std::make_shared<Spectrum>(std::move(mapped), s.eigenvectors());
    return out;
}

// Density matrix over a FockBasis. Pure states are stored as rank-1 densities.
class DensityState {
public:
    // Validating constructor: Hermitian, unit trace, nonnegative spectrum
    // within the given tolerances.
    static DensityState from_matrix(Eigen::MatrixXcd rho, FockBasis::Ptr basis = nullptr,
                                    double trace_tol = 1e-10, double eigen_tol = 1e-10) {
        if (rho.rows() != rho.cols())
            throw std::invalid_argument("DensityState: matrix must be square");
        if (basis && static_cast<std::size_t>(rho.rows()) != basis->dim())
            throw std::invalid_argument("DensityState: dimension does not match basis");
        const double scale = std::max(1.0, rho.cwiseAbs().maxCoeff());
        if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale)
            throw std::invalid_argument("DensityState: matrix is not Hermitian");
        rho = 0.5 * (rho + rho.adjoint().eval());
        if (std::abs(rho.trace().real() - 1.0) > trace_tol || std::abs(rho.trace().imag()) > trace_tol)
            throw std::invalid_argument("DensityState: trace is not 1");
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho);
        if (solver.eigenvalues().minCoeff() < -eigen_tol)
            throw std::invalid_argument("DensityState: negative eigenvalue beyond tolerance");
        return DensityState(std::move(rho), std::move(basis));
    }

    static DensityState pure(const Eigen::VectorXcd& amplitudes, FockBasis::Ptr basis = nullptr) {
        const double norm = amplitudes.norm();
        if (norm <= 0.0) throw std::invalid_argument("DensityState: zero state vector");
        Eigen::VectorXcd psi = amplitudes / norm;
        return DensityState(psi * psi.adjoint(), std::move(basis));
    }

    // Unvalidated wrap for outputs of trusted transformations (unitary
    // conjugation, spectral construction, integrator steps).
    static DensityState trusted(Eigen::MatrixXcd rho, FockBasis::Ptr basis = nullptr) {
        return DensityState(std::move(rho), std::move(basis));
    }

    const Eigen::MatrixXcd& matrix() const { return mat_; }
    const FockBasis::Ptr& basis() const { return basis_; }
    Eigen::Index dim() const { return mat_.rows(); }

    // Tr[rho^2]; equals sum |rho_ij|^2 for Hermitian rho.
    double purity() const { return mat_.squaredNorm(); }

private:
    DensityState(Eigen::MatrixXcd m, FockBasis::Ptr basis)
        : mat_(std::move(m)), basis_(std::move(basis)) {}

    Eigen::MatrixXcd mat_;
    FockBasis::Ptr basis_;
};

// Diagonal occupation operator at a 1-based site; for fermions this is the
// total n_up + n_down.
inline HermitianOperator number_operator(const FockBasis::Ptr& basis, int site) {
    const auto d = static_cast<Eigen::Index>(basis->dim());
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
    for (Eigen::Index k = 0; k < d; ++k)
        m(k, k) = basis->occupation(static_cast<std::size_t>(k), site);
    return HermitianOperator(std::move(m), basis);
}

inline HermitianOperator number_operator(const FockBasis::Ptr& basis, int site, Spin spin) {
    const auto d = static_cast<Eigen::Index>(basis->dim());
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
    for (Eigen::Index k = 0; k < d; ++k)
        m(k, k) = basis->occupation(static_cast<std::size_t>(k), site, spin);
    return HermitianOperator(std::move(m), basis);
}

}  // namespace starkbat
