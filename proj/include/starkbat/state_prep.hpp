// state_prep.hpp — Ground, thermal, and maximally charged initial states

#pragma once

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "starkbat/operators.hpp"

namespace starkbat {

namespace detail {

// Maximally mixed state over the eigenspace within `tol` of the extremal
// eigenvalue (lowest for `bottom`, highest otherwise).
inline DensityState extremal_state(const HermitianOperator& h, bool bottom,
                                   double degeneracy_tol) {
    const Spectrum& s = h.spectrum();
    const Eigen::Index d = s.dim();
    const double tol = std::max(degeneracy_tol * s.width(), 0.0);
    Eigen::Index first = 0, last = d - 1;
    if (bottom) {
        const double e0 = s.e_min();
        while (last > 0 && s.eigenvalues()(last) > e0 + tol) --last;
        first = 0;
    } else {
        const double e1 = s.e_max();
        while (first < d - 1 && s.eigenvalues()(first) < e1 - tol) ++first;
        last = d - 1;
    }
    const Eigen::Index m = last - first + 1;
    const auto block = s.eigenvectors().middleCols(first, m);
    Eigen::MatrixXcd rho = block * block.adjoint() / double(m);
    return DensityState::trusted(std::move(rho), h.basis());
}

}  // namespace detail

// Projector onto the ground level; a maximally mixed state over the ground
// eigenspace when it is degenerate (relative tolerance vs spectral width).
inline DensityState ground_state(const HermitianOperator& h, double degeneracy_tol = 1e-9) {
    return detail::extremal_state(h, true, degeneracy_tol);
}

// Highest-energy eigenstate; the maximally charged state of the chain.
inline DensityState top_eigenstate(const HermitianOperator& h, double degeneracy_tol = 1e-9) {
    return detail::extremal_state(h, false, degeneracy_tol);
}

// exp(-beta H) / Tr[exp(-beta H)], computed in the eigenbasis with a
// ground-energy shift so the largest Boltzmann weight is exactly 1.
inline DensityState gibbs_state(const HermitianOperator& h, double beta) {
    if (!(beta >= 0.0) || !std::isfinite(beta))
        throw std::invalid_argument("gibbs_state: beta must be finite and >= 0");
    const Eigen::Index d = h.dim();
    if (beta == 0.0) {
        return DensityState::trusted(Eigen::MatrixXcd::Identity(d, d) / double(d), h.basis());
    }
    const Spectrum& s = h.spectrum();
    Eigen::VectorXd w = (-beta * (s.eigenvalues().array() - s.e_min())).exp();
    w /= w.sum();
    Eigen::MatrixXcd rho = s.eigenvectors() * w.asDiagonal() * s.eigenvectors().adjoint();
    return DensityState::trusted(std::move(rho), h.basis());
}

}  // namespace starkbat
