// hamiltonian.hpp — Bose- and Fermi-Hubbard chains with a linear Stark tilt

#pragma once

#include <stdexcept>

#include <Eigen/Dense>

#include "starkbat/fock_basis.hpp"
#include "starkbat/operators.hpp"

namespace starkbat {

// Chain parameters (hbar = k_B = 1): J nearest-neighbor hopping, U onsite
// strength, r Stark tilt -r * sum_i i n_i with 1-based site labels.
struct HubbardParams {
    double J{0.0};
    double U{0.0};
    double r{0.0};
    friend bool operator==(const HubbardParams&, const HubbardParams&) = default;
};

// H = -J sum_<i,j> (b†_i b_j + h.c.) + (U/2) sum_i n_i (n_i - 1) - r sum_i i n_i
// on an open chain.
inline HermitianOperator build_bose_hubbard(const FockBasis::Ptr& basis,
                                            const HubbardParams& p) {
    if (basis->statistics() != Statistics::boson)
        throw std::invalid_argument("build_bose_hubbard: basis is not bosonic");
    const auto d = static_cast<Eigen::Index>(basis->dim());
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(d, d);
    for (std::size_t k = 0; k < basis->dim(); ++k) {
        const auto col = static_cast<Eigen::Index>(k);
        double diag = 0.0;
        for (int site = 1; site <= basis->sites(); ++site) {
            const int n = basis->occupation(k, site);
            diag += 0.5 * p.U * n * (n - 1) - p.r * site * n;
        }
        h(col, col) += diag;
        if (p.J != 0.0) {
            for (int site = 1; site < basis->sites(); ++site) {
                for (const auto [to, from] : {std::pair{site, site + 1}, std::pair{site + 1, site}}) {
                    if (const auto el = boson_hop_element(*basis, to, from, k))
                        h(static_cast<Eigen::Index>(el->target), col) += -p.J * el->amplitude;
                }
            }
        }
    }
    return HermitianOperator(std::move(h), basis);
}

// H = -J sum_<i,j>,s (c†_is c_js + h.c.) + U sum_i n_iu n_id - r sum_i i (n_iu + n_id)
// with Jordan-Wigner signs against the site-major (up, down) mode ordering.
inline HermitianOperator build_fermi_hubbard(const FockBasis::Ptr& basis,
                                             const HubbardParams& p) {
    if (basis->statistics() != Statistics::fermion)
        throw std::invalid_argument("build_fermi_hubbard: basis is not fermionic");
    const auto d = static_cast<Eigen::Index>(basis->dim());
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(d, d);
    for (std::size_t k = 0; k < basis->dim(); ++k) {
        const auto col = static_cast<Eigen::Index>(k);
        double diag = 0.0;
        for (int site = 1; site <= basis->sites(); ++site) {
            const int nu = basis->occupation(k, site, Spin::up);
            const int nd = basis->occupation(k, site, Spin::down);
            diag += p.U * nu * nd - p.r * site * (nu + nd);
        }
        h(col, col) += diag;
        if (p.J != 0.0) {
            for (int site = 1; site < basis->sites(); ++site) {
                for (Spin spin : {Spin::up, Spin::down}) {
                    for (const auto [to, from] :
                         {std::pair{site, site + 1}, std::pair{site + 1, site}}) {
                        if (const auto el = fermion_hop_element(*basis, to, from, spin, k))
                            h(static_cast<Eigen::Index>(el->target), col) += -p.J * el->amplitude;
                    }
                }
            }
        }
    }
    return HermitianOperator(std::move(h), basis);
}

inline HermitianOperator build_hubbard(const FockBasis::Ptr& basis, const HubbardParams& p) {
    return basis->statistics() == Statistics::boson ? build_bose_hubbard(basis, p)
                                                    : build_fermi_hubbard(basis, p);
}

}  // namespace starkbat
