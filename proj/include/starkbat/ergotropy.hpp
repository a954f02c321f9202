// ergotropy.hpp — Passive-state energy and maximum unitarily extractable work

#pragma once

#include <algorithm>
#include <stdexcept>

#include <Eigen/Dense>

#include "starkbat/operators.hpp"

namespace starkbat {

struct ErgotropyResult {
    double ergotropy{0.0};
    double passive_energy{0.0};
    double state_energy{0.0};
};

// Energy of the passive state: descending state populations paired with
// ascending energy levels. This is the minimum of Tr[H U rho U†] over
// unitaries U.
inline double passive_energy(const DensityState& rho, const HermitianOperator& h) {
    if (rho.dim() != h.dim())
        throw std::invalid_argument("passive_energy: dimension mismatch");
    if (!same_basis(rho.basis(), h.basis()))
        throw std::invalid_argument("passive_energy: basis mismatch");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho.matrix(), Eigen::EigenvaluesOnly);
    const Eigen::VectorXd& p = solver.eigenvalues();  // ascending
    const Eigen::VectorXd& e = h.spectrum().eigenvalues();
    const Eigen::Index d = p.size();
    double energy = 0.0;
    for (Eigen::Index k = 0; k < d; ++k) energy += p(d - 1 - k) * e(k);
    return energy;
}

inline ErgotropyResult ergotropy(const DensityState& rho, const HermitianOperator& h) {
    ErgotropyResult out;
    out.passive_energy = passive_energy(rho, h);
    out.state_energy = (h.matrix() * rho.matrix()).trace().real();
    double value = out.state_energy - out.passive_energy;
    if (value < -1e-6)
        throw std::runtime_error("ergotropy: negative beyond numerical tolerance");
    out.ergotropy = std::max(value, 0.0);
    return out;
}

}  // namespace starkbat
