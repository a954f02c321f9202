// open_dynamics.hpp — Global GKSL generator from edge-site thermal baths:
// frequency-grouped eigenoperators, KMS rates, RK4 integration, steady states

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "starkbat/numeric.hpp"
#include "starkbat/operators.hpp"

namespace starkbat {

// The decomposition e^{iHt} C e^{-iHt} = 2 sum_w A(w) e^{-iwt} carries an
// explicit factor 2, so A(w) = (1/2) sum Pi_a C Pi_b; all rates consequently
// act at one quarter of the strength of the unit-normalized convention.
inline constexpr double kEigenOperatorPrefactor = 0.5;

// One edge-site thermal bath: Ohmic-exponential spectral density with
// dimensionless coupling eta << 1 and inverse temperature beta.
struct BathSpec {
    int site{1};
    double beta{1.0};
    double eta{1e-2};
    double omega_c{10.0};
};

inline void validate(const BathSpec& b, int sites) {
    if (b.site != 1 && b.site != sites)
        throw std::invalid_argument("BathSpec: baths attach to edge sites only");
    if (!(b.beta > 0.0) || !std::isfinite(b.beta))
        throw std::invalid_argument("BathSpec: beta must be finite and > 0");
    if (!(b.eta > 0.0)) throw std::invalid_argument("BathSpec: eta must be > 0");
    if (!(b.omega_c > 0.0)) throw std::invalid_argument("BathSpec: omega_c must be > 0");
}

// KMS transition rate: f(w)[1 + kappa(w)] for w >= 0 and f(|w|) kappa(|w|)
// for w < 0, with f(w) = eta w exp(-w/omega_c) and kappa the Bose factor.
// The w -> 0 limit is eta/beta from both sides.
inline double bath_rate(const BathSpec& bath, double omega) {
    if (!std::isfinite(omega)) throw std::invalid_argument("bath_rate: omega must be finite");
    if (omega == 0.0) return bath.eta / bath.beta;
    const double w = std::abs(omega);
    const double f = bath.eta * w * std::exp(-w / bath.omega_c);
    const double expm1_bw = std::expm1(bath.beta * w);
    const double kappa = 1.0 / expm1_bw;
    return omega > 0.0 ? f * (1.0 + kappa) : f * kappa;
}

struct EigenTriplet {
    int row{0};  // eigenstate a (energy eps_a)
    int col{0};  // eigenstate b (energy eps_b)
    std::complex<double> value{0.0};
};

struct EigenOperatorGroup {
    double omega{0.0};                    // representative Bohr frequency eps_b - eps_a
    std::vector<EigenTriplet> elements;   // nonzero entries of A(omega) in the eigenbasis
};

// Frequency-resolved decomposition of a coupling operator against a system
// Hamiltonian's eigenbasis, grouped within a Bohr-frequency tolerance.
class EigenOperatorSet {
public:
    EigenOperatorSet(std::shared_ptr<const Spectrum> spectrum, FockBasis::Ptr basis,
                     std::vector<EigenOperatorGroup> groups)
        : spectrum_(std::move(spectrum)), basis_(std::move(basis)), groups_(std::move(groups)) {}

    const Spectrum& spectrum() const { return *spectrum_; }
    const std::shared_ptr<const Spectrum>& spectrum_ptr() const { return spectrum_; }
    const FockBasis::Ptr& basis() const { return basis_; }
    std::size_t size() const { return groups_.size(); }
    double omega(std::size_t g) const { return groups_.at(g).omega; }
    const EigenOperatorGroup& group(std::size_t g) const { return groups_.at(g); }
    Eigen::Index dim() const { return spectrum_->dim(); }

    Eigen::MatrixXcd operator_eigenbasis(std::size_t g) const {
        Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(dim(), dim());
        for (const auto& e : groups_.at(g).elements) a(e.row, e.col) = e.value;
        return a;
    }

    Eigen::MatrixXcd operator_original(std::size_t g) const {
        const Eigen::MatrixXcd& v = spectrum_->eigenvectors();
        return v * operator_eigenbasis(g) * v.adjoint();
    }

private:
    std::shared_ptr<const Spectrum> spectrum_;
    FockBasis::Ptr basis_;
    std::vector<EigenOperatorGroup> groups_;
};

// A(w) = kEigenOperatorPrefactor * sum_{eps_b - eps_a = w} Pi_a C Pi_b, with
// Bohr frequencies clustered within omega_tol (default 1e-8 of the spectral
// width). The reconstruction identity 2 sum_w A(w) = C holds by completeness.
inline EigenOperatorSet build_eigenoperators(const HermitianOperator& h,
                                             const HermitianOperator& coupling,
                                             double omega_tol = -1.0) {
    if (h.dim() != coupling.dim())
        throw std::invalid_argument("build_eigenoperators: dimension mismatch");
    if (!same_basis(h.basis(), coupling.basis()))
        throw std::invalid_argument("build_eigenoperators: basis mismatch");
    const Spectrum& s = h.spectrum();
    if (omega_tol < 0.0) omega_tol = 1e-8 * s.width();
    const Eigen::MatrixXcd c_eig =
        s.eigenvectors().adjoint() * coupling.matrix() * s.eigenvectors();
    const Eigen::Index d = s.dim();

    struct Entry {
        double omega;
        int row, col;
        std::complex<double> value;
    };
    std::vector<Entry> entries;
    const double cutoff = 1e-14 * std::max(1.0, c_eig.cwiseAbs().maxCoeff());
    for (Eigen::Index a = 0; a < d; ++a) {
        for (Eigen::Index b = 0; b < d; ++b) {
            if (std::abs(c_eig(a, b)) <= cutoff) continue;
            entries.push_back({s.eigenvalues()(b) - s.eigenvalues()(a),
                               static_cast<int>(a), static_cast<int>(b),
                               kEigenOperatorPrefactor * c_eig(a, b)});
        }
    }
    std::sort(entries.begin(), entries.end(), [](const Entry& x, const Entry& y) {
        if (x.omega != y.omega) return x.omega < y.omega;
        if (x.row != y.row) return x.row < y.row;
        return x.col < y.col;
    });

    std::vector<EigenOperatorGroup> groups;
    for (std::size_t i = 0; i < entries.size();) {
        std::size_t j = i + 1;
        while (j < entries.size() && entries[j].omega - entries[j - 1].omega <= omega_tol) ++j;
        EigenOperatorGroup g;
        double sum = 0.0;
        for (std::size_t k = i; k < j; ++k) {
            sum += entries[k].omega;
            g.elements.push_back({entries[k].row, entries[k].col, entries[k].value});
        }
        g.omega = sum / double(j - i);
        if (std::abs(g.omega) <= omega_tol) g.omega = 0.0;
        groups.push_back(std::move(g));
        i = j;
    }
    auto spectrum = std::make_shared<Spectrum>(s.eigenvalues(), s.eigenvectors());
    return EigenOperatorSet(std::move(spectrum), h.basis(), std::move(groups));
}

struct GeneratorOptions {
    bool include_battery_in_coherent{false};
};

// GKSL generator d rho/dt = -i [H_coh, rho] + sum_i sum_w gamma_i(w)
// (A_i(w) rho A_i(w)† - 1/2 {A_i(w)† A_i(w), rho}). The dissipator is applied
// in the eigenbasis of the Hamiltonian the eigenoperators were built from;
// immutable once constructed.
class LindbladGenerator {
public:
    LindbladGenerator(const HermitianOperator& h_coherent, std::vector<BathSpec> baths,
                      std::vector<EigenOperatorSet> ops, GeneratorOptions options = {})
        : baths_(std::move(baths)), ops_(std::move(ops)), dim_(h_coherent.dim()) {
        if (baths_.size() != ops_.size())
            throw std::invalid_argument("LindbladGenerator: one eigenoperator set per bath");
        for (const auto& set : ops_) {
            if (set.dim() != dim_)
                throw std::invalid_argument("LindbladGenerator: mismatched bases");
            if (set.basis() && h_coherent.basis() && !same_basis(set.basis(), h_coherent.basis()))
                throw std::invalid_argument("LindbladGenerator: mismatched bases");
        }
        if (!ops_.empty()) {
            basis_vectors_ = ops_.front().spectrum().eigenvectors();
            for (const auto& set : ops_)
                if ((set.spectrum().eigenvectors() - basis_vectors_).cwiseAbs().maxCoeff() > 1e-12)
                    throw std::invalid_argument(
                        "LindbladGenerator: eigenoperator sets built from different Hamiltonians");
        } else {
            basis_vectors_ = Eigen::MatrixXcd::Identity(dim_, dim_);
        }
        fock_basis_ = h_coherent.basis();

        Eigen::MatrixXcd h_coh = h_coherent.matrix();
        if (options.include_battery_in_coherent && !ops_.empty()) {
            const Spectrum& s = ops_.front().spectrum();
            h_coh += s.reconstruct();
        }
        h_working_ = basis_vectors_.adjoint() * h_coh * basis_vectors_;

        k_working_ = Eigen::MatrixXcd::Zero(dim_, dim_);
        for (std::size_t i = 0; i < baths_.size(); ++i) {
            validate(baths_[i], fock_basis_ ? fock_basis_->sites() : baths_[i].site);
            for (std::size_t g = 0; g < ops_[i].size(); ++g) {
                Channel ch;
                ch.rate = bath_rate(baths_[i], ops_[i].omega(g));
                if (ch.rate < 0.0)
                    throw std::runtime_error("LindbladGenerator: negative rate");
                ch.bath = i;
                ch.group = g;
                ch.elements = ops_[i].group(g).elements;
                double fro2 = 0.0;
                for (const auto& e : ch.elements) fro2 += std::norm(e.value);
                // K += gamma A†A accumulated once; the anticommutator is applied in bulk
                for (const auto& e1 : ch.elements)
                    for (const auto& e2 : ch.elements)
                        if (e1.row == e2.row)
                            k_working_(e1.col, e2.col) += ch.rate * std::conj(e1.value) * e2.value;
                diss_bound_ += 2.0 * ch.rate * fro2;
                channels_.push_back(std::move(ch));
            }
        }
        coh_bound_ = 2.0 * h_working_.cwiseAbs().rowwise().sum().maxCoeff();
    }

    Eigen::Index dim() const { return dim_; }
    const std::vector<BathSpec>& baths() const { return baths_; }
    const std::vector<EigenOperatorSet>& eigenoperators() const { return ops_; }
    const FockBasis::Ptr& basis() const { return fock_basis_; }

    double rate(std::size_t bath, std::size_t group) const {
        for (const auto& ch : channels_)
            if (ch.bath == bath && ch.group == group) return ch.rate;
        throw std::out_of_range("LindbladGenerator: no such channel");
    }

    // Smallest rate that participates in the dynamics (at least 1e-12 of the
    // largest); 0 when there are no channels.
    double min_nonzero_rate() const {
        double gmax = 0.0;
        for (const auto& ch : channels_) gmax = std::max(gmax, ch.rate);
        double gmin = 0.0;
        for (const auto& ch : channels_)
            if (ch.rate > 1e-12 * gmax && (gmin == 0.0 || ch.rate < gmin)) gmin = ch.rate;
        return gmin;
    }

    // Upper bound on the generator's spectral scale; sets integrator steps.
    double scale_bound() const { return coh_bound_ + diss_bound_; }

    Eigen::MatrixXcd to_working(const Eigen::MatrixXcd& rho) const {
        return basis_vectors_.adjoint() * rho * basis_vectors_;
    }
    Eigen::MatrixXcd from_working(const Eigen::MatrixXcd& rho) const {
        return basis_vectors_ * rho * basis_vectors_.adjoint();
    }

    // Full right-hand side in the original basis.
    Eigen::MatrixXcd apply(const Eigen::MatrixXcd& rho) const {
        return from_working(rhs(to_working(rho)));
    }

    // Full right-hand side in the working basis. The jump terms accumulate
    // (A rho A†)(a1, a2) = sum v1 conj(v2) rho(b1, b2) over triplet pairs.
    Eigen::MatrixXcd rhs(const Eigen::MatrixXcd& rho) const {
        const std::complex<double> minus_i(0.0, -1.0);
        Eigen::MatrixXcd out = minus_i * (h_working_ * rho - rho * h_working_);
        out.noalias() -= 0.5 * (k_working_ * rho);
        out.noalias() -= 0.5 * (rho * k_working_);
        for (const auto& ch : channels_) {
            if (ch.rate == 0.0) continue;
            for (const auto& e1 : ch.elements) {
                const std::complex<double> w = ch.rate * e1.value;
                for (const auto& e2 : ch.elements)
                    out(e1.row, e2.row) += w * std::conj(e2.value) * rho(e1.col, e2.col);
            }
        }
        return out;
    }

    // Dense superoperator on column-major vec(rho), in the working basis.
    Eigen::MatrixXcd liouvillian_matrix() const {
        const Eigen::Index d = dim_;
        const Eigen::Index d2 = d * d;
        Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(d, d);
        auto kron = [d](const Eigen::MatrixXcd& x, const Eigen::MatrixXcd& y) {
            Eigen::MatrixXcd out(x.rows() * y.rows(), x.cols() * y.cols());
            for (Eigen::Index i = 0; i < x.rows(); ++i)
                for (Eigen::Index j = 0; j < x.cols(); ++j)
                    out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
            return out;
        };
        const std::complex<double> minus_i(0.0, -1.0);
        Eigen::MatrixXcd lv = minus_i * (kron(id, h_working_) - kron(h_working_.transpose(), id));
        lv -= 0.5 * kron(id, k_working_);
        lv -= 0.5 * kron(k_working_.transpose(), id);
        for (const auto& ch : channels_) {
            if (ch.rate == 0.0) continue;
            Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(d, d);
            for (const auto& e : ch.elements) a(e.row, e.col) = e.value;
            lv += ch.rate * kron(a.conjugate(), a);
        }
        if (lv.rows() != d2) throw std::logic_error("liouvillian_matrix: bad shape");
        return lv;
    }

private:
    struct Channel {
        std::size_t bath{0};
        std::size_t group{0};
        double rate{0.0};
        std::vector<EigenTriplet> elements;
    };

    std::vector<BathSpec> baths_;
    std::vector<EigenOperatorSet> ops_;
    Eigen::Index dim_;
    Eigen::MatrixXcd basis_vectors_;  // working-basis columns
    FockBasis::Ptr fock_basis_;
    Eigen::MatrixXcd h_working_;
    Eigen::MatrixXcd k_working_;  // sum gamma A†A
    std::vector<Channel> channels_;
    double coh_bound_{0.0};
    double diss_bound_{0.0};
};

inline LindbladGenerator build_generator(const HermitianOperator& h_charger,
                                         const std::vector<BathSpec>& baths,
                                         const std::vector<EigenOperatorSet>& eigenops,
                                         GeneratorOptions options = {}) {
    return LindbladGenerator(h_charger, baths, eigenops, options);
}

struct IntegrateOptions {
    double step_safety{0.1};
    double max_step{std::numeric_limits<double>::infinity()};
    double max_total_substeps{2e9};
};

namespace detail {

inline void rk4_step(const LindbladGenerator& gen, Eigen::MatrixXcd& rho, double h) {
    const Eigen::MatrixXcd k1 = gen.rhs(rho);
    const Eigen::MatrixXcd k2 = gen.rhs(rho + 0.5 * h * k1);
    const Eigen::MatrixXcd k3 = gen.rhs(rho + 0.5 * h * k2);
    const Eigen::MatrixXcd k4 = gen.rhs(rho + h * k3);
    rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

inline double rk4_substep(const LindbladGenerator& gen, const IntegrateOptions& opts) {
    const double scale = gen.scale_bound();
    if (scale <= 1e-30) return opts.max_step;
    return std::min(opts.step_safety / scale, opts.max_step);
}

}  // namespace detail

// Fixed-step fourth-order integration of the GKSL equation from rho0 at t = 0
// to each requested output time (ascending, first >= 0). The RK4 update is a
// linear combination of generator applications, so the trace is preserved to
// rounding; states are re-symmetrized at output points.
inline std::vector<DensityState> integrate(const LindbladGenerator& gen,
                                           const DensityState& rho0,
                                           const std::vector<double>& t_grid,
                                           IntegrateOptions opts = {}) {
    if (rho0.dim() != gen.dim()) throw std::invalid_argument("integrate: dimension mismatch");
    if (!same_basis(rho0.basis(), gen.basis()))
        throw std::invalid_argument("integrate: basis mismatch");
    if (t_grid.empty()) return {};
    if (t_grid.front() < 0.0) throw std::invalid_argument("integrate: times must be >= 0");
    for (std::size_t i = 1; i < t_grid.size(); ++i)
        if (t_grid[i] < t_grid[i - 1])
            throw std::invalid_argument("integrate: time grid must be ascending");

    const double h_max = detail::rk4_substep(gen, opts);
    double total_steps = 0.0;
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        const double prev = i == 0 ? 0.0 : t_grid[i - 1];
        total_steps += std::ceil((t_grid[i] - prev) / h_max);
    }
    if (total_steps > opts.max_total_substeps)
        throw std::runtime_error(
            "integrate: step size collapsed (" + std::to_string(total_steps) +
            " substeps needed; generator scale " + std::to_string(gen.scale_bound()) + ")");

    std::vector<DensityState> out;
    out.reserve(t_grid.size());
    Eigen::MatrixXcd rho = gen.to_working(rho0.matrix());
    double t = 0.0;
    for (double target : t_grid) {
        const double span = target - t;
        if (span > 0.0) {
            const int n_sub = std::max(1, static_cast<int>(std::ceil(span / h_max)));
            const double h = span / n_sub;
            for (int k = 0; k < n_sub; ++k) detail::rk4_step(gen, rho, h);
            t = target;
        }
        rho = 0.5 * (rho + rho.adjoint().eval());
        out.push_back(DensityState::trusted(gen.from_working(rho), rho0.basis()));
    }
    return out;
}

struct SteadyStateResult {
    DensityState state;
    bool converged{false};
    double time_reached{0.0};
    double residual{0.0};  // max-norm of the full right-hand side at the returned state
};

// Integrates in windows of length min(1/min-nonzero-rate, t_cap/8) until the
// trace-norm change over one window drops below tol and the full RHS residual
// is below 10*tol; a result that hits t_cap first is returned flagged.
inline SteadyStateResult steady_state(const LindbladGenerator& gen, const DensityState& rho0,
                                      double tol = 1e-8, double t_cap = 1e4,
                                      IntegrateOptions opts = {}) {
    if (rho0.dim() != gen.dim()) throw std::invalid_argument("steady_state: dimension mismatch");
    const double gmin = gen.min_nonzero_rate();
    double window = gmin > 0.0 ? 1.0 / gmin : t_cap / 8.0;
    window = std::min(window, t_cap / 8.0);
    if (!(window > 0.0)) throw std::invalid_argument("steady_state: t_cap must be > 0");

    const double h_max = detail::rk4_substep(gen, opts);
    Eigen::MatrixXcd rho = gen.to_working(rho0.matrix());
    double t = 0.0;
    double residual = std::numeric_limits<double>::infinity();
    bool converged = false;
    while (t < t_cap) {
        const double span = std::min(window, t_cap - t);
        const int n_sub = std::max(1, static_cast<int>(std::ceil(span / h_max)));
        if (double(n_sub) > opts.max_total_substeps)
            throw std::runtime_error("steady_state: step size collapsed");
        const double h = span / n_sub;
        Eigen::MatrixXcd prev = rho;
        for (int k = 0; k < n_sub; ++k) detail::rk4_step(gen, rho, h);
        t += span;
        rho = 0.5 * (rho + rho.adjoint().eval());
        const double delta = trace_norm_hermitian(rho - prev);
        if (delta < tol) {
            residual = gen.rhs(rho).cwiseAbs().maxCoeff();
            if (residual < 10.0 * tol) {
                converged = true;
                break;
            }
        }
    }
    if (!converged) residual = gen.rhs(rho).cwiseAbs().maxCoeff();
    return SteadyStateResult{DensityState::trusted(gen.from_working(rho), rho0.basis()),
                             converged, t, residual};
}

// Algebraic cross-check: spectral projection of rho0 onto the kernel of the
// vectorized Liouvillian (semisimple at eigenvalue 0 for GKSL generators).
// Conserved functionals are matched through the left null space. Dense SVD;
// restricted to dim <= 40.
inline SteadyStateResult steady_state_nullspace(const LindbladGenerator& gen,
                                                const DensityState& rho0) {
    const Eigen::Index d = gen.dim();
    if (d > 40) throw std::invalid_argument("steady_state_nullspace: dim must be <= 40");
    if (rho0.dim() != d) throw std::invalid_argument("steady_state_nullspace: dimension mismatch");
    const Eigen::MatrixXcd lv = gen.liouvillian_matrix();
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(lv, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sv = svd.singularValues();
    const double cut = std::max(sv(0), 1.0) * 1e-10;
    std::vector<Eigen::Index> null_idx;
    for (Eigen::Index k = 0; k < sv.size(); ++k)
        if (sv(k) <= cut) null_idx.push_back(k);
    if (null_idx.empty())
        throw std::runtime_error("steady_state_nullspace: no null space found");

    const auto m = static_cast<Eigen::Index>(null_idx.size());
    const Eigen::Index d2 = d * d;
    Eigen::MatrixXcd right(d2, m), left(d2, m);
    for (Eigen::Index k = 0; k < m; ++k) {
        right.col(k) = svd.matrixV().col(null_idx[static_cast<std::size_t>(k)]);
        left.col(k) = svd.matrixU().col(null_idx[static_cast<std::size_t>(k)]);
    }
    Eigen::MatrixXcd rho_w = gen.to_working(rho0.matrix());
    Eigen::Map<const Eigen::VectorXcd> rho_vec(rho_w.data(), d2);
    const Eigen::MatrixXcd overlap = left.adjoint() * right;   // m x m
    const Eigen::VectorXcd conserved = left.adjoint() * rho_vec;
    const Eigen::VectorXcd coeff = overlap.fullPivLu().solve(conserved);
    Eigen::VectorXcd ss_vec = right * coeff;
    Eigen::MatrixXcd ss = Eigen::Map<Eigen::MatrixXcd>(ss_vec.data(), d, d);
    ss = 0.5 * (ss + ss.adjoint().eval());
    const double tr = ss.trace().real();
    if (std::abs(tr) < 1e-12)
        throw std::runtime_error("steady_state_nullspace: traceless projection");
    ss /= tr;
    const double residual = gen.rhs(ss).cwiseAbs().maxCoeff();
    return SteadyStateResult{DensityState::trusted(gen.from_working(ss), rho0.basis()),
                             residual < 1e-7, 0.0, residual};
}

}  // namespace starkbat
