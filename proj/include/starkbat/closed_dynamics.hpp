// closed_dynamics.hpp — Unitary charging: work output, average power, fits,
// and closed-form reference cases

#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "starkbat/fock_basis.hpp"
#include "starkbat/hamiltonian.hpp"
#include "starkbat/numeric.hpp"
#include "starkbat/operators.hpp"
#include "starkbat/state_prep.hpp"

namespace starkbat {

// rho(t) = exp(-i H t) rho0 exp(+i H t), via the eigendecomposition of H.
inline DensityState evolve(const DensityState& rho0, const HermitianOperator& h, double t) {
    if (rho0.dim() != h.dim())
        throw std::invalid_argument("evolve: dimension mismatch");
    if (!same_basis(rho0.basis(), h.basis()))
        throw std::invalid_argument("evolve: basis mismatch");
    const Spectrum& s = h.spectrum();
    Eigen::VectorXcd phases(s.dim());
    for (Eigen::Index k = 0; k < s.dim(); ++k)
        phases(k) = std::polar(1.0, -s.eigenvalues()(k) * t);
    const Eigen::MatrixXcd u = s.eigenvectors() * phases.asDiagonal() * s.eigenvectors().adjoint();
    return DensityState::trusted(u * rho0.matrix() * u.adjoint(), rho0.basis());
}

// W = Tr[H (rho_t - rho_0)].
inline double work(const DensityState& rho_t, const DensityState& rho0,
                   const HermitianOperator& h) {
    if (rho_t.dim() != h.dim() || rho0.dim() != h.dim())
        throw std::invalid_argument("work: dimension mismatch");
    return (h.matrix() * (rho_t.matrix() - rho0.matrix())).trace().real();
}

struct WorkSeries {
    std::vector<double> times;
    std::vector<double> work;
    std::vector<double> power;  // work / time, 0 at t = 0
};

enum class InitialStateKind { ground, gibbs, top };

// One charging setup: battery and charger Hamiltonians over a shared basis,
// an initial-state rule, and the normalization convention for the reported
// work. Thermal states are always formed from the raw battery Hamiltonian;
// `normalize` only selects the observable the work is measured against.
struct ChargingScenario {
    BasisSpec basis;
    HubbardParams battery;
    HubbardParams charger;
    InitialStateKind initial{InitialStateKind::ground};
    double beta{0.0};
    bool normalize{true};
    friend bool operator==(const ChargingScenario&, const ChargingScenario&) = default;
};

inline FockBasis::Ptr make_basis(const BasisSpec& spec) {
    if (spec.statistics == Statistics::boson)
        return FockBasis::bosons(spec.sites, spec.n, spec.cap);
    return FockBasis::fermions(spec.sites, spec.n_up, spec.n_down);
}

struct ScenarioContext {
    FockBasis::Ptr basis;
    HermitianOperator battery_raw;
    HermitianOperator battery_obs;  // normalized unless scenario.normalize = false
    HermitianOperator charger;
    DensityState rho0;
};

inline DensityState initial_state(const HermitianOperator& battery, InitialStateKind kind,
                                  double beta) {
    switch (kind) {
        case InitialStateKind::ground: return ground_state(battery);
        case InitialStateKind::gibbs: return gibbs_state(battery, beta);
        case InitialStateKind::top: return top_eigenstate(battery);
    }
    throw std::invalid_argument("initial_state: unknown kind");
}

inline ScenarioContext build_context(const ChargingScenario& sc) {
    FockBasis::Ptr basis = make_basis(sc.basis);
    HermitianOperator battery = build_hubbard(basis, sc.battery);
    HermitianOperator obs = sc.normalize ? normalize_spectrum(battery) : battery;
    HermitianOperator charger = build_hubbard(basis, sc.charger);
    DensityState rho0 = initial_state(battery, sc.initial, sc.beta);
    return ScenarioContext{std::move(basis), std::move(battery), std::move(obs),
                           std::move(charger), std::move(rho0)};
}

// W(t) = Re sum_k z_k exp(-i w_k t) - E0 in the charger eigenbasis, where the
// sum runs over eigenpair index pairs. Exact per-point evaluation plus an
// anchored phase-recurrence scan for uniform grids.
class WorkFunction {
public:
    WorkFunction(const ScenarioContext& ctx)
        : WorkFunction(ctx.battery_obs, ctx.charger, ctx.rho0) {}

    WorkFunction(const HermitianOperator& observable, const HermitianOperator& charger,
                 const DensityState& rho0) {
        if (observable.dim() != charger.dim() || rho0.dim() != charger.dim())
            throw std::invalid_argument("WorkFunction: dimension mismatch");
        const Spectrum& s = charger.spectrum();
        const Eigen::MatrixXcd h = s.eigenvectors().adjoint() * observable.matrix() * s.eigenvectors();
        const Eigen::MatrixXcd r = s.eigenvectors().adjoint() * rho0.matrix() * s.eigenvectors();
        const Eigen::Index d = s.dim();
        double zmax = 0.0;
        for (Eigen::Index a = 0; a < d; ++a)
            for (Eigen::Index b = 0; b < d; ++b)
                zmax = std::max(zmax, std::abs(h(a, b) * r(b, a)));
        const double cutoff = zmax * 1e-18;
        for (Eigen::Index a = 0; a < d; ++a) {
            for (Eigen::Index b = 0; b < d; ++b) {
                const std::complex<double> z = h(a, b) * r(b, a);
                e0_ += z.real();
                if (std::abs(z) > cutoff) {
                    amp_.push_back(z);
                    omega_.push_back(s.eigenvalues()(b) - s.eigenvalues()(a));
                    scale_ += std::abs(z);
                }
            }
        }
    }

    double operator()(double t) const {
        double acc = 0.0;
        for (std::size_t k = 0; k < amp_.size(); ++k)
            acc += (amp_[k] * std::polar(1.0, -omega_[k] * t)).real();
        return acc - e0_;
    }

    // Uniform-grid scan t_k = t0 + k dt, k = 0..count-1; phases advance by a
    // per-pair multiplier and re-anchor exactly every 64 points.
    std::vector<double> scan(double t0, double dt, int count) const {
        std::vector<double> out(static_cast<std::size_t>(count), -e0_);
        const std::size_t np = amp_.size();
        std::vector<std::complex<double>> phase(np), step(np);
        for (std::size_t k = 0; k < np; ++k) step[k] = std::polar(1.0, -omega_[k] * dt);
        for (int i = 0; i < count; ++i) {
            if (i % 64 == 0) {
                const double t = t0 + dt * i;
                for (std::size_t k = 0; k < np; ++k)
                    phase[k] = amp_[k] * std::polar(1.0, -omega_[k] * t);
            }
            double acc = 0.0;
            for (std::size_t k = 0; k < np; ++k) {
                acc += phase[k].real();
                phase[k] *= step[k];
            }
            out[static_cast<std::size_t>(i)] += acc;
        }
        return out;
    }

    // Sum of pair amplitudes; used to detect flat (identically zero) work.
    double amplitude_scale() const { return scale_; }

private:
    std::vector<std::complex<double>> amp_;
    std::vector<double> omega_;
    double e0_{0.0};
    double scale_{0.0};
};

inline WorkSeries work_series(const ScenarioContext& ctx, const std::vector<double>& times) {
    WorkFunction w(ctx);
    WorkSeries out;
    out.times = times;
    out.work.reserve(times.size());
    out.power.reserve(times.size());
    for (double t : times) {
        const double value = w(t);
        out.work.push_back(value);
        out.power.push_back(t > 0.0 ? value / t : 0.0);
    }
    return out;
}

// Default maximization horizon. A diagonal charger (J = 0) with commensurate
// r and U has exactly periodic work; one period then contains the global
// maximum of W(t)/t. Otherwise 50 cycles of the slowest nonzero scale.
inline double default_power_horizon(const HubbardParams& charger) {
    const double r = std::abs(charger.r);
    const double u = std::abs(charger.U);
    const double j = std::abs(charger.J);
    constexpr double tiny = 1e-12;
    if (j <= tiny && r > tiny && u > tiny) {
        if (const auto pq = small_rational(u / r)) {
            return 2.0 * std::numbers::pi * double(pq->second) / r;
        }
    }
    if (j <= tiny && r > tiny && u <= tiny) return 2.0 * std::numbers::pi / r;
    if (j <= tiny && u > tiny && r <= tiny) return 2.0 * std::numbers::pi / u;
    double fmin = 0.0;
    for (double f : {r, u, j})
        if (f > tiny && (fmin == 0.0 || f < fmin)) fmin = f;
    if (fmin == 0.0) return 1.0;
    return std::min(50.0 / fmin, 1e4);
}

struct PowerResult {
    double p_max{0.0};
    double t_star{0.0};
};

// max_t W(t)/t over (0, t_max]: uniform grid scan, then golden-section
// refinement around the best grid point. Identically flat work returns
// P = 0 at the smallest grid time.
inline PowerResult max_average_power(const WorkFunction& w, double t_max,
                                     int grid_points = 10000) {
    if (!(t_max > 0.0)) throw std::invalid_argument("max_average_power: t_max must be > 0");
    if (grid_points < 8) throw std::invalid_argument("max_average_power: grid too coarse");
    const double dt = t_max / grid_points;
    const std::vector<double> values = w.scan(dt, dt, grid_points);
    if (w.amplitude_scale() <= 0.0) return {0.0, dt};
    double wmax = 0.0;
    for (double v : values) wmax = std::max(wmax, std::abs(v));
    if (wmax <= 1e-13 * std::max(1.0, w.amplitude_scale())) return {0.0, dt};

    int best = 0;
    double best_p = values[0] / dt;
    for (int i = 1; i < grid_points; ++i) {
        const double p = values[static_cast<std::size_t>(i)] / (dt * (i + 1));
        if (p > best_p) { best_p = p; best = i; }
    }
    const double lo = best > 0 ? dt * best : 0.5 * dt;
    const double hi = std::min(dt * (best + 2), t_max);
    const auto [t_star, p_max] =
        golden_section_max([&](double t) { return w(t) / t; }, lo, hi, 1e-8);
    if (p_max >= best_p) return {p_max, t_star};
    return {best_p, dt * (best + 1)};
}

inline PowerResult max_average_power(const ScenarioContext& ctx, double t_max,
                                     int grid_points = 10000) {
    return max_average_power(WorkFunction(ctx), t_max, grid_points);
}

inline PowerResult max_average_power(const ChargingScenario& sc, double t_max = 0.0,
                                     int grid_points = 10000) {
    const ScenarioContext ctx = build_context(sc);
    const double horizon = t_max > 0.0 ? t_max : default_power_horizon(sc.charger);
    return max_average_power(ctx, horizon, grid_points);
}

// P_max(C1) - P_max(C2) for two scenarios over the same basis and statistics.
inline double delta_pmax(const ChargingScenario& c1, const ChargingScenario& c2,
                         int grid_points = 10000) {
    if (!(c1.basis == c2.basis))
        throw std::invalid_argument("delta_pmax: scenarios must share a basis");
    return max_average_power(c1, 0.0, grid_points).p_max -
           max_average_power(c2, 0.0, grid_points).p_max;
}

// Matched fermionic filling for a given total particle number: the up count
// takes the ceiling half, the down count the floor half.
inline std::pair<int, int> matched_fermion_filling(int n_total) {
    return {(n_total + 1) / 2, n_total / 2};
}

// P_max(fermions) - P_max(bosons) on matched (N, filling) sectors.
inline double delta_fb(const ChargingScenario& bose, const ChargingScenario& fermi,
                       int grid_points = 10000) {
    if (bose.basis.statistics != Statistics::boson ||
        fermi.basis.statistics != Statistics::fermion)
        throw std::invalid_argument("delta_fb: expects (boson, fermion) scenarios");
    if (bose.basis.sites != fermi.basis.sites)
        throw std::invalid_argument("delta_fb: site counts differ");
    const auto [nu, nd] = matched_fermion_filling(bose.basis.n);
    if (fermi.basis.n_up != nu || fermi.basis.n_down != nd)
        throw std::invalid_argument("delta_fb: fermionic filling does not match");
    return max_average_power(fermi, 0.0, grid_points).p_max -
           max_average_power(bose, 0.0, grid_points).p_max;
}

// ---------------------------------------------------------------------------
// Closed-form reference cases

enum class OracleCase {
    prop1,                // hopping battery, diagonal charger (two sites)
    prop2_boson,          // onsite battery, hopping charger (two sites)
    prop2_fermion,
    prop2_stark_battery,  // tilt-only battery, hopping charger (two sites)
    prop3,                // hopping battery, tilt-only charger (any sector)
    eq8_single_particle,  // single particle, raw-unit work
};

struct OracleParams {
    double r_c{0.0};
    double U_c{0.0};
    double J_c{0.0};
    double J{1.0};   // battery hopping (eq8 case)
    int sites{2};    // lattice size (eq8 case)
};

inline OracleCase oracle_case_from_string(const std::string& name) {
    if (name == "prop1") return OracleCase::prop1;
    if (name == "prop2_boson") return OracleCase::prop2_boson;
    if (name == "prop2_fermion") return OracleCase::prop2_fermion;
    if (name == "prop2_stark_battery") return OracleCase::prop2_stark_battery;
    if (name == "prop3") return OracleCase::prop3;
    if (name == "eq8") return OracleCase::eq8_single_particle;
    if (name == "eq8_single_particle") return OracleCase::eq8_single_particle;
    throw std::invalid_argument(
        "unknown oracle case '" + name +
        "' (valid: prop1, prop2_boson, prop2_fermion, prop2_stark_battery, prop3, eq8)");
}

inline std::string to_string(OracleCase c) {
    switch (c) {
        case OracleCase::prop1: return "prop1";
        case OracleCase::prop2_boson: return "prop2_boson";
        case OracleCase::prop2_fermion: return "prop2_fermion";
        case OracleCase::prop2_stark_battery: return "prop2_stark_battery";
        case OracleCase::prop3: return "prop3";
        case OracleCase::eq8_single_particle: return "eq8";
    }
    return "?";
}

inline double analytic_work_oracle(OracleCase c, const OracleParams& p, double t) {
    switch (c) {
        case OracleCase::prop1:
            return 1.0 - std::cos(p.r_c * t) * std::cos(p.U_c * t);
        case OracleCase::prop2_boson: {
            const double s = std::sin(2.0 * p.J_c * t);
            return 2.0 * s * s;
        }
        case OracleCase::prop2_fermion: {
            const double s = std::sin(2.0 * p.J_c * t);
            return s * s;
        }
        case OracleCase::prop2_stark_battery: {
            const double s = std::sin(p.J_c * t);
            return 2.0 * s * s;
        }
        case OracleCase::prop3:
            return 1.0 - std::cos(p.r_c * t);
        case OracleCase::eq8_single_particle:
            return 2.0 * p.J * std::cos(std::numbers::pi / (p.sites + 1)) *
                   (1.0 - std::cos(p.r_c * t));
    }
    throw std::invalid_argument("analytic_work_oracle: unknown case");
}

// ---------------------------------------------------------------------------
// Least-squares fit of W(t) ~ alpha + beta cos(r t) + gamma cos(r t) cos(U t)

struct WorkFitResult {
    double alpha{0.0};
    double beta{0.0};
    double gamma{0.0};
    double residual_rms{0.0};
};

inline WorkFitResult fit_work_form(const WorkSeries& series, double r_c, double U_c) {
    const std::size_t n = series.times.size();
    if (n < 8 || series.work.size() != n)
        throw std::invalid_argument("fit_work_form: need a sampled series");
    double slow = 0.0;
    for (double f : {std::abs(r_c), std::abs(U_c)})
        if (f > 1e-12 && (slow == 0.0 || f < slow)) slow = f;
    if (slow == 0.0)
        throw std::invalid_argument("fit_work_form: r_c and U_c are both zero");
    const double span = series.times.back() - series.times.front();
    if (span < 2.0 * (2.0 * std::numbers::pi / slow))
        throw std::invalid_argument("fit_work_form: series shorter than two slow periods");

    Eigen::MatrixXd design(static_cast<Eigen::Index>(n), 3);
    Eigen::VectorXd target(static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k < n; ++k) {
        const double t = series.times[k];
        const auto row = static_cast<Eigen::Index>(k);
        design(row, 0) = 1.0;
        design(row, 1) = std::cos(r_c * t);
        design(row, 2) = std::cos(r_c * t) * std::cos(U_c * t);
        target(row) = series.work[k];
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    qr.setThreshold(1e-10);
    if (qr.rank() < 3)
        throw std::invalid_argument("fit_work_form: rank-deficient design matrix");
    const Eigen::VectorXd coeff = qr.solve(target);
    const double rms = std::sqrt((design * coeff - target).squaredNorm() / double(n));
    return WorkFitResult{coeff(0), coeff(1), coeff(2), rms};
}

}  // namespace starkbat
