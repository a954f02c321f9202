// fock_basis.hpp — Occupation-number bases for bosonic and spinful-fermionic chains

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

namespace starkbat {

enum class Statistics { boson, fermion };
enum class Spin { up, down };

// Identifies a basis by its construction parameters. A value of -1 for a
// particle count means the count is unconstrained (full truncated space).
struct BasisSpec {
    Statistics statistics{Statistics::boson};
    int sites{0};
    int n{-1};       // bosons: total particle number
    int n_up{-1};    // fermions
    int n_down{-1};
    int cap{2};      // bosons: max occupation per site
    friend bool operator==(const BasisSpec&, const BasisSpec&) = default;
};

// Spinful-fermion configuration as per-spin bitmasks; bit (site-1) is set when
// the site holds a fermion of that spin. Sites are 1-based throughout.
struct FermionConfig {
    std::uint32_t up{0};
    std::uint32_t down{0};
    friend bool operator==(const FermionConfig&, const FermionConfig&) = default;
};

// Ordered enumeration of occupation configurations with a bijective index map.
// Enumeration order is lexicographic over the per-site tuple, first site most
// significant; for fermions each site contributes (up, down) in that order.
// Immutable after construction.
class FockBasis {
public:
    using Ptr = std::shared_ptr<const FockBasis>;

    static Ptr bosons(int sites, int n, int cap = 2) {
        if (sites < 1) throw std::invalid_argument("FockBasis: sites must be >= 1");
        if (cap < 1) throw std::invalid_argument("FockBasis: cap must be >= 1");
        if (n < 0) throw std::invalid_argument("FockBasis: n must be >= 0");
        if (n > sites * cap)
            throw std::invalid_argument("FockBasis: infeasible constraint n > sites*cap");
        BasisSpec spec{Statistics::boson, sites, n, -1, -1, cap};
        return build_bosons(spec);
    }

    static Ptr bosons_full(int sites, int cap = 2) {
        if (sites < 1) throw std::invalid_argument("FockBasis: sites must be >= 1");
        if (cap < 1) throw std::invalid_argument("FockBasis: cap must be >= 1");
        BasisSpec spec{Statistics::boson, sites, -1, -1, -1, cap};
        return build_bosons(spec);
    }

    static Ptr fermions(int sites, int n_up, int n_down) {
        if (sites < 1) throw std::invalid_argument("FockBasis: sites must be >= 1");
        if (sites > 31) throw std::invalid_argument("FockBasis: sites must be <= 31");
        if (n_up < 0 || n_down < 0)
            throw std::invalid_argument("FockBasis: particle counts must be >= 0");
        if (n_up > sites || n_down > sites)
            throw std::invalid_argument("FockBasis: infeasible constraint n_sigma > sites");
        BasisSpec spec{Statistics::fermion, sites, -1, n_up, n_down, 1};
        return build_fermions(spec);
    }

    static Ptr fermions_full(int sites) {
        if (sites < 1 || sites > 15)
            throw std::invalid_argument("FockBasis: full fermion space needs 1 <= sites <= 15");
        BasisSpec spec{Statistics::fermion, sites, -1, -1, -1, 1};
        return build_fermions(spec);
    }

    const BasisSpec& spec() const { return spec_; }
    Statistics statistics() const { return spec_.statistics; }
    int sites() const { return spec_.sites; }
    int cap() const { return spec_.cap; }
    std::size_t dim() const {
        return spec_.statistics == Statistics::boson ? boson_configs_.size()
                                                     : fermion_configs_.size();
    }

    const std::vector<int>& occupations(std::size_t index) const {
        require_boson();
        return boson_configs_.at(index);
    }

    FermionConfig fermion_config(std::size_t index) const {
        require_fermion();
        return fermion_configs_.at(index);
    }

    std::optional<std::size_t> find(const std::vector<int>& occ) const {
        require_boson();
        if (static_cast<int>(occ.size()) != spec_.sites) return std::nullopt;
        auto it = index_.find(boson_key(occ));
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    std::optional<std::size_t> find(FermionConfig c) const {
        require_fermion();
        auto it = index_.find(fermion_key(c));
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    // Total occupation at a 1-based site (bosons: n_i, fermions: n_up + n_down).
    int occupation(std::size_t index, int site) const {
        check_site(site);
        if (spec_.statistics == Statistics::boson)
            return boson_configs_.at(index)[static_cast<std::size_t>(site - 1)];
        const FermionConfig c = fermion_configs_.at(index);
        const std::uint32_t bit = 1u << (site - 1);
        return ((c.up & bit) ? 1 : 0) + ((c.down & bit) ? 1 : 0);
    }

    int occupation(std::size_t index, int site, Spin spin) const {
        require_fermion();
        check_site(site);
        const FermionConfig c = fermion_configs_.at(index);
        const std::uint32_t mask = spin == Spin::up ? c.up : c.down;
        return (mask >> (site - 1)) & 1u;
    }

    std::string config_string(std::size_t index) const {
        std::string out = "|";
        if (spec_.statistics == Statistics::boson) {
            const auto& occ = boson_configs_.at(index);
            for (int s = 0; s < spec_.sites; ++s) {
                if (s) out += ',';
                out += std::to_string(occ[static_cast<std::size_t>(s)]);
            }
        } else {
            for (int s = 1; s <= spec_.sites; ++s) {
                if (s > 1) out += ',';
                out += std::to_string(occupation(index, s, Spin::up));
                out += std::to_string(occupation(index, s, Spin::down));
            }
        }
        out += ">";
        return out;
    }

private:
    FockBasis() = default;

    void require_boson() const {
        if (spec_.statistics != Statistics::boson)
            throw std::invalid_argument("FockBasis: bosonic accessor on fermionic basis");
    }
    void require_fermion() const {
        if (spec_.statistics != Statistics::fermion)
            throw std::invalid_argument("FockBasis: fermionic accessor on bosonic basis");
    }
    void check_site(int site) const {
        if (site < 1 || site > spec_.sites)
            throw std::out_of_range("FockBasis: site index out of range");
    }

    std::uint64_t boson_key(const std::vector<int>& occ) const {
        std::uint64_t key = 0;
        const auto base = static_cast<std::uint64_t>(spec_.cap) + 1;
        for (int v : occ) key = key * base + static_cast<std::uint64_t>(v);
        return key;
    }
    static std::uint64_t fermion_key(FermionConfig c) {
        return (static_cast<std::uint64_t>(c.up) << 32) | c.down;
    }

    static Ptr build_bosons(const BasisSpec& spec) {
        auto basis = std::shared_ptr<FockBasis>(new FockBasis());
        basis->spec_ = spec;
        std::vector<int> occ(static_cast<std::size_t>(spec.sites), 0);
        basis->enumerate_bosons(occ, 0, spec.n);
        basis->index_.reserve(basis->boson_configs_.size());
        for (std::size_t i = 0; i < basis->boson_configs_.size(); ++i)
            basis->index_.emplace(basis->boson_key(basis->boson_configs_[i]), i);
        return basis;
    }

    void enumerate_bosons(std::vector<int>& occ, int site, int remaining) {
        const bool constrained = spec_.n >= 0;
        if (site == spec_.sites) {
            if (!constrained || remaining == 0) boson_configs_.push_back(occ);
            return;
        }
        const int hi = constrained ? std::min(spec_.cap, remaining) : spec_.cap;
        for (int v = 0; v <= hi; ++v) {
            occ[static_cast<std::size_t>(site)] = v;
            enumerate_bosons(occ, site + 1, constrained ? remaining - v : remaining);
        }
        occ[static_cast<std::size_t>(site)] = 0;
    }

    static Ptr build_fermions(const BasisSpec& spec) {
        auto basis = std::shared_ptr<FockBasis>(new FockBasis());
        basis->spec_ = spec;
        basis->enumerate_fermions(FermionConfig{}, 0, spec.n_up, spec.n_down);
        basis->index_.reserve(basis->fermion_configs_.size());
        for (std::size_t i = 0; i < basis->fermion_configs_.size(); ++i)
            basis->index_.emplace(fermion_key(basis->fermion_configs_[i]), i);
        return basis;
    }

    void enumerate_fermions(FermionConfig c, int site, int up_left, int down_left) {
        const bool constrained = spec_.n_up >= 0;
        if (site == spec_.sites) {
            if (!constrained || (up_left == 0 && down_left == 0))
                fermion_configs_.push_back(c);
            return;
        }
        const int remaining_sites = spec_.sites - site - 1;
        for (int u = 0; u <= 1; ++u) {
            for (int d = 0; d <= 1; ++d) {
                if (constrained) {
                    if (u > up_left || d > down_left) continue;
                    if (up_left - u > remaining_sites || down_left - d > remaining_sites)
                        continue;
                }
                FermionConfig next = c;
                if (u) next.up |= 1u << site;
                if (d) next.down |= 1u << site;
                enumerate_fermions(next, site + 1,
                                   constrained ? up_left - u : up_left,
                                   constrained ? down_left - d : down_left);
            }
        }
    }

    BasisSpec spec_;
    std::vector<std::vector<int>> boson_configs_;
    std::vector<FermionConfig> fermion_configs_;
    std::unordered_map<std::uint64_t, std::size_t> index_;
};

inline bool same_basis(const FockBasis::Ptr& a, const FockBasis::Ptr& b) {
    if (a && b) return a->spec() == b->spec();
    return true;  // untyped operands are checked by dimension only
}

struct HopElement {
    std::size_t target{};
    double amplitude{};
};

// Matrix element of b†_to b_from acting on configuration `index`: one boson
// moves from `from_site` to the adjacent `to_site` with amplitude
// sqrt(n_from (n_to + 1)). Returns nullopt when the source is empty or the
// target would exceed the cap.
inline std::optional<HopElement> boson_hop_element(const FockBasis& basis, int to_site,
                                                   int from_site, std::size_t index) {
    if (basis.statistics() != Statistics::boson)
        throw std::invalid_argument("boson_hop_element: fermionic basis");
    if (to_site < 1 || to_site > basis.sites() || from_site < 1 || from_site > basis.sites())
        throw std::out_of_range("boson_hop_element: site index out of range");
    if (std::abs(to_site - from_site) != 1)
        throw std::invalid_argument("boson_hop_element: sites must be nearest neighbors");
    const auto& occ = basis.occupations(index);
    const int n_from = occ[static_cast<std::size_t>(from_site - 1)];
    const int n_to = occ[static_cast<std::size_t>(to_site - 1)];
    if (n_from == 0) return std::nullopt;
    if (n_to + 1 > basis.cap()) return std::nullopt;
    std::vector<int> moved = occ;
    moved[static_cast<std::size_t>(from_site - 1)] -= 1;
    moved[static_cast<std::size_t>(to_site - 1)] += 1;
    const auto target = basis.find(moved);
    if (!target) return std::nullopt;
    return HopElement{*target, std::sqrt(double(n_from) * double(n_to + 1))};
}

// Global fermionic mode ordering: site-major, up before down at each site.
inline int fermion_mode(int site, Spin spin) {
    return 2 * (site - 1) + (spin == Spin::up ? 0 : 1);
}

// Matrix element of c†_{to,spin} c_{from,spin}; the sign counts occupied modes
// strictly between the two modes in the global ordering. Returns nullopt for
// Pauli-blocked moves.
inline std::optional<HopElement> fermion_hop_element(const FockBasis& basis, int to_site,
                                                     int from_site, Spin spin,
                                                     std::size_t index) {
    if (basis.statistics() != Statistics::fermion)
        throw std::invalid_argument("fermion_hop_element: bosonic basis");
    if (to_site < 1 || to_site > basis.sites() || from_site < 1 || from_site > basis.sites())
        throw std::out_of_range("fermion_hop_element: site index out of range");
    if (std::abs(to_site - from_site) != 1)
        throw std::invalid_argument("fermion_hop_element: sites must be nearest neighbors");
    if (basis.occupation(index, from_site, spin) == 0) return std::nullopt;
    if (basis.occupation(index, to_site, spin) == 1) return std::nullopt;

    FermionConfig c = basis.fermion_config(index);
    const std::uint32_t from_bit = 1u << (from_site - 1);
    const std::uint32_t to_bit = 1u << (to_site - 1);
    FermionConfig moved = c;
    if (spin == Spin::up) {
        moved.up = (moved.up & ~from_bit) | to_bit;
    } else {
        moved.down = (moved.down & ~from_bit) | to_bit;
    }
    const auto target = basis.find(moved);
    if (!target) return std::nullopt;

    const int a = fermion_mode(to_site, spin);
    const int b = fermion_mode(from_site, spin);
    const int lo = std::min(a, b), hi = std::max(a, b);
    int between = 0;
    for (int m = lo + 1; m < hi; ++m) {
        const int s = m / 2 + 1;
        const Spin sp = (m % 2 == 0) ? Spin::up : Spin::down;
        between += basis.occupation(index, s, sp);
    }
    return HopElement{*target, (between % 2 == 0) ? 1.0 : -1.0};
}

// Annihilation operator b_site as a dense matrix. The basis must be a full
// (number-unconstrained) space so that the n -> n-1 sectors are both present.
inline Eigen::MatrixXcd boson_annihilation_matrix(const FockBasis& basis, int site) {
    if (basis.statistics() != Statistics::boson || basis.spec().n >= 0)
        throw std::invalid_argument("boson_annihilation_matrix: needs a full bosonic space");
    if (site < 1 || site > basis.sites())
        throw std::out_of_range("boson_annihilation_matrix: site out of range");
    const auto d = static_cast<Eigen::Index>(basis.dim());
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
    for (std::size_t k = 0; k < basis.dim(); ++k) {
        const auto& occ = basis.occupations(k);
        const int n = occ[static_cast<std::size_t>(site - 1)];
        if (n == 0) continue;
        std::vector<int> lowered = occ;
        lowered[static_cast<std::size_t>(site - 1)] -= 1;
        const auto target = basis.find(lowered);
        if (!target) continue;
        m(static_cast<Eigen::Index>(*target), static_cast<Eigen::Index>(k)) = std::sqrt(double(n));
    }
    return m;
}

// Annihilation operator c_{site,spin} with Jordan-Wigner sign against the
// global mode ordering, on the full fermionic space.
inline Eigen::MatrixXcd fermion_annihilation_matrix(const FockBasis& basis, int site, Spin spin) {
    if (basis.statistics() != Statistics::fermion || basis.spec().n_up >= 0)
        throw std::invalid_argument("fermion_annihilation_matrix: needs a full fermionic space");
    if (site < 1 || site > basis.sites())
        throw std::out_of_range("fermion_annihilation_matrix: site out of range");
    const auto d = static_cast<Eigen::Index>(basis.dim());
    const int mode = fermion_mode(site, spin);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
    for (std::size_t k = 0; k < basis.dim(); ++k) {
        if (basis.occupation(k, site, spin) == 0) continue;
        int preceding = 0;
        for (int p = 0; p < mode; ++p) {
            const int s = p / 2 + 1;
            const Spin sp = (p % 2 == 0) ? Spin::up : Spin::down;
            preceding += basis.occupation(k, s, sp);
        }
        FermionConfig c = basis.fermion_config(k);
        const std::uint32_t bit = 1u << (site - 1);
        if (spin == Spin::up) c.up &= ~bit; else c.down &= ~bit;
        const auto target = basis.find(c);
        if (!target) continue;
        m(static_cast<Eigen::Index>(*target), static_cast<Eigen::Index>(k)) =
            (preceding % 2 == 0) ? 1.0 : -1.0;
    }
    return m;
}

}  // namespace starkbat
