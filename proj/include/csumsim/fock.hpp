#pragma once

// Two-photon second-quantized state over (spatial mode x polarization) with
// up to two quantum-dot spins, plus the lifting of mode-level linear maps.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "errors.hpp"
#include "linalg.hpp"

namespace csumsim {

enum Pol : int { POL_R = 0, POL_L = 1 };

inline constexpr double kPruneThreshold = 1e-15;

class ModeRegistry {
public:
    int add_spatial(const std::string& name) {
        if (lookup_.count(name)) throw ConfigError("duplicate spatial mode: " + name);
        int id = static_cast<int>(names_.size());
        lookup_[name] = id;
        names_.push_back(name);
        if (2 * static_cast<int>(names_.size()) > 62)
            throw ConfigError("mode registry too large");
        return id;
    }

    int spatial(const std::string& name) const {
        auto it = lookup_.find(name);
        if (it == lookup_.end()) throw ConfigError("unknown spatial mode: " + name);
        return it->second;
    }

    bool has(const std::string& name) const { return lookup_.count(name) != 0; }
    int spatial_count() const { return static_cast<int>(names_.size()); }
    int mode_count() const { return 2 * spatial_count(); }
    const std::string& name(int sid) const { return names_.at(sid); }

    int mode(int sid, Pol p) const { return 2 * sid + p; }
    int mode(const std::string& name, Pol p) const { return mode(spatial(name), p); }
    static int mode_spatial(int mode) { return mode / 2; }
    static Pol mode_pol(int mode) { return static_cast<Pol>(mode % 2); }

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, int> lookup_;
};

// Term key: two mode indices i <= j (6 bits each) and a spin configuration
// (one bit per QD, 0 = up, 1 = down).
using TermKey = uint32_t;

inline TermKey make_key(int i, int j, int spin) {
    if (i > j) std::swap(i, j);
    return (static_cast<uint32_t>(i) << 10) | (static_cast<uint32_t>(j) << 4) |
           static_cast<uint32_t>(spin);
}
inline int key_mode_a(TermKey k) { return static_cast<int>(k >> 10) & 0x3f; }
inline int key_mode_b(TermKey k) { return static_cast<int>(k >> 4) & 0x3f; }
inline int key_spin(TermKey k) { return static_cast<int>(k) & 0xf; }

struct FockState {
    std::shared_ptr<const ModeRegistry> reg;
    int spin_count = 0;
    // Sorted by key; keys unique.
    std::vector<std::pair<TermKey, cplx>> terms;

    cplx amplitude(TermKey k) const {
        auto it = std::lower_bound(terms.begin(), terms.end(), k,
                                   [](const auto& t, TermKey key) { return t.first < key; });
        if (it != terms.end() && it->first == k) return it->second;
        return cplx{};
    }
};

inline void sort_and_merge(std::vector<std::pair<TermKey, cplx>>& terms,
                           double prune = kPruneThreshold) {
    std::sort(terms.begin(), terms.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    size_t out = 0;
    for (size_t i = 0; i < terms.size();) {
        TermKey k = terms[i].first;
        cplx sum{};
        while (i < terms.size() && terms[i].first == k) sum += terms[i++].second;
        if (std::abs(sum.real()) > prune || std::abs(sum.imag()) > prune)
            terms[out++] = {k, sum};
    }
    terms.resize(out);
}

inline double norm_sq(const FockState& s) {
    double n = 0.0;
    for (const auto& [k, a] : s.terms) n += std::norm(a);
    return n;
}

inline cplx inner(const FockState& bra, const FockState& ket) {
    cplx v{};
    size_t i = 0, j = 0;
    while (i < bra.terms.size() && j < ket.terms.size()) {
        if (bra.terms[i].first < ket.terms[j].first) ++i;
        else if (ket.terms[j].first < bra.terms[i].first) ++j;
        else v += std::conj(bra.terms[i++].second) * ket.terms[j++].second;
    }
    return v;
}

// Normalized-overlap convention: |<ref|state>|^2 / <state|state>.
inline double fidelity(const FockState& state, const FockState& reference) {
    double n = norm_sq(state);
    if (n < 1e-300) throw UndefinedFidelityError("fidelity of a zero-norm state");
    return std::norm(inner(reference, state)) / n;
}

struct SpinCondition {
    int qd = 0;
    int value = 0; // 0 = up, 1 = down
};

struct MapBlock {
    std::optional<SpinCondition> cond;
    std::vector<int> modes; // row/column order of mat
    Mat mat;
};

// A linear map on creation operators. Blocks act on disjoint mode subsets;
// spin-conditioned blocks select which matrix applies per spin sector.
struct ModeMap {
    std::vector<MapBlock> blocks;
    bool sub_unitary = false;
    std::string label;              // netlist node kind
    std::vector<std::string> args;  // netlist arguments

    void validate() const {
        for (const auto& b : blocks) {
            if (b.mat.n != static_cast<int>(b.modes.size()))
                throw ConfigError("mode map block dimension mismatch");
            if (!sub_unitary && !is_unitary(b.mat))
                throw ConfigError("non-unitary block in a map not flagged sub_unitary");
            if (sub_unitary && op_norm(b.mat) > 1.0 + 1e-12)
                throw ConfigError("sub-unitary block with operator norm above 1");
        }
    }
};

namespace detail {

// Per spin sector, columns of the effective single-photon matrix restricted to
// the affected modes; identity elsewhere.
struct SectorColumns {
    std::vector<int> affected;                        // sorted mode ids
    std::vector<std::vector<std::pair<int, cplx>>> cols; // per affected mode: (row mode, coeff)

    int index_of(int mode) const {
        auto it = std::lower_bound(affected.begin(), affected.end(), mode);
        if (it != affected.end() && *it == mode) return static_cast<int>(it - affected.begin());
        return -1;
    }
};

inline SectorColumns build_sector(const ModeMap& m, int spin) {
    SectorColumns sc;
    for (const auto& b : m.blocks) {
        if (b.cond && (((spin >> b.cond->qd) & 1) != b.cond->value)) continue;
        for (int mode : b.modes) sc.affected.push_back(mode);
    }
    std::sort(sc.affected.begin(), sc.affected.end());
    if (std::adjacent_find(sc.affected.begin(), sc.affected.end()) != sc.affected.end())
        throw ConfigError("overlapping blocks in mode map");
    sc.cols.resize(sc.affected.size());
    for (const auto& b : m.blocks) {
        if (b.cond && (((spin >> b.cond->qd) & 1) != b.cond->value)) continue;
        int n = b.mat.n;
        for (int c = 0; c < n; ++c) {
            auto& col = sc.cols[sc.index_of(b.modes[c])];
            for (int r = 0; r < n; ++r) {
                cplx v = b.mat.at(r, c);
                if (v != cplx{}) col.emplace_back(b.modes[r], v);
            }
        }
    }
    return sc;
}

} // namespace detail

// Lift a mode-level map to the two-photon space: a†_i -> sum_j U_ji a†_j with
// bosonic symmetrization (a†_k a†_k |vac> = sqrt(2)|2_k>).
inline FockState apply(const FockState& state, const ModeMap& map) {
    const double rt2 = std::sqrt(2.0);
    const int max_mode = state.reg->mode_count();
    for (const auto& b : map.blocks)
        for (int m : b.modes)
            if (m < 0 || m >= max_mode) throw ConfigError("mode map references unregistered mode");

    std::array<std::optional<detail::SectorColumns>, 4> sectors;
    FockState out;
    out.reg = state.reg;
    out.spin_count = state.spin_count;
    out.terms.reserve(state.terms.size() * 2);

    for (const auto& [key, amp] : state.terms) {
        int i = key_mode_a(key), j = key_mode_b(key), spin = key_spin(key);
        auto& sec = sectors[spin & 3];
        if (!sec) sec = detail::build_sector(map, spin);
        int ci = sec->index_of(i), cj = sec->index_of(j);
        if (ci < 0 && cj < 0) {
            out.terms.emplace_back(key, amp);
            continue;
        }
        std::vector<std::pair<int, cplx>> unit;
        auto cols_of = [&](int mode, int idx) -> const std::vector<std::pair<int, cplx>>& {
            if (idx >= 0) return sec->cols[idx];
            unit.assign(1, {mode, cplx{1.0}});
            return unit;
        };
        // Work in creation-operator coefficient form.
        cplx base = (i == j) ? amp / rt2 : amp;
        const auto cols_i = cols_of(i, ci); // copy: `unit` is reused
        const auto& cols_j = (i == j) ? cols_i : cols_of(j, cj);
        for (const auto& [k, ck] : cols_i)
            for (const auto& [l, cl] : cols_j) {
                cplx c = base * ck * cl;
                if (k == l) c *= rt2;
                out.terms.emplace_back(make_key(k, l, spin), c);
            }
    }
    sort_and_merge(out.terms);
    return out;
}

// Input product state: polarization amplitudes over {LL, LR, RL, RR} for the
// (M, N) photon pair, spatial amplitudes over {m1n1, m1n2, m2n1, m2n2}, and
// every declared spin initialized to |+>.
inline FockState build_input(const std::array<cplx, 4>& control_amps,
                             const std::array<cplx, 4>& target_amps, int spin_count,
                             std::shared_ptr<const ModeRegistry> reg,
                             const std::array<std::string, 4>& io_modes = {"m1", "m2", "n1",
                                                                           "n2"}) {
    if (spin_count < 0 || spin_count > 2) throw ConfigError("spin count must be 0..2");
    auto vec_norm = [](const std::array<cplx, 4>& v) {
        double n = 0.0;
        for (auto& c : v) n += std::norm(c);
        return n;
    };
    if (std::abs(vec_norm(control_amps) - 1.0) > 1e-10 ||
        std::abs(vec_norm(target_amps) - 1.0) > 1e-10)
        throw NormalizationError("input amplitude vectors must have unit norm");

    int m[2] = {reg->spatial(io_modes[0]), reg->spatial(io_modes[1])};
    int n[2] = {reg->spatial(io_modes[2]), reg->spatial(io_modes[3])};

    FockState s;
    s.reg = std::move(reg);
    s.spin_count = spin_count;
    int spin_dim = 1 << spin_count;
    double spin_amp = 1.0 / std::sqrt(static_cast<double>(spin_dim));
    // control index: {LL, LR, RL, RR} over (pol_M, pol_N)
    for (int c = 0; c < 4; ++c) {
        Pol pm = (c & 2) ? POL_R : POL_L;
        Pol pn = (c & 1) ? POL_R : POL_L;
        for (int t = 0; t < 4; ++t) {
            cplx a = control_amps[c] * target_amps[t];
            if (a == cplx{}) continue;
            int mi = s.reg->mode(m[(t >> 1) & 1], pm);
            int nj = s.reg->mode(n[t & 1], pn);
            for (int spin = 0; spin < spin_dim; ++spin)
                s.terms.emplace_back(make_key(mi, nj, spin), a * spin_amp);
        }
    }
    sort_and_merge(s.terms);
    return s;
}

// Occupation predicate input: the two occupied modes of a term (i <= j).
using PatternPredicate = std::function<bool(int, int)>;

inline std::pair<FockState, double> postselect(const FockState& s, const PatternPredicate& keep) {
    FockState kept;
    kept.reg = s.reg;
    kept.spin_count = s.spin_count;
    double prob = 0.0;
    for (const auto& [k, a] : s.terms) {
        if (keep(key_mode_a(k), key_mode_b(k))) {
            kept.terms.emplace_back(k, a);
            prob += std::norm(a);
        }
    }
    return {std::move(kept), prob};
}

struct MeasureBranch {
    int outcome = 0; // 0 -> +, 1 -> -
    FockState state; // unnormalized, measured spin reset to |+>
    double probability = 0.0;
};

// Projective measurement of one QD spin in the +/- basis. The measured spin is
// re-initialized to |+> in the returned branch states.
inline std::vector<MeasureBranch> measure_spin(const FockState& s, int qd) {
    if (qd < 0 || qd >= s.spin_count) throw ConfigError("measured spin index out of range");
    const double rt2inv = 1.0 / std::sqrt(2.0);
    std::vector<MeasureBranch> branches(2);
    for (int b = 0; b < 2; ++b) {
        branches[b].outcome = b;
        branches[b].state.reg = s.reg;
        branches[b].state.spin_count = s.spin_count;
    }
    int bit = 1 << qd;
    for (const auto& [k, a] : s.terms) {
        int spin = key_spin(k);
        TermKey up_key = k & ~static_cast<TermKey>(bit);
        cplx up, down;
        if (spin & bit) {
            // only process a down-term here if its up partner is absent
            if (s.amplitude(up_key) != cplx{}) continue;
            up = cplx{};
            down = a;
        } else {
            up = a;
            down = s.amplitude(k | static_cast<TermKey>(bit));
        }
        cplx plus = (up + down) * rt2inv;
        cplx minus = (up - down) * rt2inv;
        cplx proj[2] = {plus, minus};
        for (int b = 0; b < 2; ++b) {
            if (proj[b] == cplx{}) continue;
            branches[b].probability += std::norm(proj[b]);
            // reset: amplitude spread back over up/down with |+> weights
            branches[b].state.terms.emplace_back(up_key, proj[b] * rt2inv);
            branches[b].state.terms.emplace_back(up_key | static_cast<TermKey>(bit),
                                                 proj[b] * rt2inv);
        }
    }
    for (auto& b : branches) sort_and_merge(b.state.terms);
    return branches;
}

} // namespace csumsim
