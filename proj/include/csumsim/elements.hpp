#pragma once

// ModeMap constructors for the passive optical elements: polarizing beam
// splitters (ideal and imperfect), partial beam splitters, wave plates,
// phase plates, mode swaps, and the wave-form corrector.

#include <cmath>
#include <string>
#include <vector>

#include "fock.hpp"

namespace csumsim {

struct ImperfectionParams {
    double p = 0.0;     // polarization extinction ratio
    double phi = 0.0;   // mirror-mount misalignment angle
    double delta = 0.0; // MZI arm phase deviation
    double xi = 0.0;    // splitter transmission-ratio imperfection

    bool ideal() const { return p == 0.0 && phi == 0.0 && delta == 0.0 && xi == 0.0; }
    void validate() const {
        if (!(std::isfinite(p) && std::isfinite(phi) && std::isfinite(delta) &&
              std::isfinite(xi)) ||
            p < 0.0 || xi < 0.0)
            throw ConfigError("invalid imperfection parameters");
    }
};

namespace elem {

inline std::string fmt_double(double v);

// Polarization-space map on a single spatial mode; rows/columns ordered (R, L).
inline ModeMap pol_map(const ModeRegistry& reg, int sid, const Mat& m2, bool sub_unitary,
                       std::string label, std::vector<std::string> args) {
    ModeMap map;
    map.sub_unitary = sub_unitary;
    map.label = std::move(label);
    map.args = std::move(args);
    map.blocks.push_back({std::nullopt, {reg.mode(sid, POL_R), reg.mode(sid, POL_L)}, m2});
    map.validate();
    return map;
}

// Spatial-space map applied identically to both polarizations.
inline ModeMap spatial_map(const ModeRegistry& reg, const std::vector<int>& sids, const Mat& m,
                           bool sub_unitary, std::string label, std::vector<std::string> args) {
    ModeMap map;
    map.sub_unitary = sub_unitary;
    map.label = std::move(label);
    map.args = std::move(args);
    for (Pol p : {POL_R, POL_L}) {
        MapBlock b;
        for (int sid : sids) b.modes.push_back(reg.mode(sid, p));
        b.mat = m;
        map.blocks.push_back(std::move(b));
    }
    map.validate();
    return map;
}

// X plate: |L> <-> |R> on one spatial mode.
inline ModeMap waveplate_x(const ModeRegistry& reg, int sid) {
    return pol_map(reg, sid, Mat(2, {0, 1, 1, 0}), false, "x", {reg.name(sid)});
}

// H plate: |R> -> (|R>+|L>)/sqrt2, |L> -> (|R>-|L>)/sqrt2.
inline ModeMap hadamard_h(const ModeRegistry& reg, int sid) {
    double r = 1.0 / std::sqrt(2.0);
    return pol_map(reg, sid, Mat(2, {r, r, r, -r}), false, "h", {reg.name(sid)});
}

inline ModeMap phase(const ModeRegistry& reg, int sid, double theta) {
    cplx e = std::exp(cplx(0.0, theta));
    return pol_map(reg, sid, Mat(2, {e, 0, 0, e}), false, "phase",
                   {reg.name(sid), fmt_double(theta)});
}

inline ModeMap phase_pi(const ModeRegistry& reg, int sid) {
    ModeMap m = pol_map(reg, sid, Mat(2, {-1, 0, 0, -1}), false, "phase_pi", {reg.name(sid)});
    return m;
}

// Wave-form corrector: scalar attenuation A on both polarizations.
inline ModeMap wfc(const ModeRegistry& reg, int sid, cplx a) {
    if (std::abs(a) > 1.0 + 1e-12) throw ConfigError("wfc amplitude above 1");
    return pol_map(reg, sid, Mat(2, {a, 0, 0, a}), true, "wfc",
                   {reg.name(sid), fmt_double(a.real()), fmt_double(a.imag())});
}

inline ModeMap swap(const ModeRegistry& reg, int sa, int sb) {
    return spatial_map(reg, {sa, sb}, Mat(2, {0, 1, 1, 0}), false, "swap",
                       {reg.name(sa), reg.name(sb)});
}

// CPBS acting as a controlled spatial exchange: the R components of the two
// ports are swapped, L components pass through.
inline ModeMap cpbs_exchange(const ModeRegistry& reg, int sa, int sb) {
    ModeMap map;
    map.label = "cpbs_exchange";
    map.args = {reg.name(sa), reg.name(sb)};
    map.blocks.push_back(
        {std::nullopt, {reg.mode(sa, POL_R), reg.mode(sb, POL_R)}, Mat(2, {0, 1, 1, 0})});
    map.validate();
    return map;
}

// CPBS splitting one port by polarization: R -> r_out, L -> l_out. Applying it
// again on the same ports merges back (the permutation is an involution).
inline ModeMap cpbs_split(const ModeRegistry& reg, int src, int r_out, int l_out) {
    ModeMap map;
    map.label = "cpbs_split";
    map.args = {reg.name(src), reg.name(r_out), reg.name(l_out)};
    map.blocks.push_back(
        {std::nullopt, {reg.mode(src, POL_R), reg.mode(r_out, POL_R)}, Mat(2, {0, 1, 1, 0})});
    map.blocks.push_back(
        {std::nullopt, {reg.mode(src, POL_L), reg.mode(l_out, POL_L)}, Mat(2, {0, 1, 1, 0})});
    map.validate();
    return map;
}

// CPBS routing only the L component of `src` into `l_out` (herald detectors).
inline ModeMap cpbs_lroute(const ModeRegistry& reg, int src, int l_out) {
    ModeMap map;
    map.label = "cpbs_lroute";
    map.args = {reg.name(src), reg.name(l_out)};
    map.blocks.push_back(
        {std::nullopt, {reg.mode(src, POL_L), reg.mode(l_out, POL_L)}, Mat(2, {0, 1, 1, 0})});
    map.validate();
    return map;
}

enum class BsConvention { symmetric, rotation };

// Partial beam splitter on a spatial-mode pair, polarization independent.
// symmetric: [[sqrt r, sqrt(1-r)], [sqrt(1-r), -sqrt r]] (Hadamard-like at r=1/2)
// rotation:  [[sqrt r, sqrt(1-r)], [-sqrt(1-r), sqrt r]]
inline ModeMap beam_splitter(const ModeRegistry& reg, double r, int sa, int sb,
                             BsConvention conv = BsConvention::symmetric) {
    if (!(r > 0.0 && r < 1.0)) throw ConfigError("beam splitter reflectivity out of (0,1)");
    double sr = std::sqrt(r), st = std::sqrt(1.0 - r);
    Mat m = (conv == BsConvention::symmetric) ? Mat(2, {sr, st, st, -sr})
                                              : Mat(2, {sr, st, -st, sr});
    return spatial_map(reg, {sa, sb}, m, false,
                       conv == BsConvention::symmetric ? "bs_sym" : "bs_rot",
                       {fmt_double(r), reg.name(sa), reg.name(sb)});
}

inline ModeMap bs_half(const ModeRegistry& reg, int sa, int sb) {
    return beam_splitter(reg, 0.5, sa, sb, BsConvention::symmetric);
}

// 1/3-reflectivity splitter in the rotation convention: the first port keeps
// amplitude +sqrt(1/3); used for the balancing arms and the interaction node.
inline ModeMap bs_third(const ModeRegistry& reg, int sa, int sb) {
    return beam_splitter(reg, 1.0 / 3.0, sa, sb, BsConvention::rotation);
}

// Imperfect CPBS in polarization space: U1 = Up * Uphi, basis (R, L).
inline Mat cpbs_imperfect_mat(double p, double phi) {
    double s = 1.0 / std::sqrt(1.0 + p), rp = std::sqrt(p);
    Mat up(2, {s, s * rp, -s * rp, s});
    Mat uphi(2, {std::cos(phi), std::sin(phi), -std::sin(phi), std::cos(phi)});
    return mul(up, uphi);
}

inline ModeMap cpbs_imperfect(const ModeRegistry& reg, int sid, double p, double phi) {
    if (p < 0.0) throw ConfigError("extinction ratio must be non-negative");
    return pol_map(reg, sid, cpbs_imperfect_mat(p, phi), false, "cpbs_pol",
                   {reg.name(sid), fmt_double(p), fmt_double(phi)});
}

// Inverse-transformation CPBS: U'_p, basis (R, L).
inline Mat cpbs_inverse_imperfect_mat(double p) {
    double s = 1.0 / std::sqrt(1.0 + p), rp = std::sqrt(p);
    return Mat(2, {s, s * rp, -s * rp, s});
}

inline ModeMap cpbs_inverse_imperfect(const ModeRegistry& reg, int sid, double p) {
    if (p < 0.0) throw ConfigError("extinction ratio must be non-negative");
    return pol_map(reg, sid, cpbs_inverse_imperfect_mat(p), false, "cpbs_pol_inv",
                   {reg.name(sid), fmt_double(p)});
}

// Imperfect balanced splitter with i off-diagonals.
inline Mat beam_splitter_imperfect_mat(double xi) {
    double d = std::sqrt(xi * xi + 2.0 * xi + 2.0);
    double a = (1.0 + xi) / d;
    cplx b(0.0, 1.0 / d);
    return Mat(2, {a, b, b, a});
}

inline ModeMap beam_splitter_imperfect(const ModeRegistry& reg, double xi, int sa, int sb) {
    if (xi < 0.0) throw ConfigError("transmission imperfection must be non-negative");
    return spatial_map(reg, {sa, sb}, beam_splitter_imperfect_mat(xi), false, "bs_imp",
                       {fmt_double(xi), reg.name(sa), reg.name(sb)});
}

// MZI assembled from two imperfect splitters around a phase of (pi - delta) on
// the first arm.
inline Mat mzi_mat(double delta, double xi) {
    Mat bs = beam_splitter_imperfect_mat(xi);
    cplx e = std::exp(cplx(0.0, M_PI - delta));
    Mat ph(2, {e, 0, 0, 1});
    return mul(bs, mul(ph, bs));
}

inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace elem
} // namespace csumsim
