#pragma once

// One-sided microcavity + negatively charged quantum dot: stationary
// reflection coefficients, spin-selective scattering, and the heralded
// error-rejecting unit.

#include <cmath>
#include <complex>
#include <optional>

#include "elements.hpp"
#include "fock.hpp"

namespace csumsim {

struct CavityParams {
    double g = 2.4;      // cavity-trion coupling, units of kappa
    double kappa = 1.0;  // directional coupling rate (reference unit)
    double kappa_s = 0.0; // side leakage rate, units of kappa
    double gamma = 0.1;  // trion spontaneous emission rate, units of kappa
    double omega = 0.0;  // photon frequency
    double omega_c = 0.0; // cavity resonance
    double omega_x = 0.0; // trion transition

    static CavityParams resonant(double g_over_kappa, double kappas_over_kappa,
                                 double gamma_over_kappa) {
        CavityParams p;
        p.g = g_over_kappa;
        p.kappa_s = kappas_over_kappa;
        p.gamma = gamma_over_kappa;
        return p;
    }

    void validate() const {
        if (!(g > 0.0 && kappa > 0.0 && gamma > 0.0 && kappa_s >= 0.0) ||
            !std::isfinite(g + kappa + kappa_s + gamma + omega + omega_c + omega_x))
            throw ConfigError("invalid cavity parameters");
    }
};

// r_e(omega); e = 1 for the coupled (hot) cavity, e = 0 for uncoupled.
inline cplx reflection_coeff(int e, const CavityParams& p) {
    p.validate();
    cplx f(p.gamma * p.kappa / 2.0, -(p.omega - p.omega_x));
    cplx denom = static_cast<double>(e) * p.g * p.g * p.kappa * p.kappa +
                 (cplx(0.0, -(p.omega - p.omega_c)) + cplx(p.kappa / 2.0 + p.kappa_s * p.kappa / 2.0, 0.0)) * f;
    if (std::abs(denom) < 1e-14) throw SingularParameterError("reflection coefficient pole");
    return 1.0 - p.kappa * f / denom;
}

struct HeraldAmplitudes {
    cplx A, B;
};

inline HeraldAmplitudes herald_amplitudes(const CavityParams& p) {
    cplx r1 = reflection_coeff(1, p);
    cplx r0 = reflection_coeff(0, p);
    return {(r1 - r0) / 2.0, (r1 + r0) / 2.0};
}

// Spin-selective reflection on the listed spatial modes:
//   |L>|up> -> r1, |L>|down> -> r0, |R>|down> -> r1, |R>|up> -> r0.
// Realistic coefficients make this sub-unitary (norm decay = photon loss).
inline ModeMap scatter_map(const ModeRegistry& reg, int qd, const std::vector<int>& sids, cplx r1,
                           cplx r0, std::vector<std::string> args) {
    ModeMap map;
    map.sub_unitary = std::abs(std::abs(r1) - 1.0) > 1e-12 || std::abs(std::abs(r0) - 1.0) > 1e-12;
    map.label = "scatter";
    map.args = std::move(args);
    for (int sid : sids) {
        for (int v = 0; v < 2; ++v) { // v: 0 = up, 1 = down
            cplx rl = (v == 0) ? r1 : r0;
            cplx rr = (v == 0) ? r0 : r1;
            map.blocks.push_back({SpinCondition{qd, v},
                                  {reg.mode(sid, POL_R), reg.mode(sid, POL_L)},
                                  Mat(2, {rr, 0, 0, rl})});
        }
    }
    map.validate();
    return map;
}

inline ModeMap scatter(const ModeRegistry& reg, int qd, const std::vector<int>& sids,
                       const std::optional<CavityParams>& params) {
    cplx r1 = 1.0, r0 = -1.0; // ideal coefficients
    if (params) {
        r1 = reflection_coeff(1, *params);
        r0 = reflection_coeff(0, *params);
    }
    std::vector<std::string> args = {std::to_string(qd)};
    for (int sid : sids) args.push_back(reg.name(sid));
    return scatter_map(reg, qd, sids, r1, r0, std::move(args));
}

// Heralded unit on a spatial mode carrying an |L> photon: H plate, cavity
// scattering, H plate, CPBS routing the faulty |L> component to a herald
// detector, a pi phase plate, then an X plate. The surviving branch realizes
// |L>|+> -> A|L>|-> with the herald click carrying amplitude B.
inline std::vector<ModeMap> heralded_unit(const ModeRegistry& reg, int qd, int sid, int herald_sid,
                                          const std::optional<CavityParams>& params) {
    std::vector<ModeMap> pipeline;
    pipeline.push_back(elem::hadamard_h(reg, sid));
    pipeline.push_back(scatter(reg, qd, {sid}, params));
    pipeline.push_back(elem::hadamard_h(reg, sid));
    pipeline.push_back(elem::cpbs_lroute(reg, sid, herald_sid));
    pipeline.push_back(elem::phase_pi(reg, sid));
    pipeline.push_back(elem::waveplate_x(reg, sid));
    return pipeline;
}

} // namespace csumsim
