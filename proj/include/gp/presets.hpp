#pragma once

#include <string>

#include "gp/model.hpp"

namespace gp {

enum class PresetName { Beta, AlphaBeta };
PresetName parse_preset_name(const std::string& name);
const char* preset_name(PresetName name);

// beta:      psi_k = 1 + kappa e^{k t} u
// alphabeta: psi_{2k} = (1 - u^{-1} / (kappa e^{k t}))^{-1},  psi_{2k+1} = 1 + lambda e^{k t} u
// where t is the inverse temperature (temp_tau).
struct PresetSpec {
    PresetName name = PresetName::Beta;
    double kappa = 1.0;
    double lambda = 1.0;
    double temp_tau = 0.0;
    SpectralParameter z{1.0, 1.5707963267948966};

    void validate() const;
};

// Parameters outside this band are rejected as RangeTooWide.
inline constexpr double kPresetParamBound = 1e8;

// Model with psi columns k_lo..k_hi.
Model instantiate_preset(const PresetSpec& spec, int k_lo, int k_hi);

}  // namespace gp
