#include "gp/presets.hpp"

#include <cmath>

#include "gp/errors.hpp"

namespace gp {

PresetName parse_preset_name(const std::string& name) {
    if (name == "beta") return PresetName::Beta;
    if (name == "alphabeta") return PresetName::AlphaBeta;
    throw Error(ErrorCode::ParseError, "unknown preset '" + name + "' (expected beta or alphabeta)");
}

const char* preset_name(PresetName name) {
    return name == PresetName::Beta ? "beta" : "alphabeta";
}

void PresetSpec::validate() const {
    auto positive = [](double v, const char* what) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw Error(ErrorCode::InvalidModel, std::string(what) + " must be positive and finite");
        }
    };
    positive(kappa, "kappa");
    if (name == PresetName::AlphaBeta) positive(lambda, "lambda");
    if (!(temp_tau >= 0.0) || !std::isfinite(temp_tau)) {
        throw Error(ErrorCode::InvalidModel, "temp_tau must be nonnegative and finite");
    }
    z.validate();
}

namespace {

int floor_div2(int k) { return k >= 0 ? k / 2 : -((-k + 1) / 2); }

}  // namespace

Model instantiate_preset(const PresetSpec& spec, int k_lo, int k_hi) {
    spec.validate();
    if (k_hi < k_lo) throw Error(ErrorCode::InvalidModel, "empty column range");
    Model m;
    m.z = spec.z;
    auto add = [&](int k, FactorKind kind, double log_param) {
        if (std::abs(log_param) > std::log(kPresetParamBound)) {
            throw Error(ErrorCode::RangeTooWide,
                        "column " + std::to_string(k) + " parameter e^" + std::to_string(log_param) +
                            " is outside the usable range; shrink the column range or temp_tau");
        }
        m.sequence.append(k, PsiFactor{kind, std::exp(log_param)});
    };
    for (int k = k_lo; k <= k_hi; ++k) {
        if (spec.name == PresetName::Beta) {
            add(k, FactorKind::BetaPlus, std::log(spec.kappa) + k * spec.temp_tau);
        } else if (k % 2 == 0) {
            add(k, FactorKind::AlphaMinus, -(std::log(spec.kappa) + floor_div2(k) * spec.temp_tau));
        } else {
            add(k, FactorKind::BetaPlus, std::log(spec.lambda) + floor_div2(k) * spec.temp_tau);
        }
    }
    m.validate();
    return m;
}

}  // namespace gp
