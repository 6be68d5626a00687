#pragma once

#include <string>

#include "gp/psi.hpp"
#include "gp/quadrature.hpp"

namespace gp {

struct Model {
    PsiSequence sequence;
    SpectralParameter z;
    QuadratureSpec quadrature;

    void validate() const;
    bool operator==(const Model&) const = default;
};

Model load_model(const std::string& path);
Model parse_model(const std::string& json_text);
std::string model_to_json(const Model& model);
void save_model(const Model& model, const std::string& path);

}  // namespace gp
