#include "gp/model.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gp/errors.hpp"

namespace gp {

using nlohmann::json;

void Model::validate() const {
    sequence.validate();
    z.validate();
    quadrature.validate();
}

Model parse_model(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
    try {
        int version = doc.value("version", 1);
        if (version != 1) {
            throw Error(ErrorCode::ParseError, "unsupported model version " + std::to_string(version));
        }
        Model m;
        const json& z = doc.at("z");
        m.z.modulus = z.value("modulus", 1.0);
        m.z.argument = z.at("argument").get<double>();
        for (const json& col : doc.value("columns", json::array())) {
            int k = col.at("k").get<int>();
            for (const json& f : col.at("factors")) {
                m.sequence.append(k, PsiFactor{parse_factor_kind(f.at("kind").get<std::string>()),
                                               f.at("param").get<double>()});
            }
        }
        if (doc.contains("quadrature")) {
            const json& q = doc["quadrature"];
            m.quadrature.abs_tol = q.value("abs_tol", m.quadrature.abs_tol);
            m.quadrature.nodes_per_panel = q.value("nodes_per_panel", m.quadrature.nodes_per_panel);
            m.quadrature.max_panels = q.value("max_panels", m.quadrature.max_panels);
        }
        m.validate();
        return m;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
}

Model load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open model file " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_model(buffer.str());
}

std::string model_to_json(const Model& model) {
    json doc;
    doc["version"] = 1;
    doc["z"] = {{"modulus", model.z.modulus}, {"argument", model.z.argument}};
    json columns = json::array();
    for (const auto& [k, factors] : model.sequence.columns()) {
        json fs = json::array();
        for (const PsiFactor& f : factors) {
            fs.push_back({{"kind", factor_kind_name(f.kind)}, {"param", f.param}});
        }
        columns.push_back({{"k", k}, {"factors", fs}});
    }
    doc["columns"] = columns;
    doc["quadrature"] = {{"abs_tol", model.quadrature.abs_tol},
                         {"nodes_per_panel", model.quadrature.nodes_per_panel},
                         {"max_panels", model.quadrature.max_panels}};
    return doc.dump(2) + "\n";
}

void save_model(const Model& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::ParseError, "cannot write model file " + path);
    out << model_to_json(model);
}

}  // namespace gp
