#pragma once

#include "hlg/group.hpp"

#include "json.hpp"

namespace hlg {

// Records are keyed by the model variant (the model's name); readers check
// the variant against the model they were handed.
inline nlohmann::json point_to_json(const GroupPoint& p) {
    std::vector<double> data(p.data.data(), p.data.data() + p.data.size());
    return {{"variant", p.model->name()}, {"data", data}};
}

inline GroupPoint point_from_json(const nlohmann::json& in, const GroupModel* model) {
    if (in.at("variant").get<std::string>() != model->name())
        throw Error("point_from_json: variant mismatch: expected " + model->name());
    auto data = in.at("data").get<std::vector<double>>();
    if (static_cast<int>(data.size()) != model->point_dim())
        throw Error("point_from_json: wrong coordinate count");
    return GroupPoint{model, Eigen::Map<const Vec>(data.data(), data.size())};
}

inline nlohmann::json control_path_to_json(const ControlPath& path) {
    nlohmann::json samples = nlohmann::json::array();
    for (int i = 0; i < path.samples.rows(); ++i) {
        std::vector<double> row(path.samples.cols());
        for (int j = 0; j < path.samples.cols(); ++j) row[j] = path.samples(i, j);
        samples.push_back(row);
    }
    return {{"variant", path.model->name()},
            {"interp", path.interp == ControlPath::Interp::Constant ? "constant" : "linear"},
            {"samples", samples}};
}

inline ControlPath control_path_from_json(const nlohmann::json& in, const GroupModel* model) {
    if (in.at("variant").get<std::string>() != model->name())
        throw Error("control_path_from_json: variant mismatch: expected " + model->name());
    ControlPath path;
    path.model = model;
    std::string interp = in.at("interp").get<std::string>();
    if (interp == "constant")
        path.interp = ControlPath::Interp::Constant;
    else if (interp == "linear")
        path.interp = ControlPath::Interp::Linear;
    else
        throw Error("control_path_from_json: unknown interpolation: " + interp);
    const auto& samples = in.at("samples");
    if (samples.size() < 2) throw Error("control_path_from_json: need at least two sample rows");
    path.samples = Mat(samples.size(), model->algebra_dim());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        auto row = samples[i].get<std::vector<double>>();
        if (static_cast<int>(row.size()) != model->algebra_dim())
            throw Error("control_path_from_json: wrong algebra dimension");
        for (std::size_t j = 0; j < row.size(); ++j) path.samples(i, j) = row[j];
    }
    return path;
}

} // namespace hlg
