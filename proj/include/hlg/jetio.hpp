#pragma once

#include "hlg/jet.hpp"

#include "json.hpp"

namespace hlg {

// Text record {order, source, target, blocks:[{order,n,m,coeffs}]} with
// coefficients in canonical nondecreasing multi-index order, row per output.
inline nlohmann::json jet_to_json(const Jet<double>& j) {
    nlohmann::json out;
    out["order"] = j.order;
    out["source"] = j.source;
    out["target"] = j.target;
    out["blocks"] = nlohmann::json::array();
    for (const auto& b : j.blocks)
        out["blocks"].push_back({{"order", b.order}, {"n", b.n}, {"m", b.m}, {"coeffs", b.coeffs}});
    return out;
}

inline Jet<double> jet_from_json(const nlohmann::json& in) {
    Jet<double> j;
    j.order = in.at("order").get<int>();
    j.source = in.at("source").get<std::vector<double>>();
    j.target = in.at("target").get<std::vector<double>>();
    for (const auto& jb : in.at("blocks")) {
        SymBlock<double> b(jb.at("order").get<int>(), jb.at("n").get<int>(), jb.at("m").get<int>());
        b.coeffs = jb.at("coeffs").get<std::vector<double>>();
        if (b.coeffs.size() != static_cast<std::size_t>(b.m) * b.index_count())
            throw Error("jet_from_json: coefficient count mismatch");
        j.blocks.push_back(std::move(b));
    }
    j.validate();
    return j;
}

} // namespace hlg
