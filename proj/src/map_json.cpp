#include "rieszflow/map_json.hpp"

#include <fstream>
#include <sstream>

#include "rieszflow/error.hpp"

namespace rieszflow {

using nlohmann::json;

namespace {

const json& require(const json& j, const char* key, const char* where) {
    if (!j.is_object() || !j.contains(key)) {
        throw ParseError(std::string(where) + ": missing key \"" + key + "\"");
    }
    return j.at(key);
}

double require_number(const json& j, const char* key, const char* where) {
    const json& v = require(j, key, where);
    if (!v.is_number()) throw ParseError(std::string(where) + ": \"" + key + "\" must be a number");
    return v.get<double>();
}

DenseLayer parse_layer(const json& j) {
    const json& w = require(j, "w", "residual layer");
    const json& b = require(j, "b", "residual layer");
    if (!w.is_array() || w.empty() || !b.is_array()) throw ParseError("residual layer: w and b must be arrays");
    const std::size_t rows = w.size();
    const std::size_t cols = w.front().is_array() ? w.front().size() : 0;
    if (cols == 0) throw ParseError("residual layer: w must be a non-empty matrix");
    DenseLayer layer{Matrix(rows, cols), {}};
    for (std::size_t i = 0; i < rows; ++i) {
        if (!w[i].is_array() || w[i].size() != cols) throw ParseError("residual layer: ragged weight matrix");
        for (std::size_t k = 0; k < cols; ++k) {
            if (!w[i][k].is_number()) throw ParseError("residual layer: non-numeric weight");
            layer.weight(i, k) = w[i][k].get<double>();
        }
    }
    for (const json& v : b) {
        if (!v.is_number()) throw ParseError("residual layer: non-numeric bias");
        layer.bias.push_back(v.get<double>());
    }
    return layer;
}

}  // namespace

json map_to_json(const MapSpec& m) {
    json blocks = json::array();
    for (const Block& block : m.blocks()) {
        if (const auto* a = std::get_if<AffineBlock>(&block)) {
            blocks.push_back({{"affine", {{"alpha", a->alpha}, {"beta", a->beta}}}});
            continue;
        }
        const LipMlp& net = std::get<ResidualBlock>(block).net;
        json layers = json::array();
        for (const DenseLayer& layer : net.layers()) {
            json w = json::array();
            for (std::size_t i = 0; i < layer.weight.rows(); ++i) {
                auto row = layer.weight.row(i);
                w.push_back(json(std::vector<double>(row.begin(), row.end())));
            }
            layers.push_back({{"w", std::move(w)}, {"b", layer.bias}});
        }
        blocks.push_back({{"residual",
                           {{"lipschitz", net.target_lipschitz()},
                            {"activation", "tanh"},
                            {"layers", std::move(layers)}}}});
    }
    return {{"dimension", m.dimension()}, {"blocks", std::move(blocks)}};
}

MapSpec map_from_json(const json& j) {
    const json& dim = require(j, "dimension", "map");
    if (!dim.is_number_integer() || dim.get<long long>() < 1) throw ParseError("map: dimension must be a positive integer");
    const json& blocks_json = require(j, "blocks", "map");
    if (!blocks_json.is_array()) throw ParseError("map: blocks must be an array");

    std::vector<Block> blocks;
    for (const json& b : blocks_json) {
        if (b.is_object() && b.contains("affine")) {
            const json& a = b.at("affine");
            blocks.emplace_back(AffineBlock{require_number(a, "alpha", "affine block"),
                                            require_number(a, "beta", "affine block")});
        } else if (b.is_object() && b.contains("residual")) {
            const json& r = b.at("residual");
            const double lip = require_number(r, "lipschitz", "residual block");
            if (r.contains("activation") && r.at("activation") != "tanh") {
                throw ParseError("residual block: only \"tanh\" activation is supported");
            }
            const json& layers_json = require(r, "layers", "residual block");
            if (!layers_json.is_array()) throw ParseError("residual block: layers must be an array");
            std::vector<DenseLayer> layers;
            for (const json& l : layers_json) layers.push_back(parse_layer(l));
            blocks.emplace_back(ResidualBlock{LipMlp(std::move(layers), lip)});
        } else {
            throw ParseError("map: each block must be {\"affine\": ...} or {\"residual\": ...}");
        }
    }
    return MapSpec(std::move(blocks), dim.get<std::size_t>());
}

std::string map_to_string(const MapSpec& m) { return map_to_json(m).dump(2); }

MapSpec map_from_string(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("map JSON: ") + e.what());
    }
    return map_from_json(j);
}

void save_map(const MapSpec& m, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    out << map_to_string(m) << '\n';
    if (!out) throw Error("failed writing " + path.string());
}

MapSpec load_map(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return map_from_string(ss.str());
}

}  // namespace rieszflow
