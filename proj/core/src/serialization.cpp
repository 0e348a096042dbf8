#include "noisynet/serialization.hpp"

#include <fstream>
#include <sstream>
#include <utility>

#include <nlohmann/json.hpp>

#include "noisynet/error.hpp"
#include "noisynet/format.hpp"

namespace noisynet {
namespace {

using nlohmann::json;

void append_array(std::string& out, std::span<const double> values) {
    out += '[';
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) out += ',';
        out += format_double(values[i]);
    }
    out += ']';
}

const json& field(const json& obj, const char* key, const std::string& where) {
    if (!obj.is_object()) {
        throw ParseError(where + ": expected an object");
    }
    const auto it = obj.find(key);
    if (it == obj.end()) {
        throw ParseError(where + ": missing field \"" + key + "\"");
    }
    return *it;
}

std::uint64_t as_count(const json& v, const std::string& where) {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
        throw ParseError(where + ": expected a nonnegative integer");
    }
    return v.get<std::uint64_t>();
}

std::vector<double> as_numbers(const json& v, const std::string& where) {
    if (!v.is_array()) {
        throw ParseError(where + ": expected an array of numbers");
    }
    std::vector<double> out;
    out.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number()) {
            throw ParseError(where + "[" + std::to_string(i) + "]: expected a number");
        }
        out.push_back(v[i].get<double>());
    }
    return out;
}

TransformRecord parse_transform(const json& t, const std::string& where) {
    TransformRecord rec;
    const json& kind = field(t, "kind", where);
    if (!kind.is_string()) throw ParseError(where + ".kind: expected a string");
    rec.kind = kind.get<std::string>();
    rec.layer = as_count(field(t, "layer", where), where + ".layer");
    if (rec.kind == "pool") {
        rec.m = as_count(field(t, "m", where), where + ".m");
    } else if (rec.kind == "ghost") {
        const json& variant = field(t, "variant", where);
        if (!variant.is_string()) throw ParseError(where + ".variant: expected a string");
        rec.variant = variant.get<std::string>();
        if (const auto it = t.find("B"); it != t.end()) {
            if (!it->is_number()) throw ParseError(where + ".B: expected a number");
            rec.bias_magnitude = it->get<double>();
        }
    } else {
        throw ParseError(where + ".kind: unknown transform \"" + rec.kind + "\"");
    }
    return rec;
}

}  // namespace

std::string to_json(const Network& net, const WeightMeta& meta) {
    std::string out = "{\"layers\":[";
    for (std::size_t i = 0; i < net.depth(); ++i) {
        const Layer& l = net.layer(i);
        if (i > 0) out += ',';
        out += "\n{\"rows\":" + std::to_string(l.fan_in()) + ",\"cols\":" + std::to_string(l.fan_out()) +
               ",\"activation\":\"" + std::string(to_string(l.activation)) + "\",\"weights\":";
        append_array(out, l.weights.data());
        out += ",\"biases\":";
        append_array(out, l.biases);
        out += '}';
    }
    out += "],\n\"meta\":{\"seed\":" + std::to_string(meta.seed) + ",\"epochs\":" + std::to_string(meta.epochs);
    if (!meta.transforms.empty()) {
        json arr = json::array();
        for (const TransformRecord& t : meta.transforms) {
            json j{{"kind", t.kind}, {"layer", t.layer}};
            if (t.kind == "pool") {
                j["m"] = t.m;
            } else {
                j["variant"] = t.variant;
                if (t.variant == "III") j["B"] = t.bias_magnitude;
            }
            arr.push_back(std::move(j));
        }
        out += ",\"transform\":" + arr.dump();
    }
    out += "}}\n";
    return out;
}

WeightFile from_json(const std::string& text, const std::string& source) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(source + ": malformed JSON at byte " + std::to_string(e.byte) + ": " + e.what());
    }
    const json& jlayers = field(doc, "layers", source);
    if (!jlayers.is_array() || jlayers.empty()) {
        throw ParseError(source + ": \"layers\" must be a nonempty array");
    }
    std::vector<Layer> layers;
    for (std::size_t i = 0; i < jlayers.size(); ++i) {
        const std::string where = source + ": layers[" + std::to_string(i) + "]";
        const json& jl = jlayers[i];
        const auto rows = as_count(field(jl, "rows", where), where + ".rows");
        const auto cols = as_count(field(jl, "cols", where), where + ".cols");
        auto weights = as_numbers(field(jl, "weights", where), where + ".weights");
        auto biases = as_numbers(field(jl, "biases", where), where + ".biases");
        const json& jact = field(jl, "activation", where);
        const auto act = jact.is_string() ? parse_activation(jact.get<std::string>()) : std::nullopt;
        if (!act) {
            throw ParseError(where + ".activation: unknown activation " + jact.dump());
        }
        if (weights.size() != rows * cols) {
            throw ShapeError(where + ": weights has " + std::to_string(weights.size()) + " entries, expected rows*cols = " +
                             std::to_string(rows * cols));
        }
        if (biases.size() != cols) {
            throw ShapeError(where + ": biases length " + std::to_string(biases.size()) + " != cols " +
                             std::to_string(cols));
        }
        layers.push_back(Layer{Matrix(rows, cols, std::move(weights)), std::move(biases), *act});
    }

    WeightFile file;
    try {
        file.network = Network(std::move(layers));
    } catch (const ShapeError& e) {
        throw ShapeError(source + ": " + e.what());
    }
    if (const auto it = doc.find("meta"); it != doc.end()) {
        const std::string where = source + ": meta";
        if (!it->is_object()) throw ParseError(where + ": expected an object");
        if (it->contains("seed")) file.meta.seed = as_count((*it)["seed"], where + ".seed");
        if (it->contains("epochs")) file.meta.epochs = as_count((*it)["epochs"], where + ".epochs");
        if (const auto t = it->find("transform"); t != it->end()) {
            if (t->is_object()) {
                file.meta.transforms.push_back(parse_transform(*t, where + ".transform"));
            } else if (t->is_array()) {
                for (std::size_t k = 0; k < t->size(); ++k) {
                    file.meta.transforms.push_back(
                        parse_transform((*t)[k], where + ".transform[" + std::to_string(k) + "]"));
                }
            } else {
                throw ParseError(where + ".transform: expected an object or array");
            }
        }
    }
    return file;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return std::move(ss).str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& bytes) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw Error("cannot write " + tmp.string());
        }
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out) {
            throw Error("write failed for " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

void save(const std::filesystem::path& path, const Network& net, const WeightMeta& meta) {
    write_file_atomic(path, to_json(net, meta));
}

WeightFile load(const std::filesystem::path& path) { return from_json(read_file(path), path.string()); }

}  // namespace noisynet
