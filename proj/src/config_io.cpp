// Copyright 2026 The wirecons Authors.
// SPDX-License-Identifier: Apache-2.0

// JSON form of ExperimentConfig and SweepSpec.
//
//   {
//     "topology":  {"field_side": 1.0, "lambda": 400, "comm_range": 100,
//                   "r_cls": 0.5, "cluster_side": 200},
//     "fault":     {"p_fail": 0.05},
//     "mechanism": {"kind": "PoC", "r_v": 0.2, "n_w": 50, "r_sfl": 0.9, "delta_sfl": 0},
//     "latency":   {"tau_round": 0.1, "c_agg": 0.01,
//                   "c_mech": {"PoW": 1.0, "PoS": 0.2, "PoC": 0.2}, "theta": 0.666667},
//     "n_tx": 10, "k_rounds": 1000, "repetitions": 20, "seed": 1
//   }
//
// A sweep wraps a config as "base" and adds "axes" (object, in file order)
// and an optional "cap". An axis value is a scalar for that field, or an
// object of field assignments for compound axes.

#include <cmath>

#include <json.hpp>

#include "wirecons/error.hpp"
#include "wirecons/experiment.hpp"

namespace wirecons {

namespace {

using json = nlohmann::ordered_json;

void reject_unknown(const json& obj, const std::string& where, std::initializer_list<std::string_view> known)
{
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool found = false;
        for (auto k : known) {
            found = found || it.key() == k;
        }
        if (!found) {
            throw ConfigError(where.empty() ? it.key() : where + "." + it.key(), "unknown field");
        }
    }
}

const json& require_object(const json& parent, const std::string& key)
{
    const auto& v = parent.at(key);
    if (!v.is_object()) {
        throw ConfigError(key, "expected an object");
    }
    return v;
}

double get_number(const json& obj, const std::string& key, const std::string& path, double fallback)
{
    if (!obj.contains(key)) {
        return fallback;
    }
    const auto& v = obj.at(key);
    if (!v.is_number()) {
        throw ConfigError(path, "expected a number");
    }
    return v.get<double>();
}

std::uint64_t get_count(const json& obj, const std::string& key, const std::string& path, std::uint64_t fallback)
{
    if (!obj.contains(key)) {
        return fallback;
    }
    const auto& v = obj.at(key);
    if (v.is_number_unsigned()) {
        return v.get<std::uint64_t>();
    }
    if (v.is_number_integer()) {
        throw ConfigError(path, "must be non-negative");
    }
    if (v.is_number_float()) {
        const double d = v.get<double>();
        if (d >= 0.0 && d == std::floor(d) && d < 9.0e15) {
            return static_cast<std::uint64_t>(d);
        }
    }
    throw ConfigError(path, "expected a non-negative integer");
}

ExperimentConfig config_from_json(const json& doc)
{
    if (!doc.is_object()) {
        throw ConfigError("config", "expected a JSON object");
    }
    reject_unknown(doc, "",
                   {"topology", "fault", "mechanism", "latency", "n_tx", "k_rounds", "repetitions", "seed"});
    ExperimentConfig c;

    if (doc.contains("topology")) {
        const auto& t = require_object(doc, "topology");
        reject_unknown(t, "topology", {"field_side", "lambda", "comm_range", "r_cls", "cluster_side"});
        c.topology.field_side = get_number(t, "field_side", "topology.field_side", c.topology.field_side);
        c.topology.lambda = get_number(t, "lambda", "topology.lambda", c.topology.lambda);
        c.topology.comm_range = get_number(t, "comm_range", "topology.comm_range", c.topology.comm_range);
        c.topology.r_cls = get_number(t, "r_cls", "topology.r_cls", c.topology.r_cls);
        c.topology.cluster_side = get_number(t, "cluster_side", "topology.cluster_side", c.topology.cluster_side);
    }
    if (doc.contains("fault")) {
        const auto& f = require_object(doc, "fault");
        reject_unknown(f, "fault", {"p_fail"});
        c.fault.p_fail = get_number(f, "p_fail", "fault.p_fail", c.fault.p_fail);
    }
    if (doc.contains("mechanism")) {
        const auto& m = require_object(doc, "mechanism");
        reject_unknown(m, "mechanism", {"kind", "r_v", "n_w", "r_sfl", "delta_sfl"});
        if (m.contains("kind")) {
            if (!m.at("kind").is_string()) {
                throw ConfigError("mechanism.kind", "expected one of PoW, PoS, PoC");
            }
            const auto name = m.at("kind").get<std::string>();
            const auto kind = parse_mechanism(name);
            if (!kind) {
                throw ConfigError("mechanism.kind", "unknown mechanism '" + name + "'");
            }
            c.mechanism.kind = *kind;
        }
        c.mechanism.r_v = get_number(m, "r_v", "mechanism.r_v", c.mechanism.r_v);
        c.mechanism.n_w = get_count(m, "n_w", "mechanism.n_w", c.mechanism.n_w);
        c.mechanism.r_sfl = get_number(m, "r_sfl", "mechanism.r_sfl", c.mechanism.r_sfl);
        c.mechanism.delta_sfl = get_count(m, "delta_sfl", "mechanism.delta_sfl", c.mechanism.delta_sfl);
    }
    if (doc.contains("latency")) {
        const auto& l = require_object(doc, "latency");
        reject_unknown(l, "latency", {"tau_round", "c_agg", "c_mech", "theta"});
        c.latency.tau_round = get_number(l, "tau_round", "latency.tau_round", c.latency.tau_round);
        c.latency.c_agg = get_number(l, "c_agg", "latency.c_agg", c.latency.c_agg);
        c.latency.theta = get_number(l, "theta", "latency.theta", c.latency.theta);
        if (l.contains("c_mech")) {
            const auto& cm = l.at("c_mech");
            if (!cm.is_object()) {
                throw ConfigError("latency.c_mech", "expected an object keyed by mechanism");
            }
            reject_unknown(cm, "latency.c_mech", {"PoW", "PoS", "PoC"});
            c.latency.c_mech_pow = get_number(cm, "PoW", "latency.c_mech.PoW", c.latency.c_mech_pow);
            c.latency.c_mech_pos = get_number(cm, "PoS", "latency.c_mech.PoS", c.latency.c_mech_pos);
            c.latency.c_mech_poc = get_number(cm, "PoC", "latency.c_mech.PoC", c.latency.c_mech_poc);
        }
    }
    c.n_tx = get_count(doc, "n_tx", "n_tx", c.n_tx);
    c.k_rounds = get_count(doc, "k_rounds", "k_rounds", c.k_rounds);
    c.repetitions = get_count(doc, "repetitions", "repetitions", c.repetitions);
    c.seed = get_count(doc, "seed", "seed", c.seed);
    return c;
}

json config_to_json(const ExperimentConfig& c)
{
    json doc;
    doc["topology"] = {{"field_side", c.topology.field_side},
                       {"lambda", c.topology.lambda},
                       {"comm_range", c.topology.comm_range},
                       {"r_cls", c.topology.r_cls},
                       {"cluster_side", c.topology.cluster_side}};
    doc["fault"] = {{"p_fail", c.fault.p_fail}};
    doc["mechanism"] = {{"kind", std::string(to_string(c.mechanism.kind))},
                        {"r_v", c.mechanism.r_v},
                        {"n_w", c.mechanism.n_w},
                        {"r_sfl", c.mechanism.r_sfl},
                        {"delta_sfl", c.mechanism.delta_sfl}};
    doc["latency"] = {{"tau_round", c.latency.tau_round},
                      {"c_agg", c.latency.c_agg},
                      {"c_mech", {{"PoW", c.latency.c_mech_pow}, {"PoS", c.latency.c_mech_pos}, {"PoC", c.latency.c_mech_poc}}},
                      {"theta", c.latency.theta}};
    doc["n_tx"] = c.n_tx;
    doc["k_rounds"] = c.k_rounds;
    doc["repetitions"] = c.repetitions;
    doc["seed"] = c.seed;
    return doc;
}

FieldValue field_value(const json& v, const std::string& path)
{
    if (v.is_number()) {
        return v.get<double>();
    }
    if (v.is_string()) {
        return v.get<std::string>();
    }
    throw ConfigError(path, "expected a number or a mechanism name");
}

json field_json(const FieldValue& v)
{
    if (const auto* d = std::get_if<double>(&v)) {
        return *d;
    }
    return std::get<std::string>(v);
}

json parse_document(std::string_view text)
{
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("config", std::string("malformed JSON: ") + e.what());
    }
}

} // namespace

ExperimentConfig parse_experiment_config(std::string_view json_text)
{
    return config_from_json(parse_document(json_text));
}

SweepSpec parse_sweep_spec(std::string_view json_text)
{
    const json doc = parse_document(json_text);
    if (!doc.is_object()) {
        throw ConfigError("sweep", "expected a JSON object");
    }
    reject_unknown(doc, "", {"base", "axes", "cap"});

    SweepSpec spec;
    if (doc.contains("base")) {
        spec.base = config_from_json(doc.at("base"));
    }
    spec.cap = get_count(doc, "cap", "cap", spec.cap);
    if (doc.contains("axes")) {
        const auto& axes = doc.at("axes");
        if (!axes.is_object()) {
            throw ConfigError("axes", "expected an object of named value lists");
        }
        for (auto it = axes.begin(); it != axes.end(); ++it) {
            const std::string path = "axes." + it.key();
            if (!it.value().is_array()) {
                throw ConfigError(path, "expected a list of values");
            }
            SweepAxis axis;
            axis.name = it.key();
            for (const auto& v : it.value()) {
                AxisPoint point;
                if (v.is_object()) {
                    for (auto f = v.begin(); f != v.end(); ++f) {
                        point.emplace_back(f.key(), field_value(f.value(), path + "." + f.key()));
                    }
                } else {
                    point.emplace_back(axis.name, field_value(v, path));
                }
                // Probe each assignment so unknown names fail at load time.
                ExperimentConfig probe;
                for (const auto& [field, value] : point) {
                    try {
                        set_field(probe, field, value);
                    } catch (const ConfigError& e) {
                        throw ConfigError(path, e.what());
                    }
                }
                axis.points.push_back(std::move(point));
            }
            spec.axes.push_back(std::move(axis));
        }
    }
    return spec;
}

std::string to_json(const ExperimentConfig& config)
{
    return config_to_json(config).dump(2) + "\n";
}

std::string to_json(const SweepSpec& spec)
{
    json doc;
    doc["base"] = config_to_json(spec.base);
    json axes = json::object();
    for (const auto& axis : spec.axes) {
        json values = json::array();
        for (const auto& point : axis.points) {
            if (point.size() == 1 && point.front().first == axis.name) {
                values.push_back(field_json(point.front().second));
            } else {
                json obj = json::object();
                for (const auto& [field, value] : point) {
                    obj[field] = field_json(value);
                }
                values.push_back(std::move(obj));
            }
        }
        axes[axis.name] = std::move(values);
    }
    doc["axes"] = std::move(axes);
    doc["cap"] = spec.cap;
    return doc.dump(2) + "\n";
}

} // namespace wirecons
