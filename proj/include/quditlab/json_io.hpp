#pragma once

#include <nlohmann/json.hpp>

#include "quditlab/analysis.hpp"
#include "quditlab/noise.hpp"

namespace quditlab {

using json = nlohmann::ordered_json;

/// Gate wire format: {"kind","sites","levels"} plus an optional "controls"
/// list of [site, level] pairs. A controlled gate is the inner gate's object
/// with nonempty controls; nested controls flatten into one list. A shift
/// stores its direction as the single (signed) levels entry.
inline json gate_to_json(const GateSpec& g) {
    json j;
    std::visit(
        [&](const auto& op) {
            using T = std::decay_t<decltype(op)>;
            if constexpr (std::is_same_v<T, SubspaceFlip>) {
                j["kind"] = "flip";
                j["sites"] = {op.site};
                j["levels"] = {op.a, op.b};
            } else if constexpr (std::is_same_v<T, SubspacePhase>) {
                j["kind"] = "phase";
                j["sites"] = {op.site};
                j["levels"] = {op.level};
            } else if constexpr (std::is_same_v<T, CyclicShift>) {
                j["kind"] = "shift";
                j["sites"] = {op.site};
                j["levels"] = {op.step};
            } else if constexpr (std::is_same_v<T, SubspaceHadamard>) {
                j["kind"] = "hadamard";
                j["sites"] = {op.site};
                j["levels"] = {op.a, op.b};
            } else if constexpr (std::is_same_v<T, SubspaceSwap>) {
                j["kind"] = "swap";
                j["sites"] = {op.site1, op.site2};
                j["levels"] = {op.a, op.b, op.c, op.d};
            } else if constexpr (std::is_same_v<T, Controlled>) {
                j = gate_to_json(*op.inner);
                json ctl = j.contains("controls") ? j["controls"] : json::array();
                for (const auto& [s, l] : op.controls) ctl.push_back({s, l});
                j["controls"] = ctl;
            }
        },
        g.op());
    return j;
}

inline GateSpec gate_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    auto sites = j.at("sites").get<std::vector<int>>();
    auto levels = j.at("levels").get<std::vector<int>>();
    auto need = [&](size_t ns, size_t nl) {
        if (sites.size() != ns || levels.size() != nl)
            throw validation_error("gate json: wrong sites/levels arity for kind '" + kind + "'");
    };
    GateSpec base = [&]() -> GateSpec {
        if (kind == "flip") { need(1, 2); return flip(sites[0], levels[0], levels[1]); }
        if (kind == "phase") { need(1, 1); return phase(sites[0], levels[0]); }
        if (kind == "shift") { need(1, 1); return shift(sites[0], levels[0]); }
        if (kind == "hadamard") { need(1, 2); return hadamard(sites[0], levels[0], levels[1]); }
        if (kind == "swap") {
            need(2, 4);
            return swap_gate(sites[0], levels[0], levels[1], sites[1], levels[2], levels[3]);
        }
        throw validation_error("gate json: unknown kind '" + kind + "'");
    }();
    if (j.contains("controls") && !j.at("controls").empty()) {
        std::vector<std::pair<int, int>> controls;
        for (const auto& c : j.at("controls"))
            controls.emplace_back(c.at(0).get<int>(), c.at(1).get<int>());
        return controlled(std::move(controls), std::move(base));
    }
    return base;
}

inline json circuit_to_json(const Circuit& c) {
    json j;
    j["dims"] = c.dims.dims;
    j["gates"] = json::array();
    for (const auto& g : c.gates) j["gates"].push_back(gate_to_json(g));
    json meta;
    meta["topology"] = c.meta.topology;
    meta["role"] = c.meta.role;
    meta["n"] = c.meta.control_count;
    meta["inputs"] = c.meta.input_sites;
    meta["root"] = c.meta.root_site;
    meta["activation"] = c.meta.activation_level;
    meta["target"] = c.meta.target_site;
    j["meta"] = meta;
    return j;
}

inline Circuit circuit_from_json(const json& j) {
    SiteDims dims(j.at("dims").get<std::vector<int>>());
    std::vector<GateSpec> gates;
    for (const auto& gj : j.at("gates")) gates.push_back(gate_from_json(gj));
    CircuitMeta meta;
    if (j.contains("meta")) {
        const json& m = j.at("meta");
        meta.topology = m.value("topology", std::string("custom"));
        meta.role = m.value("role", std::string("custom"));
        meta.control_count = m.value("n", 0);
        meta.input_sites = m.value("inputs", std::vector<int>{});
        meta.root_site = m.value("root", -1);
        meta.activation_level = m.value("activation", -1);
        meta.target_site = m.value("target", -1);
    }
    return Circuit(std::move(dims), std::move(gates), std::move(meta));
}

/// States serialize as a sorted list of (digit-string, re, im) triples.
inline json state_to_json(const StateVector& s) {
    json j;
    j["dims"] = s.dims.dims;
    j["amplitudes"] = json::array();
    for (const auto& [b, a] : s.amplitudes)
        j["amplitudes"].push_back({b.str(), a.real(), a.imag()});
    return j;
}

inline StateVector state_from_json(const json& j) {
    SiteDims dims(j.at("dims").get<std::vector<int>>());
    std::map<BasisString, cplx> amps;
    for (const auto& e : j.at("amplitudes")) {
        BasisString b = BasisString::parse(e.at(0).get<std::string>());
        b.validate(dims);
        amps[b] = cplx(e.at(1).get<double>(), e.at(2).get<double>());
    }
    StateVector s;
    s.dims = std::move(dims);
    s.amplitudes = std::move(amps);
    s.prune_small();
    return s;
}

inline json noise_to_json(const NoiseParams& p) {
    json j;
    j["kappa01"] = p.kappa01;
    j["kappa12"] = p.kappa12;
    j["T2_01"] = p.T2_01;
    j["T2star_12"] = p.T2star_12;
    return j;
}

inline NoiseParams noise_from_json(const json& j) {
    NoiseParams p;
    p.kappa01 = j.at("kappa01").get<double>();
    p.kappa12 = j.at("kappa12").get<double>();
    p.T2_01 = j.at("T2_01").get<double>();
    p.T2star_12 = j.at("T2star_12").get<double>();
    p.validate();
    return p;
}

inline json profile_to_json(const AmplitudeProfile& p) {
    json arr = json::array();
    for (const auto& [a, b] : p.amps)
        arr.push_back({a.real(), a.imag(), b.real(), b.imag()});
    json j;
    j["profile"] = arr;
    return j;
}

inline AmplitudeProfile profile_from_json(const json& j) {
    std::vector<std::pair<cplx, cplx>> amps;
    for (const auto& e : j.at("profile"))
        amps.emplace_back(cplx(e.at(0).get<double>(), e.at(1).get<double>()),
                          cplx(e.at(2).get<double>(), e.at(3).get<double>()));
    return AmplitudeProfile(std::move(amps));
}

} // namespace quditlab
