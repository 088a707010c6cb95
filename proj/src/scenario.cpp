/*
 Copyright 2026 The mixform Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#include "mixform/scenario.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "json.hpp"

namespace mixform {

using nlohmann::json;

namespace {

ManipulatorParams reference_arm() {
    ManipulatorParams p;
    p.m1 = 1.2;
    p.m2 = 1.0;
    p.I1 = 0.2250;
    p.I2 = 0.1875;
    p.L1 = 1.5;
    p.L2 = 1.5;
    p.l1 = 0.75;
    p.l2 = 0.75;
    return p;
}

Scenario square_network(std::string name, const std::vector<bool>& passive) {
    using std::numbers::pi;
    const Eigen::Vector2d bases[4] = {{0.0, 0.0}, {5.0, 0.0}, {5.0, 3.0}, {0.0, 3.0}};
    const Eigen::Vector2d q0[4] = {
        {-pi / 2.0, pi / 3.0}, {pi / 6.0, pi / 3.0}, {pi / 2.0, pi / 3.0}, {-pi / 2.0, -pi / 3.0}};

    Scenario s;
    s.name = std::move(name);
    for (std::size_t i = 0; i < 4; ++i) {
        AgentSpec a;
        a.mode = passive[i] ? Actuation::PassiveActive : Actuation::Full;
        a.params = reference_arm();
        a.base = bases[i];
        a.initial.q = q0[i];
        s.agents.push_back(a);
    }
    const double side = 0.4;
    s.formation.n_agents = 4;
    s.formation.edges = {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {0, 2}};
    s.formation.d_star = {side, side, side, side, side * std::numbers::sqrt2};
    s.config.dt = 1e-3;
    s.config.t_final = 30.0;
    s.config.gains = {800.0, 600.0};
    s.config.log_stride = 1;
    return s;
}

// Thin reader that reports the full JSON path of whatever is missing or mistyped.
class Reader {
public:
    Reader(const json& node, std::string path) : node_(node), path_(std::move(path)) {}

    Reader at(const std::string& key) const {
        if (!node_.is_object()) {
            fail("expected an object");
        }
        auto it = node_.find(key);
        if (it == node_.end()) {
            throw ScenarioParseError("scenario: missing field '" + join(key) + "'");
        }
        return Reader(*it, join(key));
    }

    Reader at(std::size_t index) const {
        return Reader(node_.at(index), path_ + "[" + std::to_string(index) + "]");
    }

    bool has(const std::string& key) const { return node_.is_object() && node_.contains(key); }

    double number() const {
        if (!node_.is_number()) {
            fail("expected a number");
        }
        return node_.get<double>();
    }

    std::size_t count() const {
        if (!node_.is_number_integer() && !node_.is_number_unsigned()) {
            fail("expected an integer");
        }
        const auto v = node_.get<long long>();
        if (v < 0) {
            fail("expected a non-negative integer");
        }
        return static_cast<std::size_t>(v);
    }

    bool boolean() const {
        if (!node_.is_boolean()) {
            fail("expected true or false");
        }
        return node_.get<bool>();
    }

    std::string string() const {
        if (!node_.is_string()) {
            fail("expected a string");
        }
        return node_.get<std::string>();
    }

    std::size_t size(std::size_t expected = 0) const {
        if (!node_.is_array()) {
            fail("expected an array");
        }
        if (expected != 0 && node_.size() != expected) {
            fail("expected " + std::to_string(expected) + " entries");
        }
        return node_.size();
    }

    Eigen::Vector2d vec2() const {
        size(2);
        return {at(0).number(), at(1).number()};
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw ScenarioParseError("scenario: field '" + path_ + "': " + what);
    }

private:
    std::string join(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    const json& node_;
    std::string path_;
};

Actuation parse_mode(const Reader& r) {
    const std::string mode = r.string();
    if (mode == "fa") {
        return Actuation::Full;
    }
    if (mode == "pa") {
        return Actuation::PassiveActive;
    }
    r.fail("mode must be \"fa\" or \"pa\", got \"" + mode + "\"");
}

json vec2_json(const Eigen::Vector2d& v) {
    return json::array({v(0), v(1)});
}

} // namespace

std::vector<std::string> builtin_case_names() {
    return {"case1", "case2", "case3"};
}

Scenario builtin_case(std::string_view name) {
    if (name == "case1") {
        return square_network("case1", {false, false, false, true});
    }
    if (name == "case2") {
        return square_network("case2", {false, false, true, true});
    }
    if (name == "case3") {
        return square_network("case3", {false, true, true, true});
    }
    throw ValidationError("unknown built-in case '" + std::string(name) +
                          "' (expected case1, case2 or case3)");
}

Scenario parse_scenario(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& err) {
        throw ScenarioParseError(std::string("scenario: invalid JSON: ") + err.what());
    }
    const Reader root(doc, "");
    if (!doc.is_object()) {
        root.fail("top level must be an object");
    }

    Scenario s;
    const std::size_t version = root.at("schema_version").count();
    if (version != static_cast<std::size_t>(kScenarioSchemaVersion)) {
        root.at("schema_version").fail("unsupported schema version " + std::to_string(version));
    }
    if (root.has("name")) {
        s.name = root.at("name").string();
    }

    const Reader agents = root.at("agents");
    for (std::size_t i = 0; i < agents.size(); ++i) {
        const Reader a = agents.at(i);
        AgentSpec spec;
        spec.mode = parse_mode(a.at("mode"));
        const Reader p = a.at("params");
        spec.params.m1 = p.at("m1").number();
        spec.params.m2 = p.at("m2").number();
        spec.params.I1 = p.at("I1").number();
        spec.params.I2 = p.at("I2").number();
        spec.params.L1 = p.at("L1").number();
        spec.params.L2 = p.at("L2").number();
        spec.params.l1 = p.at("l1").number();
        spec.params.l2 = p.at("l2").number();
        spec.base = a.at("base").vec2();
        spec.initial.q = a.at("q0").vec2();
        spec.initial.qdot = a.at("qdot0").vec2();
        s.agents.push_back(spec);
    }

    const Reader graph = root.at("graph");
    const Reader edges = graph.at("edges");
    s.formation.n_agents = s.agents.size();
    for (std::size_t k = 0; k < edges.size(); ++k) {
        const Reader e = edges.at(k);
        e.size(2);
        const std::size_t tail = e.at(0).count();
        const std::size_t head = e.at(1).count();
        if (tail < 1 || head < 1 || tail > s.agents.size() || head > s.agents.size()) {
            e.fail("edge endpoints must reference declared agents 1.." + std::to_string(s.agents.size()));
        }
        s.formation.edges.push_back({tail - 1, head - 1});
    }
    const Reader d_star = graph.at("d_star");
    for (std::size_t k = 0; k < d_star.size(); ++k) {
        s.formation.d_star.push_back(d_star.at(k).number());
    }

    const Reader gains = root.at("gains");
    s.config.gains.kp = gains.at("kp").number();
    s.config.gains.kd = gains.at("kd").number();

    const Reader sim = root.at("sim");
    s.config.dt = sim.at("dt").number();
    s.config.t_final = sim.at("t_final").number();
    s.config.log_stride = sim.at("log_stride").count();
    if (sim.has("control_hold")) {
        const Reader hold = sim.at("control_hold");
        const std::string value = hold.string();
        if (value == "stage") {
            s.config.hold = ControlHold::Stage;
        } else if (value == "step") {
            s.config.hold = ControlHold::Step;
        } else {
            hold.fail("must be \"stage\" or \"step\", got \"" + value + "\"");
        }
    }
    if (sim.has("monitors")) {
        const Reader m = sim.at("monitors");
        if (m.has("holonomy")) {
            s.config.monitors.holonomy = m.at("holonomy").boolean();
        }
        if (m.has("singularity")) {
            s.config.monitors.singularity = m.at("singularity").boolean();
        }
    }

    s.validate();
    return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ScenarioParseError("cannot open scenario file " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario(buffer.str());
}

std::string serialize_scenario(const Scenario& s) {
    json doc;
    doc["schema_version"] = kScenarioSchemaVersion;
    doc["name"] = s.name;
    json agents = json::array();
    for (const AgentSpec& a : s.agents) {
        json params = {
            {"m1", a.params.m1}, {"m2", a.params.m2}, {"I1", a.params.I1}, {"I2", a.params.I2},
            {"L1", a.params.L1}, {"L2", a.params.L2}, {"l1", a.params.l1}, {"l2", a.params.l2},
        };
        agents.push_back({
            {"mode", a.mode == Actuation::PassiveActive ? "pa" : "fa"},
            {"params", params},
            {"base", vec2_json(a.base)},
            {"q0", vec2_json(a.initial.q)},
            {"qdot0", vec2_json(a.initial.qdot)},
        });
    }
    doc["agents"] = agents;
    json edges = json::array();
    for (const Edge& e : s.formation.edges) {
        edges.push_back(json::array({e.tail + 1, e.head + 1}));
    }
    doc["graph"] = {{"edges", edges}, {"d_star", s.formation.d_star}};
    doc["gains"] = {{"kp", s.config.gains.kp}, {"kd", s.config.gains.kd}};
    doc["sim"] = {
        {"dt", s.config.dt},
        {"t_final", s.config.t_final},
        {"log_stride", s.config.log_stride},
        {"control_hold", s.config.hold == ControlHold::Step ? "step" : "stage"},
        {"monitors", {{"holonomy", s.config.monitors.holonomy},
                      {"singularity", s.config.monitors.singularity}}},
    };
    return doc.dump(2) + "\n";
}

} // namespace mixform
