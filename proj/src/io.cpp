#include "popmatch/io.hpp"

#include <cctype>
#include <cmath>
#include <cstdint>
#include <limits>

#include <json.hpp>

#include "popmatch/errors.hpp"

namespace popmatch {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

json parse_text(const std::string& text) {
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded()) throw ValidationError("invalid JSON");
    return doc;
}

const json& require(const json& obj, const char* key, const char* where) {
    if (!obj.is_object() || !obj.contains(key))
        throw ValidationError(std::string(where) + ": missing key '" + key + "'");
    return obj.at(key);
}

std::string require_string(const json& obj, const char* key, const char* where) {
    const json& v = require(obj, key, where);
    if (!v.is_string())
        throw ValidationError(std::string(where) + ": '" + key + "' must be a string");
    return v.get<std::string>();
}

Cost cost_from_json(const json& v) {
    if (v.is_number_integer()) {
        long long raw = v.get<long long>();
        if (raw > std::numeric_limits<Cost>::max() / kCostScale ||
            raw < std::numeric_limits<Cost>::min() / kCostScale)
            throw ValidationError("cost out of range");
        return raw * kCostScale;
    }
    if (v.is_number_float()) {
        double d = v.get<double>();
        if (!std::isfinite(d) || std::abs(d) > 1e12) throw ValidationError("cost out of range");
        double scaled = d * static_cast<double>(kCostScale);
        double rounded = std::nearbyint(scaled);
        if (std::abs(scaled - rounded) > 1e-3)
            throw ValidationError("cost has more than six fractional digits");
        return static_cast<Cost>(rounded);
    }
    if (v.is_string()) return parse_cost_string(v.get<std::string>());
    throw ValidationError("cost must be a number or a decimal string");
}

json cost_to_json(Cost c) {
    if (c % kCostScale == 0) return json(c / kCostScale);
    return json(static_cast<double>(c) / static_cast<double>(kCostScale));
}

std::vector<InstanceData::Vertex> vertices_from_json(const json& arr, const char* side) {
    if (!arr.is_array()) throw ValidationError(std::string(side) + " must be an array");
    std::vector<InstanceData::Vertex> out;
    for (const json& item : arr) {
        InstanceData::Vertex v;
        v.name = require_string(item, "name", side);
        const json& cap = require(item, "capacity", side);
        if (!cap.is_number_integer())
            throw ValidationError(std::string(side) + " '" + v.name +
                                  "': capacity must be an integer");
        long long c = cap.get<long long>();
        if (c < 1 || c > std::numeric_limits<int>::max())
            throw ValidationError(std::string(side) + " '" + v.name + "': capacity out of range");
        v.capacity = static_cast<int>(c);
        const json& prefs = require(item, "preferences", side);
        if (!prefs.is_array())
            throw ValidationError(std::string(side) + " '" + v.name +
                                  "': preferences must be an array");
        for (const json& p : prefs) {
            if (!p.is_string())
                throw ValidationError(std::string(side) + " '" + v.name +
                                      "': preference entries must be strings");
            v.preferences.push_back(p.get<std::string>());
        }
        out.push_back(std::move(v));
    }
    return out;
}

} // namespace

Cost parse_cost_string(const std::string& text) {
    std::size_t i = 0;
    bool neg = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) neg = text[i++] == '-';
    if (i >= text.size() || !std::isdigit(static_cast<unsigned char>(text[i])))
        throw ValidationError("malformed cost '" + text + "'");
    Cost whole = 0;
    const Cost limit = std::numeric_limits<Cost>::max() / kCostScale;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
        whole = whole * 10 + (text[i++] - '0');
        if (whole > limit) throw ValidationError("cost out of range '" + text + "'");
    }
    Cost frac = 0;
    if (i < text.size() && text[i] == '.') {
        ++i;
        int digits = 0;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
            if (++digits > 6)
                throw ValidationError("cost '" + text + "' has more than six fractional digits");
            frac = frac * 10 + (text[i++] - '0');
        }
        if (digits == 0) throw ValidationError("malformed cost '" + text + "'");
        for (; digits < 6; ++digits) frac *= 10;
    }
    if (i != text.size()) throw ValidationError("malformed cost '" + text + "'");
    Cost value = whole * kCostScale + frac;
    return neg ? -value : value;
}

std::string format_cost(Cost c) {
    std::string sign = c < 0 ? "-" : "";
    unsigned long long mag = c < 0 ? 0ULL - static_cast<unsigned long long>(c)
                                   : static_cast<unsigned long long>(c);
    unsigned long long whole = mag / kCostScale, frac = mag % kCostScale;
    if (frac == 0) return sign + std::to_string(whole);
    std::string digits = std::to_string(frac);
    digits.insert(0, 6 - digits.size(), '0');
    while (digits.back() == '0') digits.pop_back();
    return sign + std::to_string(whole) + "." + digits;
}

Instance parse_instance(const std::string& text) {
    json doc = parse_text(text);
    if (!doc.is_object()) throw ValidationError("instance document must be an object");
    InstanceData data;
    data.agents = vertices_from_json(require(doc, "agents", "instance"), "agent");
    data.jobs = vertices_from_json(require(doc, "jobs", "instance"), "job");
    if (doc.contains("costs")) {
        const json& costs = doc.at("costs");
        if (!costs.is_array()) throw ValidationError("costs must be an array");
        for (const json& item : costs) {
            InstanceData::CostEntry entry;
            entry.agent = require_string(item, "agent", "cost entry");
            entry.job = require_string(item, "job", "cost entry");
            entry.cost = cost_from_json(require(item, "cost", "cost entry"));
            data.costs.push_back(std::move(entry));
        }
    }
    return Instance::build(data);
}

std::string serialize_instance(const Instance& inst) {
    InstanceData data = inst.to_data();
    ordered_json doc;
    for (const char* key : {"agents", "jobs"}) {
        ordered_json arr = ordered_json::array();
        for (const auto& v : (std::string(key) == "agents" ? data.agents : data.jobs)) {
            ordered_json item;
            item["name"] = v.name;
            item["capacity"] = v.capacity;
            item["preferences"] = v.preferences;
            arr.push_back(std::move(item));
        }
        doc[key] = std::move(arr);
    }
    if (!data.costs.empty()) {
        ordered_json arr = ordered_json::array();
        for (const auto& entry : data.costs) {
            ordered_json item;
            item["agent"] = entry.agent;
            item["job"] = entry.job;
            item["cost"] = cost_to_json(entry.cost);
            arr.push_back(std::move(item));
        }
        doc["costs"] = std::move(arr);
    }
    return doc.dump(2);
}

Matching parse_matching(const Instance& inst, const std::string& text) {
    json doc = parse_text(text);
    const json& arr = require(doc, "edges", "matching");
    if (!arr.is_array()) throw ValidationError("matching: 'edges' must be an array");
    std::vector<Edge> edges;
    for (const json& item : arr) {
        if (item.contains("color"))
            throw ValidationError("matching: unexpected 'color' field (colorful documents are "
                                  "not accepted here)");
        std::string agent = require_string(item, "agent", "matching edge");
        std::string job = require_string(item, "job", "matching edge");
        auto a = inst.find_agent(agent);
        auto j = inst.find_job(job);
        if (!a) throw ValidationError("matching names unknown agent '" + agent + "'");
        if (!j) throw ValidationError("matching names unknown job '" + job + "'");
        edges.push_back({*a, *j});
    }
    return make_matching(inst, std::move(edges));
}

std::string serialize_matching(const Instance& inst, const Matching& m) {
    ordered_json doc;
    ordered_json arr = ordered_json::array();
    for (const Edge& e : m.edges) {
        ordered_json item;
        item["agent"] = inst.agent_name(e.agent);
        item["job"] = inst.job_name(e.job);
        arr.push_back(std::move(item));
    }
    doc["edges"] = std::move(arr);
    return doc.dump(2);
}

} // namespace popmatch
