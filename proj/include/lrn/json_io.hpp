#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "bigint.hpp"
#include "errors.hpp"
#include "families.hpp"
#include "solution.hpp"

namespace lrn {

using Json = nlohmann::ordered_json;

inline Json params_to_json(const Params& params) {
    Json j = Json::object();
    for (const auto& [key, value] : params) j[key] = value;
    return j;
}

/// {x, y, p, k, n, family, params}; x and y as decimal strings.
inline Json solution_to_json(const Solution& s) {
    const auto c = classify_solution(s);
    Params params = c.params;
    if (c.via) params["via_n"] = static_cast<long>(c.via->n);
    Json j;
    j["x"] = to_dec(s.x);
    j["y"] = to_dec(s.y);
    j["p"] = s.p;
    j["k"] = s.k;
    j["n"] = s.n;
    j["family"] = to_string(c.family);
    j["params"] = params_to_json(params);
    return j;
}

inline Json solutions_to_json(const std::vector<Solution>& sols) {
    Json arr = Json::array();
    for (const auto& s : sols) arr.push_back(solution_to_json(s));
    return arr;
}

namespace detail {

inline Int json_int(const Json& j, const char* key) {
    if (!j.contains(key)) throw FormatError(std::string("record lacks field '") + key + "'");
    const Json& v = j.at(key);
    if (v.is_string()) return from_dec(v.get<std::string>());
    if (v.is_number_integer()) return Int(v.get<long>());
    throw FormatError(std::string("field '") + key + "' must be an integer or a decimal string");
}

inline unsigned long json_small(const Json& j, const char* key) {
    const Int v = json_int(j, key);
    if (v < 0 || !v.fits_ulong_p()) throw FormatError(std::string("field '") + key + "' is out of range");
    return v.get_ui();
}

}  // namespace detail

inline Solution solution_from_json(const Json& j) {
    if (!j.is_object()) throw FormatError("solution record must be a JSON object");
    return Solution{detail::json_small(j, "p"), detail::json_int(j, "x"), detail::json_int(j, "y"),
                    detail::json_small(j, "k"), detail::json_small(j, "n")};
}

/// Accepts a bare array of records, or an object holding them under
/// "solutions" or "instances".
inline std::vector<Solution> solutions_from_json(const Json& j) {
    const Json* arr = &j;
    if (j.is_object()) {
        if (j.contains("solutions")) {
            arr = &j.at("solutions");
        } else if (j.contains("instances")) {
            arr = &j.at("instances");
        } else {
            throw FormatError("expected an array of solutions or an object with a 'solutions' field");
        }
    }
    if (!arr->is_array()) throw FormatError("solution list must be a JSON array");
    std::vector<Solution> out;
    for (const auto& rec : *arr) out.push_back(solution_from_json(rec));
    return out;
}

inline std::string params_to_text(const Params& params) {
    std::string s;
    for (const auto& [key, value] : params) {
        if (!s.empty()) s += ";";
        s += key + "=" + std::to_string(value);
    }
    return s;
}

}  // namespace lrn
