#pragma once

// System model files: a JSON document with a structure expression and either
// per-component reliabilities (binary mode) or lifetime distributions
// (lifetime mode). Validation errors carry the offending field path.

#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "relimp/lifetime.hpp"
#include "relimp/structure.hpp"

namespace relimp {

class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SystemModel {
    StructureFunction sf;
    std::optional<std::vector<double>> probabilities;           // binary mode
    std::optional<std::vector<LifetimeDistribution>> lifetimes;  // lifetime mode
    std::vector<std::string> warnings;

    bool binary_mode() const { return probabilities.has_value(); }
};

namespace model_detail {

using nlohmann::json;

[[noreturn]] inline void fail(const std::string& field, const std::string& what) {
    throw ValidationError(field + ": " + what);
}

inline double require_number(const json& j, const std::string& field) {
    if (!j.is_number()) fail(field, "expected a number");
    return j.get<double>();
}

inline LifetimeDistribution parse_distribution(const json& j, const std::string& field) {
    if (!j.is_object() || j.size() != 1)
        fail(field, "expected exactly one of {\"exponential\"|\"weibull\"|\"empirical\"}");
    try {
        if (j.contains("exponential"))
            return LifetimeDistribution::exponential(
                require_number(j["exponential"].at("rate"), field + ".exponential.rate"));
        if (j.contains("weibull"))
            return LifetimeDistribution::weibull(
                require_number(j["weibull"].at("shape"), field + ".weibull.shape"),
                require_number(j["weibull"].at("scale"), field + ".weibull.scale"));
        if (j.contains("empirical")) {
            const json& samples = j["empirical"].at("samples");
            if (!samples.is_array()) fail(field + ".empirical.samples", "expected an array");
            std::vector<double> xs;
            for (const auto& x : samples)
                xs.push_back(require_number(x, field + ".empirical.samples[]"));
            return LifetimeDistribution::empirical(std::move(xs));
        }
    } catch (const json::exception& e) {
        fail(field, e.what());
    } catch (const std::invalid_argument& e) {
        fail(field, e.what());
    }
    fail(field, "unknown distribution kind");
}

inline StructureFunction parse_structure(const json& j) {
    if (j.is_string()) {
        try {
            return StructureFunction::from_expression(j.get<std::string>());
        } catch (const parse_error& e) {
            fail("structure", e.what());
        } catch (const std::invalid_argument& e) {
            fail("structure", e.what());
        }
    }
    // Raw truth-table form: {"n": ..., "table": "0110..."} with bit k of the
    // string giving phi at state mask k. Used to feed verification deliberately
    // broken (e.g. non-monotone) tables.
    if (j.is_object()) {
        try {
            const int n = j.at("n").get<int>();
            const std::string bits = j.at("table").get<std::string>();
            if (n < 1 || n > StructureFunction::max_components)
                fail("structure.n", "component count out of range");
            if (bits.size() != (std::size_t{1} << n))
                fail("structure.table", "expected 2^n characters, got " +
                                            std::to_string(bits.size()));
            std::vector<bool> table(bits.size());
            for (std::size_t k = 0; k < bits.size(); ++k) {
                if (bits[k] != '0' && bits[k] != '1')
                    fail("structure.table", "characters must be '0' or '1'");
                table[k] = bits[k] == '1';
            }
            return StructureFunction::from_table(n, std::move(table));
        } catch (const json::exception& e) {
            fail("structure", e.what());
        }
    }
    fail("structure", "expected an expression string or {\"n\",\"table\"}");
}

}  // namespace model_detail

inline SystemModel parse_model(const std::string& text) {
    using model_detail::fail;
    using nlohmann::json;
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("JSON parse error: ") + e.what());
    }
    if (!doc.is_object()) model_detail::fail("$", "expected a JSON object");
    if (!doc.contains("structure")) fail("structure", "missing");
    if (!doc.contains("components")) fail("components", "missing");

    StructureFunction sf = model_detail::parse_structure(doc["structure"]);

    const json& comps = doc["components"];
    if (!comps.is_array() || comps.empty()) fail("components", "expected a nonempty array");
    if (static_cast<int>(comps.size()) != sf.n())
        fail("components", "structure uses " + std::to_string(sf.n()) + " components but " +
                               std::to_string(comps.size()) + " are listed");

    std::vector<bool> seen(static_cast<std::size_t>(sf.n()), false);
    std::vector<double> probs(static_cast<std::size_t>(sf.n()), 0.0);
    std::vector<std::optional<LifetimeDistribution>> dists(static_cast<std::size_t>(sf.n()));
    int binary_entries = 0, lifetime_entries = 0;

    for (std::size_t k = 0; k < comps.size(); ++k) {
        const std::string field = "components[" + std::to_string(k) + "]";
        const json& c = comps[k];
        if (!c.is_object() || !c.contains("id")) fail(field, "expected an object with \"id\"");
        if (!c["id"].is_number_integer()) fail(field + ".id", "expected an integer");
        const int id = c["id"].get<int>();
        if (id < 1 || id > sf.n())
            fail(field + ".id", "id " + std::to_string(id) + " outside 1.." +
                                    std::to_string(sf.n()));
        if (seen[id - 1]) fail(field + ".id", "duplicate id " + std::to_string(id));
        seen[id - 1] = true;

        const bool has_p = c.contains("p");
        const bool has_dist = c.contains("dist");
        if (has_p == has_dist)
            fail(field, "exactly one of \"p\" or \"dist\" is required");
        if (has_p) {
            const double p = model_detail::require_number(c["p"], field + ".p");
            if (!(p >= 0.0 && p <= 1.0)) fail(field + ".p", "must lie in [0,1]");
            probs[id - 1] = p;
            ++binary_entries;
        } else {
            dists[id - 1] = model_detail::parse_distribution(c["dist"], field + ".dist");
            ++lifetime_entries;
        }
    }
    if (binary_entries != 0 && lifetime_entries != 0)
        fail("components", "mode must be uniform: mix of \"p\" and \"dist\" entries");

    SystemModel model{std::move(sf), std::nullopt, std::nullopt, {}};
    if (binary_entries != 0) {
        model.probabilities = std::move(probs);
    } else {
        std::vector<LifetimeDistribution> out;
        out.reserve(dists.size());
        for (auto& d : dists) out.push_back(std::move(*d));
        model.lifetimes = std::move(out);
    }
    if (model.sf.expression()) {
        for (int id : duplicate_components(*model.sf.expression()))
            model.warnings.push_back("component " + std::to_string(id) +
                                     " appears more than once in the structure expression; "
                                     "module orderings assume disjoint modules");
    }
    return model;
}

inline SystemModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open model file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_model(buffer.str());
}

}  // namespace relimp
