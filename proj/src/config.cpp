#include "regretlab/config.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <limits>
#include <json.hpp>

namespace regretlab {

using nlohmann::json;

ConfigParseError::ConfigParseError(std::size_t line, std::size_t column, const std::string& detail)
    : std::runtime_error("parse error at line " + std::to_string(line) + ", column " + std::to_string(column) +
                         ": " + detail),
      line_(line), column_(column)
{
}

ConfigSchemaError::ConfigSchemaError(std::string key_path, const std::string& detail)
    : std::runtime_error("config error at '" + key_path + "': " + detail), key_path_(std::move(key_path))
{
}

namespace {

std::string join(const std::string& parent, const std::string& key)
{
    return parent.empty() ? key : parent + "." + key;
}

json parse_text(std::string_view text)
{
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        // e.byte is the 1-based offset of the offending character.
        const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i < end; ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        std::string what = e.what();
        if (auto p = what.find("parse error"); p != std::string::npos) what = what.substr(p);
        throw ConfigParseError(line, col, what);
    }
}

void check_object(const json& j, const std::string& path)
{
    if (!j.is_object()) throw ConfigSchemaError(path.empty() ? "<root>" : path, "expected an object");
}

void reject_unknown(const json& j, const std::string& path, std::initializer_list<const char*> allowed)
{
    for (auto it = j.begin(); it != j.end(); ++it) {
        const bool known = std::any_of(allowed.begin(), allowed.end(), [&](const char* k) { return it.key() == k; });
        if (!known) throw ConfigSchemaError(join(path, it.key()), "unknown key '" + it.key() + "'");
    }
}

const json* find(const json& j, const char* key)
{
    auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
}

std::uint64_t get_uint(const json& v, const std::string& path)
{
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0))
        throw ConfigSchemaError(path, "expected a non-negative integer");
    return v.get<std::uint64_t>();
}

double get_double(const json& v, const std::string& path)
{
    if (!v.is_number()) throw ConfigSchemaError(path, "expected a number");
    return v.get<double>();
}

bool get_bool(const json& v, const std::string& path)
{
    if (!v.is_boolean()) throw ConfigSchemaError(path, "expected true or false");
    return v.get<bool>();
}

std::string get_string(const json& v, const std::string& path)
{
    if (!v.is_string()) throw ConfigSchemaError(path, "expected a string");
    return v.get<std::string>();
}

std::vector<double> get_doubles(const json& v, const std::string& path)
{
    if (v.is_number()) return {v.get<double>()};
    if (!v.is_array()) throw ConfigSchemaError(path, "expected a number or an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const json& e = v[i];
        if (e.is_array()) {
            // Nested rows are flattened row-major.
            for (double d : get_doubles(e, path + "[" + std::to_string(i) + "]")) out.push_back(d);
        } else {
            out.push_back(get_double(e, path + "[" + std::to_string(i) + "]"));
        }
    }
    return out;
}

std::size_t get_size(const json& j, const char* key, const std::string& path, bool required, std::size_t fallback)
{
    const json* v = find(j, key);
    if (!v) {
        if (required) throw ConfigSchemaError(join(path, key), "missing required key");
        return fallback;
    }
    const std::uint64_t n = get_uint(*v, join(path, key));
    if (n < 1) throw ConfigSchemaError(join(path, key), "must be >= 1");
    return static_cast<std::size_t>(n);
}

InstanceSpec parse_instance(const json& j, const std::string& path)
{
    check_object(j, path);
    const json* kind = find(j, "kind");
    if (!kind) throw ConfigSchemaError(join(path, "kind"), "missing required key");
    InstanceSpec spec;
    try {
        spec.kind = instance_kind_from_string(get_string(*kind, join(path, "kind")));
    } catch (const std::invalid_argument& e) {
        throw ConfigSchemaError(join(path, "kind"), e.what());
    }

    switch (spec.kind) {
    case InstanceSpec::Kind::random:
        reject_unknown(j, path, {"kind", "S", "A", "H", "seed", "concentration"});
        spec.S = get_size(j, "S", path, true, 1);
        spec.A = get_size(j, "A", path, true, 1);
        spec.H = get_size(j, "H", path, true, 1);
        if (const json* v = find(j, "seed")) spec.seed = get_uint(*v, join(path, "seed"));
        if (const json* v = find(j, "concentration")) spec.concentration = get_double(*v, join(path, "concentration"));
        break;
    case InstanceSpec::Kind::info_lb:
        reject_unknown(j, path, {"kind", "S", "A", "H", "delta"});
        spec.S = get_size(j, "S", path, true, 1);
        spec.A = get_size(j, "A", path, true, 1);
        spec.H = get_size(j, "H", path, true, 1);
        if (const json* v = find(j, "delta"))
            spec.delta = get_doubles(*v, join(path, "delta"));
        else
            throw ConfigSchemaError(join(path, "delta"), "missing required key");
        break;
    case InstanceSpec::Kind::mingap_lb:
        reject_unknown(j, path, {"kind", "S", "eps"});
        spec.S = get_size(j, "S", path, true, 1);
        if (const json* v = find(j, "eps"))
            spec.eps = get_double(*v, join(path, "eps"));
        else
            throw ConfigSchemaError(join(path, "eps"), "missing required key");
        break;
    case InstanceSpec::Kind::contextual_bandit:
        reject_unknown(j, path, {"kind", "S", "A", "H", "means", "next_dist"});
        spec.S = get_size(j, "S", path, true, 1);
        spec.A = get_size(j, "A", path, true, 1);
        spec.H = get_size(j, "H", path, true, 1);
        if (const json* v = find(j, "means"))
            spec.means = get_doubles(*v, join(path, "means"));
        else
            throw ConfigSchemaError(join(path, "means"), "missing required key");
        if (const json* v = find(j, "next_dist")) spec.next_dist = get_doubles(*v, join(path, "next_dist"));
        break;
    }
    return spec;
}

RunConfig parse_run(const json& j, const std::string& path, const ParseOptions& options)
{
    check_object(j, path);
    reject_unknown(j, path,
                   {"instance", "episodes", "algo", "delta", "seed", "lfactor_variant", "diagnostics", "probe",
                    "label", "fault_q_shift"});
    RunConfig c;
    const json* inst = find(j, "instance");
    if (!inst) throw ConfigSchemaError(join(path, "instance"), "missing required key");
    c.instance = parse_instance(*inst, join(path, "instance"));

    if (const json* v = find(j, "episodes")) {
        c.episodes = get_uint(*v, join(path, "episodes"));
        if (c.episodes < 1) throw ConfigSchemaError(join(path, "episodes"), "must be >= 1");
    } else if (options.require_episodes) {
        throw ConfigSchemaError(join(path, "episodes"), "missing required key");
    }

    if (const json* v = find(j, "algo")) {
        try {
            c.algo = algorithm_from_string(get_string(*v, join(path, "algo")));
        } catch (const std::invalid_argument& e) {
            throw ConfigSchemaError(join(path, "algo"), e.what());
        }
    }
    if (const json* v = find(j, "delta")) {
        c.delta = get_double(*v, join(path, "delta"));
        if (!(c.delta > 0.0 && c.delta < 0.5)) throw ConfigSchemaError(join(path, "delta"), "must lie in (0, 1/2)");
    }
    if (const json* v = find(j, "seed")) c.seed = get_uint(*v, join(path, "seed"));
    if (const json* v = find(j, "lfactor_variant")) {
        try {
            c.lfactor_variant = log_factor_variant_from_string(get_string(*v, join(path, "lfactor_variant")));
        } catch (const std::invalid_argument& e) {
            throw ConfigSchemaError(join(path, "lfactor_variant"), e.what());
        }
    }
    if (const json* v = find(j, "diagnostics")) {
        const std::string dp = join(path, "diagnostics");
        check_object(*v, dp);
        reject_unknown(*v, dp, {"every", "theorem_checks", "surplus_report"});
        if (const json* e = find(*v, "every")) {
            c.diagnostics.every = get_uint(*e, join(dp, "every"));
            if (c.diagnostics.every < 1) throw ConfigSchemaError(join(dp, "every"), "must be >= 1");
        }
        if (const json* e = find(*v, "theorem_checks")) c.diagnostics.theorem_checks = get_bool(*e, join(dp, "theorem_checks"));
        if (const json* e = find(*v, "surplus_report")) c.diagnostics.surplus_report = get_bool(*e, join(dp, "surplus_report"));
    }
    if (const json* v = find(j, "probe")) {
        const std::string pp = join(path, "probe");
        check_object(*v, pp);
        reject_unknown(*v, pp, {"state", "action"});
        Probe p;
        const json* s = find(*v, "state");
        const json* a = find(*v, "action");
        if (!s) throw ConfigSchemaError(join(pp, "state"), "missing required key");
        if (!a) throw ConfigSchemaError(join(pp, "action"), "missing required key");
        p.state = static_cast<std::size_t>(get_uint(*s, join(pp, "state")));
        p.action = static_cast<std::size_t>(get_uint(*a, join(pp, "action")));
        c.probe = p;
    }
    if (const json* v = find(j, "label")) c.label = get_string(*v, join(path, "label"));
    if (const json* v = find(j, "fault_q_shift")) c.fault_q_shift = get_double(*v, join(path, "fault_q_shift"));
    return c;
}

std::vector<std::string> split_path(const std::string& key)
{
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (;;) {
        const std::size_t dot = key.find('.', start);
        parts.push_back(key.substr(start, dot - start));
        if (dot == std::string::npos) break;
        start = dot + 1;
    }
    return parts;
}

void apply_override(json& doc, const std::string& spec)
{
    const std::size_t eq = spec.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigSchemaError(spec, "override must have the form key=value");
    const std::string key = spec.substr(0, eq);
    const std::string raw = spec.substr(eq + 1);
    json value = json::parse(raw, nullptr, false);
    if (value.is_discarded()) value = raw;

    json* node = &doc;
    const auto parts = split_path(key);
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (parts[i].empty()) throw ConfigSchemaError(key, "empty path component");
        if (!node->is_null() && !node->is_object()) throw ConfigSchemaError(key, "cannot descend into a non-object");
        node = &(*node)[parts[i]];
    }
    *node = std::move(value);
}

void expand_sweep(const json& j, ConfigDocument& doc, const ParseOptions& options)
{
    const std::string path = "sweep";
    check_object(j, path);
    reject_unknown(j, path, {"base", "variants", "seeds", "checkpoints"});
    const json* base = find(j, "base");
    if (!base) throw ConfigSchemaError(join(path, "base"), "missing required key");
    check_object(*base, join(path, "base"));

    std::vector<std::uint64_t> seeds;
    if (const json* s = find(j, "seeds")) {
        const std::string sp = join(path, "seeds");
        if (s->is_object()) {
            reject_unknown(*s, sp, {"start", "count"});
            std::uint64_t start = 0, count = 0;
            if (const json* v = find(*s, "start")) start = get_uint(*v, join(sp, "start"));
            if (const json* v = find(*s, "count"))
                count = get_uint(*v, join(sp, "count"));
            else
                throw ConfigSchemaError(join(sp, "count"), "missing required key");
            for (std::uint64_t i = 0; i < count; ++i) seeds.push_back(start + i);
        } else if (s->is_array()) {
            for (std::size_t i = 0; i < s->size(); ++i)
                seeds.push_back(get_uint((*s)[i], sp + "[" + std::to_string(i) + "]"));
        } else {
            throw ConfigSchemaError(sp, "expected an array of seeds or {start, count}");
        }
        if (seeds.empty()) throw ConfigSchemaError(sp, "no seeds");
    }

    std::vector<json> variants;
    if (const json* v = find(j, "variants")) {
        if (!v->is_array() || v->empty()) throw ConfigSchemaError(join(path, "variants"), "expected a non-empty array");
        for (std::size_t i = 0; i < v->size(); ++i) {
            const std::string vp = join(path, "variants") + "[" + std::to_string(i) + "]";
            check_object((*v)[i], vp);
            json merged = *base;
            merged.merge_patch((*v)[i]);
            if (!(*v)[i].contains("label") && !base->contains("label")) merged["label"] = "variant" + std::to_string(i);
            variants.push_back(std::move(merged));
        }
    } else {
        variants.push_back(*base);
    }

    for (std::size_t i = 0; i < variants.size(); ++i) {
        const std::string vp = find(j, "variants") ? join(path, "variants") + "[" + std::to_string(i) + "]"
                                                    : join(path, "base");
        const RunConfig proto = parse_run(variants[i], vp, options);
        if (seeds.empty()) {
            doc.runs.push_back(proto);
            continue;
        }
        for (std::uint64_t seed : seeds) {
            RunConfig c = proto;
            c.seed = seed;
            doc.runs.push_back(std::move(c));
        }
    }

    if (const json* c = find(j, "checkpoints")) {
        const std::string cp = join(path, "checkpoints");
        if (!c->is_array()) throw ConfigSchemaError(cp, "expected an array of episode indices");
        for (std::size_t i = 0; i < c->size(); ++i)
            doc.checkpoints.push_back(get_uint((*c)[i], cp + "[" + std::to_string(i) + "]"));
    }
}

} // namespace

ConfigDocument parse_config(std::string_view text, const std::vector<std::string>& overrides,
                            const ParseOptions& options)
{
    json j = parse_text(text);
    check_object(j, "");
    for (const std::string& o : overrides) apply_override(j, o);

    ConfigDocument doc;
    doc.resolved = j.dump(2) + "\n";
    if (const json* s = find(j, "sweep")) {
        reject_unknown(j, "", {"sweep"});
        doc.is_sweep = true;
        expand_sweep(*s, doc, options);
    } else {
        doc.runs.push_back(parse_run(j, "", options));
    }
    return doc;
}

} // namespace regretlab
