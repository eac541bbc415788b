#include "orthozeros/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "orthozeros/errors.hpp"

namespace oz {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& msg) {
    throw ConfigError("field '" + field + "': " + msg);
}

double get_number(const json& j, const std::string& field) {
    if (!j.is_number()) fail(field, "expected a number");
    double v = j.get<double>();
    if (!std::isfinite(v)) fail(field, "must be finite");
    return v;
}

int get_int(const json& j, const std::string& field) {
    if (!j.is_number_integer()) fail(field, "expected an integer");
    return j.get<int>();
}

std::vector<double> get_numbers(const json& j, const std::string& field) {
    if (!j.is_array()) fail(field, "expected an array of numbers");
    std::vector<double> out;
    for (size_t i = 0; i < j.size(); ++i) out.push_back(get_number(j[i], field + "[" + std::to_string(i) + "]"));
    return out;
}

template <class T>
T optional_field(const json& root, const char* key, T fallback, T (*get)(const json&, const std::string&)) {
    auto it = root.find(key);
    if (it == root.end()) return fallback;
    return get(*it, key);
}

SmoothWeight smooth_from_json(const json& w) {
    SmoothWeight sw;
    std::string form = w.value("form", "polynomial");
    if (!w.contains("coefficients")) fail("weight.coefficients", "missing");
    std::vector<double> c = get_numbers(w["coefficients"], "weight.coefficients");
    if (c.empty()) fail("weight.coefficients", "must not be empty");
    if (form == "polynomial") {
        sw.W = [c](double x) { return poly::eval(c, x); };
        sw.label = "polynomial";
    } else if (form == "exp_polynomial") {
        sw.W = [c](double x) { return std::exp(poly::eval(c, x)); };
        sw.label = "exp_polynomial";
    } else {
        fail("weight.form", "unknown form '" + form + "' (polynomial, exp_polynomial)");
    }
    std::string mode = w.value("sign_mode", "auto");
    if (mode == "auto")
        sw.sign_mode = SignMode::Auto;
    else if (mode == "literal")
        sw.sign_mode = SignMode::Literal;
    else
        fail("weight.sign_mode", "unknown mode '" + mode + "' (auto, literal)");
    return sw;
}

BernsteinSzegoWeight bs_from_json(const json& w) {
    BernsteinSzegoWeight bs;
    if (!w.contains("roots")) fail("weight.roots", "missing");
    const json& roots = w["roots"];
    if (!roots.is_array()) fail("weight.roots", "expected an array");
    for (size_t i = 0; i < roots.size(); ++i) {
        std::string f = "weight.roots[" + std::to_string(i) + "]";
        const json& r = roots[i];
        if (!r.is_object()) fail(f, "expected an object");
        if (!r.contains("re")) fail(f + ".re", "missing");
        BSRoot root;
        double re = get_number(r["re"], f + ".re");
        double im = r.contains("im") ? get_number(r["im"], f + ".im") : 0.0;
        root.w = cplx(re, im);
        root.multiplicity = r.contains("multiplicity") ? get_int(r["multiplicity"], f + ".multiplicity") : 1;
        if (root.multiplicity < 1) fail(f + ".multiplicity", "must be positive");
        root.eps = r.contains("sign") ? get_int(r["sign"], f + ".sign") : 1;
        if (root.eps != 1 && root.eps != -1) fail(f + ".sign", "must be 1 or -1");
        bs.roots.push_back(root);
    }
    if (w.contains("c")) {
        double c = get_number(w["c"], "weight.c");
        if (c == 0.0) fail("weight.c", "must be nonzero");
        bs.c = c;
    }
    return bs;
}

size_t line_of(const std::string& text, size_t byte) {
    size_t line = 1;
    for (size_t i = 0; i < std::min(byte, text.size()); ++i)
        if (text[i] == '\n') ++line;
    return line;
}

void dump(std::ostringstream& os, const json& j, int indent, int depth) {
    auto newline = [&](int d) {
        if (indent > 0) os << '\n' << std::string(static_cast<size_t>(indent * d), ' ');
    };
    const char* sep = indent > 0 ? ": " : ":";
    switch (j.type()) {
    case json::value_t::object: {
        if (j.empty()) {
            os << "{}";
            return;
        }
        os << '{';
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first) os << ',';
            first = false;
            newline(depth + 1);
            os << json(it.key()).dump() << sep;
            dump(os, it.value(), indent, depth + 1);
        }
        newline(depth);
        os << '}';
        return;
    }
    case json::value_t::array: {
        if (j.empty()) {
            os << "[]";
            return;
        }
        os << '[';
        for (size_t i = 0; i < j.size(); ++i) {
            if (i) os << ',';
            newline(depth + 1);
            dump(os, j[i], indent, depth + 1);
        }
        newline(depth);
        os << ']';
        return;
    }
    case json::value_t::number_float: {
        double v = j.get<double>();
        if (!std::isfinite(v)) {
            os << "null";
            return;
        }
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        os << buf;
        return;
    }
    default:
        os << j.dump();
    }
}

}  // namespace

WeightSpec RunConfig::weight_spec() const {
    if (!weight.contains("kind") || !weight["kind"].is_string()) fail("weight.kind", "missing or not a string");
    std::string kind = weight["kind"].get<std::string>();
    if (kind == "smooth") return WeightSpec(system(), R_roots, smooth_from_json(weight));
    if (kind == "bernstein_szego") return WeightSpec(system(), R_roots, bs_from_json(weight));
    fail("weight.kind", "expected 'smooth' or 'bernstein_szego'");
}

RunConfig parse_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("line " + std::to_string(line_of(text, e.byte)) + ": " + e.what());
    }
    if (!root.is_object()) throw ConfigError("line 1: top level must be an object");

    RunConfig cfg;
    if (!root.contains("schema_version")) fail("schema_version", "missing");
    cfg.schema_version = get_int(root["schema_version"], "schema_version");
    if (cfg.schema_version != kSchemaVersion)
        fail("schema_version", "unsupported version " + std::to_string(cfg.schema_version));

    if (!root.contains("endpoints")) fail("endpoints", "missing");
    cfg.endpoints = get_numbers(root["endpoints"], "endpoints");
    if (cfg.endpoints.size() < 2 || cfg.endpoints.size() % 2 != 0)
        fail("endpoints", "need an even number (at least 2) of values");
    for (size_t i = 1; i < cfg.endpoints.size(); ++i)
        if (!(cfg.endpoints[i] > cfg.endpoints[i - 1]))
            fail("endpoints", "must be strictly increasing (index " + std::to_string(i) + ")");

    if (root.contains("R_roots")) cfg.R_roots = get_numbers(root["R_roots"], "R_roots");
    for (size_t i = 0; i < cfg.R_roots.size(); ++i) {
        bool hit = false;
        for (double a : cfg.endpoints) hit = hit || a == cfg.R_roots[i];
        if (!hit) fail("R_roots[" + std::to_string(i) + "]", "must be one of the endpoints");
    }

    if (!root.contains("weight")) fail("weight", "missing");
    cfg.weight = root["weight"];
    if (!cfg.weight.is_object()) fail("weight", "expected an object");

    cfg.n_min = optional_field(root, "n_min", cfg.n_min, get_int);
    cfg.n_max = optional_field(root, "n_max", cfg.n_max, get_int);
    cfg.epsilon = optional_field(root, "epsilon", cfg.epsilon, get_number);
    cfg.threshold = optional_field(root, "threshold", cfg.threshold, get_number);
    cfg.tolerance = optional_field(root, "tolerance", cfg.tolerance, get_number);
    cfg.bins = optional_field(root, "bins", cfg.bins, get_int);
    if (cfg.n_min < 0) fail("n_min", "must be nonnegative");
    if (cfg.n_max < cfg.n_min) fail("n_max", "must be at least n_min");
    if (!(cfg.epsilon >= 0.0 && cfg.epsilon < 0.5)) fail("epsilon", "must lie in [0, 0.5)");
    if (!(cfg.threshold >= 0.0)) fail("threshold", "must be nonnegative");
    if (!(cfg.tolerance > 0.0)) fail("tolerance", "must be positive");
    if (cfg.bins < 1) fail("bins", "must be positive");

    const int g = static_cast<int>(cfg.endpoints.size() / 2) - 1;
    if (root.contains("targets")) {
        const json& t = root["targets"];
        if (!t.is_array()) fail("targets", "expected an array of arrays");
        for (size_t i = 0; i < t.size(); ++i) {
            std::string f = "targets[" + std::to_string(i) + "]";
            auto v = get_numbers(t[i], f);
            if (static_cast<int>(v.size()) != g) fail(f, "need one value per gap");
            cfg.targets.push_back(v);
        }
    }
    if (root.contains("periodicity")) {
        const json& p = root["periodicity"];
        if (!p.is_object()) fail("periodicity", "expected an object");
        if (!p.contains("N")) fail("periodicity.N", "missing");
        PeriodicityConfig pc;
        pc.N = get_int(p["N"], "periodicity.N");
        if (pc.N < 1) fail("periodicity.N", "must be positive");
        if (!p.contains("k")) fail("periodicity.k", "missing");
        if (!p["k"].is_array()) fail("periodicity.k", "expected an array");
        for (size_t i = 0; i < p["k"].size(); ++i) pc.k.push_back(get_int(p["k"][i], "periodicity.k"));
        if (static_cast<int>(pc.k.size()) != g) fail("periodicity.k", "need one value per gap");
        cfg.periodicity = pc;
    }

    try {
        (void)cfg.weight_spec();
    } catch (const DomainError& e) {
        fail("weight", e.what());
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string dump_json(const json& j, int indent) {
    std::ostringstream os;
    dump(os, j, indent, 0);
    os << '\n';
    return os.str();
}

}  // namespace oz
