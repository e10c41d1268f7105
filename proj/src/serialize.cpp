#include "cosmowave/serialize.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <istream>
#include <sstream>
#include <stdexcept>

namespace cosmowave {

using nlohmann::json;

std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

std::string fnv1a_hex(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void validate_keys(const json& obj, std::initializer_list<const char*> allowed,
                   const char* context) {
    if (!obj.is_object())
        throw std::invalid_argument(std::string(context) + ": expected a JSON object");
    for (const auto& [key, _] : obj.items()) {
        bool ok = false;
        for (const char* a : allowed)
            if (key == a) {
                ok = true;
                break;
            }
        if (!ok)
            throw std::invalid_argument(std::string(context) + ": unknown field '" + key + "'");
    }
}

void require_schema(const json& obj) {
    if (!obj.contains("schema") || obj["schema"] != kSchemaTag)
        throw std::invalid_argument(std::string("config: missing or unsupported schema, expected \"") +
                                    kSchemaTag + "\"");
}

json to_json(const ModelParams& m) {
    return json{{"n", m.n},       {"alpha", m.alpha},     {"mu", m.mu},
                {"p", m.p},       {"epsilon", m.epsilon}, {"R", m.R}};
}

ModelParams model_params_from_json(const json& j) {
    validate_keys(j, {"n", "alpha", "mu", "p", "epsilon", "R"}, "model");
    ModelParams m;
    m.n = j.value("n", m.n);
    m.alpha = j.value("alpha", m.alpha);
    m.mu = j.value("mu", m.mu);
    m.p = j.value("p", m.p);
    m.epsilon = j.value("epsilon", m.epsilon);
    m.R = j.value("R", m.R);
    m.validate();
    return m;
}

json to_json(const RadialGrid& g) {
    return json{{"r_max", g.r_max}, {"N", g.N}, {"n", g.n}};
}

RadialGrid radial_grid_from_json(const json& j) {
    validate_keys(j, {"r_max", "N", "n"}, "grid");
    RadialGrid g;
    g.r_max = j.value("r_max", g.r_max);
    g.N = j.value("N", g.N);
    g.n = j.value("n", g.n);
    g.validate();
    return g;
}

json to_json(const CoefficientDescriptor& k) {
    if (k.kind == CoefficientDescriptor::Kind::constant)
        return json{{"kind", "constant"}, {"A1", k.A1}};
    return json{{"kind", "cone"}, {"R", k.R},         {"alpha", k.alpha},
                {"n", k.n},       {"p", k.p},         {"scale", k.scale}};
}

CoefficientDescriptor coefficient_from_json(const json& j) {
    validate_keys(j, {"kind", "A1", "R", "alpha", "n", "p", "scale"}, "coefficient");
    CoefficientDescriptor k;
    const std::string kind = j.value("kind", "constant");
    if (kind == "constant")
        k.kind = CoefficientDescriptor::Kind::constant;
    else if (kind == "cone")
        k.kind = CoefficientDescriptor::Kind::cone;
    else
        throw std::invalid_argument("coefficient: kind must be 'constant' or 'cone'");
    k.A1 = j.value("A1", k.A1);
    k.R = j.value("R", k.R);
    k.alpha = j.value("alpha", k.alpha);
    k.n = j.value("n", k.n);
    k.p = j.value("p", k.p);
    k.scale = j.value("scale", k.scale);
    return k;
}

json to_json(const SimOptions& o) {
    return json{{"cfl", o.cfl},
                {"dt_policy", o.dt_policy == DtPolicy::fixed ? "fixed" : "cone"},
                {"dt_cap_rel", o.dt_cap_rel},
                {"nonlinearity", o.nonlinearity},
                {"stride", o.stride},
                {"support_tol_factor", o.support_tol_factor}};
}

void sim_options_from_json(const json& j, SimOptions& o) {
    validate_keys(j, {"cfl", "dt_policy", "dt_cap_rel", "nonlinearity", "stride",
                      "support_tol_factor"},
                  "options");
    o.cfl = j.value("cfl", o.cfl);
    if (j.contains("dt_policy")) {
        const std::string p = j["dt_policy"];
        if (p == "fixed")
            o.dt_policy = DtPolicy::fixed;
        else if (p == "cone")
            o.dt_policy = DtPolicy::cone;
        else
            throw std::invalid_argument("options: dt_policy must be 'fixed' or 'cone'");
    }
    o.dt_cap_rel = j.value("dt_cap_rel", o.dt_cap_rel);
    o.nonlinearity = j.value("nonlinearity", o.nonlinearity);
    o.stride = j.value("stride", o.stride);
    o.support_tol_factor = j.value("support_tol_factor", o.support_tol_factor);
}

json to_json(const OdeSweepConfig& c) {
    return json{{"mu", c.mu},       {"p", c.p},
                {"K", to_json(c.K)}, {"f0", c.f0},
                {"f1", c.f1},       {"t0", c.t0},
                {"threshold", c.threshold}, {"horizon", c.horizon},
                {"rel_tol", c.tol.rel}, {"abs_tol", c.tol.abs}};
}

OdeSweepConfig ode_sweep_config_from_json(const json& j) {
    validate_keys(j, {"mu", "p", "K", "f0", "f1", "t0", "threshold", "horizon", "rel_tol",
                      "abs_tol"},
                  "ode sweep config");
    OdeSweepConfig c;
    c.mu = j.value("mu", c.mu);
    c.p = j.value("p", c.p);
    if (j.contains("K")) c.K = coefficient_from_json(j["K"]);
    c.f0 = j.value("f0", c.f0);
    c.f1 = j.value("f1", c.f1);
    c.t0 = j.value("t0", c.t0);
    c.threshold = j.value("threshold", c.threshold);
    c.horizon = j.value("horizon", c.horizon);
    c.tol.rel = j.value("rel_tol", c.tol.rel);
    c.tol.abs = j.value("abs_tol", c.tol.abs);
    return c;
}

json to_json(const PdeSweepConfig& c) {
    return json{{"model", to_json(c.base)},
                {"grid", to_json(c.grid)},
                {"threshold", c.threshold},
                {"horizon", c.horizon},
                {"options", to_json(c.options)}};
}

PdeSweepConfig pde_sweep_config_from_json(const json& j) {
    validate_keys(j, {"model", "grid", "threshold", "horizon", "options"}, "pde sweep config");
    PdeSweepConfig c;
    if (j.contains("model")) c.base = model_params_from_json(j["model"]);
    if (j.contains("grid")) c.grid = radial_grid_from_json(j["grid"]);
    c.threshold = j.value("threshold", c.threshold);
    c.horizon = j.value("horizon", c.horizon);
    if (j.contains("options")) sim_options_from_json(j["options"], c.options);
    return c;
}

json to_json(const SweepConfig& c) {
    if (std::holds_alternative<OdeSweepConfig>(c))
        return json{{"source", "ode"}, {"config", to_json(std::get<OdeSweepConfig>(c))}};
    return json{{"source", "pde"}, {"config", to_json(std::get<PdeSweepConfig>(c))}};
}

std::string sweep_config_digest(const SweepConfig& c) {
    return fnv1a_hex(to_json(c).dump());
}

json to_json(const FitResult& f) {
    json excluded = json::array();
    for (double e : f.excluded_epsilons) excluded.push_back(e);
    return json{{"slope", f.slope},
                {"intercept", f.intercept},
                {"r_squared", f.r_squared},
                {"theory_slope", f.theory_slope},
                {"relative_deviation", f.relative_deviation},
                {"pass", f.pass},
                {"transform", fit_transform_label(f.transform)},
                {"points_used", f.points_used},
                {"excluded_epsilons", excluded}};
}

json sim_summary_json(const SimResult& r) {
    json j{{"schema", kSchemaTag},
           {"terminated_reason", sim_termination_label(r.terminated_reason)},
           {"samples", r.history.size()},
           {"h", r.h},
           {"support_tol", r.support_tol}};
    if (r.lifespan_estimate)
        j["lifespan_estimate"] = *r.lifespan_estimate;
    else
        j["lifespan_estimate"] = nullptr;
    if (!r.history.empty()) {
        j["final_time"] = r.history.back().t;
        j["final_max_u"] = r.history.back().max_u;
        j["final_F"] = r.history.back().F;
    }
    return j;
}

json ode_summary_json(const OdeTrajectory& t) {
    json j{{"schema", kSchemaTag},
           {"terminated_reason", ode_termination_label(t.terminated_reason)},
           {"steps", t.times.empty() ? 0 : t.times.size() - 1}};
    if (t.blowup_time)
        j["blowup_time"] = *t.blowup_time;
    else
        j["blowup_time"] = nullptr;
    if (!t.times.empty()) {
        j["final_time"] = t.times.back();
        j["final_F"] = t.F.back();
        j["final_Fprime"] = t.Fp.back();
    }
    return j;
}

std::string sim_history_csv(const SimResult& r) {
    std::string out = "t,max_u,support_r,F,Fprime\n";
    for (const auto& s : r.history) {
        out += format_double(s.t);
        out += ',';
        out += format_double(s.max_u);
        out += ',';
        out += format_double(s.support_r);
        out += ',';
        out += format_double(s.F);
        out += ',';
        out += format_double(s.Fprime);
        out += '\n';
    }
    return out;
}

std::string ode_trajectory_csv(const OdeTrajectory& t) {
    std::string out = "t,F,Fprime\n";
    for (size_t i = 0; i < t.times.size(); ++i) {
        out += format_double(t.times[i]);
        out += ',';
        out += format_double(t.F[i]);
        out += ',';
        out += format_double(t.Fp[i]);
        out += '\n';
    }
    return out;
}

std::string sweep_records_csv(std::span<const SweepRecord> records) {
    std::string out = "epsilon,lifespan,source\n";
    for (const auto& r : records) {
        out += format_double(r.epsilon);
        out += ',';
        if (r.lifespan) out += format_double(*r.lifespan);
        out += ',';
        out += sweep_source_label(r.source);
        out += '\n';
    }
    return out;
}

std::vector<SweepRecord> sweep_records_from_csv(std::istream& in) {
    std::vector<SweepRecord> out;
    std::string line;
    if (!std::getline(in, line))
        throw std::invalid_argument("sweep records: empty input");
    if (line != "epsilon,lifespan,source" && line != "epsilon,lifespan,source\r")
        throw std::invalid_argument("sweep records: unexpected header '" + line + "'");
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string eps, lifespan, source;
        if (!std::getline(ss, eps, ',') || !std::getline(ss, lifespan, ','))
            throw std::invalid_argument("sweep records: malformed row '" + line + "'");
        std::getline(ss, source, ',');
        SweepRecord rec;
        rec.epsilon = std::stod(eps);
        if (!lifespan.empty()) rec.lifespan = std::stod(lifespan);
        rec.source = (source == "pde") ? SweepSource::pde : SweepSource::ode;
        out.push_back(rec);
    }
    return out;
}

std::vector<double> parse_eps_grid(const std::string& spec) {
    std::vector<double> out;
    const auto dots = spec.find("..");
    if (dots != std::string::npos && spec.rfind("2^", 0) == 0) {
        const std::string lo_s = spec.substr(2, dots - 2);
        const std::string hi_part = spec.substr(dots + 2);
        if (hi_part.rfind("2^", 0) != 0)
            throw std::invalid_argument("eps grid: expected the form 2^a..2^b");
        const int e0 = std::stoi(lo_s);
        const int e1 = std::stoi(hi_part.substr(2));
        const int step = (e1 >= e0) ? 1 : -1;
        for (int e = e0;; e += step) {
            out.push_back(std::ldexp(1.0, e));
            if (e == e1) break;
        }
        return out;
    }
    std::istringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stod(item));
    }
    if (out.empty()) throw std::invalid_argument("eps grid: no values parsed from '" + spec + "'");
    for (double e : out)
        if (!(e > 0.0)) throw std::invalid_argument("eps grid: entries must be positive");
    return out;
}

}  // namespace cosmowave
