#include "ddwave/config.hpp"

#include <fstream>
#include <set>

namespace ddw {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::string& where, const std::set<std::string>& allowed)
{
    if (!obj.is_object()) throw ValidationError(where + " must be a JSON object");
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (!allowed.count(key)) throw ValidationError("unknown key '" + key + "' in " + where);
    }
}

template <typename T>
void read(const json& obj, const char* key, T& out, const std::string& where)
{
    if (!obj.contains(key)) return;
    try {
        out = obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ValidationError(where + "." + key + " has the wrong type");
    }
}

void read_size(const json& obj, const char* key, std::size_t& out, const std::string& where)
{
    if (!obj.contains(key)) return;
    const json& v = obj.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0)
        throw ValidationError(where + "." + key + " must be a nonnegative integer");
    out = v.get<std::size_t>();
}

std::vector<double> read_times(const json& v, const std::string& where)
{
    if (v.is_array()) {
        std::vector<double> out;
        for (const auto& x : v) {
            if (!x.is_number()) throw ValidationError(where + " entries must be numbers");
            out.push_back(x.get<double>());
        }
        return out;
    }
    reject_unknown(v, where, {"start", "stop", "count"});
    double start = 1e2, stop = 1e4;
    std::size_t count = 25;
    read(v, "start", start, where);
    read(v, "stop", stop, where);
    read_size(v, "count", count, where);
    return log_spaced(start, stop, count);
}

}  // namespace

void ExperimentConfig::finalize()
{
    params = validate_params(raw.a, raw.b, raw.rho, raw.theta);
    zone.validate();
    grid.validate();
    data.validate();
    study_config().validate();
    if (!(study.window_min > 0.0 && study.window_max > study.window_min))
        throw ValidationError("study.window must satisfy 0 < min < max");
    if (!(study.rate_tolerance > 0.0 && study.refinement_tolerance > 0.0))
        throw ValidationError("study tolerances must be positive");
    if (!(sweep.r_min > 0.0 && sweep.r_max > sweep.r_min)) throw ValidationError("sweep band must satisfy 0 < r_min < r_max");
    if (sweep.n < 20) throw ValidationError("sweep.n must be at least 20");
    if (scan.samples < 2) throw ValidationError("scan.samples must be at least 2");
    if (!(pointwise.r_min > 0.0 && pointwise.r_max > pointwise.r_min) || pointwise.r_count < 2)
        throw ValidationError("pointwise band must satisfy 0 < r_min < r_max with at least 2 samples");
    if (pointwise.times.empty()) throw ValidationError("pointwise.times must be nonempty");
    for (double t : pointwise.times)
        if (!(t >= 0.0)) throw ValidationError("pointwise.times must be nonnegative");
    if (!(gevrey.t >= 0.0)) throw ValidationError("gevrey.t must be nonnegative");
    if (gevrey.c_prime && !(*gevrey.c_prime > 0.0)) throw ValidationError("gevrey.c_prime must be positive");
    if (!(gevrey.r_min > 0.0 && gevrey.r_max >= gevrey.r_min) || gevrey.samples < 1)
        throw ValidationError("gevrey band must satisfy 0 < r_min <= r_max with at least 1 sample");
}

StudyConfig ExperimentConfig::study_config() const
{
    StudyConfig cfg;
    cfg.params = params;
    cfg.data = data;
    cfg.s = study.s;
    cfg.data_class = study.data_class;
    cfg.m = study.m;
    cfg.gamma = study.gamma;
    cfg.pipeline = study.pipeline;
    cfg.times = study.times;
    cfg.zone = zone;
    cfg.grid = grid;
    cfg.angles = study.angles;
    cfg.rel_tol = study.rel_tol;
    return cfg;
}

nlohmann::json ExperimentConfig::to_json() const
{
    json formats = json::array();
    if (output.csv) formats.push_back("csv");
    if (output.json) formats.push_back("json");
    if (output.svg) formats.push_back("svg");
    json gevrey_block = {{"t", gevrey.t}, {"r_min", gevrey.r_min}, {"r_max", gevrey.r_max},
                         {"samples", gevrey.samples}, {"bound", gevrey.bound}};
    if (gevrey.c_prime) gevrey_block["c_prime"] = *gevrey.c_prime;
    return {
        {"params", {{"a", raw.a}, {"b", raw.b}, {"rho", raw.rho}, {"theta", raw.theta},
                    {"regime", std::string(ddw::to_string(params.regime))}}},
        {"zone", {{"eps", zone.eps}, {"N", zone.N}, {"w_int", zone.w_int}, {"w_ext", zone.w_ext}}},
        {"grid", {{"n", grid.n}, {"L", grid.L}}},
        {"data", {{"kind", ddw::to_string(data.kind)}, {"width", data.width}, {"amplitude", data.amplitude},
                  {"target", ddw::to_string(data.target)},
                  {"direction", {data.direction(0), data.direction(1), data.direction(2), data.direction(3)}}}},
        {"study", {{"s", study.s}, {"class", ddw::to_string(study.data_class)}, {"m", study.m},
                   {"gamma", study.gamma}, {"times", study.times},
                   {"window", {study.window_min, study.window_max}}, {"pipeline", ddw::to_string(study.pipeline)},
                   {"angles", study.angles}, {"rel_tol", study.rel_tol},
                   {"rate_tolerance", study.rate_tolerance}, {"refinement_tolerance", study.refinement_tolerance}}},
        {"sweep", {{"regime", sweep.regime == FrequencyRegime::Small ? "small" : "large"},
                   {"r_min", sweep.r_min}, {"r_max", sweep.r_max}, {"n", sweep.n}}},
        {"scan", {{"samples", scan.samples}, {"min_real_part_floor", scan.min_real_part_floor}}},
        {"pointwise", {{"r_min", pointwise.r_min}, {"r_max", pointwise.r_max}, {"r_count", pointwise.r_count},
                       {"times", pointwise.times}}},
        {"gevrey", gevrey_block},
        {"output", {{"directory", output.directory}, {"formats", formats}}},
        {"seed", seed},
    };
}

ExperimentConfig parse_config(const nlohmann::json& doc)
{
    reject_unknown(doc, "config",
                   {"params", "zone", "grid", "data", "study", "sweep", "scan", "pointwise", "gevrey", "output", "seed"});
    ExperimentConfig cfg;

    std::optional<std::string> stated_regime;
    if (doc.contains("params")) {
        const json& p = doc["params"];
        // "regime" is derived; it is accepted so that emitted configs load back, and must agree.
        reject_unknown(p, "params", {"a", "b", "rho", "theta", "regime"});
        if (p.contains("regime")) {
            std::string regime;
            read(p, "regime", regime, "params");
            stated_regime = regime;
        }
        read(p, "a", cfg.raw.a, "params");
        read(p, "b", cfg.raw.b, "params");
        read(p, "rho", cfg.raw.rho, "params");
        read(p, "theta", cfg.raw.theta, "params");
    }
    if (doc.contains("zone")) {
        const json& z = doc["zone"];
        reject_unknown(z, "zone", {"eps", "N", "w_int", "w_ext"});
        read(z, "eps", cfg.zone.eps, "zone");
        read(z, "N", cfg.zone.N, "zone");
        read(z, "w_int", cfg.zone.w_int, "zone");
        read(z, "w_ext", cfg.zone.w_ext, "zone");
    }
    if (doc.contains("grid")) {
        const json& g = doc["grid"];
        reject_unknown(g, "grid", {"n", "L"});
        read_size(g, "n", cfg.grid.n, "grid");
        read(g, "L", cfg.grid.L, "grid");
    }
    if (doc.contains("data")) {
        const json& d = doc["data"];
        reject_unknown(d, "data", {"kind", "width", "amplitude", "target", "direction"});
        std::string kind = to_string(cfg.data.kind), target = to_string(cfg.data.target);
        read(d, "kind", kind, "data");
        read(d, "target", target, "data");
        cfg.data.kind = parse_data_kind(kind);
        cfg.data.target = parse_data_target(target);
        read(d, "width", cfg.data.width, "data");
        read(d, "amplitude", cfg.data.amplitude, "data");
        if (d.contains("direction")) {
            std::vector<double> dir;
            read(d, "direction", dir, "data");
            if (dir.size() != 4 && dir.size() != 2) throw ValidationError("data.direction must have 2 or 4 entries");
            cfg.data.direction.setZero();
            for (std::size_t k = 0; k < dir.size(); ++k) cfg.data.direction(static_cast<Eigen::Index>(k)) = dir[k];
        }
    }
    if (doc.contains("study")) {
        const json& s = doc["study"];
        reject_unknown(s, "study", {"s", "class", "m", "gamma", "times", "window", "pipeline", "angles", "rel_tol",
                                    "rate_tolerance", "refinement_tolerance"});
        read(s, "s", cfg.study.s, "study");
        if (s.contains("class")) {
            std::string cls;
            read(s, "class", cls, "study");
            cfg.study.data_class = parse_data_class(cls);
        }
        read(s, "m", cfg.study.m, "study");
        read(s, "gamma", cfg.study.gamma, "study");
        if (s.contains("times")) cfg.study.times = read_times(s["times"], "study.times");
        if (s.contains("window")) {
            std::vector<double> w;
            read(s, "window", w, "study");
            if (w.size() != 2) throw ValidationError("study.window must be [t_min, t_max]");
            cfg.study.window_min = w[0];
            cfg.study.window_max = w[1];
        }
        if (s.contains("pipeline")) {
            std::string pipe;
            read(s, "pipeline", pipe, "study");
            cfg.study.pipeline = parse_pipeline(pipe);
        }
        read_size(s, "angles", cfg.study.angles, "study");
        read(s, "rel_tol", cfg.study.rel_tol, "study");
        read(s, "rate_tolerance", cfg.study.rate_tolerance, "study");
        read(s, "refinement_tolerance", cfg.study.refinement_tolerance, "study");
    }
    if (doc.contains("sweep")) {
        const json& s = doc["sweep"];
        reject_unknown(s, "sweep", {"regime", "r_min", "r_max", "n"});
        if (s.contains("regime")) {
            std::string regime;
            read(s, "regime", regime, "sweep");
            if (regime == "small") cfg.sweep.regime = FrequencyRegime::Small;
            else if (regime == "large") cfg.sweep.regime = FrequencyRegime::Large;
            else throw ValidationError("sweep.regime must be small or large");
            if (cfg.sweep.regime == FrequencyRegime::Large) {
                cfg.sweep.r_min = 1e2;
                cfg.sweep.r_max = 1e4;
            }
        }
        read(s, "r_min", cfg.sweep.r_min, "sweep");
        read(s, "r_max", cfg.sweep.r_max, "sweep");
        read_size(s, "n", cfg.sweep.n, "sweep");
    }
    if (doc.contains("scan")) {
        const json& s = doc["scan"];
        reject_unknown(s, "scan", {"samples", "min_real_part_floor"});
        read_size(s, "samples", cfg.scan.samples, "scan");
        read(s, "min_real_part_floor", cfg.scan.min_real_part_floor, "scan");
    }
    if (doc.contains("pointwise")) {
        const json& s = doc["pointwise"];
        reject_unknown(s, "pointwise", {"r_min", "r_max", "r_count", "times"});
        read(s, "r_min", cfg.pointwise.r_min, "pointwise");
        read(s, "r_max", cfg.pointwise.r_max, "pointwise");
        read_size(s, "r_count", cfg.pointwise.r_count, "pointwise");
        read(s, "times", cfg.pointwise.times, "pointwise");
    }
    if (doc.contains("gevrey")) {
        const json& s = doc["gevrey"];
        reject_unknown(s, "gevrey", {"t", "c_prime", "r_min", "r_max", "samples", "bound"});
        read(s, "t", cfg.gevrey.t, "gevrey");
        if (s.contains("c_prime") && !s["c_prime"].is_null()) {
            double c = 0.0;
            read(s, "c_prime", c, "gevrey");
            cfg.gevrey.c_prime = c;
        }
        read(s, "r_min", cfg.gevrey.r_min, "gevrey");
        read(s, "r_max", cfg.gevrey.r_max, "gevrey");
        read_size(s, "samples", cfg.gevrey.samples, "gevrey");
        read(s, "bound", cfg.gevrey.bound, "gevrey");
    }
    if (doc.contains("output")) {
        const json& o = doc["output"];
        reject_unknown(o, "output", {"directory", "formats"});
        read(o, "directory", cfg.output.directory, "output");
        if (o.contains("formats")) {
            std::vector<std::string> formats;
            read(o, "formats", formats, "output");
            cfg.output.csv = cfg.output.json = cfg.output.svg = false;
            for (const auto& f : formats) {
                if (f == "csv") cfg.output.csv = true;
                else if (f == "json") cfg.output.json = true;
                else if (f == "svg") cfg.output.svg = true;
                else throw ValidationError("output.formats entries must be csv, json or svg (got '" + f + "')");
            }
        }
    }
    if (doc.contains("seed")) {
        const json& s = doc["seed"];
        if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0))
            throw ValidationError("seed must be a nonnegative integer");
        cfg.seed = s.get<std::uint64_t>();
    }
    cfg.finalize();
    if (stated_regime && *stated_regime != ddw::to_string(cfg.params.regime))
        throw ValidationError("params.regime '" + *stated_regime + "' disagrees with rho + theta (regime "
                              + std::string(ddw::to_string(cfg.params.regime)) + ")");
    return cfg;
}

ExperimentConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError("config '" + path + "' is not valid JSON: " + e.what());
    }
    return parse_config(doc);
}

}  // namespace ddw
