#include "biohybrid/config.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "json.hpp"

#include "biohybrid/errors.hpp"
#include "biohybrid/io.hpp"

namespace biohybrid {

using nlohmann::json;

namespace {

struct UnitEntry
{
    const char* unit;
    double factor;
};

const std::map<std::string, std::vector<UnitEntry>>& unit_table()
{
    // first entry of each dimension is the internal unit
    static const std::map<std::string, std::vector<UnitEntry>> t{
        {"stress", {{"MPa", 1.0}, {"N/mm^2", 1.0}, {"kPa", 1e-3}, {"Pa", 1e-6}, {"GPa", 1e3}}},
        {"specific_energy",
         {{"MPa*mm^3/ug", 1.0}, {"mJ/ug", 1.0}, {"N*mm/ug", 1.0}, {"J/ug", 1e3}, {"J/mg", 1.0}, {"J/g", 1e-3}}},
        {"density", {{"ug/mm^3", 1.0}, {"mg/mL", 1.0}, {"mg/cm^3", 1.0}, {"kg/m^3", 1.0}, {"g/L", 1.0}}},
        {"length", {{"mm", 1.0}, {"um", 1e-3}, {"cm", 10.0}, {"m", 1e3}}},
        {"time", {{"day", 1.0}, {"d", 1.0}, {"h", 1.0 / 24.0}, {"min", 1.0 / 1440.0}, {"s", 1.0 / 86400.0}}},
        {"cell_density", {{"cells/mm^3", 1.0}, {"cells/mL", 1e-3}, {"cells/cm^3", 1e-3}}},
        {"mass_per_cell", {{"ug/cell", 1.0}, {"ng/cell", 1e-3}, {"pg/cell", 1e-6}}},
        {"volume_rate_per_cell", {{"mm^3/cell/day", 1.0}, {"mL/cell/day", 1e3}}},
        {"dimensionless", {{"-", 1.0}, {"1", 1.0}}},
    };
    return t;
}

const char* internal_unit(const std::string& dim)
{
    return unit_table().at(dim).front().unit;
}

[[noreturn]] void bad(const std::string& path, const std::string& msg)
{
    throw ConfigError((path.empty() ? std::string("/") : path) + ": " + msg);
}

// Typed access to one JSON object with unknown-key rejection.
class Obj
{
public:
    Obj(const json& j, std::string path) : j_(j), path_(std::move(path))
    {
        if (!j_.is_object())
            bad(path_, "expected an object");
    }

    const std::string& path() const { return path_; }
    std::string at(const std::string& key) const { return path_ + "/" + key; }
    bool has(const std::string& key) const { return j_.contains(key); }

    const json& raw(const std::string& key)
    {
        seen_.insert(key);
        return j_.at(key);
    }

    Obj obj(const std::string& key)
    {
        if (!has(key))
            bad(at(key), "missing required block");
        return Obj(raw(key), at(key));
    }

    void number(const std::string& key, double& out)
    {
        if (!has(key))
            return;
        const json& v = raw(key);
        if (!v.is_number())
            bad(at(key), "expected a number");
        out = v.get<double>();
        if (!std::isfinite(out))
            bad(at(key), "must be finite");
    }

    void quantity(const std::string& key, const std::string& dim, double& out)
    {
        if (!has(key))
            return;
        out = parse_quantity(raw(key), dim, at(key));
    }

    void integer(const std::string& key, int& out)
    {
        if (!has(key))
            return;
        const json& v = raw(key);
        if (!v.is_number_integer())
            bad(at(key), "expected an integer");
        out = v.get<int>();
    }

    void boolean(const std::string& key, bool& out)
    {
        if (!has(key))
            return;
        const json& v = raw(key);
        if (!v.is_boolean())
            bad(at(key), "expected true or false");
        out = v.get<bool>();
    }

    void string(const std::string& key, std::string& out)
    {
        if (!has(key))
            return;
        const json& v = raw(key);
        if (!v.is_string())
            bad(at(key), "expected a string");
        out = v.get<std::string>();
    }

    void direction(const std::string& key, Direction& out)
    {
        if (!has(key))
            return;
        const json& v = raw(key);
        if (!v.is_array() || v.size() != 3 || !std::all_of(v.begin(), v.end(), [](auto& x) { return x.is_number(); }))
            bad(at(key), "expected three numbers");
        try {
            out = Direction(v[0].get<double>(), v[1].get<double>(), v[2].get<double>());
        } catch (const Error& e) {
            bad(at(key), e.what());
        }
    }

    void finish() const
    {
        for (const auto& [key, _] : j_.items())
            if (!seen_.count(key))
                bad(at(key), "unknown key");
    }

    static double parse_quantity(const json& v, const std::string& dim, const std::string& path)
    {
        if (v.is_number()) {
            const double x = v.get<double>();
            if (!std::isfinite(x))
                bad(path, "must be finite");
            return x;
        }
        if (!v.is_object())
            bad(path, "expected a number or a {value, unit} object");
        for (const auto& [k, _] : v.items())
            if (k != "value" && k != "unit")
                bad(path + "/" + k, "unknown key");
        if (!v.contains("value") || !v["value"].is_number())
            bad(path + "/value", "expected a number");
        double x = v["value"].get<double>();
        if (v.contains("unit")) {
            if (!v["unit"].is_string())
                bad(path + "/unit", "expected a string");
            try {
                x *= unit_factor(dim, v["unit"].get<std::string>());
            } catch (const ConfigError& e) {
                bad(path + "/unit", e.what());
            }
        }
        if (!std::isfinite(x))
            bad(path, "must be finite");
        return x;
    }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

template <class F>
void each(Obj& parent, const std::string& key, F&& f)
{
    if (!parent.has(key))
        return;
    const json& arr = parent.raw(key);
    if (!arr.is_array())
        bad(parent.at(key), "expected an array");
    for (std::size_t i = 0; i < arr.size(); ++i)
        f(arr[i], parent.at(key) + "/" + std::to_string(i));
}

template <class V>
void checked(const std::string& path, const V& v)
{
    try {
        v.validate();
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        bad(path, e.what());
    }
}

void read_material(Obj m, MaterialParams& p)
{
    if (m.has("matrix")) {
        Obj o = m.obj("matrix");
        o.quantity("lambda", "stress", p.matrix.lambda);
        o.quantity("mu", "stress", p.matrix.mu);
        o.finish();
        checked(o.path(), p.matrix);
    }
    if (m.has("collagen")) {
        Obj o = m.obj("collagen");
        o.quantity("k1", "stress", p.collagen.k1);
        o.number("k2", p.collagen.k2);
        o.number("kappa", p.collagen.kappa);
        o.direction("direction", p.collagen.a);
        o.quantity("rho_f", "density", p.collagen.rho_f);
        o.finish();
        checked(o.path(), p.collagen);
    }
    if (m.has("textile")) {
        Obj o = m.obj("textile");
        auto& t = p.textile;
        o.quantity("K1_1", "stress", t.K1_1);
        o.quantity("K1_2", "stress", t.K1_2);
        o.quantity("K2_1", "stress", t.K2_1);
        o.quantity("K2_2", "stress", t.K2_2);
        o.quantity("Kcoup1", "stress", t.Kcoup1);
        o.quantity("Kcoup2", "stress", t.Kcoup2);
        o.quantity("KcoupAni", "stress", t.KcoupAni);
        o.integer("beta1", t.beta1);
        o.integer("beta2", t.beta2);
        o.integer("gamma1", t.gamma1);
        o.integer("gamma2", t.gamma2);
        o.integer("delta1", t.delta1);
        o.integer("delta2", t.delta2);
        o.integer("xi", t.xi);
        o.direction("n1", t.n1);
        o.direction("n2", t.n2);
        o.finish();
        checked(o.path(), t);
    }
    m.finish();
}

void read_growth(Obj o, GrowthParams& g)
{
    o.quantity("a1", "mass_per_cell", g.a1);
    o.quantity("a2", "volume_rate_per_cell", g.a2);
    o.quantity("psi_crit", "specific_energy", g.psi_crit);
    o.quantity("rho_th", "density", g.rho_th);
    o.quantity("c_cell", "cell_density", g.c_cell);
    o.quantity("tau", "time", g.tau);
    o.number("h", g.h);
    o.finish();
    checked(o.path(), g);
}

MeshSource read_mesh_source(Obj o)
{
    MeshSource src;
    if (o.has("file") == o.has("strip"))
        bad(o.path(), "give exactly one of 'file' or 'strip'");
    if (o.has("file")) {
        o.string("file", src.file);
        if (src.file.empty())
            bad(o.at("file"), "empty path");
    } else {
        Obj s = o.obj("strip");
        s.quantity("l", "length", src.strip.l);
        s.quantity("w", "length", src.strip.w);
        s.quantity("t", "length", src.strip.t);
        s.integer("nx", src.strip.nx);
        s.integer("ny", src.strip.ny);
        s.integer("nz", src.strip.nz);
        s.finish();
        if (!(src.strip.l > 0 && src.strip.w > 0 && src.strip.t > 0))
            bad(s.path(), "strip dimensions must be > 0");
        if (src.strip.nx < 1 || src.strip.ny < 1 || src.strip.nz < 1)
            bad(s.path(), "element counts must be >= 1");
    }
    o.finish();
    return src;
}

std::vector<DirichletSpec> read_dirichlet(Obj& parent)
{
    std::vector<DirichletSpec> out;
    each(parent, "dirichlet", [&](const json& j, const std::string& path) {
        Obj o(j, path);
        DirichletSpec d;
        if (!o.has("node_set"))
            bad(o.at("node_set"), "missing required key");
        o.string("node_set", d.node_set);
        o.integer("component", d.component);
        o.quantity("value", "length", d.value);
        o.finish();
        if (d.component < 0 || d.component > 2)
            bad(o.at("component"), "must be 0, 1 or 2");
        out.push_back(d);
    });
    return out;
}

ForwardModel parse_model(const std::string& s, const std::string& path)
{
    if (s == "uniaxial")
        return ForwardModel::uniaxial;
    if (s == "biaxial")
        return ForwardModel::biaxial;
    if (s == "fem")
        return ForwardModel::fem;
    bad(path, "unknown model '" + s + "' (uniaxial, biaxial, fem)");
}

const char* model_name(ForwardModel m)
{
    switch (m) {
    case ForwardModel::uniaxial:
        return "uniaxial";
    case ForwardModel::biaxial:
        return "biaxial";
    case ForwardModel::fem:
        return "fem";
    }
    return "";
}

const char* mode_name(RunMode m)
{
    switch (m) {
    case RunMode::matpoint:
        return "matpoint";
    case RunMode::grow:
        return "grow";
    case RunMode::fit:
        return "fit";
    case RunMode::fem:
        return "fem";
    }
    return "";
}

} // namespace

double unit_factor(const std::string& dimension, const std::string& unit)
{
    const auto it = unit_table().find(dimension);
    if (it == unit_table().end())
        throw ConfigError("unknown dimension '" + dimension + "'");
    for (const auto& e : it->second)
        if (unit == e.unit)
            return e.factor;
    std::string known;
    for (const auto& e : it->second)
        known += (known.empty() ? "" : ", ") + std::string(e.unit);
    throw ConfigError("unsupported unit '" + unit + "' for " + dimension + " (known: " + known + ")");
}

RunConfig parse_config(const std::string& text)
{
    json root;
    try {
        root = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("/: malformed JSON: ") + e.what());
    }
    Obj top(root, "");
    RunConfig c;

    if (!top.has("mode"))
        bad("/mode", "missing required key");
    std::string mode;
    top.string("mode", mode);
    if (mode == "matpoint")
        c.mode = RunMode::matpoint;
    else if (mode == "grow")
        c.mode = RunMode::grow;
    else if (mode == "fit")
        c.mode = RunMode::fit;
    else if (mode == "fem")
        c.mode = RunMode::fem;
    else
        bad("/mode", "unknown mode '" + mode + "' (matpoint, grow, fit, fem)");

    if (top.has("material"))
        read_material(top.obj("material"), c.material);
    if (top.has("growth"))
        read_growth(top.obj("growth"), c.material.growth);

    if (top.has("schedule")) {
        Obj o = top.obj("schedule");
        auto& s = c.schedule;
        o.quantity("t_end", "time", s.t_end);
        o.quantity("grow_dt", "time", c.grow_dt);
        o.integer("ramp_steps", s.ramp_steps);
        o.quantity("dt_initial", "time", s.dt_initial);
        o.quantity("dt_max", "time", s.dt_max);
        o.number("dt_growth", s.dt_growth);
        o.quantity("dt_min", "time", s.dt_min);
        each(o, "snapshot_times", [&](const json& j, const std::string& path) {
            s.snapshot_times.push_back(Obj::parse_quantity(j, "time", path));
        });
        o.finish();
        if (!(s.t_end > 0.0))
            bad(o.at("t_end"), "must be > 0");
        if (!(c.grow_dt > 0.0))
            bad(o.at("grow_dt"), "must be > 0");
        if (s.ramp_steps < 1)
            bad(o.at("ramp_steps"), "must be >= 1");
        if (!(s.dt_initial > 0.0) || !(s.dt_max >= s.dt_initial) || !(s.dt_min > 0.0))
            bad(o.path(), "need 0 < dt_initial <= dt_max and dt_min > 0");
        if (!(s.dt_growth >= 1.0))
            bad(o.at("dt_growth"), "must be >= 1");
    }

    if (top.has("solver")) {
        Obj o = top.obj("solver");
        auto& s = c.solver;
        o.quantity("tol_force", "dimensionless", s.tol_force);
        o.number("tol_energy", s.tol_energy);
        o.integer("max_iterations", s.max_iterations);
        o.boolean("load_stiffness", s.load_stiffness);
        o.boolean("line_search", s.line_search);
        o.boolean("early_exit", s.early_exit);
        o.boolean("mean_dilatation", s.mean_dilatation);
        o.number("local_tolerance", s.local.tolerance);
        o.integer("local_max_iterations", s.local.max_iterations);
        o.finish();
        if (!(s.tol_force > 0.0) || !(s.tol_energy > 0.0) || !(s.local.tolerance > 0.0))
            bad(o.path(), "tolerances must be > 0");
        if (s.max_iterations < 1 || s.local.max_iterations < 1)
            bad(o.path(), "iteration limits must be >= 1");
    }

    if (top.has("matpoint")) {
        Obj o = top.obj("matpoint");
        MatpointConfig mp;
        std::string measure = "stretch";
        o.string("measure", measure);
        if (measure == "stretch")
            mp.program.measure = ControlMeasure::stretch;
        else if (measure == "engineering_strain")
            mp.program.measure = ControlMeasure::engineering_strain;
        else
            bad(o.at("measure"), "expected 'stretch' or 'engineering_strain'");
        o.integer("output_every", mp.program.output_every);
        o.boolean("evolve_density", mp.evolve_density);
        o.quantity("initial_rho", "density", mp.initial_rho);
        if (!o.has("steps"))
            bad(o.at("steps"), "missing required key");
        each(o, "steps", [&](const json& j, const std::string& path) {
            Obj s(j, path);
            LoadStep step;
            if (!s.has("time"))
                bad(s.at("time"), "missing required key");
            s.quantity("time", "time", step.time);
            if (!s.has("axes"))
                bad(s.at("axes"), "missing required key");
            const json& ax = s.raw("axes");
            if (!ax.is_array() || ax.size() != 3)
                bad(s.at("axes"), "expected three entries (number or null)");
            for (int i = 0; i < 3; ++i) {
                if (ax[i].is_null())
                    continue;
                if (!ax[i].is_number())
                    bad(s.at("axes") + "/" + std::to_string(i), "expected a number or null");
                step.axes[i] = ax[i].get<double>();
            }
            s.finish();
            mp.program.steps.push_back(step);
        });
        o.finish();
        checked(o.path(), mp.program);
        if (mp.initial_rho < 0.0)
            bad(o.at("initial_rho"), "must be >= 0");
        c.matpoint = mp;
    }

    if (top.has("fem")) {
        Obj o = top.obj("fem");
        FemConfig f;
        f.mesh = read_mesh_source(o.obj("mesh"));
        f.dirichlet = read_dirichlet(o);
        each(o, "pressure", [&](const json& j, const std::string& path) {
            Obj p(j, path);
            PressureSpec ps;
            if (!p.has("face_set"))
                bad(p.at("face_set"), "missing required key");
            p.string("face_set", ps.face_set);
            p.quantity("magnitude", "stress", ps.magnitude);
            p.finish();
            f.pressures.push_back(ps);
        });
        o.boolean("write_vtk", f.write_vtk);
        o.finish();
        c.fem = f;
    }

    if (top.has("fit")) {
        Obj o = top.obj("fit");
        FitConfig f;
        std::string kind = "weibull";
        o.string("kind", kind);
        if (kind == "weibull")
            f.kind = FitKind::weibull;
        else if (kind == "material")
            f.kind = FitKind::material;
        else
            bad(o.at("kind"), "expected 'weibull' or 'material'");
        each(o, "data", [&](const json& j, const std::string& path) {
            Obj d(j, path);
            FitDataConfig dc;
            if (!d.has("file"))
                bad(d.at("file"), "missing required key");
            d.string("file", dc.file);
            std::string model = "uniaxial";
            d.string("model", model);
            dc.model = parse_model(model, d.at("model"));
            d.number("ratio_y", dc.ratio_y);
            d.integer("stress_axis", dc.stress_axis);
            d.number("relative_density", dc.relative_density);
            d.number("weight", dc.weight);
            if (d.has("fem")) {
                Obj fo = d.obj("fem");
                FitFemConfig ff;
                ff.mesh = read_mesh_source(fo.obj("mesh"));
                ff.dirichlet = read_dirichlet(fo);
                if (!fo.has("reaction_set"))
                    bad(fo.at("reaction_set"), "missing required key");
                fo.string("reaction_set", ff.reaction_set);
                fo.integer("component", ff.component);
                fo.number("area", ff.area);
                fo.number("x_at_full_load", ff.x_at_full_load);
                fo.finish();
                if (!(ff.area > 0.0) || !(ff.x_at_full_load != 0.0))
                    bad(fo.path(), "area must be > 0 and x_at_full_load nonzero");
                if (ff.component < 0 || ff.component > 2)
                    bad(fo.at("component"), "must be 0, 1 or 2");
                dc.fem = ff;
            }
            d.finish();
            if (dc.model == ForwardModel::fem && !dc.fem)
                bad(d.at("fem"), "the fem model needs a fem block");
            if (dc.stress_axis < 0 || dc.stress_axis > 2)
                bad(d.at("stress_axis"), "must be 0, 1 or 2");
            if (!(dc.relative_density >= 0.0))
                bad(d.at("relative_density"), "must be >= 0");
            if (!(dc.weight >= 0.0))
                bad(d.at("weight"), "must be >= 0");
            f.data.push_back(dc);
        });
        each(o, "parameters", [&](const json& j, const std::string& path) {
            Obj p(j, path);
            FitParameterConfig pc;
            p.string("name", pc.name);
            p.number("initial", pc.initial);
            p.number("lower", pc.lower);
            p.number("upper", pc.upper);
            p.finish();
            try {
                MaterialParams probe;
                set_parameter(probe, pc.name, pc.initial);
            } catch (const ConfigError& e) {
                bad(p.at("name"), e.what());
            }
            if (!(pc.lower <= pc.initial && pc.initial <= pc.upper))
                bad(p.path(), "need lower <= initial <= upper");
            f.parameters.push_back(pc);
        });
        o.finish();
        if (f.data.empty())
            bad(o.at("data"), "at least one data series is required");
        if (f.kind == FitKind::weibull && f.data.size() != 1)
            bad(o.at("data"), "a Weibull fit takes exactly one series");
        if (f.kind == FitKind::material && f.parameters.empty())
            bad(o.at("parameters"), "a material fit needs at least one parameter");
        c.fit = f;
    }

    if (top.has("seed")) {
        const json& s = top.raw("seed");
        if (!s.is_number_unsigned())
            bad("/seed", "expected a non-negative integer");
        c.seed = s.get<std::uint64_t>();
    }
    top.finish();

    if (c.mode == RunMode::matpoint && !c.matpoint)
        bad("/matpoint", "missing required block for mode 'matpoint'");
    if (c.mode == RunMode::fem && !c.fem)
        bad("/fem", "missing required block for mode 'fem'");
    if (c.mode == RunMode::fit && !c.fit)
        bad("/fit", "missing required block for mode 'fit'");
    return c;
}

namespace {

json q(double v, const std::string& dim)
{
    return json{{"value", v}, {"unit", internal_unit(dim)}};
}

json dir(const Direction& d)
{
    return json::array({d[0], d[1], d[2]});
}

json mesh_json(const MeshSource& m)
{
    if (!m.file.empty())
        return json{{"file", m.file}};
    const auto& s = m.strip;
    return json{{"strip",
                 {{"l", q(s.l, "length")},
                  {"w", q(s.w, "length")},
                  {"t", q(s.t, "length")},
                  {"nx", s.nx},
                  {"ny", s.ny},
                  {"nz", s.nz}}}};
}

json dirichlet_json(const std::vector<DirichletSpec>& ds)
{
    json arr = json::array();
    for (const auto& d : ds)
        arr.push_back({{"node_set", d.node_set}, {"component", d.component}, {"value", q(d.value, "length")}});
    return arr;
}

} // namespace

std::string dump_config(const RunConfig& c)
{
    const MaterialParams& p = c.material;
    const auto& t = p.textile;
    const auto& g = p.growth;
    json j;
    j["mode"] = mode_name(c.mode);
    j["material"] = {
        {"matrix", {{"lambda", q(p.matrix.lambda, "stress")}, {"mu", q(p.matrix.mu, "stress")}}},
        {"collagen",
         {{"k1", q(p.collagen.k1, "stress")},
          {"k2", p.collagen.k2},
          {"kappa", p.collagen.kappa},
          {"direction", dir(p.collagen.a)},
          {"rho_f", q(p.collagen.rho_f, "density")}}},
        {"textile",
         {{"K1_1", q(t.K1_1, "stress")},
          {"K1_2", q(t.K1_2, "stress")},
          {"K2_1", q(t.K2_1, "stress")},
          {"K2_2", q(t.K2_2, "stress")},
          {"Kcoup1", q(t.Kcoup1, "stress")},
          {"Kcoup2", q(t.Kcoup2, "stress")},
          {"KcoupAni", q(t.KcoupAni, "stress")},
          {"beta1", t.beta1},
          {"beta2", t.beta2},
          {"gamma1", t.gamma1},
          {"gamma2", t.gamma2},
          {"delta1", t.delta1},
          {"delta2", t.delta2},
          {"xi", t.xi},
          {"n1", dir(t.n1)},
          {"n2", dir(t.n2)}}}};
    j["growth"] = {{"a1", q(g.a1, "mass_per_cell")},
                   {"a2", q(g.a2, "volume_rate_per_cell")},
                   {"psi_crit", q(g.psi_crit, "specific_energy")},
                   {"rho_th", q(g.rho_th, "density")},
                   {"c_cell", q(g.c_cell, "cell_density")},
                   {"tau", q(g.tau, "time")},
                   {"h", g.h}};
    json snaps = json::array();
    for (double s : c.schedule.snapshot_times)
        snaps.push_back(q(s, "time"));
    j["schedule"] = {{"t_end", q(c.schedule.t_end, "time")},
                     {"grow_dt", q(c.grow_dt, "time")},
                     {"ramp_steps", c.schedule.ramp_steps},
                     {"dt_initial", q(c.schedule.dt_initial, "time")},
                     {"dt_max", q(c.schedule.dt_max, "time")},
                     {"dt_growth", c.schedule.dt_growth},
                     {"dt_min", q(c.schedule.dt_min, "time")},
                     {"snapshot_times", snaps}};
    const SolverConfig& s = c.solver;
    j["solver"] = {{"tol_force", s.tol_force},
                   {"tol_energy", s.tol_energy},
                   {"max_iterations", s.max_iterations},
                   {"load_stiffness", s.load_stiffness},
                   {"line_search", s.line_search},
                   {"early_exit", s.early_exit},
                   {"mean_dilatation", s.mean_dilatation},
                   {"local_tolerance", s.local.tolerance},
                   {"local_max_iterations", s.local.max_iterations}};
    if (c.matpoint) {
        const auto& mp = *c.matpoint;
        json steps = json::array();
        for (const auto& st : mp.program.steps) {
            json axes = json::array();
            for (const auto& a : st.axes)
                axes.push_back(a ? json(*a) : json(nullptr));
            steps.push_back({{"time", q(st.time, "time")}, {"axes", axes}});
        }
        j["matpoint"] = {
            {"measure", mp.program.measure == ControlMeasure::stretch ? "stretch" : "engineering_strain"},
            {"output_every", mp.program.output_every},
            {"evolve_density", mp.evolve_density},
            {"initial_rho", q(mp.initial_rho, "density")},
            {"steps", steps}};
    }
    if (c.fem) {
        json press = json::array();
        for (const auto& p2 : c.fem->pressures)
            press.push_back({{"face_set", p2.face_set}, {"magnitude", q(p2.magnitude, "stress")}});
        j["fem"] = {{"mesh", mesh_json(c.fem->mesh)},
                    {"dirichlet", dirichlet_json(c.fem->dirichlet)},
                    {"pressure", press},
                    {"write_vtk", c.fem->write_vtk}};
    }
    if (c.fit) {
        json data = json::array();
        for (const auto& d : c.fit->data) {
            json e = {{"file", d.file},
                      {"model", model_name(d.model)},
                      {"ratio_y", d.ratio_y},
                      {"stress_axis", d.stress_axis},
                      {"relative_density", d.relative_density},
                      {"weight", d.weight}};
            if (d.fem)
                e["fem"] = {{"mesh", mesh_json(d.fem->mesh)},
                            {"dirichlet", dirichlet_json(d.fem->dirichlet)},
                            {"reaction_set", d.fem->reaction_set},
                            {"component", d.fem->component},
                            {"area", d.fem->area},
                            {"x_at_full_load", d.fem->x_at_full_load}};
            data.push_back(e);
        }
        json params = json::array();
        for (const auto& p2 : c.fit->parameters)
            params.push_back({{"name", p2.name}, {"initial", p2.initial}, {"lower", p2.lower}, {"upper", p2.upper}});
        j["fit"] = {{"kind", c.fit->kind == FitKind::weibull ? "weibull" : "material"},
                    {"data", data},
                    {"parameters", params}};
    }
    j["seed"] = c.seed;
    return j.dump(2) + "\n";
}

Mesh build_mesh(const MeshSource& src)
{
    if (!src.file.empty())
        return io::mesh_from_json(io::read_file(src.file));
    const auto& s = src.strip;
    return make_strip_mesh(s.l, s.w, s.t, s.nx, s.ny, s.nz);
}

Bvp build_bvp(const RunConfig& c)
{
    if (!c.fem)
        throw ConfigError("/fem: missing required block");
    Bvp bvp;
    bvp.mesh = build_mesh(c.fem->mesh);
    bvp.dirichlet = c.fem->dirichlet;
    bvp.pressures = c.fem->pressures;
    bvp.params = c.material;
    bvp.schedule = c.schedule;
    bvp.solver = c.solver;
    try {
        bvp.validate();
    } catch (const ConfigError& e) {
        throw ConfigError(std::string("/fem: ") + e.what());
    }
    return bvp;
}

} // namespace biohybrid
