#include "biohybrid/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <memory>

#include "CLI11.hpp"
#include "json.hpp"

#include "biohybrid/config.hpp"
#include "biohybrid/errors.hpp"
#include "biohybrid/io.hpp"

namespace biohybrid {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Context
{
    RunConfig config;
    fs::path base; // directory of the config file, anchors relative paths
    fs::path out;
    bool quiet = false;
    std::ostream* log = nullptr;

    fs::path resolve(const std::string& p) const
    {
        const fs::path q(p);
        return q.is_absolute() ? q : base / q;
    }

    void say(const std::string& line) const
    {
        if (!quiet)
            *log << line << '\n';
    }
};

void prepare_out(const Context& ctx)
{
    std::error_code ec;
    fs::create_directories(ctx.out, ec);
    if (ec)
        throw IoError("cannot create output directory '" + ctx.out.string() + "'");
    io::write_atomic(ctx.out / "config.json", dump_config(ctx.config));
}

MeshSource resolved(MeshSource m, const Context& ctx)
{
    if (!m.file.empty())
        m.file = ctx.resolve(m.file).string();
    return m;
}

void run_matpoint(const Context& ctx)
{
    const MatpointConfig& mp = *ctx.config.matpoint;
    MixedSolveOptions opt;
    opt.evolve_density = mp.evolve_density;
    opt.response.local = ctx.config.solver.local;
    const auto recs = solve_mixed_point(mp.program, ctx.config.material, GrowthState{mp.initial_rho}, opt);
    io::write_atomic(ctx.out / "matpoint.csv", io::to_csv(io::point_records_table(recs)));
    ctx.say("matpoint: " + std::to_string(recs.size()) + " records -> " + (ctx.out / "matpoint.csv").string());
}

void run_grow(const Context& ctx)
{
    const auto recs = unloaded_maturation(ctx.config.material, ctx.config.schedule.t_end, ctx.config.grow_dt);
    io::CsvTable t{{"t", "rho"}, {}};
    for (const auto& r : recs)
        t.rows.push_back({r.time, r.rho});
    io::write_atomic(ctx.out / "grow.csv", io::to_csv(t));
    ctx.say("grow: rho(" + io::format_number(recs.back().time) + ") = " + io::format_number(recs.back().rho));
}

DataSeries load_series(const FitDataConfig& d, const Context& ctx)
{
    DataSeries s = io::data_series_from_csv(io::read_file(ctx.resolve(d.file)));
    if (d.weight != 1.0) {
        if (s.weight.empty())
            s.weight.assign(s.x.size(), 1.0);
        for (double& w : s.weight)
            w *= d.weight;
    }
    return s;
}

json optimizer_json(const NelderMeadResult& r)
{
    return {{"evaluations", r.evaluations}, {"iterations", r.iterations}, {"converged", r.converged}};
}

void run_fit(const Context& ctx)
{
    const FitConfig& f = *ctx.config.fit;
    json result;
    if (f.kind == FitKind::weibull) {
        const WeibullFit w = fit_weibull(load_series(f.data.front(), ctx));
        result = {{"kind", "weibull"},
                  {"tau", w.tau},
                  {"h", w.h},
                  {"rms", w.rms},
                  {"optimizer", optimizer_json(w.optimizer)}};
        ctx.say("fit: tau = " + io::format_number(w.tau) + " day, h = " + io::format_number(w.h));
    } else {
        FitProblem p;
        p.base = ctx.config.material;
        const auto n = static_cast<Eigen::Index>(f.parameters.size());
        p.x0.resize(n);
        p.lower.resize(n);
        p.upper.resize(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const auto& pc = f.parameters[static_cast<std::size_t>(i)];
            p.names.push_back(pc.name);
            p.x0[i] = pc.initial;
            p.lower[i] = pc.lower;
            p.upper[i] = pc.upper;
        }
        for (const auto& d : f.data) {
            FitSeries s;
            s.data = load_series(d, ctx);
            s.model = d.model;
            s.ratio_y = d.ratio_y;
            s.stress_axis = d.stress_axis;
            s.relative_density = d.relative_density;
            if (d.fem) {
                auto bvp = std::make_shared<Bvp>();
                bvp->mesh = build_mesh(resolved(d.fem->mesh, ctx));
                bvp->dirichlet = d.fem->dirichlet;
                bvp->params = ctx.config.material;
                bvp->schedule = ctx.config.schedule;
                bvp->solver = ctx.config.solver;
                bvp->validate();
                s.fem = FemForward{bvp, d.fem->reaction_set, d.fem->component, d.fem->area, d.fem->x_at_full_load};
            }
            p.series.push_back(std::move(s));
        }
        const FitResult r = fit_material(p);
        json params = json::object();
        for (std::size_t i = 0; i < p.names.size(); ++i)
            params[p.names[i]] = r.x[static_cast<Eigen::Index>(i)];
        result = {{"kind", "material"},
                  {"parameters", params},
                  {"objective", r.objective},
                  {"rms", r.rms},
                  {"optimizer", optimizer_json(r.optimizer)}};
        ctx.say("fit: objective " + io::format_number(r.objective) + " after " +
                std::to_string(r.optimizer.evaluations) + " evaluations");
    }
    io::write_atomic(ctx.out / "fit.json", result.dump(2) + "\n");
}

void run_fem(const Context& ctx)
{
    RunConfig c = ctx.config;
    c.fem->mesh = resolved(c.fem->mesh, ctx);
    const Bvp bvp = build_bvp(c);
    ctx.say("fem: " + std::to_string(bvp.mesh.num_elements()) + " elements, " +
            std::to_string(bvp.mesh.num_nodes()) + " nodes");

    int count = 0;
    const bool vtk = c.fem->write_vtk;
    auto snapshot = [&](const FemState& s) {
        if (vtk) {
            char name[32];
            std::snprintf(name, sizeof name, "snapshot_%04d.vtk", count);
            io::VtkSnapshot snap = io::fem_snapshot(bvp.mesh, s);
            snap.title = "t = " + io::format_number(s.t) + " day";
            io::write_vtk(ctx.out / name, snap);
        }
        ctx.say("  t = " + io::format_number(s.t) + " day, max deflection " +
                io::format_number(summarize(s).max_deflection) + " mm");
        ++count;
    };
    const MaturationResult r = march_maturation(bvp, snapshot);
    io::write_atomic(ctx.out / "deflection.csv", io::to_csv(io::maturation_table(r.rows)));
    ctx.say("fem: " + std::to_string(r.rows.size()) + " steps -> " + (ctx.out / "deflection.csv").string());
}

} // namespace

int cli_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Biohybrid implant maturation: material point, growth, calibration and FEM runs", "biohybrid"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    bool quiet = false;

    const std::map<std::string, std::string> run_help{
        {"matpoint", "drive one material point through a loading program"},
        {"grow", "unloaded collagen maturation rho(t)"},
        {"fit", "Weibull or material parameter identification"},
        {"fem", "pressure ramp and maturation march of a hex8 model"}};
    for (const auto& [name, help] : run_help) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config_path, "JSON run configuration")->required();
        sub->add_option("--out", out_dir, "output directory")->capture_default_str();
        sub->add_flag("--quiet", quiet, "no progress output");
    }

    StripGeometry g;
    std::string mesh_out;
    CLI::App* strip = app.add_subcommand("strip-mesh", "write a structured strip mesh as JSON");
    strip->add_option("--l", g.l, "length along x, mm")->capture_default_str();
    strip->add_option("--w", g.w, "width along y, mm")->capture_default_str();
    strip->add_option("--t", g.t, "thickness along z, mm")->capture_default_str();
    strip->add_option("--nx", g.nx, "elements along x")->capture_default_str();
    strip->add_option("--ny", g.ny, "elements along y")->capture_default_str();
    strip->add_option("--nz", g.nz, "elements along z")->capture_default_str();
    strip->add_option("--out", mesh_out, "output file (default: stdout)");
    strip->add_flag("--quiet", quiet, "no progress output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }

    const std::string cmd = app.get_subcommands().front()->get_name();
    try {
        if (cmd == "strip-mesh") {
            const std::string text = io::mesh_to_json(build_mesh(MeshSource{"", g}));
            if (mesh_out.empty()) {
                out << text;
            } else {
                io::write_atomic(mesh_out, text);
                if (!quiet)
                    out << "strip-mesh: " << g.nx * g.ny * g.nz << " elements -> " << mesh_out << '\n';
            }
            return kExitOk;
        }

        Context ctx;
        ctx.config = parse_config(io::read_file(config_path));
        ctx.base = fs::path(config_path).parent_path();
        ctx.out = out_dir;
        ctx.quiet = quiet;
        ctx.log = &out;
        const std::map<std::string, RunMode> modes{
            {"matpoint", RunMode::matpoint}, {"grow", RunMode::grow}, {"fit", RunMode::fit}, {"fem", RunMode::fem}};
        if (modes.at(cmd) != ctx.config.mode)
            throw ConfigError("/mode: config is for a different subcommand than '" + cmd + "'");
        if (ctx.config.mode == RunMode::fem)
            build_bvp([&] {
                RunConfig c = ctx.config;
                c.fem->mesh = resolved(c.fem->mesh, ctx);
                return c;
            }()); // reject a bad model before touching the output directory
        prepare_out(ctx);

        if (cmd == "matpoint")
            run_matpoint(ctx);
        else if (cmd == "grow")
            run_grow(ctx);
        else if (cmd == "fit")
            run_fit(ctx);
        else
            run_fem(ctx);
        return kExitOk;
    } catch (const SolverError& e) {
        err << "solver failure: " << e.what() << '\n';
        return kExitSolver;
    } catch (const ElementInversion& e) {
        err << "solver failure: " << e.what() << '\n';
        return kExitSolver;
    } catch (const InvalidDeformation& e) {
        err << "solver failure: " << e.what() << '\n';
        return kExitSolver;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
}

} // namespace biohybrid
