#include "biohybrid/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "biohybrid/errors.hpp"

namespace biohybrid::io {

namespace fs = std::filesystem;
using nlohmann::json;

void write_atomic(const fs::path& path, const std::string& contents)
{
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw IoError("cannot open '" + tmp.string() + "' for writing");
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        out.flush();
        if (!out) {
            out.close();
            std::error_code ec;
            fs::remove(tmp, ec);
            throw IoError("write to '" + tmp.string() + "' failed");
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("cannot rename onto '" + path.string() + "'");
    }
}

std::string read_file(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string format_number(double v)
{
    if (v == 0.0)
        return "0"; // no negative zero in text output
    char buf[32];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v)
            break;
    }
    return buf;
}

std::string to_csv(const CsvTable& t)
{
    std::string out;
    for (std::size_t i = 0; i < t.header.size(); ++i)
        out += (i ? "," : "") + t.header[i];
    out += '\n';
    for (const auto& row : t.rows) {
        if (row.size() != t.header.size())
            throw ParameterDomainError("CSV row width does not match the header");
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i)
                out += ',';
            out += format_number(row[i]);
        }
        out += '\n';
    }
    return out;
}

CsvTable parse_csv(const std::string& text)
{
    CsvTable t;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    auto split = [](const std::string& l) {
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(l);
        while (std::getline(ls, cell, ','))
            cells.push_back(cell);
        if (!l.empty() && l.back() == ',')
            cells.emplace_back();
        return cells;
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        auto cells = split(line);
        if (t.header.empty()) {
            t.header = cells;
            continue;
        }
        if (cells.size() != t.header.size())
            throw IoError("CSV line " + std::to_string(lineno) + " has " + std::to_string(cells.size()) +
                          " fields, expected " + std::to_string(t.header.size()));
        std::vector<double> row;
        for (const auto& c : cells) {
            char* end = nullptr;
            const double v = std::strtod(c.c_str(), &end);
            if (c.empty() || end != c.c_str() + c.size())
                throw IoError("CSV line " + std::to_string(lineno) + ": '" + c + "' is not a number");
            row.push_back(v);
        }
        t.rows.push_back(std::move(row));
    }
    if (t.header.empty())
        throw IoError("CSV text has no header");
    return t;
}

CsvTable point_records_table(const std::vector<PointRecord>& recs)
{
    CsvTable t;
    t.header = {"time", "F11", "F22", "F33", "S11", "S22", "S33", "sigma11", "sigma22", "sigma33", "rho", "psi_m"};
    for (const auto& r : recs)
        t.rows.push_back({r.time, r.F(0, 0), r.F(1, 1), r.F(2, 2), r.S[0], r.S[1], r.S[2], r.sigma[0], r.sigma[1],
                          r.sigma[2], r.rho, r.psi_m});
    return t;
}

CsvTable maturation_table(const std::vector<MaturationRow>& rows)
{
    CsvTable t;
    t.header = {"t", "max_deflection", "rho_min", "rho_max", "rho_mean"};
    for (const auto& r : rows)
        t.rows.push_back({r.t, r.max_deflection, r.rho_min, r.rho_max, r.rho_mean});
    return t;
}

DataSeries data_series_from_csv(const std::string& text)
{
    const CsvTable t = parse_csv(text);
    if (t.header.size() != 2 && t.header.size() != 3)
        throw IoError("data CSV needs two or three columns");
    DataSeries d;
    d.x_label = t.header[0];
    d.y_label = t.header[1];
    for (const auto& r : t.rows) {
        d.x.push_back(r[0]);
        d.y.push_back(r[1]);
        if (r.size() == 3)
            d.weight.push_back(r[2]);
    }
    return d;
}

std::string mesh_to_json(const Mesh& m)
{
    json j;
    j["nodes"] = json::array();
    for (const auto& n : m.nodes)
        j["nodes"].push_back({n[0], n[1], n[2]});
    j["hex8"] = m.hex8;
    j["node_sets"] = m.node_sets;
    json faces = json::object();
    for (const auto& [name, refs] : m.face_sets) {
        json arr = json::array();
        for (const auto& f : refs)
            arr.push_back({f.element, f.face});
        faces[name] = arr;
    }
    j["face_sets"] = faces;
    return j.dump() + "\n";
}

Mesh mesh_from_json(const std::string& text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw IoError(std::string("mesh JSON: ") + e.what());
    }
    if (!j.is_object())
        throw IoError("mesh JSON must be an object");
    for (const auto& [key, _] : j.items())
        if (key != "nodes" && key != "hex8" && key != "node_sets" && key != "face_sets")
            throw IoError("mesh JSON: unknown key '/" + key + "'");
    Mesh m;
    try {
        for (const auto& n : j.at("nodes")) {
            if (n.size() != 3)
                throw IoError("mesh JSON: /nodes entries need three coordinates");
            m.nodes.push_back({n[0].get<double>(), n[1].get<double>(), n[2].get<double>()});
        }
        for (const auto& e : j.at("hex8")) {
            if (e.size() != 8)
                throw IoError("mesh JSON: /hex8 entries need eight node ids");
            m.hex8.push_back(e.get<std::array<int, 8>>());
        }
        if (j.contains("node_sets"))
            m.node_sets = j["node_sets"].get<std::map<std::string, std::vector<int>>>();
        if (j.contains("face_sets"))
            for (const auto& [name, arr] : j["face_sets"].items())
                for (const auto& f : arr) {
                    if (f.size() != 2)
                        throw IoError("mesh JSON: /face_sets/" + name + " entries are [element, face]");
                    m.face_sets[name].push_back({f[0].get<int>(), f[1].get<int>()});
                }
    } catch (const json::exception& e) {
        throw IoError(std::string("mesh JSON: ") + e.what());
    }
    m.validate();
    return m;
}

std::string vtk_text(const VtkSnapshot& s)
{
    if (!s.mesh)
        throw ParameterDomainError("VTK snapshot has no mesh");
    const Mesh& m = *s.mesh;
    if (s.displacement.size() != m.num_nodes())
        throw ParameterDomainError("VTK displacement count does not match the node count");
    for (const auto& [name, values] : s.cell_scalars)
        if (values.size() != m.num_elements())
            throw ParameterDomainError("VTK cell field '" + name + "' does not match the element count");

    std::ostringstream o;
    o << "# vtk DataFile Version 3.0\n" << s.title << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
    o << "POINTS " << m.num_nodes() << " double\n";
    for (const auto& x : m.nodes)
        o << format_number(x[0]) << ' ' << format_number(x[1]) << ' ' << format_number(x[2]) << '\n';
    o << "CELLS " << m.num_elements() << ' ' << 9 * m.num_elements() << '\n';
    for (const auto& e : m.hex8) {
        o << 8;
        for (int id : e)
            o << ' ' << id;
        o << '\n';
    }
    o << "CELL_TYPES " << m.num_elements() << '\n';
    for (std::size_t e = 0; e < m.num_elements(); ++e)
        o << "12\n";
    o << "POINT_DATA " << m.num_nodes() << "\nVECTORS displacement double\n";
    for (const auto& u : s.displacement)
        o << format_number(u[0]) << ' ' << format_number(u[1]) << ' ' << format_number(u[2]) << '\n';
    if (!s.cell_scalars.empty()) {
        o << "CELL_DATA " << m.num_elements() << '\n';
        for (const auto& [name, values] : s.cell_scalars) {
            o << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
            for (double v : values)
                o << format_number(v) << '\n';
        }
    }
    return o.str();
}

void write_vtk(const fs::path& path, const VtkSnapshot& s)
{
    write_atomic(path, vtk_text(s));
}

VtkSnapshot fem_snapshot(const Mesh& mesh, const FemState& state)
{
    VtkSnapshot s;
    s.title = "biohybrid t=" + format_number(state.t);
    s.mesh = &mesh;
    for (std::size_t n = 0; n < mesh.num_nodes(); ++n)
        s.displacement.push_back({state.u(3 * n), state.u(3 * n + 1), state.u(3 * n + 2)});
    s.cell_scalars.emplace_back("rho_mean", element_mean_rho(state));
    static const char* names[6] = {"sigma_xx", "sigma_yy", "sigma_zz", "sigma_xy", "sigma_xz", "sigma_yz"};
    std::vector<std::vector<double>> sig(6);
    for (const auto& g : state.gauss) {
        const SymTensor3 m = element_mean_sigma(g);
        for (int k = 0; k < 6; ++k)
            sig[k].push_back(m[k]);
    }
    for (int k = 0; k < 6; ++k)
        s.cell_scalars.emplace_back(names[k], std::move(sig[k]));
    return s;
}

} // namespace biohybrid::io
