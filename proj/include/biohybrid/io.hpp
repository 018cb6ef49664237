#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "biohybrid/calibration.hpp"
#include "biohybrid/matpoint.hpp"
#include "biohybrid/mesh.hpp"
#include "biohybrid/solver.hpp"

namespace biohybrid::io {

// Writes to a sibling temporary file and renames it over `path`.  Throws
// IoError; on failure no file is left at `path` or next to it.
void write_atomic(const std::filesystem::path& path, const std::string& contents);
std::string read_file(const std::filesystem::path& path);

// Shortest round-trip decimal representation ("%.17g" trimmed).
std::string format_number(double v);

// CSV: ',' separator, '.' decimal point, LF line ends, one header line.
struct CsvTable
{
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

std::string to_csv(const CsvTable& t);
CsvTable parse_csv(const std::string& text);

CsvTable point_records_table(const std::vector<PointRecord>& recs);
CsvTable maturation_table(const std::vector<MaturationRow>& rows);

// Two or three columns (x, y[, weight]); the header names become the labels.
DataSeries data_series_from_csv(const std::string& text);

// Mesh as JSON text with keys nodes, hex8, node_sets, face_sets.  Faces are
// [element, local_face] pairs.
std::string mesh_to_json(const Mesh& m);
Mesh mesh_from_json(const std::string& text);

struct VtkSnapshot
{
    std::string title = "biohybrid";
    const Mesh* mesh = nullptr;
    std::vector<Vec3> displacement;                          // one per node
    std::vector<std::pair<std::string, std::vector<double>>> cell_scalars; // one value per element
};

// Legacy ASCII unstructured grid.  Throws ParameterDomainError on size
// mismatches before anything is written.
std::string vtk_text(const VtkSnapshot& s);
void write_vtk(const std::filesystem::path& path, const VtkSnapshot& s);

// Snapshot of a FEM state: displacements, rho_mean and mean Cauchy stress
// components per element.
VtkSnapshot fem_snapshot(const Mesh& mesh, const FemState& state);

} // namespace biohybrid::io
