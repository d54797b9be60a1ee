//-----------------------------------------------------------------------------
// Copyright 2026 The hemofsi authors
// SPDX-License-Identifier: Apache-2.0
//-----------------------------------------------------------------------------
#pragma once

#include <fstream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "hemofsi/fe_space.hpp"

namespace hemofsi {

/// One data array of a VTK file: 1 component (SCALARS) or 2 (written as
/// 3-component VECTORS with zero z).
struct VtkArray {
  std::string name;
  int components = 1;
  std::vector<double> values;  // components * count, interleaved
};

/// Point data for a field: its vertex values (degree-2 fields drop their
/// edge nodes).
VtkArray point_array(const std::string& name, const Field& f);
VtkArray cell_array(const std::string& name, std::vector<double> values);

struct VtkData {
  std::vector<Point2> points;
  std::vector<Triangle> triangles;
  std::vector<VtkArray> point_data;
  std::vector<VtkArray> cell_data;

  const VtkArray* find_point(const std::string& name) const;
  const VtkArray* find_cell(const std::string& name) const;
};

/// Legacy ASCII unstructured grid of the mesh triangles (VTK cell type 5)
/// with the given arrays. Values are written with 17 significant digits.
/// Throws IoError when the file cannot be written.
void write_vtk(const std::string& path, const Mesh& mesh, const std::vector<VtkArray>& point_data,
               const std::vector<VtkArray>& cell_data = {});
/// Reads files produced by write_vtk (triangles only).
VtkData read_vtk(const std::string& path);

/// CSV with a header row and one record per call to row(). Numbers use the
/// shortest round-trip representation with a '.' decimal point.
class CsvWriter {
 public:
  CsvWriter() = default;
  CsvWriter(const std::string& path, std::vector<std::string> columns);

  void row(const std::vector<double>& values);
  std::size_t rows() const { return rows_; }
  void flush();

 private:
  std::ofstream out_;
  std::string path_;
  std::size_t width_ = 0;
  std::size_t rows_ = 0;
};

/// Locale-independent shortest round-trip text for a double.
std::string format_double(double v);

/// Saved lumen state for the `detect` and `rupture` stages: a mesh plus
/// named fields and triangle sets.
///
/// Directory layout: mesh.txt (write_mesh_text) and fields.txt with
///
///     hemofsi-snapshot 1
///     time <t>
///     field <name> <degree> <arity> <count>
///     <count values, one per line>
///     set <name> <count>
///     <count triangle indices>
struct Snapshot {
  std::shared_ptr<const Mesh> mesh;
  double time = 0.0;
  std::map<std::string, Field> fields;
  std::map<std::string, std::vector<int>> sets;

  const Field& field(const std::string& name) const;
};
void write_snapshot(const std::string& directory, const Snapshot& snap);
Snapshot read_snapshot(const std::string& directory);

/// Creates the directory and its parents; IoError on failure.
void ensure_directory(const std::string& path);

}  // namespace hemofsi
