//-----------------------------------------------------------------------------
// Copyright 2026 The hemofsi authors
// SPDX-License-Identifier: Apache-2.0
//-----------------------------------------------------------------------------
#include "hemofsi/io.hpp"

#include <charconv>
#include <filesystem>
#include <sstream>

#include "hemofsi/error.hpp"

namespace hemofsi {

namespace {

void write_array(std::ostream& out, const VtkArray& a, std::size_t count) {
  if (a.components != 1 && a.components != 2) throw Error("VTK array " + a.name + " must have 1 or 2 components");
  if (a.values.size() != count * static_cast<std::size_t>(a.components)) {
    throw Error("VTK array " + a.name + " has " + std::to_string(a.values.size()) + " values, expected " +
                std::to_string(count * static_cast<std::size_t>(a.components)));
  }
  if (a.name.empty() || a.name.find_first_of(" \t\n") != std::string::npos) {
    throw Error("VTK array names must be non-empty and without whitespace");
  }
  if (a.components == 1) {
    out << "SCALARS " << a.name << " double 1\nLOOKUP_TABLE default\n";
    for (double v : a.values) out << format_double(v) << '\n';
  } else {
    out << "VECTORS " << a.name << " double\n";
    for (std::size_t i = 0; i < count; ++i) {
      out << format_double(a.values[2 * i]) << ' ' << format_double(a.values[2 * i + 1]) << " 0\n";
    }
  }
}

// Whitespace tokenizer over a whole file with locale-free number parsing.
class Tokens {
 public:
  Tokens(std::string text, std::string path) : text_(std::move(text)), path_(std::move(path)) {}

  bool done() {
    skip();
    return pos_ >= text_.size();
  }

  std::string word() {
    skip();
    if (pos_ >= text_.size()) throw fail("unexpected end of file");
    const auto end = text_.find_first_of(" \t\r\n", pos_);
    std::string w = text_.substr(pos_, end == std::string::npos ? std::string::npos : end - pos_);
    pos_ = end == std::string::npos ? text_.size() : end;
    return w;
  }

  void expect(const std::string& w) {
    const std::string got = word();
    if (got != w) throw fail("expected '" + w + "', got '" + got + "'");
  }

  double number() {
    const std::string w = word();
    double v = 0.0;
    const auto r = std::from_chars(w.data(), w.data() + w.size(), v);
    if (r.ec != std::errc{} || r.ptr != w.data() + w.size()) throw fail("bad number '" + w + "'");
    return v;
  }

  long long integer() {
    const std::string w = word();
    long long v = 0;
    const auto r = std::from_chars(w.data(), w.data() + w.size(), v);
    if (r.ec != std::errc{} || r.ptr != w.data() + w.size()) throw fail("bad integer '" + w + "'");
    return v;
  }

  void skip_line() {
    const auto end = text_.find('\n', pos_);
    pos_ = end == std::string::npos ? text_.size() : end + 1;
  }

  IoError fail(const std::string& what) const { return IoError(path_ + ": " + what); }

 private:
  void skip() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\r' || text_[pos_] == '\n')) {
      ++pos_;
    }
  }

  std::string text_;
  std::string path_;
  std::size_t pos_ = 0;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t checked_count(Tokens& tok, long long n) {
  if (n < 0 || n > (1LL << 40)) throw tok.fail("bad count " + std::to_string(n));
  return static_cast<std::size_t>(n);
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

VtkArray point_array(const std::string& name, const Field& f) {
  VtkArray a;
  a.name = name;
  a.components = f.space().arity();
  const int nv = static_cast<int>(f.mesh().num_vertices());
  a.values.reserve(static_cast<std::size_t>(nv * a.components));
  for (int i = 0; i < nv; ++i) {
    for (int c = 0; c < a.components; ++c) a.values.push_back(f(i, c));
  }
  return a;
}

VtkArray cell_array(const std::string& name, std::vector<double> values) { return {name, 1, std::move(values)}; }

const VtkArray* VtkData::find_point(const std::string& name) const {
  for (const auto& a : point_data) {
    if (a.name == name) return &a;
  }
  return nullptr;
}

const VtkArray* VtkData::find_cell(const std::string& name) const {
  for (const auto& a : cell_data) {
    if (a.name == name) return &a;
  }
  return nullptr;
}

void write_vtk(const std::string& path, const Mesh& mesh, const std::vector<VtkArray>& point_data,
               const std::vector<VtkArray>& cell_data) {
  std::ostringstream out;
  const std::size_t np = mesh.num_vertices();
  const std::size_t nt = mesh.num_triangles();
  out << "# vtk DataFile Version 3.0\nhemofsi\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << np << " double\n";
  for (const auto& v : mesh.vertices()) out << format_double(v.x) << ' ' << format_double(v.y) << " 0\n";
  out << "CELLS " << nt << ' ' << 4 * nt << '\n';
  for (const auto& t : mesh.triangles()) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  out << "CELL_TYPES " << nt << '\n';
  for (std::size_t t = 0; t < nt; ++t) out << "5\n";
  if (!point_data.empty()) {
    out << "POINT_DATA " << np << '\n';
    for (const auto& a : point_data) write_array(out, a, np);
  }
  if (!cell_data.empty()) {
    out << "CELL_DATA " << nt << '\n';
    for (const auto& a : cell_data) write_array(out, a, nt);
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open " + path + " for writing");
  file << out.str();
  if (!file) throw IoError("write failed for " + path);
}

VtkData read_vtk(const std::string& path) {
  Tokens tok(slurp(path), path);
  VtkData d;
  tok.expect("#");
  tok.skip_line();
  tok.skip_line();  // title
  tok.expect("ASCII");
  tok.expect("DATASET");
  tok.expect("UNSTRUCTURED_GRID");
  tok.expect("POINTS");
  d.points.resize(checked_count(tok, tok.integer()));
  tok.word();
  for (auto& p : d.points) {
    p.x = tok.number();
    p.y = tok.number();
    tok.number();
  }
  tok.expect("CELLS");
  d.triangles.resize(checked_count(tok, tok.integer()));
  tok.integer();
  for (auto& t : d.triangles) {
    if (tok.integer() != 3) throw tok.fail("only triangle cells are supported");
    for (int& v : t) {
      v = static_cast<int>(tok.integer());
      if (v < 0 || static_cast<std::size_t>(v) >= d.points.size()) throw tok.fail("cell index out of range");
    }
  }
  tok.expect("CELL_TYPES");
  if (checked_count(tok, tok.integer()) != d.triangles.size()) throw tok.fail("CELL_TYPES count mismatch");
  for (std::size_t i = 0; i < d.triangles.size(); ++i) {
    if (tok.integer() != 5) throw tok.fail("only VTK_TRIANGLE cells are supported");
  }
  std::vector<VtkArray>* target = nullptr;
  std::size_t count = 0;
  while (!tok.done()) {
    const std::string w = tok.word();
    if (w == "POINT_DATA" || w == "CELL_DATA") {
      count = checked_count(tok, tok.integer());
      const bool point = w == "POINT_DATA";
      if (count != (point ? d.points.size() : d.triangles.size())) throw tok.fail(w + " count mismatch");
      target = point ? &d.point_data : &d.cell_data;
      continue;
    }
    if (!target) throw tok.fail("data array outside a data section");
    VtkArray a;
    a.name = tok.word();
    tok.word();
    if (w == "SCALARS") {
      if (tok.word() != "1") throw tok.fail("only single-component SCALARS are supported");
      tok.expect("LOOKUP_TABLE");
      tok.word();
      a.values.resize(count);
      for (auto& v : a.values) v = tok.number();
    } else if (w == "VECTORS") {
      a.components = 2;
      a.values.resize(2 * count);
      for (std::size_t i = 0; i < count; ++i) {
        a.values[2 * i] = tok.number();
        a.values[2 * i + 1] = tok.number();
        tok.number();
      }
    } else {
      throw tok.fail("unsupported section " + w);
    }
    target->push_back(std::move(a));
  }
  return d;
}

CsvWriter::CsvWriter(const std::string& path, std::vector<std::string> columns)
    : out_(path, std::ios::binary), path_(path), width_(columns.size()) {
  if (!out_) throw IoError("cannot open " + path + " for writing");
  for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
  out_ << '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != width_) throw Error("CSV row width mismatch in " + path_);
  for (std::size_t i = 0; i < values.size(); ++i) out_ << (i ? "," : "") << format_double(values[i]);
  out_ << '\n';
  if (!out_) throw IoError("write failed for " + path_);
  ++rows_;
}

void CsvWriter::flush() {
  out_.flush();
  if (!out_) throw IoError("write failed for " + path_);
}

const Field& Snapshot::field(const std::string& name) const {
  const auto it = fields.find(name);
  if (it == fields.end()) throw IoError("snapshot has no field '" + name + "'");
  return it->second;
}

void write_snapshot(const std::string& directory, const Snapshot& snap) {
  ensure_directory(directory);
  write_mesh_text(*snap.mesh, directory + "/mesh.txt");
  std::ostringstream out;
  out << "hemofsi-snapshot 1\ntime " << format_double(snap.time) << '\n';
  for (const auto& [name, f] : snap.fields) {
    if (f.mesh().num_vertices() != snap.mesh->num_vertices() || f.mesh().num_triangles() != snap.mesh->num_triangles()) {
      throw Error("snapshot field " + name + " is not on the snapshot mesh");
    }
    out << "field " << name << ' ' << f.space().degree() << ' ' << f.space().arity() << ' ' << f.values().size() << '\n';
    for (double v : f.values()) out << format_double(v) << '\n';
  }
  for (const auto& [name, s] : snap.sets) {
    out << "set " << name << ' ' << s.size() << '\n';
    for (int t : s) out << t << '\n';
  }
  const std::string path = directory + "/fields.txt";
  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open " + path + " for writing");
  file << out.str();
  if (!file) throw IoError("write failed for " + path);
}

Snapshot read_snapshot(const std::string& directory) {
  Snapshot snap;
  snap.mesh = std::make_shared<const Mesh>(read_mesh_text(directory + "/mesh.txt"));
  const std::string path = directory + "/fields.txt";
  Tokens tok(slurp(path), path);
  tok.expect("hemofsi-snapshot");
  tok.expect("1");
  tok.expect("time");
  snap.time = tok.number();
  while (!tok.done()) {
    const std::string kind = tok.word();
    const std::string name = tok.word();
    if (kind == "field") {
      const auto degree = tok.integer();
      const auto arity = tok.integer();
      const std::size_t n = checked_count(tok, tok.integer());
      if ((degree != 1 && degree != 2) || (arity != 1 && arity != 2)) throw tok.fail("bad field layout for " + name);
      FeSpace space(snap.mesh, static_cast<int>(degree), static_cast<int>(arity));
      if (n != static_cast<std::size_t>(space.num_dofs())) throw tok.fail("field " + name + " has the wrong size");
      Eigen::VectorXd values(static_cast<Eigen::Index>(n));
      for (Eigen::Index i = 0; i < values.size(); ++i) values[i] = tok.number();
      snap.fields.emplace(name, Field(space, std::move(values)));
    } else if (kind == "set") {
      std::vector<int> s(checked_count(tok, tok.integer()));
      for (int& t : s) {
        const auto v = tok.integer();
        if (v < 0 || static_cast<std::size_t>(v) >= snap.mesh->num_triangles()) throw tok.fail("set index out of range");
        t = static_cast<int>(v);
      }
      snap.sets.emplace(name, std::move(s));
    } else {
      throw tok.fail("unknown entry '" + kind + "'");
    }
  }
  return snap;
}

void ensure_directory(const std::string& path) {
  std::error_code ec;
  std::filesystem::create_directories(path, ec);
  if (ec || !std::filesystem::is_directory(path)) throw IoError("cannot create directory " + path);
}

}  // namespace hemofsi
