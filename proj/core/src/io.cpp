#include "cutfrac/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "cutfrac/errors.hpp"

namespace cutfrac {

std::string format_sig(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  return out;
}

void write_echo(std::ofstream& out, const std::vector<std::string>& echo) {
  for (const std::string& line : echo) out << "# " << line << "\n";
}

constexpr const char* kConvergenceHeader =
    "level,h,ndof,errL2_bulk,errH1semi_bulk,errL2_gamma,errH1semi_gamma,energy_err,cond";

void write_row(std::ofstream& out, const ConvergenceRow& row) {
  out << row.level << ',' << format_sig(row.h) << ',' << row.ndof << ','
      << format_sig(row.err.errL2_bulk) << ',' << format_sig(row.err.errH1semi_bulk) << ','
      << format_sig(row.err.errL2_gamma) << ',' << format_sig(row.err.errH1semi_gamma) << ','
      << format_sig(row.err.energy_err) << ',' << format_sig(row.cond) << "\n";
}

} // namespace

void write_convergence_csv(const std::string& path, const ConvergenceTable& table,
                           const std::vector<std::string>& echo) {
  std::ofstream out = open_out(path);
  write_echo(out, echo);
  out << kConvergenceHeader << "\n";
  for (const ConvergenceRow& row : table.rows) write_row(out, row);
  for (int c = 0; c < kRateColumnCount; ++c)
    out << "#rate,ls," << rate_column_name(c) << ',' << format_sig(table.ls_rate[c]) << "\n";
  for (size_t k = 0; k < table.pair_rate.size(); ++k)
    for (int c = 0; c < kRateColumnCount; ++c)
      out << "#rate,pair," << rate_column_name(c) << ',' << table.rows[k + 1].level << ','
          << format_sig(table.pair_rate[k][c]) << "\n";
  if (!out.good()) throw IoError("write failed: " + path);
}

void write_summary_csv(const std::string& path, const ConvergenceRow& row,
                       const std::vector<std::string>& echo) {
  std::ofstream out = open_out(path);
  write_echo(out, echo);
  out << kConvergenceHeader << "\n";
  write_row(out, row);
  if (!out.good()) throw IoError("write failed: " + path);
}

void write_condition_csv(const std::string& path, const ConditionTable& table,
                         const std::vector<std::string>& echo) {
  std::ofstream out = open_out(path);
  write_echo(out, echo);
  if (table.mode == ConditionTable::Mode::HSweep) {
    out << "level,h,ndof,cond\n";
    for (const ConditionRow& row : table.rows)
      out << row.level << ',' << format_sig(row.h) << ',' << row.ndof << ','
          << format_sig(row.cond) << "\n";
    out << "#rate,ls,cond," << format_sig(table.slope) << "\n";
  } else {
    out << "alpha,cond\n";
    for (const ConditionRow& row : table.rows)
      out << format_sig(row.alpha) << ',' << format_sig(row.cond) << "\n";
  }
  if (!out.good()) throw IoError("write failed: " + path);
}

CsvParsed parse_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  CsvParsed parsed;
  std::string line;
  const auto split = [](const std::string& s) {
    std::vector<std::string> tokens;
    std::stringstream ss(s);
    std::string t;
    while (std::getline(ss, t, ',')) tokens.push_back(t);
    return tokens;
  };
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (line.rfind("#rate,", 0) == 0) {
        parsed.rates.push_back(split(line.substr(6)));
      } else {
        size_t k = 1;
        while (k < line.size() && line[k] == ' ') ++k;
        parsed.comments.push_back(line.substr(k));
      }
      continue;
    }
    if (parsed.header.empty()) {
      parsed.header = split(line);
      continue;
    }
    std::vector<double> row;
    for (const std::string& t : split(line)) row.push_back(std::stod(t));
    parsed.rows.push_back(std::move(row));
  }
  return parsed;
}

void write_vtk_field(const std::string& path, const AssemblyContext& ctx, int field,
                     const Vector& u, const std::string& title) {
  std::ofstream out = open_out(path);
  const std::vector<int>& nodes = ctx.spaces.active_nodes[field];
  const std::vector<int>& elems = field == kField1   ? ctx.decomp.elems1
                                  : field == kField2 ? ctx.decomp.elems2
                                                     : ctx.decomp.elemsG;
  out << "# vtk DataFile Version 3.0\n";
  out << (title.size() > 255 ? title.substr(0, 255) : title) << "\n";
  out << "ASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << nodes.size() << " double\n";
  for (int n : nodes)
    out << format_sig(ctx.mesh.nodes[n].x()) << ' ' << format_sig(ctx.mesh.nodes[n].y())
        << " 0\n";
  out << "CELLS " << elems.size() << ' ' << 4 * elems.size() << "\n";
  for (int e : elems) {
    out << 3;
    for (int v : ctx.mesh.triangles[e].v) out << ' ' << ctx.spaces.dof_of_node[field][v];
    out << "\n";
  }
  out << "CELL_TYPES " << elems.size() << "\n";
  for (size_t k = 0; k < elems.size(); ++k) out << "5\n";
  out << "POINT_DATA " << nodes.size() << "\n";
  out << "SCALARS pressure double 1\nLOOKUP_TABLE default\n";
  for (int n : nodes) out << format_sig(u[ctx.spaces.dof(field, n)]) << "\n";
  if (!out.good()) throw IoError("write failed: " + path);
}

} // namespace cutfrac
