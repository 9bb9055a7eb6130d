#pragma once

#include <string>
#include <vector>

#include "cutfrac/analysis.hpp"

namespace cutfrac {

// 12 significant digits, the round-trip precision of every CSV value.
std::string format_sig(double v);

// CSV layout: `# key=value` echo block, pinned header, data rows, then rate
// footers `#rate,ls,<column>,<slope>` and `#rate,pair,<column>,<level>,<rate>`.
void write_convergence_csv(const std::string& path, const ConvergenceTable& table,
                           const std::vector<std::string>& echo);

// One row of the convergence schema (level 0), for single solves.
void write_summary_csv(const std::string& path, const ConvergenceRow& row,
                       const std::vector<std::string>& echo);

// h sweep: level,h,ndof,cond with a `#rate,ls,cond,<slope>` footer;
// alpha sweep: alpha,cond.
void write_condition_csv(const std::string& path, const ConditionTable& table,
                         const std::vector<std::string>& echo);

struct CsvParsed {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  std::vector<std::vector<std::string>> rates; // tokens after the "#rate," prefix
  std::vector<std::string> comments;           // other "#" lines, prefix stripped
};

CsvParsed parse_csv(const std::string& path);

// Legacy ASCII VTK of one field on its active mesh: cut cells appear as their
// whole background triangles carrying the field's own nodal values. The title
// line carries the config echo (the legacy header allows no comment block).
void write_vtk_field(const std::string& path, const AssemblyContext& ctx, int field,
                     const Vector& u, const std::string& title);

} // namespace cutfrac
