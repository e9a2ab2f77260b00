#include "wildfire/mps.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>
#include <vector>

namespace wildfire::lp {

namespace {

constexpr const char* kObjName = "OBJ";
constexpr const char* kRhsName = "RHS";
constexpr const char* kBndName = "BND";

void put(std::string& line, std::size_t column, const std::string& field) {
  // `column` is 1-based as in the format description.
  if (field.empty()) return;
  if (line.size() < column - 1) line.resize(column - 1, ' ');
  line += field;
}

std::string record(const std::string& f1, const std::string& f2, const std::string& f3 = {},
                   const std::string& f4 = {}, const std::string& f5 = {}, const std::string& f6 = {}) {
  std::string line = " ";
  put(line, 2, f1);
  put(line, 5, f2);
  put(line, 15, f3);
  put(line, 25, f4);
  put(line, 40, f5);
  put(line, 50, f6);
  return line;
}

void check_name(const std::string& name) {
  if (name.empty() || name.size() > 8) throw MpsError("name '" + name + "' does not fit a fixed MPS field");
  if (name.find(' ') != std::string::npos) throw MpsError("name '" + name + "' contains a blank");
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream is(line);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

double parse_number(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw MpsError("bad number '" + s + "'");
  }
  if (used != s.size()) throw MpsError("bad number '" + s + "'");
  return v;
}

char sense_code(RowSense s) {
  switch (s) {
    case RowSense::le: return 'L';
    case RowSense::ge: return 'G';
    case RowSense::eq: return 'E';
  }
  return 'E';
}

}  // namespace

std::string format_number(double v, std::size_t width) {
  if (v == 0.0) return "0";
  if (!std::isfinite(v)) throw MpsError("cannot write a non-finite number");
  char buf[64];
  for (int prec = 17; prec >= 1; --prec) {
    const int n = std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (n > 0 && static_cast<std::size_t>(n) <= width) return buf;
  }
  throw MpsError("number does not fit a fixed MPS field");
}

void write_mps(const LpProblem& p, std::ostream& out) {
  for (int j = 0; j < p.num_cols(); ++j) check_name(p.col_name(j));
  for (int i = 0; i < p.num_rows(); ++i) check_name(p.row_name(i));

  std::string name_line = "NAME";
  put(name_line, 15, p.name);
  out << name_line << '\n';
  out << "ROWS\n";
  out << record("N", kObjName) << '\n';
  for (int i = 0; i < p.num_rows(); ++i) out << record(std::string(1, sense_code(p.sense(i))), p.row_name(i)) << '\n';

  out << "COLUMNS\n";
  bool in_int = false;
  int marker = 0;
  auto marker_line = [&](const char* kind) {
    char label[16];
    std::snprintf(label, sizeof label, "MARKER%02d", marker % 100);
    out << record("", label, "'MARKER'", "", kind) << '\n';
  };
  for (int j = 0; j < p.num_cols(); ++j) {
    if (p.is_integer(j) != in_int) {
      in_int = p.is_integer(j);
      marker_line(in_int ? "'INTORG'" : "'INTEND'");
      if (!in_int) ++marker;
    }
    bool wrote = false;
    if (p.cost(j) != 0.0) {
      out << record("", p.col_name(j), kObjName, format_number(p.cost(j))) << '\n';
      wrote = true;
    }
    for (const auto& e : p.column(j)) {
      out << record("", p.col_name(j), p.row_name(e.row), format_number(e.value)) << '\n';
      wrote = true;
    }
    if (!wrote) out << record("", p.col_name(j), kObjName, "0") << '\n';
  }
  if (in_int) marker_line("'INTEND'");

  out << "RHS\n";
  for (int i = 0; i < p.num_rows(); ++i) {
    if (p.rhs(i) != 0.0) out << record("", kRhsName, p.row_name(i), format_number(p.rhs(i))) << '\n';
  }

  out << "BOUNDS\n";
  for (int j = 0; j < p.num_cols(); ++j) {
    const double lo = p.lower(j);
    const double up = p.upper(j);
    const std::string& c = p.col_name(j);
    if (lo == up) {
      out << record("FX", kBndName, c, format_number(lo)) << '\n';
      continue;
    }
    if (std::isinf(lo) && std::isinf(up)) {
      out << record("FR", kBndName, c) << '\n';
      continue;
    }
    if (std::isinf(lo)) {
      out << record("MI", kBndName, c) << '\n';
    } else if (lo != 0.0) {
      out << record("LO", kBndName, c, format_number(lo)) << '\n';
    }
    if (std::isfinite(up)) {
      out << record("UP", kBndName, c, format_number(up)) << '\n';
    } else if (p.is_integer(j)) {
      out << record("PL", kBndName, c) << '\n';
    }
  }
  out << "ENDATA\n";
}

std::string write_mps(const LpProblem& p) {
  std::ostringstream os;
  write_mps(p, os);
  return os.str();
}

LpProblem read_mps(std::istream& in) {
  enum class Section { none, rows, columns, rhs, bounds, done };
  LpProblem p;
  Section sec = Section::none;
  std::string obj_row;
  std::unordered_map<std::string, int> rows, cols;
  std::unordered_map<std::string, bool> free_rows;
  bool integer = false;
  std::string line;
  int lineno = 0;

  auto row_index = [&](const std::string& name) -> int {
    auto it = rows.find(name);
    if (it == rows.end()) {
      if (name == obj_row || free_rows.count(name)) return -1;
      throw MpsError("line " + std::to_string(lineno) + ": unknown row '" + name + "'");
    }
    return it->second;
  };

  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '*') continue;
    const auto tok = split(line);
    if (tok.empty()) continue;
    if (line[0] != ' ') {
      const std::string& head = tok[0];
      if (head == "NAME") {
        p.name = tok.size() > 1 ? line.substr(line.find_first_not_of(' ', 4)) : "";
      } else if (head == "ROWS") {
        sec = Section::rows;
      } else if (head == "COLUMNS") {
        sec = Section::columns;
      } else if (head == "RHS") {
        sec = Section::rhs;
      } else if (head == "BOUNDS") {
        sec = Section::bounds;
      } else if (head == "ENDATA") {
        sec = Section::done;
        break;
      } else {
        throw MpsError("line " + std::to_string(lineno) + ": unsupported section '" + head + "'");
      }
      continue;
    }
    switch (sec) {
      case Section::rows: {
        if (tok.size() != 2) throw MpsError("line " + std::to_string(lineno) + ": malformed ROWS record");
        const std::string& t = tok[0];
        if (t == "N") {
          if (obj_row.empty()) {
            obj_row = tok[1];
          } else {
            free_rows[tok[1]] = true;
          }
        } else if (t == "L" || t == "G" || t == "E") {
          const RowSense s = t == "L" ? RowSense::le : t == "G" ? RowSense::ge : RowSense::eq;
          rows[tok[1]] = p.add_row(tok[1], s, 0.0);
        } else {
          throw MpsError("line " + std::to_string(lineno) + ": bad row type '" + t + "'");
        }
        break;
      }
      case Section::columns: {
        if (tok.size() >= 3 && tok[1] == "'MARKER'") {
          if (tok[2] == "'INTORG'") {
            integer = true;
          } else if (tok[2] == "'INTEND'") {
            integer = false;
          } else {
            throw MpsError("line " + std::to_string(lineno) + ": bad marker");
          }
          break;
        }
        if (tok.size() != 3 && tok.size() != 5) {
          throw MpsError("line " + std::to_string(lineno) + ": malformed COLUMNS record");
        }
        auto it = cols.find(tok[0]);
        int j = 0;
        if (it == cols.end()) {
          j = p.add_column(tok[0], 0.0, 0.0, integer ? 1.0 : kInf, integer);
          cols[tok[0]] = j;
        } else {
          j = it->second;
        }
        for (std::size_t k = 1; k + 1 < tok.size(); k += 2) {
          const double v = parse_number(tok[k + 1]);
          if (tok[k] == obj_row) {
            p.set_cost(j, p.cost(j) + v);
          } else {
            const int r = row_index(tok[k]);
            if (r >= 0) p.add_coef(r, j, v);
          }
        }
        break;
      }
      case Section::rhs: {
        if (tok.size() != 3 && tok.size() != 5) throw MpsError("line " + std::to_string(lineno) + ": malformed RHS record");
        for (std::size_t k = 1; k + 1 < tok.size(); k += 2) {
          if (tok[k] == obj_row) continue;
          const int r = row_index(tok[k]);
          if (r >= 0) p.set_rhs(r, parse_number(tok[k + 1]));
        }
        break;
      }
      case Section::bounds: {
        if (tok.size() < 3) throw MpsError("line " + std::to_string(lineno) + ": malformed BOUNDS record");
        const std::string& type = tok[0];
        auto it = cols.find(tok[2]);
        if (it == cols.end()) throw MpsError("line " + std::to_string(lineno) + ": unknown column '" + tok[2] + "'");
        const int j = it->second;
        const bool needs_value = type == "UP" || type == "LO" || type == "FX";
        if (needs_value && tok.size() != 4) throw MpsError("line " + std::to_string(lineno) + ": bound needs a value");
        double lo = p.lower(j), up = p.upper(j);
        const double v = needs_value ? parse_number(tok[3]) : 0.0;
        if (type == "UP") {
          up = v;
        } else if (type == "LO") {
          lo = v;
        } else if (type == "FX") {
          lo = up = v;
        } else if (type == "FR") {
          lo = -kInf;
          up = kInf;
        } else if (type == "MI") {
          lo = -kInf;
        } else if (type == "PL") {
          up = kInf;
        } else if (type == "BV") {
          lo = 0.0;
          up = 1.0;
          p.set_integer(j, true);
        } else {
          throw MpsError("line " + std::to_string(lineno) + ": unsupported bound type '" + type + "'");
        }
        if (lo > up) throw MpsError("line " + std::to_string(lineno) + ": crossed bounds on '" + tok[2] + "'");
        p.set_bounds(j, lo, up);
        break;
      }
      default:
        throw MpsError("line " + std::to_string(lineno) + ": record outside a section");
    }
  }
  if (sec != Section::done) throw MpsError("missing ENDATA");
  return p;
}

LpProblem read_mps_string(const std::string& text) {
  std::istringstream is(text);
  return read_mps(is);
}

}  // namespace wildfire::lp
