#include "sccuc/solver/mps.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>
#include <vector>

#include "sccuc/error.hpp"

namespace sccuc::solver {

namespace {

std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "1e+30" : "-1e+30";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> row_names(const MilpProblem& p) {
  std::vector<std::string> names(p.num_rows());
  std::set<std::string> seen{"OBJ"};
  for (std::size_t i = 0; i < p.num_rows(); ++i) {
    std::string n = p.constraint(i).name;
    if (n.empty() || n.find_first_of(" \t") != std::string::npos || seen.count(n)) n = "R" + std::to_string(i) + (n.empty() ? "" : "_" + n);
    while (seen.count(n)) n += "_";
    seen.insert(n);
    names[i] = n;
  }
  return names;
}

}  // namespace

std::string to_mps(const MilpProblem& p) {
  const auto rows = row_names(p);
  std::vector<std::vector<std::pair<std::size_t, double>>> cols(p.num_cols());
  for (std::size_t i = 0; i < p.num_rows(); ++i) {
    for (const auto& t : p.constraint(i).terms) cols[static_cast<std::size_t>(t.col)].emplace_back(i, t.coef);
  }
  std::ostringstream out;
  out << "NAME " << (p.name.empty() ? "sccuc" : p.name) << "\n";
  out << "ROWS\n N OBJ\n";
  for (std::size_t i = 0; i < p.num_rows(); ++i) {
    const char* s = p.constraint(i).sense == Sense::kLe ? "L" : p.constraint(i).sense == Sense::kGe ? "G" : "E";
    out << " " << s << " " << rows[i] << "\n";
  }
  out << "COLUMNS\n";
  bool in_int = false;
  int marker = 0;
  for (std::size_t j = 0; j < p.num_cols(); ++j) {
    const auto& v = p.variable(j);
    if (v.integer != in_int) {
      out << " M" << marker++ << " 'MARKER' " << (v.integer ? "'INTORG'" : "'INTEND'") << "\n";
      in_int = v.integer;
    }
    out << " " << v.name << " OBJ " << num(v.obj) << "\n";
    for (const auto& [i, a] : cols[j]) out << " " << v.name << " " << rows[i] << " " << num(a) << "\n";
  }
  if (in_int) out << " M" << marker++ << " 'MARKER' 'INTEND'\n";
  out << "RHS\n";
  if (p.objective_offset() != 0.0) out << " RHS OBJ " << num(-p.objective_offset()) << "\n";
  for (std::size_t i = 0; i < p.num_rows(); ++i) {
    if (p.constraint(i).rhs != 0.0) out << " RHS " << rows[i] << " " << num(p.constraint(i).rhs) << "\n";
  }
  out << "BOUNDS\n";
  for (std::size_t j = 0; j < p.num_cols(); ++j) {
    const auto& v = p.variable(j);
    const std::string& n = v.name;
    if (v.lb == v.ub) {
      out << " FX BND " << n << " " << num(v.lb) << "\n";
      continue;
    }
    if (std::isinf(v.lb) && std::isinf(v.ub)) {
      out << " FR BND " << n << "\n";
      continue;
    }
    if (std::isinf(v.lb)) {
      out << " MI BND " << n << "\n";
    } else if (v.lb != 0.0 || v.integer) {
      out << " LO BND " << n << " " << num(v.lb) << "\n";
    }
    if (!std::isinf(v.ub)) out << " UP BND " << n << " " << num(v.ub) << "\n";
  }
  out << "ENDATA\n";
  return out.str();
}

void write_mps(const MilpProblem& p, const std::filesystem::path& path) {
  std::ofstream f(path);
  if (!f) throw Error("cannot write " + path.string());
  f << to_mps(p);
  if (!f) throw Error("write failed: " + path.string());
}

MilpProblem parse_mps(const std::string& text) {
  enum class Sec { kNone, kRows, kColumns, kRhs, kRanges, kBounds };
  Sec sec = Sec::kNone;
  MilpProblem p;
  std::string obj_row;
  std::unordered_map<std::string, int> row_of;
  std::vector<std::string> row_name;
  std::vector<Sense> row_sense;
  std::vector<double> row_rhs;
  std::vector<std::vector<Term>> row_terms;
  std::unordered_map<std::string, int> col_of;
  struct Col {
    std::string name;
    bool integer;
    double obj = 0.0;
    double lb = 0.0, ub = kInf;
  };
  std::vector<Col> cols;
  bool in_int = false;
  double obj_rhs = 0.0;

  auto to_num = [](const std::string& s) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0') throw SchemaError("MPS: bad number '" + s + "'");
    if (v >= 1e30) return kInf;
    if (v <= -1e30) return -kInf;
    return v;
  };
  auto col_index = [&](const std::string& n) {
    auto it = col_of.find(n);
    if (it != col_of.end()) return it->second;
    const int j = static_cast<int>(cols.size());
    col_of.emplace(n, j);
    cols.push_back({n, in_int, 0.0, 0.0, in_int ? 1.0 : kInf});
    return j;
  };

  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '*') continue;
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    if (line[0] != ' ' && line[0] != '\t') {
      const std::string& h = tok[0];
      if (h == "NAME") p.name = tok.size() > 1 ? tok[1] : "";
      else if (h == "ROWS") sec = Sec::kRows;
      else if (h == "COLUMNS") sec = Sec::kColumns;
      else if (h == "RHS") sec = Sec::kRhs;
      else if (h == "RANGES") sec = Sec::kRanges;
      else if (h == "BOUNDS") sec = Sec::kBounds;
      else if (h == "ENDATA") break;
      else throw SchemaError("MPS line " + std::to_string(lineno) + ": unknown section " + h);
      continue;
    }
    switch (sec) {
      case Sec::kRows: {
        if (tok.size() != 2) throw SchemaError("MPS line " + std::to_string(lineno) + ": bad row");
        if (tok[0] == "N") {
          if (obj_row.empty()) obj_row = tok[1];
          break;
        }
        const Sense s = tok[0] == "L" ? Sense::kLe : tok[0] == "G" ? Sense::kGe : Sense::kEq;
        if (tok[0] != "L" && tok[0] != "G" && tok[0] != "E") throw SchemaError("MPS: bad row type " + tok[0]);
        row_of.emplace(tok[1], static_cast<int>(row_name.size()));
        row_name.push_back(tok[1]);
        row_sense.push_back(s);
        row_rhs.push_back(0.0);
        row_terms.emplace_back();
        break;
      }
      case Sec::kColumns: {
        if (tok.size() >= 3 && tok[1] == "'MARKER'") {
          in_int = tok[2] == "'INTORG'";
          break;
        }
        if (tok.size() != 3 && tok.size() != 5) throw SchemaError("MPS line " + std::to_string(lineno) + ": bad column entry");
        const int j = col_index(tok[0]);
        for (std::size_t k = 1; k + 1 < tok.size(); k += 2) {
          const double a = to_num(tok[k + 1]);
          if (tok[k] == obj_row) {
            cols[static_cast<std::size_t>(j)].obj += a;
            continue;
          }
          auto it = row_of.find(tok[k]);
          if (it == row_of.end()) throw SchemaError("MPS: unknown row " + tok[k]);
          row_terms[static_cast<std::size_t>(it->second)].push_back({j, a});
        }
        break;
      }
      case Sec::kRhs: {
        for (std::size_t k = tok.size() % 2 == 0 ? 0 : 1; k + 1 < tok.size(); k += 2) {
          const double v = to_num(tok[k + 1]);
          if (tok[k] == obj_row) {
            obj_rhs = v;
            continue;
          }
          auto it = row_of.find(tok[k]);
          if (it == row_of.end()) throw SchemaError("MPS: unknown row " + tok[k]);
          row_rhs[static_cast<std::size_t>(it->second)] = v;
        }
        break;
      }
      case Sec::kRanges: throw SchemaError("MPS: RANGES not supported");
      case Sec::kBounds: {
        if (tok.size() < 3) throw SchemaError("MPS line " + std::to_string(lineno) + ": bad bound");
        auto it = col_of.find(tok[2]);
        if (it == col_of.end()) throw SchemaError("MPS: bound on unknown column " + tok[2]);
        auto& c = cols[static_cast<std::size_t>(it->second)];
        const std::string& t = tok[0];
        const double v = tok.size() > 3 ? to_num(tok[3]) : 0.0;
        if (t == "UP") {
          c.ub = v;
        } else if (t == "LO") {
          c.lb = v;
        } else if (t == "FX") {
          c.lb = c.ub = v;
        } else if (t == "FR") {
          c.lb = -kInf;
          c.ub = kInf;
        } else if (t == "MI") {
          c.lb = -kInf;
        } else if (t == "PL") {
          c.ub = kInf;
        } else if (t == "BV") {
          c.integer = true;
          c.lb = 0.0;
          c.ub = 1.0;
        } else {
          throw SchemaError("MPS: unsupported bound type " + t);
        }
        break;
      }
      case Sec::kNone: throw SchemaError("MPS line " + std::to_string(lineno) + ": data outside a section");
    }
  }
  for (const auto& c : cols) p.add_variable({c.name, -1, -1}, c.lb, c.ub, c.integer, c.obj);
  for (std::size_t i = 0; i < row_name.size(); ++i) {
    p.add_constraint(row_name[i], std::move(row_terms[i]), row_sense[i], row_rhs[i]);
  }
  p.add_objective_offset(-obj_rhs);
  return p;
}

MilpProblem read_mps(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_mps(ss.str());
}

}  // namespace sccuc::solver
