#pragma once

// Text/JSON serialization for tensors, matrices, and run traces.
//
// Tensor text format:
//   symtensor3 n=<N>
//   <i> <j> <k> <value>     (1-based, i <= j <= k; missing triples are zero)
// '#' starts a comment; blank lines are ignored. Values are printed with 17
// significant digits so a write/read cycle is bit-stable.

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "symdiag/jacobi.hpp"
#include "symdiag/tensor.hpp"

namespace symdiag {

class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what), line_(0) {}
  ParseError(const std::string& what, int line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string write_tensor_text(const SymTensor3& A) {
  std::ostringstream os;
  os << "symtensor3 n=" << A.dim() << "\n";
  const int n = A.dim();
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      for (int k = j; k < n; ++k) {
        const double v = A(i, j, k);
        if (v != 0.0)
          os << i + 1 << " " << j + 1 << " " << k + 1 << " " << format_double(v) << "\n";
      }
  return os.str();
}

inline SymTensor3 read_tensor_text(std::istream& in) {
  std::string line;
  int lineno = 0;
  auto next_content_line = [&](std::string& out) {
    while (std::getline(in, line)) {
      ++lineno;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      bool blank = true;
      for (char c : line)
        if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
      if (blank) continue;
      out = line;
      return true;
    }
    return false;
  };

  std::string header;
  if (!next_content_line(header)) throw ParseError("empty input, expected header", lineno);
  std::istringstream hs(header);
  std::string tag, nfield;
  hs >> tag >> nfield;
  if (tag != "symtensor3" || nfield.rfind("n=", 0) != 0)
    throw ParseError("expected header 'symtensor3 n=<N>'", lineno);
  int n = 0;
  try {
    n = std::stoi(nfield.substr(2));
  } catch (const std::exception&) {
    throw ParseError("bad dimension in header", lineno);
  }
  if (n < 1) throw ParseError("dimension must be positive", lineno);

  SymTensor3 A(n);
  std::string entry;
  while (next_content_line(entry)) {
    std::istringstream es(entry);
    int i, j, k;
    double v;
    if (!(es >> i >> j >> k >> v)) throw ParseError("expected '<i> <j> <k> <value>'", lineno);
    std::string extra;
    if (es >> extra) throw ParseError("trailing tokens after value", lineno);
    if (i < 1 || j < 1 || k < 1 || i > n || j > n || k > n)
      throw ParseError("index out of range [1, " + std::to_string(n) + "]", lineno);
    if (!(i <= j && j <= k)) throw ParseError("indices must satisfy i <= j <= k", lineno);
    A.set(i - 1, j - 1, k - 1, v);
  }
  return A;
}

inline SymTensor3 read_tensor_text(const std::string& text) {
  std::istringstream is(text);
  return read_tensor_text(is);
}

inline nlohmann::json tensor_to_json(const SymTensor3& A) {
  nlohmann::json j;
  j["n"] = A.dim();
  auto entries = nlohmann::json::array();
  const int n = A.dim();
  for (int i = 0; i < n; ++i)
    for (int jj = i; jj < n; ++jj)
      for (int k = jj; k < n; ++k) {
        const double v = A(i, jj, k);
        if (v != 0.0) entries.push_back({i + 1, jj + 1, k + 1, v});
      }
  j["entries"] = entries;
  return j;
}

inline SymTensor3 tensor_from_json(const nlohmann::json& j) {
  if (!j.contains("n") || !j.contains("entries"))
    throw ParseError("tensor JSON needs fields 'n' and 'entries'");
  const int n = j["n"].get<int>();
  if (n < 1) throw ParseError("tensor JSON: dimension must be positive");
  SymTensor3 A(n);
  for (const auto& e : j["entries"]) {
    if (!e.is_array() || e.size() != 4)
      throw ParseError("tensor JSON: each entry must be [i, j, k, v]");
    const int i = e[0].get<int>(), jj = e[1].get<int>(), k = e[2].get<int>();
    const double v = e[3].get<double>();
    if (i < 1 || jj < 1 || k < 1 || i > n || jj > n || k > n)
      throw ParseError("tensor JSON: index out of range");
    A.set(i - 1, jj - 1, k - 1, v);
  }
  return A;
}

inline std::string write_matrix_text(const Matrix& M) {
  std::ostringstream os;
  for (Eigen::Index r = 0; r < M.rows(); ++r) {
    for (Eigen::Index c = 0; c < M.cols(); ++c) {
      if (c) os << " ";
      os << format_double(M(r, c));
    }
    os << "\n";
  }
  return os.str();
}

inline std::string trace_to_csv(const JacobiTrace& trace) {
  std::ostringstream os;
  os << "k,i,j,theta,x,d,omega,f\n";
  for (const auto& e : trace.entries)
    os << e.k << "," << e.i + 1 << "," << e.j + 1 << "," << format_double(e.theta) << ","
       << format_double(e.x) << "," << format_double(e.d) << "," << format_double(e.omega)
       << "," << format_double(e.f) << "\n";
  return os.str();
}

inline nlohmann::json trace_to_json(const JacobiTrace& trace) {
  nlohmann::json j;
  auto rows = nlohmann::json::array();
  for (const auto& e : trace.entries)
    rows.push_back({{"k", e.k},
                    {"i", e.i + 1},
                    {"j", e.j + 1},
                    {"theta", e.theta},
                    {"x", e.x},
                    {"d", e.d},
                    {"omega", e.omega},
                    {"f", e.f}});
  j["entries"] = rows;
  j["f_final"] = trace.f_final;
  j["sweeps"] = trace.sweeps;
  j["rotations"] = trace.rotations;
  j["converged"] = trace.converged;
  j["final_max_abs_d"] = trace.final_max_abs_d;
  return j;
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace symdiag
