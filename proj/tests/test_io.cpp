#include <catch_amalgamated.hpp>

#include "symdiag/generators.hpp"
#include "symdiag/io.hpp"

using namespace symdiag;

namespace {

bool bit_identical(const SymTensor3& a, const SymTensor3& b) {
  if (a.dim() != b.dim()) return false;
  for (int i = 0; i < a.dim(); ++i)
    for (int j = i; j < a.dim(); ++j)
      for (int k = j; k < a.dim(); ++k)
        if (a(i, j, k) != b(i, j, k)) return false;
  return true;
}

}  // namespace

TEST_CASE("text round trip is bit-stable") {
  for (int s = 0; s < 20; ++s) {
    const SymTensor3 a = random_symmetric(2 + s % 5, 4000 + s);
    const std::string text = write_tensor_text(a);
    CHECK(bit_identical(a, read_tensor_text(text)));
    // A second cycle produces the identical byte stream.
    CHECK(write_tensor_text(read_tensor_text(text)) == text);
  }
}

TEST_CASE("json round trip is bit-stable") {
  for (int s = 0; s < 10; ++s) {
    const SymTensor3 a = random_symmetric(3 + s % 4, 4100 + s);
    const nlohmann::json j = tensor_to_json(a);
    CHECK(bit_identical(a, tensor_from_json(j)));
    // Through a serialized string as well.
    CHECK(bit_identical(a, tensor_from_json(nlohmann::json::parse(j.dump()))));
  }
}

TEST_CASE("awkward values survive the text format") {
  SymTensor3 a(2);
  a.set(0, 0, 0, 0x1.fffffffffffffp-3);
  a.set(0, 1, 1, -1e-300);
  a.set(1, 1, 1, 3.0 + 1e-15);
  CHECK(bit_identical(a, read_tensor_text(write_tensor_text(a))));
}

TEST_CASE("comments, blank lines and sparse entries parse") {
  const SymTensor3 a = read_tensor_text(
      "# leading comment\n"
      "symtensor3 n=3   # header comment\n"
      "\n"
      "1 1 1 2.5\n"
      "1 2 3 -1  # entry comment\n");
  CHECK(a.dim() == 3);
  CHECK(a(0, 0, 0) == 2.5);
  CHECK(a(2, 1, 0) == -1.0);
  CHECK(a(1, 1, 1) == 0.0);
}

TEST_CASE("parse failures carry line numbers") {
  auto line_of = [](const std::string& text) {
    try {
      read_tensor_text(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return -1;
  };
  CHECK(line_of("") == 0);
  CHECK(line_of("symtensor n=3\n") == 1);
  CHECK(line_of("symtensor3 n=zero\n") == 1);
  CHECK(line_of("symtensor3 n=-2\n") == 1);
  CHECK(line_of("symtensor3 n=3\n1 1 1 1.0\n2 1 1 0.5\n") == 3);  // unsorted triple
  CHECK(line_of("symtensor3 n=2\n# fine\n1 1 3 1.0\n") == 3);     // out of range
  CHECK(line_of("symtensor3 n=2\n1 1 1 abc\n") == 2);
  CHECK(line_of("symtensor3 n=2\n1 1 1 1.0 junk\n") == 2);
  CHECK(line_of("symtensor3 n=2\n0 1 1 1.0\n") == 2);  // indices are 1-based
}

TEST_CASE("json rejects malformed documents") {
  CHECK_THROWS(tensor_from_json(nlohmann::json{{"n", 2}}));
  CHECK_THROWS(tensor_from_json(nlohmann::json{{"n", 2}, {"entries", {{1, 1, 1}}}}));
  CHECK_THROWS(tensor_from_json(nlohmann::json{{"n", 2}, {"entries", {{1, 1, 3, 1.0}}}}));
}

TEST_CASE("trace export carries the advertised columns") {
  const SymTensor3 a = random_odeco(3, 4200);
  const JacobiTrace t = jacobi_com(a);
  const std::string csv = trace_to_csv(t);
  REQUIRE(csv.rfind("k,i,j,theta,x,d,omega,f\n", 0) == 0);
  // One data row per trace entry, each with eight fields.
  std::size_t rows = 0;
  for (char c : csv)
    if (c == '\n') ++rows;
  CHECK(rows == t.entries.size() + 1);
  const std::string first = csv.substr(csv.find('\n') + 1);
  std::size_t commas = 0;
  for (std::size_t p = 0; p < first.find('\n'); ++p)
    if (first[p] == ',') ++commas;
  CHECK(commas == 7);

  const nlohmann::json j = trace_to_json(t);
  CHECK(j["entries"].size() == t.entries.size());
  CHECK(j["f_final"].get<double>() == t.f_final);
  CHECK(j["converged"].get<bool>() == t.converged);
  // Pair indices are 1-based in both exports.
  CHECK(j["entries"][0]["i"].get<int>() >= 1);
}

TEST_CASE("matrix text uses 17 significant digits") {
  Matrix m(2, 2);
  m << 1.0 / 3.0, -2.0, 0.0, 1e17;
  const std::string text = write_matrix_text(m);
  CHECK(text.find("0.33333333333333331") != std::string::npos);
  CHECK(text.find("1e+17") != std::string::npos);
}
