#include "afembed/json_io.hpp"

#include <cstdint>
#include <fstream>
#include <limits>
#include <sstream>

#include "afembed/error.hpp"

namespace afembed::jsonio {

namespace {

[[noreturn]] void parse_fail(const std::string& what) {
  fail(ErrorCode::ParseError, what);
}

const json& expect(const json& j, const char* key, const char* what) {
  if (!j.is_object() || !j.contains(key)) {
    parse_fail(std::string(what) + ": missing field \"" + key + "\"");
  }
  return j.at(key);
}

double number_from_json(const json& j, const char* what) {
  if (!j.is_number()) parse_fail(std::string(what) + ": expected a number");
  return j.get<double>();
}

cplx cplx_from_json(const json& j, const char* what) {
  if (j.is_number()) return cplx(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return cplx(j[0].get<double>(), j[1].get<double>());
  }
  parse_fail(std::string(what) + ": expected a number or an [re, im] pair");
}

json cplx_to_json(const cplx& z) { return json::array({z.real(), z.imag()}); }

}  // namespace

json load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) parse_fail("cannot open " + path);
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) parse_fail("malformed JSON in " + path);
  return j;
}

json to_json(const Int& v) {
  static const Int lo = std::numeric_limits<std::int64_t>::min();
  static const Int hi = std::numeric_limits<std::int64_t>::max();
  if (v >= lo && v <= hi) return json(static_cast<std::int64_t>(v));
  return json(v.str());
}

Int int_from_json(const json& j, const char* what) {
  if (j.is_number_integer()) return Int(j.get<std::int64_t>());
  if (j.is_number_unsigned()) return Int(j.get<std::uint64_t>());
  if (j.is_string()) {
    try {
      return Int(j.get<std::string>());
    } catch (const std::exception&) {
      parse_fail(std::string(what) + ": \"" + j.get<std::string>() +
                 "\" is not an integer");
    }
  }
  parse_fail(std::string(what) + ": expected an integer or an integer string");
}

json to_json(const DimensionVector& v) {
  json a = json::array();
  for (const Int& e : v.entries) a.push_back(to_json(e));
  return a;
}

DimensionVector dims_from_json(const json& j) {
  const json& arr = j.is_object() ? expect(j, "dims", "algebra") : j;
  if (!arr.is_array() || arr.empty()) {
    parse_fail("dimension vector: expected a nonempty array");
  }
  std::vector<Int> entries;
  entries.reserve(arr.size());
  for (const json& e : arr) entries.push_back(int_from_json(e, "dimension entry"));
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i] < 1) {
      std::ostringstream os;
      os << "dimension entry " << i + 1 << " is " << entries[i] << ", must be >= 1";
      fail(ErrorCode::InvalidDimension, os.str());
    }
  }
  return DimensionVector(std::move(entries));
}

json to_json(const MappingMatrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows; ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols; ++c) row.push_back(to_json(m.at(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

MappingMatrix mapping_from_json(const json& j) {
  if (!j.is_array() || j.empty()) parse_fail("mapping matrix: expected a nonempty array");
  std::vector<std::vector<Int>> rows;
  for (const json& jr : j) {
    if (!jr.is_array() || jr.empty()) {
      parse_fail("mapping matrix: each row must be a nonempty array");
    }
    std::vector<Int> row;
    row.reserve(jr.size());
    for (const json& e : jr) row.push_back(int_from_json(e, "mapping entry"));
    if (!rows.empty() && row.size() != rows.front().size()) {
      parse_fail("mapping matrix: ragged rows");
    }
    for (const Int& e : row) {
      if (e < 0) fail(ErrorCode::InvalidMatrix, "mapping entries must be nonnegative");
    }
    rows.push_back(std::move(row));
  }
  return MappingMatrix::from_rows(rows);
}

json to_json(const BratteliChain& c) {
  json algebras = json::array();
  for (const FdAlgebra& a : c.algebras) algebras.push_back(json{{"dims", to_json(a.dims)}});
  json inclusions = json::array();
  for (const MappingMatrix& m : c.inclusions) inclusions.push_back(to_json(m));
  return json{{"algebras", std::move(algebras)}, {"inclusions", std::move(inclusions)}};
}

BratteliChain chain_from_json(const json& j) {
  BratteliChain chain;
  const json& algebras = expect(j, "algebras", "chain");
  if (!algebras.is_array() || algebras.empty()) {
    parse_fail("chain: \"algebras\" must be a nonempty array");
  }
  for (const json& a : algebras) chain.algebras.emplace_back(dims_from_json(a));
  if (j.contains("inclusions")) {
    const json& inclusions = j.at("inclusions");
    if (!inclusions.is_array()) parse_fail("chain: \"inclusions\" must be an array");
    for (const json& m : inclusions) chain.inclusions.push_back(mapping_from_json(m));
  }
  const ValidationReport report = validate_chain(chain);
  if (!report.valid) {
    std::ostringstream os;
    os << "chain invalid at level " << report.failure_index + 1 << ": " << report.message;
    fail(ErrorCode::InvalidChain, os.str());
  }
  return chain;
}

json to_json(const MatrixSequence& s) {
  json gammas = json::array();
  for (const MappingMatrix& g : s.gammas) gammas.push_back(to_json(g));
  return json{{"target", to_json(s.target)},
              {"gammas", std::move(gammas)},
              {"injective", s.injective()}};
}

json to_json(const Mat& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j2 = 0; j2 < m.cols(); ++j2) row.push_back(cplx_to_json(m.at(i, j2)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Mat mat_from_json(const json& j) {
  if (!j.is_array()) parse_fail("matrix: expected an array of rows");
  const int rows = static_cast<int>(j.size());
  int cols = 0;
  if (rows > 0) {
    if (!j[0].is_array()) parse_fail("matrix: each row must be an array");
    cols = static_cast<int>(j[0].size());
  }
  Mat m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    const json& jr = j[i];
    if (!jr.is_array() || static_cast<int>(jr.size()) != cols) {
      parse_fail("matrix: ragged rows");
    }
    for (int c = 0; c < cols; ++c) m.at(i, c) = cplx_from_json(jr[c], "matrix entry");
  }
  return m;
}

json to_json(const BlockMatrix& b) {
  json blocks = json::array();
  for (std::size_t k = 0; k < b.num_blocks(); ++k) blocks.push_back(to_json(b.block(k)));
  return json{{"dims", json(b.dims())}, {"blocks", std::move(blocks)}};
}

BlockMatrix block_from_json(const json& j) {
  const json& jd = expect(j, "dims", "block matrix");
  if (!jd.is_array() || jd.empty()) parse_fail("block matrix: \"dims\" must be nonempty");
  std::vector<int> dims;
  for (const json& e : jd) {
    const Int v = int_from_json(e, "block dimension");
    dims.push_back(static_cast<int>(to_checked_int64(v, "block dimension")));
    if (dims.back() < 1) fail(ErrorCode::InvalidDimension, "block dimensions must be >= 1");
  }
  const json& jb = expect(j, "blocks", "block matrix");
  if (!jb.is_array() || jb.size() != dims.size()) {
    parse_fail("block matrix: need one block per dimension entry");
  }
  std::vector<Mat> blocks;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    Mat m = mat_from_json(jb[k]);
    if (m.rows() != dims[k] || m.cols() != dims[k]) {
      std::ostringstream os;
      os << "block matrix: block " << k + 1 << " is " << m.rows() << "x" << m.cols()
         << ", expected " << dims[k] << "x" << dims[k];
      parse_fail(os.str());
    }
    blocks.push_back(std::move(m));
  }
  return BlockMatrix(std::move(dims), std::move(blocks));
}

json to_json(const CpMap& m) {
  return json{{"source_dim", m.source_dim},
              {"target_dims", json(m.target.realized_dims())},
              {"choi", to_json(m.choi)}};
}

CpMap cpmap_from_json(const json& j) {
  CpMap m;
  const json& jn = expect(j, "source_dim", "cp map");
  if (!jn.is_number_integer() || jn.get<std::int64_t>() < 1) {
    parse_fail("cp map: \"source_dim\" must be a positive integer");
  }
  m.source_dim = static_cast<int>(jn.get<std::int64_t>());
  m.target = FdAlgebra(dims_from_json(expect(j, "target_dims", "cp map")));
  m.choi = mat_from_json(expect(j, "choi", "cp map"));
  const int expected = m.source_dim * m.target_total();
  if (m.choi.rows() != expected || m.choi.cols() != expected) {
    std::ostringstream os;
    os << "cp map: choi matrix is " << m.choi.rows() << "x" << m.choi.cols()
       << ", expected " << expected << "x" << expected;
    parse_fail(os.str());
  }
  return m;
}

json to_json(const IndexedFamily& f) {
  json algebras = json::array();
  for (const FdAlgebra& a : f.algebras) algebras.push_back(json{{"dims", to_json(a.dims)}});
  return json{{"algebras", std::move(algebras)}, {"window", f.window}};
}

IndexedFamily family_from_json(const json& j) {
  const json& algebras = expect(j, "algebras", "family");
  if (!algebras.is_array() || algebras.empty()) {
    parse_fail("family: \"algebras\" must be a nonempty array");
  }
  std::vector<FdAlgebra> algs;
  for (const json& a : algebras) algs.emplace_back(dims_from_json(a));
  int window = kDefaultWindow;
  if (j.contains("window")) {
    const json& jw = j.at("window");
    if (!jw.is_number_integer()) parse_fail("family: \"window\" must be an integer");
    window = static_cast<int>(jw.get<std::int64_t>());
  }
  return IndexedFamily(std::move(algs), window);
}

json to_json(const UltraElement& x) {
  json terms = json::array();
  for (const BlockMatrix& t : x.terms) terms.push_back(to_json(t));
  return json{{"declared_bound", x.declared_bound}, {"terms", std::move(terms)}};
}

UltraElement element_from_json(const json& j) {
  UltraElement x;
  x.declared_bound = number_from_json(expect(j, "declared_bound", "element"),
                                      "element: declared_bound");
  const json& terms = expect(j, "terms", "element");
  if (!terms.is_array() || terms.empty()) {
    parse_fail("element: \"terms\" must be a nonempty array");
  }
  for (const json& t : terms) x.terms.push_back(block_from_json(t));
  return x;
}

}  // namespace afembed::jsonio
