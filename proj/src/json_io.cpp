#include "qprep/json_io.hpp"

#include <sstream>

namespace qprep::json_io {

namespace {

[[noreturn]] void schema_error(const std::string& path, const std::string& msg) {
  throw Error(ErrorCode::Schema, path + ": " + msg);
}

std::size_t count_field(const json& j, const std::string& key, const std::string& path) {
  const json& v = require(j, key, path);
  if (!v.is_number_unsigned() || v.get<std::size_t>() == 0)
    schema_error(path + "." + key, "expected a positive integer");
  return v.get<std::size_t>();
}

}  // namespace

const json& require(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) schema_error(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) schema_error(path.empty() ? key : path + "." + key, "missing required field");
  return *it;
}

json to_json(const Matrix& m) {
  json data = json::array();
  for (const auto& z : m.data()) data.push_back({z.real(), z.imag()});
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

json to_json(const HermitianMatrix& m) { return to_json(m.matrix()); }

json to_json(std::span<const cplx> v) {
  json out = json::array();
  for (const auto& z : v) out.push_back({z.real(), z.imag()});
  return out;
}

json to_json(const PositiveMapDescriptor& u) {
  return {{"dim_in", u.dim_in},
          {"dim_out", u.dim_out},
          {"label", u.label},
          {"unital", u.unital},
          {"choi", to_json(u.choi)}};
}

json to_json(const ValidPreparation& p) {
  return {{"dimA", p.dimA()}, {"dimB", p.dimB()}, {"blocks", to_json(p.blocks())}};
}

json to_json(const Behavior& b) {
  return {{"nX", b.nX}, {"nY", b.nY}, {"nA", b.nA}, {"nB", b.nB}, {"p", b.p}};
}

json to_json(const DecompOutcome& o) {
  json out = {{"status", std::string(to_string(o.status))},
              {"iterations", o.iterations},
              {"residual", o.residual},
              {"certificate_attempts", o.certificate_attempts}};
  if (o.P) out["P"] = to_json(*o.P);
  if (o.Q) out["Q"] = to_json(*o.Q);
  if (o.W) {
    out["W"] = to_json(*o.W);
    out["violation"] = o.violation;
  }
  return out;
}

Matrix matrix_from_json(const json& j, const std::string& path) {
  const std::size_t rows = count_field(j, "rows", path);
  const std::size_t cols = count_field(j, "cols", path);
  const json& data = require(j, "data", path);
  if (!data.is_array()) schema_error(path + ".data", "expected an array of [re, im] pairs");
  if (data.size() != rows * cols) {
    std::ostringstream os;
    os << path << ".data: has " << data.size() << " entries, expected rows*cols = " << rows * cols;
    throw Error(ErrorCode::Dimension, os.str());
  }
  std::vector<cplx> entries;
  entries.reserve(data.size());
  for (std::size_t k = 0; k < data.size(); ++k) {
    const json& z = data[k];
    if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number())
      schema_error(path + ".data[" + std::to_string(k) + "]", "expected [re, im]");
    entries.emplace_back(z[0].get<double>(), z[1].get<double>());
  }
  return Matrix(rows, cols, std::move(entries));
}

HermitianMatrix hermitian_from_json(const json& j, const std::string& path) {
  Matrix m = matrix_from_json(j, path);
  if (!m.is_square()) throw Error(ErrorCode::Dimension, path + ": expected a square matrix");
  try {
    return HermitianMatrix::checked(std::move(m), 1e-10);
  } catch (const Error& e) {
    throw Error(ErrorCode::Schema, path + ": " + e.what(), e.value());
  }
}

Behavior behavior_from_json(const json& j, const std::string& path) {
  Behavior b;
  b.nX = count_field(j, "nX", path);
  b.nY = count_field(j, "nY", path);
  b.nA = count_field(j, "nA", path);
  b.nB = count_field(j, "nB", path);
  const json& p = require(j, "p", path);
  if (!p.is_array()) schema_error(path + ".p", "expected an array of numbers");
  if (p.size() != b.nX * b.nY * b.nA * b.nB)
    throw Error(ErrorCode::Dimension, path + ".p: length does not match nX*nY*nA*nB");
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (!p[k].is_number()) schema_error(path + ".p[" + std::to_string(k) + "]", "expected a number");
    b.p.push_back(p[k].get<double>());
  }
  return b;
}

PositiveMapDescriptor map_from_json(const json& j, const std::string& path) {
  PositiveMapDescriptor u;
  u.dim_in = count_field(j, "dim_in", path);
  u.dim_out = count_field(j, "dim_out", path);
  u.choi = hermitian_from_json(require(j, "choi", path), path + ".choi");
  if (u.choi.dim() != u.dim_in * u.dim_out)
    throw Error(ErrorCode::Dimension, path + ".choi: size does not match dim_in*dim_out");
  u.label = j.value("label", std::string("custom"));
  u.unital = j.value("unital", false);
  return u;
}

std::string behavior_csv(const Behavior& b) {
  std::ostringstream os;
  os.precision(17);
  os << "x,y,a,b,p\n";
  for (std::size_t x = 0; x < b.nX; ++x)
    for (std::size_t y = 0; y < b.nY; ++y)
      for (std::size_t a = 0; a < b.nA; ++a)
        for (std::size_t o = 0; o < b.nB; ++o)
          os << x << ',' << y << ',' << a << ',' << o << ',' << b(a, o, x, y) << '\n';
  return os.str();
}

}  // namespace qprep::json_io
