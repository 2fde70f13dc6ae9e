#include "kreinframes/fileio.hpp"

#include <fstream>
#include <sstream>

namespace kf {

namespace {

[[noreturn]] void parse_error(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::Parse, path + ": " + what);
}

const json& member(const json& j, const char* key, const std::string& path) {
  if (!j.is_object()) parse_error(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) parse_error(path + "." + key, "missing");
  return *it;
}

int signature_part(const json& space, const char* key) {
  const json& v = member(space, key, "space");
  if (!v.is_number_integer() || v.get<long long>() < 0 || v.get<long long>() > 100000)
    parse_error(std::string("space.") + key, "expected a non-negative integer");
  return v.get<int>();
}

json parse_document(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    parse_error("document", std::string("malformed JSON (") + e.what() + ")");
  }
}

json space_json(int p, int q) { return json{{"p", p}, {"q", q}}; }

}  // namespace

json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

json matrix_to_json(const Mat& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

cplx complex_from_json(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    parse_error(path, "expected [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

Mat matrix_from_json(const json& j, const std::string& path) {
  if (!j.is_array()) parse_error(path, "expected a list of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const Eigen::Index cols = rows == 0 ? 0 : static_cast<Eigen::Index>(j[0].is_array() ? j[0].size() : 0);
  Mat m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const std::string rp = path + "[" + std::to_string(i) + "]";
    const json& row = j[i];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      parse_error(rp, "expected a row of " + std::to_string(cols) + " entries");
    for (Eigen::Index k = 0; k < cols; ++k)
      m(i, k) = complex_from_json(row[k], rp + "[" + std::to_string(k) + "]");
  }
  return m;
}

FrameFile parse_frame_file(const std::string& text) {
  const json doc = parse_document(text);
  FrameFile f;
  const json& space = member(doc, "space", "document");
  f.p = signature_part(space, "p");
  f.q = signature_part(space, "q");
  if (f.p + f.q == 0) parse_error("space", "p + q must be positive");
  const json& vecs = member(doc, "vectors", "document");
  if (!vecs.is_array() || vecs.empty()) parse_error("vectors", "expected a non-empty list");
  const int n = f.p + f.q;
  f.vectors.resize(n, static_cast<Eigen::Index>(vecs.size()));
  for (std::size_t i = 0; i < vecs.size(); ++i) {
    const std::string vp = "vectors[" + std::to_string(i) + "]";
    if (!vecs[i].is_array() || static_cast<int>(vecs[i].size()) != n)
      parse_error(vp, "expected " + std::to_string(n) + " entries (p + q)");
    for (int k = 0; k < n; ++k)
      f.vectors(k, static_cast<Eigen::Index>(i)) =
          complex_from_json(vecs[i][k], vp + "[" + std::to_string(k) + "]");
  }
  if (auto it = doc.find("diagnostics"); it != doc.end()) f.diagnostics = *it;
  return f;
}

std::string emit_frame_file(const FrameFile& file) {
  json vecs = json::array();
  for (Eigen::Index j = 0; j < file.vectors.cols(); ++j) {
    json v = json::array();
    for (Eigen::Index i = 0; i < file.vectors.rows(); ++i) v.push_back(complex_to_json(file.vectors(i, j)));
    vecs.push_back(std::move(v));
  }
  json doc{{"space", space_json(file.p, file.q)}, {"vectors", std::move(vecs)}};
  if (file.diagnostics) doc["diagnostics"] = *file.diagnostics;
  return doc.dump(2) + "\n";
}

OperatorFile parse_operator_file(const std::string& text) {
  const json doc = parse_document(text);
  OperatorFile f;
  const json& space = member(doc, "space", "document");
  f.p = signature_part(space, "p");
  f.q = signature_part(space, "q");
  if (f.p + f.q == 0) parse_error("space", "p + q must be positive");
  f.matrix = matrix_from_json(member(doc, "matrix", "document"), "matrix");
  if (f.matrix.rows() != f.p + f.q || f.matrix.cols() != f.p + f.q)
    parse_error("matrix", "expected a square matrix of size p + q");
  return f;
}

std::string emit_operator_file(const OperatorFile& file) {
  json doc{{"space", space_json(file.p, file.q)}, {"matrix", matrix_to_json(file.matrix)}};
  return doc.dump(2) + "\n";
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Parse, path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidArgument, path + ": cannot write file");
  out << text;
}

}  // namespace kf
